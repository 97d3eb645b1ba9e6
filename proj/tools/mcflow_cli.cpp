// SPDX-License-Identifier: Apache-2.0
// Command-line front end over the shared library's C interface.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "mcflow/mcflow.h"

namespace {

using json = nlohmann::json;

int exit_code(mcf_status s) {
  switch (s) {
    case MCF_OK: return 0;
    case MCF_ERR_VALIDATION: return 2;
    case MCF_ERR_NUMERICAL: return 3;
    case MCF_ERR_VIOLATION: return 4;
    default: return 1;
  }
}

struct Report {
  mcf_report* handle = nullptr;
  ~Report() { mcf_report_free(handle); }
  json doc() const { return handle ? json::parse(mcf_report_json(handle)) : json(); }
};

struct Config {
  mcf_config* handle = nullptr;
  ~Config() { mcf_config_free(handle); }
};

int report_error(mcf_status s, bool as_json) {
  const std::string msg = mcf_last_error();
  if (as_json) {
    std::cout << json{{"status", exit_code(s)}, {"error", msg}}.dump(2) << "\n";
  } else {
    std::cerr << "error: " << msg << "\n";
  }
  return exit_code(s);
}

void print_run(const json& r) {
  std::cout << "scenario        " << r["scenario"].get<std::string>() << "\n";
  std::cout << "C               " << r["condition"]["C"].get<double>()
            << (r["condition"]["admissible"].get<bool>() ? " (admissible)" : " (not admissible)") << "\n";
  std::cout << "termination     " << r["termination"].get<std::string>() << "\n";
  if (!r["detail"].get<std::string>().empty()) {
    std::cout << "detail          " << r["detail"].get<std::string>() << "\n";
  }
  std::cout << "steps           " << r["steps"] << "\n";
  std::cout << "t_final         " << r["t_final"].get<double>() << "\n";
  std::cout << "final_residual  " << r["final_residual"].get<double>() << "\n";
  std::cout << "area            " << r["final"]["area"].get<double>() << "\n";
  std::cout << "energy_spent    " << r["final"]["energy_spent"].get<double>() << "\n";
  std::cout << "max_lambda      " << r["final"]["max_lambda"].get<double>() << "\n";
  for (const auto& [name, check] : r["checks"].items()) {
    const bool applicable = !check.contains("applicable") || check["applicable"].get<bool>();
    std::cout << "check " << name << ": "
              << (applicable ? (check["ok"].get<bool>() ? "ok" : "VIOLATED") : "not applicable") << "\n";
  }
  std::cout << "violations      " << r["violations"] << "\n";
  std::cout << "output          " << r["output_dir"].get<std::string>() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonparametric mean curvature flow of graphs in arbitrary codimension"};
  // Plain --help only: cone-analyze takes --h.
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mcf_version()));
  bool as_json = false;
  int workers = 1;
  app.add_flag("--json", as_json, "Machine-readable JSON on standard output");
  app.add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);

  std::string config_path, residual_path, csv_path, quantity, svg_path, output_dir;
  double R = 0.0, r_min = 0.0, h = 0.0;
  int levels = 2;

  auto* run = app.add_subcommand("run", "Run the flow described by a config file");
  run->add_option("config", config_path, "Config file")->required();
  run->add_option("--output", output_dir, "Override [output] dir");

  auto* check = app.add_subcommand("check-condition", "Evaluate the admissibility constant C");
  check->add_option("config", config_path, "Config file")->required();

  auto* residual = app.add_subcommand("residual", "Max system residual of a config's data or a snapshot");
  residual->add_option("path", residual_path, "Config file or snapshot (with .meta sidecar)")->required();

  auto* cone = app.add_subcommand("cone-analyze", "Residual refinement study of the cone R q(x)/|x|");
  cone->add_option("--R", R, "Scale R")->required();
  cone->add_option("--rmin", r_min, "Inner radius of the annulus")->required();
  cone->add_option("--h", h, "Coarsest step")->required();
  cone->add_option("--levels", levels, "Number of steps h, h/2, ...")->check(CLI::Range(2, 6));

  auto* list = app.add_subcommand("list-scenarios", "Built-in scenarios and their parameters");

  auto* plot = app.add_subcommand("plot", "SVG line chart of a diagnostics column");
  plot->add_option("csv", csv_path, "Diagnostics CSV")->required();
  plot->add_option("--quantity", quantity, "Column name")->required();
  plot->add_option("--output", svg_path, "SVG path (default: <quantity>.svg next to the CSV)");

  for (auto* sub : {run, check, residual, cone, list, plot}) {
    sub->add_flag("--json", as_json, "Machine-readable JSON on standard output");
    sub->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  Report report;
  mcf_status s = MCF_OK;

  if (*run || *check) {
    Config cfg;
    s = mcf_config_load(config_path.c_str(), &cfg.handle);
    if (s != MCF_OK) return report_error(s, as_json);
    if (*check) {
      mcf_condition c{};
      s = mcf_check_condition(cfg.handle, &c, &report.handle);
      if (s != MCF_OK) return report_error(s, as_json);
      if (as_json) {
        std::cout << mcf_report_json(report.handle) << "\n";
      } else {
        std::printf("C = %.10g\nadmissible = %s\ndelta = %.10g\nsup|D2psi| = %.10g\nsup_boundary|Dpsi| = %.10g\n",
                    c.C, c.admissible ? "true" : "false", c.delta, c.sup_d2, c.sup_d_boundary);
      }
      return 0;
    }
    if (!output_dir.empty()) {
      s = mcf_config_set_output_dir(cfg.handle, output_dir.c_str());
      if (s != MCF_OK) return report_error(s, as_json);
    }
    s = mcf_run(cfg.handle, workers, &report.handle);
    if (!report.handle) return report_error(s, as_json);
    if (as_json) std::cout << mcf_report_json(report.handle) << "\n";
    else print_run(report.doc());
    if (s != MCF_OK && !as_json) std::cerr << "error: " << mcf_last_error() << "\n";
    return exit_code(s);
  }

  if (*residual) {
    double value = 0.0;
    std::filesystem::path meta = residual_path;
    meta += ".meta";
    if (std::filesystem::exists(meta)) {
      s = mcf_residual_snapshot(residual_path.c_str(), workers, &value, &report.handle);
    } else {
      Config cfg;
      s = mcf_config_load(residual_path.c_str(), &cfg.handle);
      if (s == MCF_OK) s = mcf_residual_config(cfg.handle, workers, &value, &report.handle);
    }
    if (s != MCF_OK) return report_error(s, as_json);
    if (as_json) std::cout << mcf_report_json(report.handle) << "\n";
    else std::printf("max_residual = %.17g\n", value);
    return 0;
  }

  if (*cone) {
    s = mcf_cone_analyze(R, r_min, h, levels, workers, &report.handle);
    if (s != MCF_OK) return report_error(s, as_json);
    if (as_json) {
      std::cout << mcf_report_json(report.handle) << "\n";
    } else {
      const json r = report.doc();
      std::printf("R = %.10g, r_min = %.10g, probes = %zu\n", R, r_min, r["probes"].get<std::size_t>());
      for (const auto& l : r["levels"]) {
        std::printf("h = %.10g  residual = %.6e\n", l["h"].get<double>(), l["residual"].get<double>());
      }
      std::printf("ratio = %.6g\n", r["ratio"].get<double>());
    }
    return 0;
  }

  if (*list) {
    s = mcf_list_scenarios(&report.handle);
    if (s != MCF_OK) return report_error(s, as_json);
    if (as_json) {
      std::cout << mcf_report_json(report.handle) << "\n";
    } else {
      for (const auto& sc : report.doc()) {
        std::cout << sc["name"].get<std::string>() << "  (" << sc["dimensions"].get<std::string>() << ")"
                  << (sc["runnable"].get<bool>() ? "" : "  [analysis only]") << "\n    "
                  << sc["description"].get<std::string>() << "\n";
        for (const auto& p : sc["params"]) {
          std::cout << "    " << p["name"].get<std::string>() << " : " << p["type"].get<std::string>()
                    << (p["required"].get<bool>() ? "" : " (optional)") << "  "
                    << p["description"].get<std::string>() << "\n";
        }
      }
    }
    return 0;
  }

  if (*plot) {
    s = mcf_plot(csv_path.c_str(), quantity.c_str(), svg_path.empty() ? nullptr : svg_path.c_str(),
                 &report.handle);
    if (s != MCF_OK) return report_error(s, as_json);
    if (as_json) std::cout << mcf_report_json(report.handle) << "\n";
    else std::cout << "wrote " << report.doc()["svg"].get<std::string>() << "\n";
    return 0;
  }
  return 2;
}
