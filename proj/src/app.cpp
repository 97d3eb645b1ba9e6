// SPDX-License-Identifier: Apache-2.0
#include "mcflow/app.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <random>

#include "mcflow/analysis.hpp"
#include "mcflow/error.hpp"
#include "mcflow/flow_engine.hpp"
#include "mcflow/io.hpp"
#include "mcflow/monitors.hpp"
#include "mcflow/plot.hpp"

namespace mcf::app {
namespace {

constexpr int kBarrierProbes = 8;
constexpr double kBarrierTol = 1e-6;
constexpr double kAreaTol = 1e-6;
constexpr double kGradientTol = 0.05;

json condition_json(const ConditionValue& c) {
  return {{"C", c.C},
          {"admissible", c.admissible},
          {"delta", c.delta},
          {"sup_d2", c.sup_d2},
          {"sup_d_boundary", c.sup_d_boundary}};
}

std::string snapshot_name(long step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snap_%08ld.bin", step);
  return buf;
}

// Deterministic sample of boundary points for the barrier monitor.
std::vector<std::size_t> barrier_points(const Lattice& lattice, std::uint64_t seed) {
  const auto refs = lattice.boundary_refs();
  std::vector<std::size_t> out;
  if (refs.size() <= static_cast<std::size_t>(kBarrierProbes)) {
    out.assign(refs.begin(), refs.end());
    return out;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, refs.size() - 1);
  while (out.size() < static_cast<std::size_t>(kBarrierProbes)) {
    const std::size_t ref = refs[pick(rng)];
    if (std::find(out.begin(), out.end(), ref) == out.end()) out.push_back(ref);
  }
  return out;
}

}  // namespace

json check_condition(const RunConfig& config) {
  const auto psi = make_scenario(config.scenario, config.domain.n);
  json out = condition_json(admissibility_constant(*psi, config.domain, config.monitors.seed));
  out["scenario"] = config.scenario.name;
  out["n"] = config.domain.n;
  out["m"] = psi->m();
  return out;
}

Outcome run(const RunConfig& config, int workers) {
  config.validate();
  const auto psi = make_scenario(config.scenario, config.domain.n);
  auto lattice = std::make_shared<const Lattice>(Lattice::build(config.domain));
  const GraphField field0 = GraphField::sample(lattice, *psi);
  const int n = config.domain.n, m = psi->m();
  const ConditionValue condition = admissibility_constant(*psi, config.domain, config.monitors.seed);

  std::vector<double> psi_max(m, -std::numeric_limits<double>::infinity());
  std::vector<double> psi_min(m, std::numeric_limits<double>::infinity());
  double psi_abs = 0.0;
  for (std::size_t ref : lattice->closure_refs()) {
    for (int a = 0; a < m; ++a) {
      const double v = field0.value(ref, a);
      psi_max[a] = std::max(psi_max[a], v);
      psi_min[a] = std::min(psi_min[a], v);
      psi_abs = std::max(psi_abs, std::abs(v));
    }
  }
  const double eps_mp = config.monitors.eps_mp.value_or(1e-8 * (1.0 + psi_abs));

  std::vector<Hyperplane> planes;
  for (std::size_t ref : barrier_points(*lattice, config.monitors.seed)) {
    planes.push_back(supporting_hyperplane(config.domain, lattice->coord(ref)));
  }

  const std::filesystem::path dir = config.output.dir;
  const std::filesystem::path snap_dir = dir / "snapshots";
  std::error_code ec;
  std::filesystem::create_directories(snap_dir, ec);
  if (ec) throw io_error("cannot create " + snap_dir.string() + ": " + ec.message());

  std::vector<DiagnosticsRecord> series;
  std::vector<std::string> snapshots;
  long last_snapshot = -1;
  double barrier_min = std::numeric_limits<double>::infinity();
  long violations = 0;
  json first_violation;
  auto violate = [&](const std::string& check, double t, double value) {
    if (violations++ == 0) first_violation = {{"check", check}, {"t", t}, {"value", value}};
  };

  auto record = [&](const GraphField& f) {
    series.push_back(monitor_step(f, series.empty() ? nullptr : &series.back(), workers));
    const DiagnosticsRecord& r = series.back();
    bool ok = true;
    for (int a = 0; a < m; ++a) {
      const double excess = std::max(r.f_max[a] - psi_max[a], psi_min[a] - r.f_min[a]);
      if (excess > eps_mp) {
        violate("max_principle", r.t, excess);
        ok = false;
      }
    }
    if (series.size() > 1) {
      const double rise = r.area - series[series.size() - 2].area;
      if (rise > kAreaTol * series.front().area) {
        violate("area_monotone", r.t, rise);
        ok = false;
      }
    }
    const double bound = boundary_gradient_bound(n, condition.delta, r.xi, condition.sup_d2,
                                                 condition.sup_d_boundary);
    if (r.boundary_max_Df > (1.0 + kGradientTol) * bound) {
      violate("boundary_gradient", r.t, r.boundary_max_Df);
      ok = false;
    }
    const BarrierParams params = barrier_parameters(n, condition.delta, r.xi, condition.sup_d2);
    for (const Hyperplane& plane : planes) {
      for (int a = 0; a < m; ++a) {
        const double s = barrier_check(f, field0, plane, params, a);
        barrier_min = std::min(barrier_min, s);
        if (s < -kBarrierTol) {
          violate("barrier", r.t, s);
          ok = false;
        }
      }
    }
    return ok;
  };

  auto snapshot = [&](const GraphField& f, long step) {
    const std::string name = snapshot_name(step);
    write_snapshot(snap_dir / name, f);
    snapshots.push_back("snapshots/" + name);
    last_snapshot = step;
  };

  long last_recorded = -1;
  const StepObserver observer = [&](const GraphField& f, long step) {
    if (step % config.output.snapshot_every == 0) snapshot(f, step);
    if (step % config.monitors.cadence != 0) return true;
    last_recorded = step;
    const bool ok = record(f);
    return ok || !config.monitors.strict;
  };

  const Trajectory traj = run(field0, config.stepping, observer, 0, workers);
  if (last_recorded != traj.steps) record(traj.final_state);
  if (last_snapshot != traj.steps) snapshot(traj.final_state, traj.steps);

  write_diagnostics(dir / "diagnostics.csv", series);

  const MaxPrincipleReport mp = max_principle_check(series, psi_max, psi_min, eps_mp);
  const MinPrincipleReport star = star_omega_min_principle(series);
  const GradientBoundReport grad = boundary_gradient_check(series, condition, n, kGradientTol);
  if (star.applicable && !star.ok) violate("star_omega_min_principle", series.back().t, star.interior_min);

  const DiagnosticsRecord& last = series.back();
  json report;
  report["scenario"] = config.scenario.name;
  report["condition"] = condition_json(condition);
  report["termination"] = to_string(traj.reason);
  report["detail"] = traj.detail;
  report["steps"] = traj.steps;
  report["t_final"] = traj.final_state.t;
  report["final_residual"] = traj.final_residual;
  report["records"] = series.size();
  report["final"] = {{"area", last.area},
                     {"max_lambda", last.max_lambda},
                     {"max_pair_product", last.max_pair_product},
                     {"min_star_omega1", last.min_star_omega1},
                     {"xi", last.xi},
                     {"energy_spent", last.energy_spent}};
  report["area_drop"] = series.front().area - last.area;
  report["checks"] = {
      {"max_principle", {{"ok", mp.ok}, {"worst_margin", mp.worst_margin}, {"eps", eps_mp}}},
      {"star_omega_min_principle",
       {{"applicable", star.applicable},
        {"ok", star.ok},
        {"interior_min", star.interior_min},
        {"parabolic_min", star.parabolic_min}}},
      {"boundary_gradient",
       {{"ok", grad.ok}, {"bound", grad.bound}, {"max_boundary_Df", grad.max_boundary_Df}}},
      {"barrier", {{"ok", !(barrier_min < -kBarrierTol)}, {"min", barrier_min}}},
  };
  report["violations"] = violations;
  if (violations) report["first_violation"] = first_violation;
  report["strict"] = config.monitors.strict;
  report["files"] = {{"diagnostics", "diagnostics.csv"}, {"snapshots", snapshots}};
  report["output_dir"] = config.output.dir;
  atomic_write(dir / "report.json", report.dump(2) + "\n");

  Outcome out;
  out.report = std::move(report);
  if (traj.reason == Termination::numerical_failure) out.status = Status::numerical;
  else if (config.monitors.strict && violations > 0) out.status = Status::violation;
  return out;
}

json residual_of_config(const RunConfig& config, int workers) {
  const auto psi = make_scenario(config.scenario, config.domain.n);
  auto lattice = std::make_shared<const Lattice>(Lattice::build(config.domain));
  const GraphField field = GraphField::sample(lattice, *psi);
  return {{"source", "config"},
          {"t", field.t},
          {"h", lattice->h()},
          {"interior_nodes", lattice->interior().size()},
          {"max_residual", max_system_residual(field, workers)}};
}

json residual_of_snapshot(const std::filesystem::path& path, int workers) {
  const GraphField field = read_snapshot(path);
  return {{"source", "snapshot"},
          {"t", field.t},
          {"h", field.lattice->h()},
          {"interior_nodes", field.lattice->interior().size()},
          {"max_residual", max_system_residual(field, workers)}};
}

json cone_analyze(double R, double r_min, double h, int levels, int workers) {
  const ResidualStudy study = cone_residual_study(R, r_min, h, levels, workers);
  json lv = json::array();
  for (const ResidualLevel& l : study.levels) lv.push_back({{"h", l.h}, {"residual", l.residual}});
  json out = {{"R", R},
              {"r_min", r_min},
              {"probes", study.probes},
              {"levels", lv},
              {"orders", study.orders()}};
  out["ratio"] = study.levels[0].residual / study.levels[1].residual;
  return out;
}

json list_scenarios() {
  json out = json::array();
  for (const ScenarioInfo& info : mcf::list_scenarios()) {
    json params = json::array();
    for (const ScenarioParam& p : info.params) {
      params.push_back({{"name", p.name},
                        {"type", p.type},
                        {"required", p.required},
                        {"description", p.description}});
    }
    out.push_back({{"name", info.name},
                   {"dimensions", info.dimensions},
                   {"description", info.description},
                   {"runnable", info.runnable},
                   {"params", params}});
  }
  return out;
}

json plot(const std::filesystem::path& csv_path, const std::string& quantity,
          std::filesystem::path svg_path) {
  const CsvTable table = parse_csv(read_file(csv_path));
  const std::string svg = render_plot(table, quantity);
  if (svg_path.empty()) svg_path = csv_path.parent_path() / (quantity + ".svg");
  atomic_write(svg_path, svg);
  return {{"svg", svg_path.string()}, {"quantity", quantity}, {"points", table.rows.size()}};
}

}  // namespace mcf::app
