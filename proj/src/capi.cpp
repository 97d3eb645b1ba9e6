// SPDX-License-Identifier: Apache-2.0
#include "mcflow/mcflow.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "mcflow/app.hpp"
#include "mcflow/error.hpp"

struct mcf_config {
  mcf::RunConfig config;
};

struct mcf_report {
  std::string json;
};

namespace {

thread_local std::string last_error;

mcf_status status_of(mcf::app::Status s) { return static_cast<mcf_status>(s); }

mcf_status fail(mcf_status status, const char* what) {
  last_error = what;
  return status;
}

template <class Fn>
mcf_status guarded(Fn&& fn) {
  last_error.clear();
  try {
    return fn();
  } catch (const mcf::Error& e) {
    switch (e.kind()) {
      case mcf::ErrorKind::validation: return fail(MCF_ERR_VALIDATION, e.what());
      case mcf::ErrorKind::numerical: return fail(MCF_ERR_NUMERICAL, e.what());
      case mcf::ErrorKind::io: return fail(MCF_ERR_IO, e.what());
    }
    return fail(MCF_ERR_INTERNAL, e.what());
  } catch (const std::bad_alloc&) {
    return fail(MCF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(MCF_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(MCF_ERR_INTERNAL, "unknown error");
  }
}

void emit(mcf_report** report, const mcf::app::json& doc) {
  if (report) *report = new mcf_report{doc.dump(2)};
}

}  // namespace

extern "C" {

const char* mcf_version(void) { return "1.0.0"; }

const char* mcf_last_error(void) { return last_error.c_str(); }

mcf_status mcf_config_parse(const char* text, mcf_config** out) {
  return guarded([&] {
    if (!text || !out) return fail(MCF_ERR_VALIDATION, "mcf_config_parse: null argument");
    *out = new mcf_config{mcf::parse_config(text)};
    return MCF_OK;
  });
}

mcf_status mcf_config_load(const char* path, mcf_config** out) {
  return guarded([&] {
    if (!path || !out) return fail(MCF_ERR_VALIDATION, "mcf_config_load: null argument");
    *out = new mcf_config{mcf::load_config(path)};
    return MCF_OK;
  });
}

void mcf_config_free(mcf_config* config) { delete config; }

mcf_status mcf_config_to_text(const mcf_config* config, char* buffer, size_t capacity,
                              size_t* needed) {
  return guarded([&] {
    if (!config) return fail(MCF_ERR_VALIDATION, "mcf_config_to_text: null config");
    const std::string text = mcf::serialize_config(config->config);
    if (needed) *needed = text.size() + 1;
    if (buffer && capacity > 0) {
      const std::size_t n = std::min(capacity - 1, text.size());
      std::memcpy(buffer, text.data(), n);
      buffer[n] = '\0';
    }
    return MCF_OK;
  });
}

mcf_status mcf_config_set_output_dir(mcf_config* config, const char* dir) {
  return guarded([&] {
    if (!config || !dir || !*dir) return fail(MCF_ERR_VALIDATION, "mcf_config_set_output_dir: empty argument");
    config->config.output.dir = dir;
    return MCF_OK;
  });
}

const char* mcf_report_json(const mcf_report* report) { return report ? report->json.c_str() : ""; }

void mcf_report_free(mcf_report* report) { delete report; }

mcf_status mcf_check_condition(const mcf_config* config, mcf_condition* out, mcf_report** report) {
  return guarded([&] {
    if (!config) return fail(MCF_ERR_VALIDATION, "mcf_check_condition: null config");
    const auto doc = mcf::app::check_condition(config->config);
    if (out) {
      out->C = doc["C"].get<double>();
      out->admissible = doc["admissible"].get<bool>() ? 1 : 0;
      out->delta = doc["delta"].get<double>();
      out->sup_d2 = doc["sup_d2"].get<double>();
      out->sup_d_boundary = doc["sup_d_boundary"].get<double>();
    }
    emit(report, doc);
    return MCF_OK;
  });
}

mcf_status mcf_run(const mcf_config* config, int workers, mcf_report** report) {
  return guarded([&] {
    if (!config) return fail(MCF_ERR_VALIDATION, "mcf_run: null config");
    if (workers < 1) return fail(MCF_ERR_VALIDATION, "mcf_run: workers must be >= 1");
    const auto outcome = mcf::app::run(config->config, workers);
    emit(report, outcome.report);
    if (outcome.status == mcf::app::Status::numerical) {
      return fail(MCF_ERR_NUMERICAL, outcome.report["detail"].get<std::string>().c_str());
    }
    if (outcome.status == mcf::app::Status::violation) {
      return fail(MCF_ERR_VIOLATION, "monitor violation in strict mode");
    }
    return status_of(outcome.status);
  });
}

mcf_status mcf_residual_config(const mcf_config* config, int workers, double* out,
                               mcf_report** report) {
  return guarded([&] {
    if (!config) return fail(MCF_ERR_VALIDATION, "mcf_residual_config: null config");
    if (workers < 1) return fail(MCF_ERR_VALIDATION, "mcf_residual_config: workers must be >= 1");
    const auto doc = mcf::app::residual_of_config(config->config, workers);
    if (out) *out = doc["max_residual"].get<double>();
    emit(report, doc);
    return MCF_OK;
  });
}

mcf_status mcf_residual_snapshot(const char* path, int workers, double* out, mcf_report** report) {
  return guarded([&] {
    if (!path) return fail(MCF_ERR_VALIDATION, "mcf_residual_snapshot: null path");
    if (workers < 1) return fail(MCF_ERR_VALIDATION, "mcf_residual_snapshot: workers must be >= 1");
    const auto doc = mcf::app::residual_of_snapshot(path, workers);
    if (out) *out = doc["max_residual"].get<double>();
    emit(report, doc);
    return MCF_OK;
  });
}

mcf_status mcf_cone_analyze(double R, double r_min, double h, int levels, int workers,
                            mcf_report** report) {
  return guarded([&] {
    if (workers < 1) return fail(MCF_ERR_VALIDATION, "mcf_cone_analyze: workers must be >= 1");
    emit(report, mcf::app::cone_analyze(R, r_min, h, levels, workers));
    return MCF_OK;
  });
}

mcf_status mcf_list_scenarios(mcf_report** report) {
  return guarded([&] {
    emit(report, mcf::app::list_scenarios());
    return MCF_OK;
  });
}

mcf_status mcf_plot(const char* csv_path, const char* quantity, const char* svg_path,
                    mcf_report** report) {
  return guarded([&] {
    if (!csv_path || !quantity) return fail(MCF_ERR_VALIDATION, "mcf_plot: null argument");
    emit(report, mcf::app::plot(csv_path, quantity, svg_path ? svg_path : ""));
    return MCF_OK;
  });
}

}  // extern "C"
