// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "mcflow/config.hpp"

namespace mcf::app {

using json = nlohmann::json;

/// Process-level outcome shared by the C API and the command line.
enum class Status { ok = 0, internal = 1, validation = 2, numerical = 3, violation = 4, io = 5 };

struct Outcome {
  Status status = Status::ok;
  json report;
};

json check_condition(const RunConfig& config);

/// Runs the flow, writes diagnostics.csv, snapshots/ and report.json under
/// the output directory. numerical_failure maps to Status::numerical, a
/// monitor violation in strict mode to Status::violation.
Outcome run(const RunConfig& config, int workers);

/// Max interior system residual of ψ sampled from a config.
json residual_of_config(const RunConfig& config, int workers);
/// Max interior system residual of a stored snapshot.
json residual_of_snapshot(const std::filesystem::path& path, int workers);

json cone_analyze(double R, double r_min, double h, int levels, int workers);

json list_scenarios();

/// Writes an SVG of `quantity` from a diagnostics CSV. An empty `svg_path`
/// puts `<quantity>.svg` next to the CSV.
json plot(const std::filesystem::path& csv_path, const std::string& quantity,
          std::filesystem::path svg_path);

}  // namespace mcf::app
