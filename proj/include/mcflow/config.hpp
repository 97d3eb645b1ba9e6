// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mcflow/flow_engine.hpp"
#include "mcflow/grid_domain.hpp"
#include "mcflow/scenarios.hpp"

namespace mcf {

struct MonitorConfig {
  bool strict = false;
  std::optional<double> eps_mp;  // empty: 1e-8·(1 + max|ψ|)
  long cadence = 1;              // diagnostics every `cadence` steps
  std::uint64_t seed = 0;

  bool operator==(const MonitorConfig&) const = default;
};

struct OutputConfig {
  std::string dir = "out";
  long snapshot_every = 100;

  bool operator==(const OutputConfig&) const = default;
};

struct RunConfig {
  DomainSpec domain;
  ScenarioConfig scenario;
  StepConfig stepping;
  MonitorConfig monitors;
  OutputConfig output;

  /// Throws a validation error naming the first violated invariant.
  void validate() const;
  bool operator==(const RunConfig&) const = default;
};

/// One `key = value` line of a sectioned text file.
struct KeyValue {
  std::string section;
  std::string key;
  std::string value;
  int line = 0;
};

/// Splits `[section]` / `key = value` text; `#` starts a comment.
std::vector<KeyValue> parse_key_values(std::string_view text);

/// Reads the `domain` entries of a parsed file.
DomainSpec parse_domain(const std::vector<KeyValue>& entries);
/// `[domain]` section text, numbers with 17 significant digits.
std::string format_domain(const DomainSpec& spec);

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const RunConfig& config);

/// Decimal text with 17 significant digits; parses back bit-exactly.
std::string format_double(double value);

}  // namespace mcf
