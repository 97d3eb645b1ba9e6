// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mcflow/jet_calculus.hpp"
#include "mcflow/monitors.hpp"

namespace mcf {

/// Writes `bytes` to a sibling temporary file and renames it over `path`.
void atomic_write(const std::filesystem::path& path, std::string_view bytes);

std::string read_file(const std::filesystem::path& path);

/// FNV-1a, 64 bit.
std::uint64_t fnv1a64(std::span<const unsigned char> bytes);

/// `t,area,...,f_max_1..m,f_min_1..m`, 10 + 2m columns.
std::vector<std::string> diagnostics_header(int m);

/// Header plus one LF-terminated row per record, 17 significant digits.
std::string diagnostics_csv(const std::vector<DiagnosticsRecord>& series);
void write_diagnostics(const std::filesystem::path& path,
                       const std::vector<DiagnosticsRecord>& series);

/// A parsed diagnostics file: column names and numeric rows.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Index of `name` in the header, or -1.
  int column(std::string_view name) const;
};

CsvTable parse_csv(std::string_view text);
/// Restores the CSV columns of each record; the other fields stay default.
std::vector<DiagnosticsRecord> read_diagnostics(const std::filesystem::path& path);

/// Raw little-endian doubles (path) plus a text sidecar (path + ".meta")
/// with the domain, m, t, reference count and checksum.
void write_snapshot(const std::filesystem::path& path, const GraphField& field);

/// Validates the checksum. When `expected` is given the stored domain must
/// match it and the field shares that lattice.
GraphField read_snapshot(const std::filesystem::path& path,
                         std::shared_ptr<const Lattice> expected = nullptr);

}  // namespace mcf
