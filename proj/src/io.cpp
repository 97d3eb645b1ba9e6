// SPDX-License-Identifier: Apache-2.0
#include "mcflow/io.hpp"

#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "mcflow/config.hpp"
#include "mcflow/error.hpp"

namespace mcf {

static_assert(std::endian::native == std::endian::little, "snapshots assume a little-endian host");

void atomic_write(const std::filesystem::path& path, std::string_view bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw io_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw io_error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

std::uint64_t fnv1a64(std::span<const unsigned char> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<std::string> diagnostics_header(int m) {
  std::vector<std::string> h = {"t",      "area",           "max_lambda", "max_pair_product",
                                "min_star_omega1", "residual_max", "A2_max", "boundary_max_Df",
                                "xi",     "energy_spent"};
  for (int a = 1; a <= m; ++a) h.push_back("f_max_" + std::to_string(a));
  for (int a = 1; a <= m; ++a) h.push_back("f_min_" + std::to_string(a));
  return h;
}

std::string diagnostics_csv(const std::vector<DiagnosticsRecord>& series) {
  if (series.empty()) throw validation_error("write_diagnostics: empty series");
  const int m = static_cast<int>(series.front().f_max.size());
  std::string out;
  const auto header = diagnostics_header(m);
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const DiagnosticsRecord& r : series) {
    if (static_cast<int>(r.f_max.size()) != m || static_cast<int>(r.f_min.size()) != m) {
      throw validation_error("write_diagnostics: records disagree on m");
    }
    const double fixed[] = {r.t,      r.area,         r.max_lambda, r.max_pair_product,
                            r.min_star_omega1, r.residual_max, r.A2_max, r.boundary_max_Df,
                            r.xi,     r.energy_spent};
    bool first = true;
    auto put = [&](double v) {
      if (!first) out += ',';
      first = false;
      out += format_double(v);
    };
    for (double v : fixed) put(v);
    for (double v : r.f_max) put(v);
    for (double v : r.f_min) put(v);
    out += '\n';
  }
  return out;
}

void write_diagnostics(const std::filesystem::path& path,
                       const std::vector<DiagnosticsRecord>& series) {
  atomic_write(path, diagnostics_csv(series));
}

int CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream row(s);
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (!s.empty() && s.back() == ',') cells.emplace_back();
    return cells;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (table.header.empty()) {
      table.header = split(line);
      continue;
    }
    const auto cells = split(line);
    if (cells.size() != table.header.size()) {
      throw validation_error("csv line " + std::to_string(line_no) + ": expected " +
                             std::to_string(table.header.size()) + " cells");
    }
    std::vector<double> row;
    for (const std::string& c : cells) {
      char* end = nullptr;
      const double v = std::strtod(c.c_str(), &end);
      if (c.empty() || *end != '\0') {
        throw validation_error("csv line " + std::to_string(line_no) + ": bad number '" + c + "'");
      }
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty()) throw validation_error("csv: missing header");
  return table;
}

std::vector<DiagnosticsRecord> read_diagnostics(const std::filesystem::path& path) {
  const CsvTable table = parse_csv(read_file(path));
  const int cols = static_cast<int>(table.header.size());
  if (cols < 12 || (cols - 10) % 2 != 0) throw validation_error("diagnostics: bad column count");
  const int m = (cols - 10) / 2;
  if (table.header != diagnostics_header(m)) throw validation_error("diagnostics: unexpected header");
  std::vector<DiagnosticsRecord> out;
  for (const auto& row : table.rows) {
    DiagnosticsRecord r;
    r.t = row[0];
    r.area = row[1];
    r.max_lambda = row[2];
    r.max_pair_product = row[3];
    r.min_star_omega1 = row[4];
    r.residual_max = row[5];
    r.A2_max = row[6];
    r.boundary_max_Df = row[7];
    r.xi = row[8];
    r.energy_spent = row[9];
    r.f_max.assign(row.begin() + 10, row.begin() + 10 + m);
    r.f_min.assign(row.begin() + 10 + m, row.end());
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

std::filesystem::path meta_path(const std::filesystem::path& path) {
  std::filesystem::path p = path;
  p += ".meta";
  return p;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const GraphField& field) {
  const auto* bytes = reinterpret_cast<const unsigned char*>(field.values.data());
  const std::size_t size = field.values.size() * sizeof(double);
  std::ostringstream meta;
  meta << format_domain(field.lattice->spec());
  meta << "\n[snapshot]\n";
  meta << "format = mcflow-snapshot-1\n";
  meta << "m = " << field.m << "\n";
  meta << "t = " << format_double(field.t) << "\n";
  meta << "refs = " << field.lattice->ref_count() << "\n";
  meta << "checksum = fnv1a64:" << hex64(fnv1a64({bytes, size})) << "\n";
  atomic_write(path, std::string_view(reinterpret_cast<const char*>(bytes), size));
  atomic_write(meta_path(path), meta.str());
}

namespace {

template <class T>
T meta_number(const KeyValue& kv) {
  T out{};
  const char* end = kv.value.data() + kv.value.size();
  const auto [ptr, ec] = std::from_chars(kv.value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw validation_error("snapshot meta line " + std::to_string(kv.line) + ": bad " + kv.key +
                           " '" + kv.value + "'");
  }
  return out;
}

}  // namespace

GraphField read_snapshot(const std::filesystem::path& path,
                         std::shared_ptr<const Lattice> expected) {
  const auto entries = parse_key_values(read_file(meta_path(path)));
  const DomainSpec spec = parse_domain(entries);
  int m = 0;
  double t = 0.0;
  std::size_t refs = 0;
  std::string checksum;
  for (const KeyValue& kv : entries) {
    if (kv.section != "snapshot" || kv.key.empty()) continue;
    if (kv.key == "m") m = meta_number<int>(kv);
    else if (kv.key == "t") t = meta_number<double>(kv);
    else if (kv.key == "refs") refs = meta_number<std::size_t>(kv);
    else if (kv.key == "checksum") checksum = kv.value;
    else if (kv.key != "format") throw validation_error("snapshot meta: unknown key " + kv.key);
  }
  if (m < 1 || m > kMaxDim) throw validation_error("snapshot meta: m out of range");
  if (expected && !(expected->spec() == spec)) {
    throw validation_error("snapshot " + path.string() + ": lattice mismatch");
  }
  auto lattice = expected ? expected : std::make_shared<const Lattice>(Lattice::build(spec));
  if (refs != lattice->ref_count()) {
    throw validation_error("snapshot " + path.string() + ": reference count does not match the domain");
  }
  const std::string data = read_file(path);
  if (data.size() != refs * static_cast<std::size_t>(m) * sizeof(double)) {
    throw validation_error("snapshot " + path.string() + ": size does not match the sidecar");
  }
  const auto* bytes = reinterpret_cast<const unsigned char*>(data.data());
  if (checksum != "fnv1a64:" + hex64(fnv1a64({bytes, data.size()}))) {
    throw validation_error("snapshot " + path.string() + ": checksum mismatch");
  }
  GraphField field = GraphField::zeros(lattice, m);
  field.t = t;
  std::memcpy(field.values.data(), data.data(), data.size());
  return field;
}

}  // namespace mcf
