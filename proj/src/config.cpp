// SPDX-License-Identifier: Apache-2.0
#include "mcflow/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "mcflow/error.hpp"

namespace mcf {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void fail(const KeyValue& kv, const std::string& what) {
  throw validation_error("line " + std::to_string(kv.line) + ": [" + kv.section + "] " + kv.key +
                         ": " + what);
}

double to_double(const KeyValue& kv, std::string_view text) {
  const std::string s = trim(text);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || end != s.data() + s.size() || !std::isfinite(v)) {
    fail(kv, "expected a finite number, got '" + s + "'");
  }
  return v;
}

double to_double(const KeyValue& kv) { return to_double(kv, kv.value); }

std::vector<double> to_doubles(const KeyValue& kv) {
  std::vector<double> out;
  std::string_view rest = kv.value;
  while (true) {
    const auto comma = rest.find(',');
    out.push_back(to_double(kv, rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

long to_long(const KeyValue& kv) {
  long v = 0;
  const auto [end, ec] = std::from_chars(kv.value.data(), kv.value.data() + kv.value.size(), v);
  if (kv.value.empty() || ec != std::errc() || end != kv.value.data() + kv.value.size()) {
    fail(kv, "expected an integer, got '" + kv.value + "'");
  }
  return v;
}

std::uint64_t to_u64(const KeyValue& kv) {
  std::uint64_t v = 0;
  const auto [end, ec] = std::from_chars(kv.value.data(), kv.value.data() + kv.value.size(), v);
  if (kv.value.empty() || ec != std::errc() || end != kv.value.data() + kv.value.size()) {
    fail(kv, "expected a non-negative integer, got '" + kv.value + "'");
  }
  return v;
}

bool to_bool(const KeyValue& kv) {
  if (kv.value == "true") return true;
  if (kv.value == "false") return false;
  fail(kv, "expected true or false, got '" + kv.value + "'");
}

std::optional<double> to_auto_double(const KeyValue& kv) {
  if (kv.value == "auto") return std::nullopt;
  return to_double(kv);
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_double(v[i]);
  }
  return out;
}

// Rethrows validation errors raised by a section's semantic checks with the
// section's header line attached.
template <class Fn>
void with_section_line(const std::map<std::string, int>& headers, const std::string& section,
                       Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::validation) throw;
    const auto it = headers.find(section);
    const int line = it == headers.end() ? 0 : it->second;
    throw validation_error("line " + std::to_string(line) + ": [" + section + "] " + e.what());
  }
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::vector<KeyValue> parse_key_values(std::string_view text) {
  std::vector<KeyValue> out;
  std::string section;
  int line_no = 0;
  std::set<std::pair<std::string, std::string>> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(std::string_view(raw).substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw validation_error("line " + std::to_string(line_no) + ": malformed section header");
      }
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (section.empty()) {
        throw validation_error("line " + std::to_string(line_no) + ": empty section name");
      }
      out.push_back({section, "", "", line_no});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw validation_error("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    if (section.empty()) {
      throw validation_error("line " + std::to_string(line_no) + ": key outside of any section");
    }
    KeyValue kv{section, trim(std::string_view(line).substr(0, eq)),
                trim(std::string_view(line).substr(eq + 1)), line_no};
    if (kv.key.empty()) throw validation_error("line " + std::to_string(line_no) + ": empty key");
    if (!seen.insert({section, kv.key}).second) fail(kv, "duplicate key");
    out.push_back(std::move(kv));
  }
  return out;
}

DomainSpec parse_domain(const std::vector<KeyValue>& entries) {
  DomainSpec spec;
  std::set<std::string> given;
  for (const KeyValue& kv : entries) {
    if (kv.section != "domain" || kv.key.empty()) continue;
    if (kv.key == "kind") {
      if (kv.value == "box") spec.kind = DomainKind::box;
      else if (kv.value == "ball") spec.kind = DomainKind::ball;
      else fail(kv, "expected box or ball, got '" + kv.value + "'");
    } else if (kv.key == "n") {
      spec.n = static_cast<int>(to_long(kv));
    } else if (kv.key == "h") {
      spec.h = to_double(kv);
    } else if (kv.key == "lower") {
      spec.lower = to_doubles(kv);
    } else if (kv.key == "upper") {
      spec.upper = to_doubles(kv);
    } else if (kv.key == "center") {
      spec.center = to_doubles(kv);
    } else if (kv.key == "radius") {
      spec.radius = to_double(kv);
    } else {
      fail(kv, "unknown key");
    }
    given.insert(kv.key);
  }
  const bool box = spec.kind == DomainKind::box;
  const std::vector<std::string> shape_keys = {"lower", "upper"};
  const std::vector<std::string> ball_keys = {"center", "radius"};
  std::vector<std::string> required = {"kind", "n", "h"};
  for (const std::string& k : box ? shape_keys : ball_keys) required.push_back(k);
  for (const std::string& k : required) {
    if (!given.count(k)) throw validation_error("missing required key '" + k + "'");
  }
  for (const std::string& k : box ? ball_keys : shape_keys) {
    if (given.count(k)) {
      throw validation_error("key '" + k + "' does not apply to kind = " + (box ? "box" : "ball"));
    }
  }
  spec.validate();
  return spec;
}

std::string format_domain(const DomainSpec& spec) {
  std::ostringstream out;
  out << "[domain]\n";
  out << "kind = " << (spec.kind == DomainKind::box ? "box" : "ball") << "\n";
  out << "n = " << spec.n << "\n";
  out << "h = " << format_double(spec.h) << "\n";
  if (spec.kind == DomainKind::box) {
    out << "lower = " << join(spec.lower) << "\n";
    out << "upper = " << join(spec.upper) << "\n";
  } else {
    out << "center = " << join(spec.center) << "\n";
    out << "radius = " << format_double(spec.radius) << "\n";
  }
  return out.str();
}

void RunConfig::validate() const {
  domain.validate();
  make_scenario(scenario, domain.n)->check_domain(domain);
  stepping.validate();
  if (monitors.eps_mp && !(*monitors.eps_mp > 0)) throw validation_error("monitors: eps_mp must be positive");
  if (monitors.cadence < 1) throw validation_error("monitors: cadence must be >= 1");
  if (output.dir.empty()) throw validation_error("output: dir must not be empty");
  if (output.snapshot_every < 1) throw validation_error("output: snapshot_every must be >= 1");
}

RunConfig parse_config(std::string_view text) {
  const std::vector<KeyValue> entries = parse_key_values(text);
  static const std::set<std::string> kSections = {"domain", "scenario", "stepping", "monitors",
                                                  "output"};
  std::map<std::string, int> headers;
  for (const KeyValue& kv : entries) {
    if (!kv.key.empty()) continue;
    if (!kSections.count(kv.section)) {
      throw validation_error("line " + std::to_string(kv.line) + ": unknown section [" +
                             kv.section + "]");
    }
    if (!headers.emplace(kv.section, kv.line).second) {
      throw validation_error("line " + std::to_string(kv.line) + ": duplicate section [" +
                             kv.section + "]");
    }
  }
  for (const char* s : {"domain", "scenario", "stepping", "monitors"}) {
    if (!headers.count(s)) throw validation_error(std::string("missing section [") + s + "]");
  }

  RunConfig cfg;
  with_section_line(headers, "domain", [&] { cfg.domain = parse_domain(entries); });

  bool has_name = false, has_t_end = false, has_seed = false;
  for (const KeyValue& kv : entries) {
    if (kv.key.empty()) continue;
    if (kv.section == "scenario") {
      if (kv.key == "name") {
        cfg.scenario.name = kv.value;
        has_name = true;
      } else {
        cfg.scenario.params[kv.key] = to_doubles(kv);
      }
    } else if (kv.section == "stepping") {
      StepConfig& s = cfg.stepping;
      if (kv.key == "scheme") {
        if (kv.value == "explicit") s.scheme = Scheme::explicit_euler;
        else if (kv.value == "semi_implicit") s.scheme = Scheme::semi_implicit;
        else fail(kv, "expected explicit or semi_implicit, got '" + kv.value + "'");
      } else if (kv.key == "dt") {
        s.dt = to_auto_double(kv);
      } else if (kv.key == "safety") {
        s.safety = to_double(kv);
      } else if (kv.key == "solver_tol") {
        s.solver_tol = to_double(kv);
      } else if (kv.key == "picard_iters") {
        s.picard_iters = static_cast<int>(to_long(kv));
      } else if (kv.key == "t_end") {
        s.t_end = to_double(kv);
        has_t_end = true;
      } else if (kv.key == "steady_tol") {
        s.steady_tol = to_auto_double(kv);
      } else if (kv.key == "max_steps") {
        s.max_steps = to_long(kv);
      } else {
        fail(kv, "unknown key");
      }
    } else if (kv.section == "monitors") {
      MonitorConfig& m = cfg.monitors;
      if (kv.key == "strict") m.strict = to_bool(kv);
      else if (kv.key == "eps_mp") m.eps_mp = to_auto_double(kv);
      else if (kv.key == "cadence") m.cadence = to_long(kv);
      else if (kv.key == "seed") {
        m.seed = to_u64(kv);
        has_seed = true;
      } else {
        fail(kv, "unknown key");
      }
    } else if (kv.section == "output") {
      if (kv.key == "dir") cfg.output.dir = kv.value;
      else if (kv.key == "snapshot_every") cfg.output.snapshot_every = to_long(kv);
      else fail(kv, "unknown key");
    }
  }
  auto missing = [&](const char* section, const char* key) {
    throw validation_error("line " + std::to_string(headers.at(section)) + ": [" + section +
                           "] missing required key '" + key + "'");
  };
  if (!has_name) missing("scenario", "name");
  if (!has_t_end) missing("stepping", "t_end");
  if (!has_seed) missing("monitors", "seed");

  with_section_line(headers, "scenario", [&] {
    make_scenario(cfg.scenario, cfg.domain.n)->check_domain(cfg.domain);
  });
  with_section_line(headers, "stepping", [&] { cfg.stepping.validate(); });
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  out << format_domain(c.domain) << "\n[scenario]\nname = " << c.scenario.name << "\n";
  for (const auto& [key, values] : c.scenario.params) out << key << " = " << join(values) << "\n";
  const StepConfig& s = c.stepping;
  out << "\n[stepping]\n";
  out << "scheme = " << (s.scheme == Scheme::explicit_euler ? "explicit" : "semi_implicit") << "\n";
  out << "dt = " << (s.dt ? format_double(*s.dt) : "auto") << "\n";
  out << "safety = " << format_double(s.safety) << "\n";
  out << "solver_tol = " << format_double(s.solver_tol) << "\n";
  out << "picard_iters = " << s.picard_iters << "\n";
  out << "t_end = " << format_double(s.t_end) << "\n";
  out << "steady_tol = " << (s.steady_tol ? format_double(*s.steady_tol) : "auto") << "\n";
  out << "max_steps = " << s.max_steps << "\n";
  out << "\n[monitors]\n";
  out << "strict = " << (c.monitors.strict ? "true" : "false") << "\n";
  out << "eps_mp = " << (c.monitors.eps_mp ? format_double(*c.monitors.eps_mp) : "auto") << "\n";
  out << "cadence = " << c.monitors.cadence << "\n";
  out << "seed = " << c.monitors.seed << "\n";
  out << "\n[output]\ndir = " << c.output.dir << "\n";
  out << "snapshot_every = " << c.output.snapshot_every << "\n";
  return out.str();
}

}  // namespace mcf
