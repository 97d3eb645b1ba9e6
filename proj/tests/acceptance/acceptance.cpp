// SPDX-License-Identifier: Apache-2.0
// Acceptance checks 1-11. Prints one PASS/FAIL line per criterion; exits
// non-zero when any criterion fails. Optional arguments select criteria.
#include <Eigen/SVD>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mcflow/analysis.hpp"
#include "mcflow/app.hpp"
#include "mcflow/config.hpp"
#include "mcflow/error.hpp"
#include "mcflow/flow_engine.hpp"
#include "mcflow/geometry.hpp"
#include "mcflow/io.hpp"
#include "mcflow/monitors.hpp"

#ifndef MCFLOW_SOURCE_DIR
#define MCFLOW_SOURCE_DIR "."
#endif

using namespace mcf;
namespace fs = std::filesystem;

namespace {

struct Result {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Small random_matrix(std::mt19937_64& rng, int rows, int cols, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  Small M(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) M(i, j) = g(rng);
  return M;
}

// Singular values from Eigen, padded with zeros to `slots`.
std::vector<double> oracle_lambda(const Small& df, int slots) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd{Eigen::MatrixXd(df)};
  std::vector<double> out(slots, 0.0);
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) out[i] = svd.singularValues()(i);
  return out;
}

DomainSpec ball(int n, double h, double radius = 1.0) {
  DomainSpec s;
  s.kind = DomainKind::ball;
  s.n = n;
  s.center.assign(n, 0.0);
  s.radius = radius;
  s.h = h;
  return s;
}

DomainSpec box(int n, double h, double half) {
  DomainSpec s;
  s.kind = DomainKind::box;
  s.n = n;
  s.lower.assign(n, -half);
  s.upper.assign(n, half);
  s.h = h;
  return s;
}

std::shared_ptr<const Lattice> lattice(const DomainSpec& spec) {
  return std::make_shared<const Lattice>(Lattice::build(spec));
}

double max_abs_diff(const GraphField& a, const GraphField& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) d = std::max(d, std::abs(a.values[i] - b.values[i]));
  return d;
}

bool orders_in(const std::vector<double>& orders, double lo, double hi) {
  if (orders.empty()) return false;
  for (double o : orders) {
    if (!(o >= lo && o <= hi)) return false;
  }
  return true;
}

std::string list(const std::vector<double>& v) {
  std::ostringstream s;
  s.precision(4);
  for (std::size_t i = 0; i < v.size(); ++i) s << (i ? ", " : "") << v[i];
  return s.str();
}

// c·ψ for homogeneity checks.
class Scaled final : public Scenario {
 public:
  Scaled(std::unique_ptr<Scenario> base, double c) : base_(std::move(base)), c_(c) {}
  std::string_view name() const override { return base_->name(); }
  int n() const override { return base_->n(); }
  int m() const override { return base_->m(); }
  void value(const Point& x, std::span<double> out) const override {
    base_->value(x, out);
    for (double& v : out) v *= c_;
  }
  Small gradient(const Point& x) const override { return c_ * base_->gradient(x); }
  Hessian hessian(const Point& x) const override {
    Hessian H = base_->hessian(x);
    for (int a = 0; a < m(); ++a) H[a] *= c_;
    return H;
  }
  bool constant_hessian() const override { return base_->constant_hessian(); }
  void check_domain(const DomainSpec& spec) const override { base_->check_domain(spec); }

 private:
  std::unique_ptr<Scenario> base_;
  double c_;
};

// ---------------------------------------------------------------------------

Result geometry_oracle() {
  const auto start = Clock::now();
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + trial % 4, m = 1 + (trial / 4) % 4;
    const Small df = random_matrix(rng, m, n, trial % 3 == 0 ? 3.0 : 0.7);
    double prod = 1.0;
    for (double l : oracle_lambda(df, std::min(m, n))) prod *= 1.0 + l * l;
    const double det = induced_metric(df).det;
    worst = std::max(worst, std::abs(det - prod) / prod);
    worst = std::max(worst, std::abs(area_density(df) - std::sqrt(prod)) / std::sqrt(prod));
  }
  const double secs = seconds_since(start);
  return {worst <= 1e-10 && secs < 1.0,
          fmt("max relative error %.3e over 1000 cases, %.3f s", worst, secs)};
}

Result p_form_identity() {
  std::mt19937_64 rng(102);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + trial % 4, m = 1 + (trial / 4) % 4;
    const Small df = random_matrix(rng, m, n, trial % 2 ? 2.0 : 0.5);
    const Svd svd = singular_values(df);
    const Ambient E = tangent_frame(svd, n, m), N = normal_frame(svd, n, m);
    Ambient P = Ambient::Identity(n + m, n + m);
    P.bottomRightCorner(m, m) *= -1.0;
    const Ambient PT = E.transpose() * P * E, PN = N.transpose() * P * N;
    const std::vector<double> lam = oracle_lambda(df, std::max(n, m));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double l2 = lam[i] * lam[i];
        const double expect = i == j ? (1.0 - l2) / (1.0 + l2) : 0.0;
        worst = std::max(worst, std::abs(PT(i, j) - expect));
      }
    }
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        const double l2 = lam[a] * lam[a];
        const double expect = a == b ? (l2 - 1.0) / (1.0 + l2) : 0.0;
        worst = std::max(worst, std::abs(PN(a, b) - expect));
      }
    }
  }
  return {worst <= 1e-10, fmt("max deviation %.3e over 1000 cases", worst)};
}

Result bracket_bound() {
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  double worst = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 10000; ++trial) {
    const int n = 1 + trial % 4, m = 1 + (trial / 4) % 4;
    std::vector<double> lam(std::min(n, m));
    for (double& l : lam) l = u(rng);
    std::sort(lam.rbegin(), lam.rend());
    if (lam.size() > 1 && lam[0] * lam[1] > 1.0) {
      // Rescale so the largest pair product lands in [0, 1].
      const double s = std::sqrt(std::uniform_real_distribution<double>(0.0, 1.0)(rng) / (lam[0] * lam[1]));
      for (double& l : lam) l *= s;
    }
    Hessian h;
    double A2 = 0.0;
    for (int a = 0; a < m; ++a) {
      const Small B = random_matrix(rng, n, n, 1.0);
      h[a] = B + B.transpose();
      A2 += h[a].squaredNorm();
    }
    const double pair = max_pair_product(lam);
    const double margin = stability_bracket(lam, h, n, m) - (1.0 - pair) * A2;
    worst = std::min(worst, margin);
  }
  return {worst >= -1e-12, fmt("min of bracket - (1 - max|l_i l_j|)|A|^2 = %.3e over 10^4 cases", worst)};
}

Result affine_stationarity() {
  std::mt19937_64 rng(104);
  const Small A = random_matrix(rng, 2, 3, 0.4);
  SmallVec b(2);
  b << 0.3, -0.7;
  const auto psi = make_affine(A, b);
  const auto lat = lattice(ball(3, 0.125));
  const GraphField f0 = GraphField::sample(lat, *psi);
  GraphField f = f0;
  for (int step = 0; step < 100; ++step) f = step_explicit(f, stable_dt(f, 0.8));
  const double change = max_abs_diff(f, f0);
  const double a0 = monitor_step(f0, nullptr).area, a1 = monitor_step(f, nullptr).area;
  const double rel = std::abs(a1 - a0) / a0;
  return {change <= 1e-12 && rel <= 1e-12,
          fmt("max change %.3e, relative area change %.3e after 100 steps", change, rel)};
}

Result exact_residual_orders() {
  const auto start = Clock::now();
  const ResidualStudy z2 = lattice_residual_study(*make_holomorphic_square(), box(2, 0.125, 1.0), 3);
  const ResidualStudy scherk = lattice_residual_study(*make_scherk(), box(2, 0.125, 1.0), 3);
  const double secs = seconds_since(start);
  const bool ok = orders_in(z2.orders(), 1.8, 2.2) && orders_in(scherk.orders(), 1.8, 2.2) && secs < 60;
  return {ok, fmt("z^2 residuals %.3e, %.3e, %.3e (orders %s); Scherk orders %s; %.2f s",
                  z2.levels[0].residual, z2.levels[1].residual, z2.levels[2].residual,
                  list(z2.orders()).c_str(), list(scherk.orders()).c_str(), secs)};
}

Result cone_study() {
  const auto start = Clock::now();
  const ResidualStudy good = cone_residual_study(std::sqrt(5.0) / 2.0, 0.3, 0.125, 3);
  const ResidualStudy bad = cone_residual_study(1.0, 0.3, 0.125, 3);
  const double secs = seconds_since(start);
  const double ratio = bad.levels.back().residual / good.levels.back().residual;
  const bool ok = orders_in(good.orders(), 1.7, 2.2) && ratio >= 10.0 && secs < 300;
  return {ok, fmt("R = sqrt(5)/2 orders %s; R = 1 floor / R = sqrt(5)/2 floor = %.1f; %.2f s",
                  list(good.orders()).c_str(), ratio, secs)};
}

Result condition_checker() {
  const DomainSpec b4 = ball(4, 0.125), b2 = ball(2, 0.125), sq = box(2, 0.125, 1.0);
  const double zero = admissibility_constant(*make_affine(Small::Zero(2, 4), SmallVec::Zero(2)), b4, 1).C;

  double homog = 0.0;
  struct Case {
    std::function<std::unique_ptr<Scenario>()> make;
    DomainSpec spec;
  };
  const std::vector<Case> cases = {{[] { return make_holomorphic_square(); }, b2},
                                   {[] { return make_scherk(); }, sq},
                                   {[] { return make_hopf_quadratic(1.0); }, b4}};
  for (const Case& c : cases) {
    const double base = admissibility_constant(*c.make(), c.spec, 5).C;
    for (double s : {-3.0, 0.5, 2.0}) {
      const double scaled = admissibility_constant(Scaled(c.make(), s), c.spec, 5).C;
      homog = std::max(homog, std::abs(scaled - std::abs(s) * base) / (std::abs(s) * base));
    }
  }

  const double c1 = admissibility_constant(*make_hopf_quadratic(1.0), b4, 5).C;
  double linear = 0.0;
  for (double R : {0.0065, 0.5, 2.0, 4.2}) {
    linear = std::max(linear, std::abs(admissibility_constant(*make_hopf_quadratic(R), b4, 5).C - R * c1) / (R * c1));
  }
  const double c42 = admissibility_constant(*make_hopf_quadratic(4.2), b4, 5).C;
  const bool ok = zero == 0.0 && homog <= 1e-10 && linear <= 1e-10 && c42 > 1.0;
  return {ok, fmt("C(0) = %g; homogeneity error %.2e; Hopf C(R)/R = %.6f (spread %.2e); C(4.2) = %.4f",
                  zero, homog, c1, linear, c42)};
}

// Shared by criteria 8 and 9.
struct HopfRun {
  bool done = false;
  std::string error;
  RunConfig config;
  double dt0 = 0.0;
  app::Outcome outcome;
  std::vector<DiagnosticsRecord> series;
  double seconds = 0.0;
};

HopfRun run_hopf(double h, double dt, const std::string& dir) {
  HopfRun r;
  r.config = load_config(fs::path(MCFLOW_SOURCE_DIR) / "configs" / "hopf_admissible.cfg");
  r.config.domain.h = h;
  r.config.output.dir = dir;
  if (dt <= 0.0) {
    const auto psi = make_scenario(r.config.scenario, r.config.domain.n);
    dt = stable_dt(GraphField::sample(lattice(r.config.domain), *psi), r.config.stepping.safety);
  }
  r.dt0 = dt;
  r.config.stepping.dt = dt;
  const auto start = Clock::now();
  r.outcome = app::run(r.config, 1);
  r.seconds = seconds_since(start);
  r.series = read_diagnostics(fs::path(dir) / "diagnostics.csv");
  r.done = true;
  return r;
}

HopfRun& fine_hopf() {
  static HopfRun run = [] {
    try {
      return run_hopf(0.125, 0.0, "acceptance_out/hopf");
    } catch (const std::exception& e) {
      HopfRun failed;
      failed.error = e.what();
      return failed;
    }
  }();
  return run;
}

Result flow_invariants() {
  const HopfRun& run = fine_hopf();
  if (!run.done) return {false, "run failed: " + run.error};
  const auto& rep = run.outcome.report;
  const auto& s = run.series;
  const double C = rep["condition"]["C"].get<double>();

  double max_lambda = 0.0;
  for (const auto& r : s) max_lambda = std::max(max_lambda, r.max_lambda);

  double psi_abs = 0.0;
  for (std::size_t a = 0; a < s[0].f_max.size(); ++a) {
    psi_abs = std::max({psi_abs, std::abs(s[0].f_max[a]), std::abs(s[0].f_min[a])});
  }
  double mp = -std::numeric_limits<double>::infinity();
  for (const auto& r : s) {
    for (std::size_t a = 0; a < r.f_max.size(); ++a) {
      mp = std::max({mp, r.f_max[a] - s[0].f_max[a], s[0].f_min[a] - r.f_min[a]});
    }
  }
  const double mp_tol = 1e-8 * (1.0 + psi_abs);

  double rise = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < s.size(); ++i) rise = std::max(rise, s[i].area - s[i - 1].area);
  const double rise_tol = 1e-6 * s[0].area;

  const double bound = boundary_gradient_bound(4, rep["condition"]["delta"].get<double>(), s.back().xi,
                                               rep["condition"]["sup_d2"].get<double>(),
                                               rep["condition"]["sup_d_boundary"].get<double>());
  double bdf = 0.0;
  for (const auto& r : s) bdf = std::max(bdf, r.boundary_max_Df);

  const auto& star = rep["checks"]["star_omega_min_principle"];
  const bool star_ok = star["applicable"].get<bool>() && star["ok"].get<bool>();

  const bool reached = rep["termination"].get<std::string>() == "reached_t_end";
  const bool ok = C <= 0.9 && reached && max_lambda < 1.0 && mp <= mp_tol && rise <= rise_tol &&
                  bdf <= 1.05 * bound && star_ok && run.seconds < 600;
  return {ok, fmt("C = %.3f, %s after %ld steps; (a) max lambda %.4f (b) max-principle margin %.2e <= %.2e "
                  "(c) max area rise %.2e <= %.2e (d) boundary |Df| %.4f <= 1.05 x %.4f (e) *Omega1 min "
                  "%s (interior %.10f, parabolic %.10f); %.1f s",
                  C, rep["termination"].get<std::string>().c_str(), rep["steps"].get<long>(), max_lambda, mp,
                  mp_tol, rise, rise_tol, bdf, bound, star_ok ? "ok" : "violated",
                  star["interior_min"].get<double>(), star["parabolic_min"].get<double>(), run.seconds)};
}

Result energy_identity() {
  const HopfRun& fine = fine_hopf();
  if (!fine.done) return {false, "run failed: " + fine.error};
  HopfRun coarse;
  try {
    coarse = run_hopf(0.25, 2.0 * fine.dt0, "acceptance_out/hopf_coarse");
  } catch (const std::exception& e) {
    return {false, std::string("coarse run failed: ") + e.what()};
  }
  auto discrepancy = [](const HopfRun& r, double& drop) {
    drop = r.series.front().area - r.series.back().area;
    return std::abs(drop - r.series.back().energy_spent);
  };
  double drop_f = 0.0, drop_c = 0.0;
  const double disc_f = discrepancy(fine, drop_f), disc_c = discrepancy(coarse, drop_c);
  const bool ok = drop_f > 0.0 && disc_f <= 0.05 * drop_f && disc_f < disc_c;
  return {ok, fmt("h = 1/8: drop %.4e, energy %.4e, |drop - energy| = %.4e (%.4f of drop); "
                  "h = 1/4, 2dt: |drop - energy| = %.4e",
                  drop_f, fine.series.back().energy_spent, disc_f, disc_f / drop_f, disc_c)};
}

Result scheme_consistency() {
  // (a) one step from the same state, explicit against lagged semi-implicit.
  const auto lat = lattice(box(2, 1.0 / 16.0, 1.0));
  const GraphField f0 = GraphField::sample(lat, *make_paraboloid(2, 1.0));
  StepConfig cfg;
  cfg.scheme = Scheme::semi_implicit;
  cfg.solver_tol = 1e-12;
  cfg.picard_iters = 1;
  const double dt0 = stable_dt(f0, 0.8);
  auto gap = [&](double dt) { return max_abs_diff(step_explicit(f0, dt), step_semi_implicit(f0, dt, cfg)); };
  // dt0 sits at the explicit stability limit, where dt·λ_max ≈ 1.6 and the
  // corner layer is not yet asymptotic; the ratio is taken one halving later.
  const double g0 = gap(dt0), g1 = gap(dt0 / 2), g2 = gap(dt0 / 4);
  const double ratio = g1 / g2;

  // (b) velocity consistency of the last step under joint (dt, h) refinement.
  std::vector<double> dev;
  const double T = 0.01;
  for (int level = 0; level < 3; ++level) {
    const double h = 0.125 / (1 << level);
    const int steps = 4 << level;
    const auto l = lattice(ball(2, h));
    GraphField f = GraphField::sample(l, *make_paraboloid(2, 1.0));
    const double dt = T / steps;
    GraphField prev = f;
    for (int k = 0; k < steps; ++k) {
      prev = f;
      f = step_semi_implicit(prev, dt, cfg);
    }
    dev.push_back(velocity_consistency(prev, f, dt));
  }
  const bool monotone = dev[1] < dev[0] && dev[2] < dev[1];
  const bool ok = ratio >= 3.5 && ratio <= 4.5 && monotone;
  return {ok, fmt("step gap at dt0, dt0/2, dt0/4: %.3e, %.3e, %.3e; ratio %.3f (at dt0: %.3f); "
                  "velocity deviation %s",
                  g0, g1, g2, ratio, g0 / g1, list(dev).c_str())};
}

Result reproducibility() {
  const std::string base = R"(
[domain]
kind = ball
n = 2
h = 0.0625
center = 0, 0
radius = 1
[scenario]
name = holomorphic_square
[stepping]
t_end = 0.005
steady_tol = 0
[monitors]
seed = 9
[output]
snapshot_every = 4
)";
  std::vector<std::string> diffs;
  std::size_t compared = 0;
  for (const char* scheme : {"explicit", "semi_implicit"}) {
    RunConfig cfg = parse_config(base);
    cfg.stepping.scheme = std::strcmp(scheme, "explicit") == 0 ? Scheme::explicit_euler : Scheme::semi_implicit;
    if (cfg.stepping.scheme == Scheme::semi_implicit) cfg.stepping.dt = 0.0005;
    std::vector<fs::path> dirs;
    for (int workers : {1, 3}) {
      const fs::path dir = fs::path("acceptance_out") / (std::string("repro_") + scheme + "_" + std::to_string(workers));
      fs::remove_all(dir);
      cfg.output.dir = dir.string();
      app::run(cfg, workers);
      app::plot(dir / "diagnostics.csv", "area", dir / "area.svg");
      dirs.push_back(dir);
    }
    std::set<fs::path> names;
    for (const auto& e : fs::recursive_directory_iterator(dirs[0])) {
      if (e.is_regular_file() && e.path().filename() != "report.json") {
        names.insert(fs::relative(e.path(), dirs[0]));
      }
    }
    for (const fs::path& name : names) {
      ++compared;
      if (!fs::exists(dirs[1] / name) || read_file(dirs[0] / name) != read_file(dirs[1] / name)) {
        diffs.push_back(std::string(scheme) + ":" + name.string());
      }
    }
  }
  std::string detail = fmt("%zu files compared across worker counts 1 and 3", compared);
  for (const auto& d : diffs) detail += "; differs: " + d;
  return {diffs.empty() && compared > 0, detail};
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int id;
    const char* name;
    Result (*fn)();
  };
  const std::vector<Criterion> all = {
      {1, "geometry kernel oracle", geometry_oracle},
      {2, "P-form identity", p_form_identity},
      {3, "bracket bound", bracket_bound},
      {4, "affine stationarity", affine_stationarity},
      {5, "exact-solution residual orders", exact_residual_orders},
      {6, "Lawson-Osserman cone", cone_study},
      {7, "admissibility constant", condition_checker},
      {8, "flow invariants on an admissible Hopf run", flow_invariants},
      {9, "energy identity", energy_identity},
      {10, "scheme consistency", scheme_consistency},
      {11, "reproducibility", reproducibility},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  fs::create_directories("acceptance_out");
  int failed = 0;
  for (const Criterion& c : all) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    Result r;
    try {
      r = c.fn();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    if (!r.pass) ++failed;
    std::printf("%s criterion %d (%s): %s\n", r.pass ? "PASS" : "FAIL", c.id, c.name, r.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
