// SPDX-License-Identifier: Apache-2.0
#include "mcflow/scenarios.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "mcflow/error.hpp"

namespace mcf {

void Scenario::check_domain(const DomainSpec& spec) const {
  if (spec.n != n()) {
    throw validation_error("scenario " + std::string(name()) + " needs n = " +
                           std::to_string(n()) + ", domain has n = " +
                           std::to_string(spec.n));
  }
}

namespace {

Hessian zero_hessian(int m, int n) {
  Hessian H;
  for (int a = 0; a < m; ++a) H[a] = Small::Zero(n, n);
  return H;
}

class Affine final : public Scenario {
 public:
  Affine(const Small& A, const SmallVec& b) : A_(A), b_(b) {}
  std::string_view name() const override { return "affine"; }
  int n() const override { return static_cast<int>(A_.cols()); }
  int m() const override { return static_cast<int>(A_.rows()); }
  void value(const Point& x, std::span<double> out) const override {
    for (int a = 0; a < m(); ++a) {
      double v = b_(a);
      for (int i = 0; i < n(); ++i) v += A_(a, i) * x[i];
      out[a] = v;
    }
  }
  Small gradient(const Point&) const override { return A_; }
  Hessian hessian(const Point&) const override { return zero_hessian(m(), n()); }
  bool exact_solution() const override { return true; }
  bool constant_hessian() const override { return true; }

 private:
  Small A_;
  SmallVec b_;
};

class HolomorphicSquare final : public Scenario {
 public:
  std::string_view name() const override { return "holomorphic_square"; }
  int n() const override { return 2; }
  int m() const override { return 2; }
  void value(const Point& x, std::span<double> out) const override {
    out[0] = x[0] * x[0] - x[1] * x[1];
    out[1] = 2.0 * x[0] * x[1];
  }
  Small gradient(const Point& x) const override {
    Small D(2, 2);
    D << 2 * x[0], -2 * x[1], 2 * x[1], 2 * x[0];
    return D;
  }
  Hessian hessian(const Point&) const override {
    Hessian H = zero_hessian(2, 2);
    H[0] << 2, 0, 0, -2;
    H[1] << 0, 2, 2, 0;
    return H;
  }
  bool exact_solution() const override { return true; }
  bool constant_hessian() const override { return true; }
};

class Scherk final : public Scenario {
 public:
  static constexpr double kMargin = 1e-2;

  std::string_view name() const override { return "scherk"; }
  int n() const override { return 2; }
  int m() const override { return 1; }
  void value(const Point& x, std::span<double> out) const override {
    out[0] = std::log(std::cos(x[0])) - std::log(std::cos(x[1]));
  }
  Small gradient(const Point& x) const override {
    Small D(1, 2);
    D << -std::tan(x[0]), std::tan(x[1]);
    return D;
  }
  Hessian hessian(const Point& x) const override {
    Hessian H = zero_hessian(1, 2);
    const double cx = std::cos(x[0]), cy = std::cos(x[1]);
    H[0](0, 0) = -1.0 / (cx * cx);
    H[0](1, 1) = 1.0 / (cy * cy);
    return H;
  }
  bool exact_solution() const override { return true; }
  void check_domain(const DomainSpec& spec) const override {
    Scenario::check_domain(spec);
    const double limit = std::numbers::pi / 2 - kMargin;
    for (int i = 0; i < 2; ++i) {
      const double lo = spec.kind == DomainKind::box ? spec.lower[i]
                                                     : spec.center[i] - spec.radius;
      const double hi = spec.kind == DomainKind::box ? spec.upper[i]
                                                     : spec.center[i] + spec.radius;
      if (lo < -limit || hi > limit) {
        throw validation_error("scherk: domain too large, must lie in (-pi/2+0.01, pi/2-0.01)^2");
      }
    }
  }
};

// q and its derivatives, shared by the Hopf quadratic and the cone.
void hopf_q(const Point& x, double* out) {
  out[0] = x[0] * x[0] + x[1] * x[1] - x[2] * x[2] - x[3] * x[3];
  out[1] = 2.0 * (x[0] * x[2] + x[1] * x[3]);
  out[2] = 2.0 * (x[1] * x[2] - x[0] * x[3]);
}

Small hopf_dq(const Point& x) {
  Small D(3, 4);
  D << x[0], x[1], -x[2], -x[3],
       x[2], x[3], x[0], x[1],
      -x[3], x[2], x[1], -x[0];
  return 2.0 * D;
}

Hessian hopf_d2q() {
  Hessian H = zero_hessian(3, 4);
  H[0].diagonal() << 2, 2, -2, -2;
  H[1](0, 2) = H[1](2, 0) = 2;
  H[1](1, 3) = H[1](3, 1) = 2;
  H[2](1, 2) = H[2](2, 1) = 2;
  H[2](0, 3) = H[2](3, 0) = -2;
  return H;
}

class HopfQuadratic final : public Scenario {
 public:
  explicit HopfQuadratic(double R) : R_(R) {}
  std::string_view name() const override { return "hopf_quadratic"; }
  int n() const override { return 4; }
  int m() const override { return 3; }
  void value(const Point& x, std::span<double> out) const override {
    double q[3];
    hopf_q(x, q);
    for (int a = 0; a < 3; ++a) out[a] = R_ * q[a];
  }
  Small gradient(const Point& x) const override { return R_ * hopf_dq(x); }
  Hessian hessian(const Point&) const override {
    Hessian H = hopf_d2q();
    for (int a = 0; a < 3; ++a) H[a] *= R_;
    return H;
  }
  bool constant_hessian() const override { return true; }

 private:
  double R_;
};

class LawsonOssermanCone final : public Scenario {
 public:
  LawsonOssermanCone(double R, double r_min) : R_(R), r_min_(r_min) {}
  std::string_view name() const override { return "lawson_osserman_cone"; }
  int n() const override { return 4; }
  int m() const override { return 3; }

  void value(const Point& x, std::span<double> out) const override {
    const double r = radius_checked(x);
    double q[3];
    hopf_q(x, q);
    for (int a = 0; a < 3; ++a) out[a] = R_ * q[a] / r;
  }
  Small gradient(const Point& x) const override {
    const double r = radius_checked(x);
    double q[3];
    hopf_q(x, q);
    Small D = hopf_dq(x) / r;
    for (int a = 0; a < 3; ++a) {
      for (int i = 0; i < 4; ++i) D(a, i) -= q[a] * x[i] / (r * r * r);
    }
    return R_ * D;
  }
  Hessian hessian(const Point& x) const override {
    const double r = radius_checked(x);
    const double r3 = r * r * r, r5 = r3 * r * r;
    double q[3];
    hopf_q(x, q);
    const Small dq = hopf_dq(x);
    Hessian H = hopf_d2q();
    for (int a = 0; a < 3; ++a) {
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
          const double delta = i == j ? 1.0 : 0.0;
          H[a](i, j) = R_ * (H[a](i, j) / r - (dq(a, i) * x[j] + dq(a, j) * x[i]) / r3 -
                             q[a] * (delta / r3 - 3.0 * x[i] * x[j] / r5));
        }
      }
    }
    return H;
  }

 private:
  double radius_checked(const Point& x) const {
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
    if (!(r >= r_min_)) {
      throw validation_error("lawson_osserman_cone: evaluation inside r_min excludes the vertex");
    }
    return r;
  }

  double R_;
  double r_min_;
};

class Paraboloid final : public Scenario {
 public:
  Paraboloid(int n, double a) : n_(n), a_(a) {}
  std::string_view name() const override { return "paraboloid"; }
  int n() const override { return n_; }
  int m() const override { return 1; }
  void value(const Point& x, std::span<double> out) const override {
    double s = 0.0;
    for (int i = 0; i < n_; ++i) s += x[i] * x[i];
    out[0] = 0.5 * a_ * s;
  }
  Small gradient(const Point& x) const override {
    Small D(1, n_);
    for (int i = 0; i < n_; ++i) D(0, i) = a_ * x[i];
    return D;
  }
  Hessian hessian(const Point&) const override {
    Hessian H = zero_hessian(1, n_);
    H[0].diagonal().setConstant(a_);
    return H;
  }
  bool constant_hessian() const override { return true; }

 private:
  int n_;
  double a_;
};

double scalar_param(const ScenarioConfig& config, const std::string& key) {
  const auto it = config.params.find(key);
  if (it == config.params.end()) {
    throw validation_error("scenario " + config.name + ": missing parameter " + key);
  }
  if (it->second.size() != 1) {
    throw validation_error("scenario " + config.name + ": parameter " + key +
                           " must be a single number");
  }
  return it->second.front();
}

void allow_only(const ScenarioConfig& config, const std::set<std::string>& allowed) {
  for (const auto& [key, _] : config.params) {
    if (!allowed.contains(key)) {
      throw validation_error("scenario " + config.name + ": unknown parameter " + key);
    }
  }
}

void require_positive(double v, const std::string& what) {
  if (!(std::isfinite(v) && v > 0)) throw validation_error(what + " must be positive");
}

}  // namespace

std::unique_ptr<Scenario> make_affine(const Small& A, const SmallVec& b) {
  if (A.rows() != b.size() || A.rows() < 1 || A.cols() < 1) {
    throw validation_error("affine: A must be m×n and b must have m entries");
  }
  return std::make_unique<Affine>(A, b);
}

std::unique_ptr<Scenario> make_holomorphic_square() {
  return std::make_unique<HolomorphicSquare>();
}

std::unique_ptr<Scenario> make_scherk() { return std::make_unique<Scherk>(); }

std::unique_ptr<Scenario> make_hopf_quadratic(double R) {
  require_positive(R, "hopf_quadratic: R");
  return std::make_unique<HopfQuadratic>(R);
}

std::unique_ptr<Scenario> make_lawson_osserman_cone(double R, double r_min) {
  require_positive(R, "lawson_osserman_cone: R");
  require_positive(r_min, "lawson_osserman_cone: r_min");
  return std::make_unique<LawsonOssermanCone>(R, r_min);
}

std::unique_ptr<Scenario> make_paraboloid(int n, double a) {
  if (n < 1 || n > kMaxDim) throw validation_error("paraboloid: n out of range");
  if (!std::isfinite(a)) throw validation_error("paraboloid: a must be finite");
  return std::make_unique<Paraboloid>(n, a);
}

std::unique_ptr<Scenario> make_scenario(const ScenarioConfig& config, int n) {
  std::unique_ptr<Scenario> s;
  if (config.name == "affine") {
    allow_only(config, {"A", "b"});
    const auto b_it = config.params.find("b");
    const auto a_it = config.params.find("A");
    if (b_it == config.params.end() || a_it == config.params.end()) {
      throw validation_error("scenario affine: parameters A and b are required");
    }
    const auto m = static_cast<int>(b_it->second.size());
    if (m < 1 || m > kMaxDim) throw validation_error("scenario affine: b must have 1..4 entries");
    if (a_it->second.size() != static_cast<std::size_t>(m * n)) {
      throw validation_error("scenario affine: A must have m*n = " + std::to_string(m * n) +
                             " entries (row-major)");
    }
    Small A(m, n);
    SmallVec b(m);
    for (int a = 0; a < m; ++a) {
      b(a) = b_it->second[a];
      for (int i = 0; i < n; ++i) A(a, i) = a_it->second[a * n + i];
    }
    s = make_affine(A, b);
  } else if (config.name == "holomorphic_square") {
    allow_only(config, {});
    s = make_holomorphic_square();
  } else if (config.name == "scherk") {
    allow_only(config, {});
    s = make_scherk();
  } else if (config.name == "hopf_quadratic") {
    allow_only(config, {"R"});
    s = make_hopf_quadratic(scalar_param(config, "R"));
  } else if (config.name == "lawson_osserman_cone") {
    allow_only(config, {"R", "r_min"});
    s = make_lawson_osserman_cone(scalar_param(config, "R"), scalar_param(config, "r_min"));
  } else if (config.name == "paraboloid") {
    allow_only(config, {"a"});
    s = make_paraboloid(n, scalar_param(config, "a"));
  } else {
    throw validation_error("unknown scenario: " + config.name);
  }
  if (s->n() != n) {
    throw validation_error("scenario " + config.name + " needs n = " + std::to_string(s->n()));
  }
  return s;
}

std::vector<ScenarioInfo> list_scenarios() {
  return {
      {"affine", "any n, m = len(b)", "psi(x) = A x + b; exact minimal graph", true,
       {{"A", "vector", "m*n entries, row-major", true},
        {"b", "vector", "m entries", true}}},
      {"holomorphic_square", "n = 2, m = 2", "psi(x,y) = (x^2 - y^2, 2xy); exact minimal graph",
       true, {}},
      {"scherk", "n = 2, m = 1",
       "psi(x,y) = ln(cos x / cos y); exact minimal graph on (-pi/2, pi/2)^2", true, {}},
      {"hopf_quadratic", "n = 4, m = 3",
       "psi = R q, q the quadratic extension of the Hopf map; equals R eta on the unit sphere",
       true, {{"R", "scalar", "scale, R > 0", true}}},
      {"lawson_osserman_cone", "n = 4, m = 3",
       "f = R q(x)/|x| on r_min <= |x|; minimal cone at R = sqrt(5)/2; evaluation only", false,
       {{"R", "scalar", "scale, R > 0", true},
        {"r_min", "scalar", "inner radius, r_min > 0", true}}},
      {"paraboloid", "any n, m = 1", "psi(x) = (a/2)|x|^2; non-stationary test data", true,
       {{"a", "scalar", "curvature", true}}},
  };
}

}  // namespace mcf
