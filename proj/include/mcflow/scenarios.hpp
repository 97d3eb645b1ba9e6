// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mcflow/grid_domain.hpp"
#include "mcflow/small_linalg.hpp"

namespace mcf {

/// Second derivatives of a map R^n -> R^m: one symmetric n×n slice per
/// target component.
using Hessian = std::array<Small, kMaxDim>;

/// Built-in initial/boundary data ψ with analytic derivatives. All methods
/// are pure functions of (parameters, x).
class Scenario {
 public:
  virtual ~Scenario() = default;

  virtual std::string_view name() const = 0;
  virtual int n() const = 0;
  virtual int m() const = 0;

  virtual void value(const Point& x, std::span<double> out) const = 0;
  /// m×n
  virtual Small gradient(const Point& x) const = 0;
  virtual Hessian hessian(const Point& x) const = 0;

  /// The continuum minimal surface system holds exactly for ψ.
  virtual bool exact_solution() const { return false; }
  /// D²ψ does not depend on x.
  virtual bool constant_hessian() const { return false; }

  /// Throws a validation error when ψ is not usable on the domain.
  virtual void check_domain(const DomainSpec& spec) const;
};

/// ψ(x) = A x + b.
std::unique_ptr<Scenario> make_affine(const Small& A, const SmallVec& b);

/// ψ(x, y) = (x² − y², 2xy), the real form of z ↦ z².
std::unique_ptr<Scenario> make_holomorphic_square();

/// ψ(x, y) = ln(cos x / cos y); needs the domain inside (−π/2, π/2)².
std::unique_ptr<Scenario> make_scherk();

/// ψ = R·q with q the degree-two extension of the Hopf map,
/// q(x) = (x1²+x2²−x3²−x4², 2(x1x3+x2x4), 2(x2x3−x1x4)), using
/// z1 = x1 + i x2, z2 = x3 + i x4. On the unit sphere ψ = R·η.
std::unique_ptr<Scenario> make_hopf_quadratic(double R);

/// f(x) = R q(x)/|x|, evaluated only on r_min ≤ |x|. Minimal for R = √5/2.
std::unique_ptr<Scenario> make_lawson_osserman_cone(double R, double r_min);

/// ψ(x) = (a/2)|x|² in any dimension, m = 1. Non-stationary test data.
std::unique_ptr<Scenario> make_paraboloid(int n, double a);

/// Named scenario with numeric parameters (vectors for A and b).
struct ScenarioConfig {
  std::string name;
  std::map<std::string, std::vector<double>> params;

  bool operator==(const ScenarioConfig&) const = default;
};

/// Validates parameters against the scenario's schema and the domain
/// dimension n.
std::unique_ptr<Scenario> make_scenario(const ScenarioConfig& config, int n);

struct ScenarioParam {
  std::string name;
  std::string type;  // "scalar" or "vector"
  std::string description;
  bool required = true;
};

struct ScenarioInfo {
  std::string name;
  std::string dimensions;  // e.g. "n = 4, m = 3"
  std::string description;
  bool runnable = true;
  std::vector<ScenarioParam> params;
};

std::vector<ScenarioInfo> list_scenarios();

}  // namespace mcf
