// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mcflow/grid_domain.hpp"
#include "mcflow/jet_calculus.hpp"
#include "mcflow/scenarios.hpp"

namespace mcf {

/// Admissibility constant C = 8nδ sup|D²ψ| + √2 sup_∂Ω |Dψ|, with the
/// suprema sampled on the lattice of `spec`.
struct ConditionValue {
  double C = 0.0;
  bool admissible = true;
  double delta = 0.0;
  double sup_d2 = 0.0;
  double sup_d_boundary = 0.0;
};

ConditionValue admissibility_constant(const Scenario& psi, const DomainSpec& spec, std::uint64_t seed);

/// 4nδ(1+ξ) sup|D²ψ| + √2 sup_∂Ω |Dψ|.
double boundary_gradient_bound(int n, double delta, double xi, double sup_d2,
                               double sup_d_boundary);

struct BarrierParams {
  double k = 0.0;
  double nu = 0.0;
  double nu_k = 0.0;
  /// ν k = 0: the barrier reduces to a sign check.
  bool degenerate() const { return nu_k == 0.0; }
};

/// k = 1/δ, νk = 4nδ(1+ξ) sup|D²ψ|.
BarrierParams barrier_parameters(int n, double delta, double xi, double sup_d2);

/// min over the closure of ν log(1 + k d_P) ∓ (f^α − ψ^α), where P is the
/// supporting hyperplane at the boundary point p and ψ is the sampled
/// boundary data.
double barrier_check(const GraphField& field, const GraphField& psi, const Hyperplane& plane,
                     const BarrierParams& params, int alpha);

/// Per-state diagnostics. The CSV columns are t through f_min; the trailing
/// fields are carried for the run owner only.
struct DiagnosticsRecord {
  double t = 0.0;
  double area = 0.0;
  double max_lambda = 0.0;
  double max_pair_product = 0.0;
  double min_star_omega1 = 1.0;
  double residual_max = 0.0;
  double A2_max = 0.0;
  double boundary_max_Df = 0.0;
  double xi = 0.0;
  double energy_spent = 0.0;
  std::vector<double> f_max;
  std::vector<double> f_min;

  double energy_rate = 0.0;              // ∫|H|²√g at t
  double min_star_omega1_boundary = 1.0;  // over boundary-adjacent nodes

  bool operator==(const DiagnosticsRecord&) const = default;
};

/// Area uses the node quadrature Σ hⁿ √det g over interior nodes; the
/// energy rate uses the same weights. energy_spent and ξ accumulate from
/// `prev`.
DiagnosticsRecord monitor_step(const GraphField& field, const DiagnosticsRecord* prev,
                               int workers = 1);

struct MaxPrincipleReport {
  bool ok = true;
  double worst_margin = 0.0;  // max over α, t of the excess beyond ψ's range
  long violations = 0;
  std::string detail;
};

MaxPrincipleReport max_principle_check(const std::vector<DiagnosticsRecord>& series,
                                       const std::vector<double>& psi_max,
                                       const std::vector<double>& psi_min, double eps);

struct MinPrincipleReport {
  bool applicable = true;
  bool ok = true;
  double interior_min = 1.0;   // over interior nodes and elapsed time
  double parabolic_min = 1.0;  // initial slice and lateral probes
  std::string detail;
};

/// The interior minimum of *Ω₁ must not undercut the parabolic-boundary
/// minimum by more than tol. Not applicable once max |λ_iλ_j| ≥ 1.
MinPrincipleReport star_omega_min_principle(const std::vector<DiagnosticsRecord>& series,
                                            double tol = 1e-6);

struct GradientBoundReport {
  bool ok = true;
  double bound = 0.0;
  double max_boundary_Df = 0.0;
};

/// boundary_max_Df ≤ (1 + rel_tol)·bound(final ξ) at every record.
GradientBoundReport boundary_gradient_check(const std::vector<DiagnosticsRecord>& series,
                                            const ConditionValue& condition, int n,
                                            double rel_tol = 0.05);

}  // namespace mcf
