// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "mcflow/grid_domain.hpp"
#include "mcflow/scenarios.hpp"

namespace mcf {

/// One level of an h-refinement study.
struct ResidualLevel {
  double h = 0.0;
  double residual = 0.0;  // max |g^{ij}∂_i∂_j f| over the probe points
};

struct ResidualStudy {
  std::vector<ResidualLevel> levels;
  std::size_t probes = 0;

  /// log2(r_k / r_{k+1}) for each consecutive pair.
  std::vector<double> orders() const;
};

/// Discrete residual of sampled ψ on lattices with spacing h, h/2, ...
/// Probes are the interior nodes of the coarsest lattice, so every level
/// measures the same points.
ResidualStudy lattice_residual_study(const Scenario& psi, const DomainSpec& coarse, int levels,
                                     int workers = 1);

/// Central-difference residual of R·q(x)/|x| with steps h, h/2, ... at the
/// nodes of the spacing-h grid on [−1, 1]⁴ whose whole stencil stays in
/// r_min ≤ |x| ≤ 1.
ResidualStudy cone_residual_study(double R, double r_min, double h, int levels,
                                  int workers = 1);

}  // namespace mcf
