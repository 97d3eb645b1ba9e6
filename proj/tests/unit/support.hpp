// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <random>

#include "mcflow/grid_domain.hpp"
#include "mcflow/small_linalg.hpp"

namespace test {

inline mcf::DomainSpec box2(double h, double half = 1.0) {
  mcf::DomainSpec s;
  s.kind = mcf::DomainKind::box;
  s.n = 2;
  s.lower = {-half, -half};
  s.upper = {half, half};
  s.h = h;
  return s;
}

inline mcf::DomainSpec ball(int n, double h, double radius = 1.0) {
  mcf::DomainSpec s;
  s.kind = mcf::DomainKind::ball;
  s.n = n;
  s.center.assign(n, 0.0);
  s.radius = radius;
  s.h = h;
  return s;
}

inline std::shared_ptr<const mcf::Lattice> lattice(const mcf::DomainSpec& s) {
  return std::make_shared<const mcf::Lattice>(mcf::Lattice::build(s));
}

inline mcf::Small random_matrix(std::mt19937_64& rng, int rows, int cols, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  mcf::Small M(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) M(i, j) = g(rng);
  return M;
}

}  // namespace test
