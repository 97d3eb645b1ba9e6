// SPDX-License-Identifier: Apache-2.0
#include "mcflow/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "mcflow/error.hpp"
#include "mcflow/geometry.hpp"
#include "mcflow/jet_calculus.hpp"
#include "mcflow/parallel.hpp"

namespace mcf {

std::vector<double> ResidualStudy::orders() const {
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
    out.push_back(std::log2(levels[k].residual / levels[k + 1].residual));
  }
  return out;
}

namespace {

double max_of(const std::vector<double>& v) {
  double best = 0.0;
  for (double x : v) best = std::max(best, x);
  return best;
}

}  // namespace

ResidualStudy lattice_residual_study(const Scenario& psi, const DomainSpec& coarse, int levels,
                                     int workers) {
  if (levels < 2) throw validation_error("residual study: need at least two levels");
  const Lattice base = Lattice::build(coarse);
  std::vector<Point> probes;
  for (std::size_t node : base.interior()) probes.push_back(base.coord(node));

  ResidualStudy study;
  study.probes = probes.size();
  for (int k = 0; k < levels; ++k) {
    DomainSpec spec = coarse;
    spec.h = coarse.h / std::pow(2.0, k);
    auto lattice = std::make_shared<const Lattice>(Lattice::build(spec));
    const GraphField field = GraphField::sample(lattice, psi);
    const Point origin = lattice->coord(0);
    const auto shape = lattice->shape();
    std::vector<std::size_t> nodes;
    for (const Point& x : probes) {
      std::size_t node = 0;
      for (int i = 0; i < spec.n; ++i) {
        const long idx = std::lround((x[i] - origin[i]) / spec.h);
        if (idx < 0 || idx >= shape[i]) throw Error(ErrorKind::numerical, "residual study: probe off the lattice");
        node = node * static_cast<std::size_t>(shape[i]) + static_cast<std::size_t>(idx);
      }
      if (lattice->interior_position(node) < 0) {
        throw Error(ErrorKind::numerical, "residual study: probe is not an interior node");
      }
      nodes.push_back(node);
    }
    std::vector<double> res(nodes.size());
    parallel_for(nodes.size(), workers, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) res[i] = system_residual(jet_at(field, nodes[i])).norm();
    });
    study.levels.push_back({spec.h, max_of(res)});
  }
  return study;
}

ResidualStudy cone_residual_study(double R, double r_min, double h, int levels, int workers) {
  if (levels < 2) throw validation_error("cone study: need at least two levels");
  if (!(h > 0) || !(r_min > 0) || !(r_min < 1)) throw validation_error("cone study: need h > 0 and 0 < r_min < 1");
  const auto cone = make_lawson_osserman_cone(R, r_min);
  const double reach = h * std::sqrt(2.0);
  const int K = static_cast<int>(std::floor(1.0 / h + 1e-9));
  std::vector<Point> probes;
  for (int a = -K; a <= K; ++a) {
    for (int b = -K; b <= K; ++b) {
      for (int c = -K; c <= K; ++c) {
        for (int d = -K; d <= K; ++d) {
          const Point x{a * h, b * h, c * h, d * h};
          const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
          if (r - reach >= r_min && r + reach <= 1.0) probes.push_back(x);
        }
      }
    }
  }
  if (probes.empty()) throw validation_error("cone study: no probe fits in the annulus at this h");
  const Sampler sample = [&](const Point& x, std::span<double> out) { cone->value(x, out); };
  ResidualStudy study;
  study.probes = probes.size();
  for (int k = 0; k < levels; ++k) {
    const double hk = h / std::pow(2.0, k);
    std::vector<double> res(probes.size());
    parallel_for(probes.size(), workers, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        res[i] = system_residual(central_jet(sample, probes[i], 4, 3, hk)).norm();
      }
    });
    study.levels.push_back({hk, max_of(res)});
  }
  return study;
}

}  // namespace mcf
