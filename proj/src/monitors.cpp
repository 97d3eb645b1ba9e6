// SPDX-License-Identifier: Apache-2.0
#include "mcflow/monitors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mcflow/error.hpp"
#include "mcflow/geometry.hpp"
#include "mcflow/parallel.hpp"

namespace mcf {

ConditionValue admissibility_constant(const Scenario& psi, const DomainSpec& spec, std::uint64_t seed) {
  spec.validate();
  if (psi.n() != spec.n) throw validation_error("admissibility_constant: scenario and domain dimensions differ");
  psi.check_domain(spec);
  const Lattice lattice = Lattice::build(spec);
  ConditionValue out;
  out.delta = diameter(spec);
  out.sup_d2 = sup_norm_D2(psi, lattice, seed);
  out.sup_d_boundary = sup_norm_D(psi, lattice, Region::boundary);
  out.C = 8.0 * spec.n * out.delta * out.sup_d2 + std::sqrt(2.0) * out.sup_d_boundary;
  out.admissible = out.C < 1.0;
  return out;
}

double boundary_gradient_bound(int n, double delta, double xi, double sup_d2,
                               double sup_d_boundary) {
  return 4.0 * n * delta * (1.0 + xi) * sup_d2 + std::sqrt(2.0) * sup_d_boundary;
}

BarrierParams barrier_parameters(int n, double delta, double xi, double sup_d2) {
  if (!(delta > 0)) throw validation_error("barrier_parameters: δ must be positive");
  BarrierParams p;
  p.k = 1.0 / delta;
  p.nu_k = 4.0 * n * delta * (1.0 + xi) * sup_d2;
  p.nu = p.nu_k * delta;
  return p;
}

double barrier_check(const GraphField& field, const GraphField& psi, const Hyperplane& plane,
                     const BarrierParams& params, int alpha) {
  if (psi.lattice->spec() != field.lattice->spec() || psi.m != field.m) {
    throw validation_error("barrier_check: ψ and f live on different lattices");
  }
  if (alpha < 0 || alpha >= field.m) throw validation_error("barrier_check: component out of range");
  const Lattice& lat = *field.lattice;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t ref : lat.closure_refs()) {
    const double d = std::max(0.0, plane.distance(lat.coord(ref)));
    const double base = params.nu * std::log1p(params.k * d);
    const double diff = field.value(ref, alpha) - psi.value(ref, alpha);
    best = std::min({best, base - diff, base + diff});
  }
  return best;
}

namespace {

struct NodeSample {
  double area = 0.0;
  double energy = 0.0;
  double lambda = 0.0;
  double pair = 0.0;
  double star = 1.0;
  double residual = 0.0;
  double A2 = 0.0;
};

// Neumaier-compensated sum in index order.
double compensated_sum(const std::vector<NodeSample>& samples, double NodeSample::*field) {
  double sum = 0.0, carry = 0.0;
  for (const NodeSample& s : samples) {
    const double v = s.*field;
    const double t = sum + v;
    carry += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return sum + carry;
}

}  // namespace

DiagnosticsRecord monitor_step(const GraphField& field, const DiagnosticsRecord* prev,
                               int workers) {
  const Lattice& lat = *field.lattice;
  const int n = lat.n(), m = field.m;
  const std::size_t count = lat.interior().size();
  std::vector<NodeSample> samples(count);
  parallel_for(count, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t pos = begin; pos < end; ++pos) {
      const Jet jet = jet_from_stencil(field, node_stencil(lat, pos));
      const GeomSample g = geometry_at(jet);
      const std::span<const double> lambda(g.svd.values.data(),
                                           static_cast<std::size_t>(g.svd.values.size()));
      NodeSample& s = samples[pos];
      const double sqrt_g = std::sqrt(g.metric.det);
      s.area = sqrt_g;
      s.energy = g.sff.H_components.squaredNorm() * sqrt_g;
      s.lambda = lambda.empty() ? 0.0 : lambda[0];
      s.pair = max_pair_product(lambda);
      s.star = g.star_omega1;
      s.residual = g.residual.norm();
      s.A2 = g.sff.A2;
    }
  });

  const double weight = std::pow(lat.h(), n);
  DiagnosticsRecord r;
  r.t = field.t;
  r.area = weight * compensated_sum(samples, &NodeSample::area);
  r.energy_rate = weight * compensated_sum(samples, &NodeSample::energy);
  r.min_star_omega1 = std::numeric_limits<double>::infinity();
  r.min_star_omega1_boundary = std::numeric_limits<double>::infinity();
  for (std::size_t pos = 0; pos < count; ++pos) {
    const NodeSample& s = samples[pos];
    r.max_lambda = std::max(r.max_lambda, s.lambda);
    r.max_pair_product = std::max(r.max_pair_product, s.pair);
    r.min_star_omega1 = std::min(r.min_star_omega1, s.star);
    r.residual_max = std::max(r.residual_max, s.residual);
    r.A2_max = std::max(r.A2_max, s.A2);
    if (lat.boundary_adjacent(pos)) {
      r.boundary_max_Df = std::max(r.boundary_max_Df, s.lambda);
      r.min_star_omega1_boundary = std::min(r.min_star_omega1_boundary, s.star);
    }
  }
  r.f_max.assign(m, -std::numeric_limits<double>::infinity());
  r.f_min.assign(m, std::numeric_limits<double>::infinity());
  for (std::size_t ref : lat.closure_refs()) {
    for (int a = 0; a < m; ++a) {
      r.f_max[a] = std::max(r.f_max[a], field.value(ref, a));
      r.f_min[a] = std::min(r.f_min[a], field.value(ref, a));
    }
  }
  r.xi = r.max_lambda * r.max_lambda;
  if (prev) {
    r.xi = std::max(r.xi, prev->xi);
    r.energy_spent = prev->energy_spent + 0.5 * (r.t - prev->t) * (r.energy_rate + prev->energy_rate);
  }
  return r;
}

MaxPrincipleReport max_principle_check(const std::vector<DiagnosticsRecord>& series,
                                       const std::vector<double>& psi_max,
                                       const std::vector<double>& psi_min, double eps) {
  if (series.empty()) throw validation_error("max_principle_check: empty series");
  MaxPrincipleReport out;
  out.worst_margin = -std::numeric_limits<double>::infinity();
  for (const DiagnosticsRecord& r : series) {
    if (r.f_max.size() != psi_max.size() || r.f_min.size() != psi_min.size()) {
      throw validation_error("max_principle_check: component count mismatch");
    }
    for (std::size_t a = 0; a < psi_max.size(); ++a) {
      const double excess = std::max(r.f_max[a] - psi_max[a], psi_min[a] - r.f_min[a]);
      out.worst_margin = std::max(out.worst_margin, excess);
      if (excess > eps) {
        if (out.violations == 0) {
          std::ostringstream msg;
          msg << "component " << a + 1 << " leaves the range of ψ by " << excess << " at t = " << r.t;
          out.detail = msg.str();
        }
        ++out.violations;
      }
    }
  }
  out.ok = out.violations == 0;
  return out;
}

MinPrincipleReport star_omega_min_principle(const std::vector<DiagnosticsRecord>& series,
                                            double tol) {
  if (series.empty()) throw validation_error("star_omega_min_principle: empty series");
  MinPrincipleReport out;
  for (const DiagnosticsRecord& r : series) {
    if (r.max_pair_product >= 1.0) {
      out.applicable = false;
      out.detail = "not applicable: max |λ_iλ_j| reached 1";
      return out;
    }
  }
  out.interior_min = std::numeric_limits<double>::infinity();
  out.parabolic_min = series.front().min_star_omega1;
  for (const DiagnosticsRecord& r : series) {
    out.interior_min = std::min(out.interior_min, r.min_star_omega1);
    out.parabolic_min = std::min(out.parabolic_min, r.min_star_omega1_boundary);
  }
  out.ok = out.interior_min >= out.parabolic_min - tol;
  if (!out.ok) {
    std::ostringstream msg;
    msg << "interior minimum " << out.interior_min << " below parabolic-boundary minimum "
        << out.parabolic_min;
    out.detail = msg.str();
  }
  return out;
}

GradientBoundReport boundary_gradient_check(const std::vector<DiagnosticsRecord>& series,
                                            const ConditionValue& condition, int n,
                                            double rel_tol) {
  if (series.empty()) throw validation_error("boundary_gradient_check: empty series");
  GradientBoundReport out;
  out.bound = boundary_gradient_bound(n, condition.delta, series.back().xi, condition.sup_d2,
                                      condition.sup_d_boundary);
  for (const DiagnosticsRecord& r : series) {
    out.max_boundary_Df = std::max(out.max_boundary_Df, r.boundary_max_Df);
  }
  out.ok = out.max_boundary_Df <= (1.0 + rel_tol) * out.bound;
  return out;
}

}  // namespace mcf
