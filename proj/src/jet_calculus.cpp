// SPDX-License-Identifier: Apache-2.0
#include "mcflow/jet_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mcflow/error.hpp"

namespace mcf {

GraphField GraphField::zeros(std::shared_ptr<const Lattice> lattice, int m) {
  if (m < 1 || m > kMaxDim) throw validation_error("GraphField: m must be in 1..4");
  GraphField f;
  f.m = m;
  f.values.assign(lattice->ref_count() * static_cast<std::size_t>(m), 0.0);
  f.lattice = std::move(lattice);
  return f;
}

GraphField GraphField::sample(std::shared_ptr<const Lattice> lattice, const Scenario& psi) {
  psi.check_domain(lattice->spec());
  GraphField f = zeros(lattice, psi.m());
  for (std::size_t ref : lattice->closure_refs()) {
    psi.value(lattice->coord(ref), f.at(ref));
  }
  return f;
}

namespace {

bool usable(const Lattice& lat, long node) {
  return node >= 0 && lat.node_class(static_cast<std::size_t>(node)) != NodeClass::exterior;
}

StencilRow first_row(const Lattice& lat, std::size_t pos, int axis) {
  const Link& lo = lat.link(pos, axis, -1);
  const Link& hi = lat.link(pos, axis, +1);
  const double a = lo.theta * lat.h();
  const double b = hi.theta * lat.h();
  StencilRow row;
  row.add(lo.ref, -b / (a * (a + b)));
  row.add(lat.interior()[pos], (b - a) / (a * b));
  row.add(hi.ref, a / (b * (a + b)));
  return row;
}

StencilRow second_row(const Lattice& lat, std::size_t pos, int axis) {
  const Link& lo = lat.link(pos, axis, -1);
  const Link& hi = lat.link(pos, axis, +1);
  const double a = lo.theta * lat.h();
  const double b = hi.theta * lat.h();
  StencilRow row;
  row.add(lo.ref, 2.0 / (a * (a + b)));
  row.add(lat.interior()[pos], -2.0 / (a * b));
  row.add(hi.ref, 2.0 / (b * (a + b)));
  return row;
}

MixedRule mixed_row(const Lattice& lat, std::size_t pos, int i, int j, StencilRow& row) {
  const std::size_t node = lat.interior()[pos];
  const double h = lat.h();

  const long pp = lat.offset2(node, i, 1, j, 1);
  const long pm = lat.offset2(node, i, 1, j, -1);
  const long mp = lat.offset2(node, i, -1, j, 1);
  const long mm = lat.offset2(node, i, -1, j, -1);
  if (usable(lat, pp) && usable(lat, pm) && usable(lat, mp) && usable(lat, mm)) {
    const double w = 1.0 / (4.0 * h * h);
    row.add(static_cast<std::size_t>(pp), w);
    row.add(static_cast<std::size_t>(pm), -w);
    row.add(static_cast<std::size_t>(mp), -w);
    row.add(static_cast<std::size_t>(mm), w);
    return MixedRule::cross;
  }

  for (int si : {1, -1}) {
    for (int sj : {1, -1}) {
      const long a = lat.offset(node, i, si);
      const long b = lat.offset(node, j, sj);
      const long c = lat.offset2(node, i, si, j, sj);
      if (usable(lat, a) && usable(lat, b) && usable(lat, c)) {
        const double w = si * sj / (h * h);
        row.add(static_cast<std::size_t>(c), w);
        row.add(static_cast<std::size_t>(a), -w);
        row.add(static_cast<std::size_t>(b), -w);
        row.add(node, w);
        return MixedRule::quadrant;
      }
    }
  }

  const std::array<std::array<int, 2>, 2> orders{{{i, j}, {j, i}}};
  for (const auto& [step_axis, diff_axis] : orders) {
    for (int s : {1, -1}) {
      const long y = lat.offset(node, step_axis, s);
      if (y < 0) continue;
      const long ypos = lat.interior_position(static_cast<std::size_t>(y));
      if (ypos < 0) continue;
      const StencilRow at_y = first_row(lat, static_cast<std::size_t>(ypos), diff_axis);
      const StencilRow at_x = first_row(lat, pos, diff_axis);
      const double scale = 1.0 / (s * h);
      for (int k = 0; k < at_y.size; ++k) row.add(at_y.terms[k].ref, scale * at_y.terms[k].weight);
      for (int k = 0; k < at_x.size; ++k) row.add(at_x.terms[k].ref, -scale * at_x.terms[k].weight);
      return MixedRule::derivative_difference;
    }
  }
  return MixedRule::missing;
}

}  // namespace

NodeStencil node_stencil(const Lattice& lat, std::size_t pos) {
  NodeStencil st;
  st.n = lat.n();
  for (int i = 0; i < st.n; ++i) {
    st.first[i] = first_row(lat, pos, i);
    st.second[i][i] = second_row(lat, pos, i);
    st.mixed_rule[i][i] = MixedRule::cross;
  }
  for (int i = 0; i < st.n; ++i) {
    for (int j = i + 1; j < st.n; ++j) {
      const MixedRule rule = mixed_row(lat, pos, i, j, st.second[i][j]);
      st.mixed_rule[i][j] = st.mixed_rule[j][i] = rule;
      if (rule != MixedRule::cross) st.fallback = true;
    }
  }
  return st;
}

Jet jet_from_stencil(const GraphField& field, const NodeStencil& st) {
  Jet jet;
  jet.m = field.m;
  jet.n = st.n;
  jet.df.resize(jet.m, jet.n);
  for (int a = 0; a < jet.m; ++a) {
    jet.d2[a].resize(jet.n, jet.n);
    for (int i = 0; i < jet.n; ++i) {
      jet.df(a, i) = st.first[i].apply(field, a);
      for (int j = i; j < jet.n; ++j) {
        const double v = st.second[i][j].apply(field, a);
        jet.d2[a](i, j) = v;
        jet.d2[a](j, i) = v;
      }
    }
  }
  return jet;
}

Jet jet_at(const GraphField& field, std::size_t node) {
  const Lattice& lat = *field.lattice;
  if (node >= lat.node_count() || lat.interior_position(node) < 0) {
    throw validation_error("jet_at: node is not interior");
  }
  return jet_from_stencil(field, node_stencil(lat, static_cast<std::size_t>(lat.interior_position(node))));
}

Jet central_jet(const Sampler& sample, const Point& x, int n, int m, double h) {
  Jet jet;
  jet.m = m;
  jet.n = n;
  jet.df.resize(m, n);
  for (int a = 0; a < m; ++a) jet.d2[a].resize(n, n);
  std::array<double, kMaxDim> f0{}, fp{}, fm{}, fpp{}, fpm{}, fmp{}, fmm{};
  sample(x, std::span<double>(f0.data(), m));
  auto shifted = [&](int i, double si, int j, double sj, std::array<double, kMaxDim>& out) {
    Point y = x;
    y[i] += si * h;
    if (j >= 0) y[j] += sj * h;
    sample(y, std::span<double>(out.data(), m));
  };
  for (int i = 0; i < n; ++i) {
    shifted(i, 1, -1, 0, fp);
    shifted(i, -1, -1, 0, fm);
    for (int a = 0; a < m; ++a) {
      jet.df(a, i) = (fp[a] - fm[a]) / (2.0 * h);
      jet.d2[a](i, i) = (fp[a] - 2.0 * f0[a] + fm[a]) / (h * h);
    }
    for (int j = i + 1; j < n; ++j) {
      shifted(i, 1, j, 1, fpp);
      shifted(i, 1, j, -1, fpm);
      shifted(i, -1, j, 1, fmp);
      shifted(i, -1, j, -1, fmm);
      for (int a = 0; a < m; ++a) {
        const double v = (fpp[a] - fpm[a] - fmp[a] + fmm[a]) / (4.0 * h * h);
        jet.d2[a](i, j) = v;
        jet.d2[a](j, i) = v;
      }
    }
  }
  return jet;
}

double sup_norm_D(const Scenario& psi, const Lattice& lattice, Region region) {
  const auto refs = region == Region::closure ? lattice.closure_refs() : lattice.boundary_refs();
  if (refs.empty()) throw validation_error("sup_norm_D: empty region");
  double best = 0.0;
  for (std::size_t ref : refs) {
    best = std::max(best, operator_norm(psi.gradient(lattice.coord(ref))));
  }
  return best;
}

namespace {

double direction_value(const Hessian& H, int m, const SmallVec& v) {
  double s = 0.0;
  for (int a = 0; a < m; ++a) {
    const double c = v.dot(H[a] * v);
    s += c * c;
  }
  return std::sqrt(s);
}

// Projected gradient ascent of |D²(v,v)|² on the unit sphere.
double refine_direction(const Hessian& H, int m, SmallVec v) {
  double value = direction_value(H, m, v);
  double step = 0.5;
  for (int iter = 0; iter < 2000 && step > 1e-14; ++iter) {
    SmallVec grad = SmallVec::Zero(v.size());
    for (int a = 0; a < m; ++a) grad += 4.0 * v.dot(H[a] * v) * (H[a] * v);
    grad -= grad.dot(v) * v;
    const double gnorm = grad.norm();
    if (gnorm == 0.0) break;
    SmallVec trial = (v + (step / gnorm) * grad).normalized();
    const double trial_value = direction_value(H, m, trial);
    if (trial_value > value) {
      const bool converged = trial_value - value <= 1e-15 * trial_value;
      v = trial;
      value = trial_value;
      step = std::min(1.0, step * 1.5);
      if (converged) break;
    } else {
      step *= 0.5;
    }
  }
  return value;
}

}  // namespace

double sup_direction_norm(const Hessian& H, int m, int n, std::uint64_t seed) {
  constexpr int kDirections = 10000;
  constexpr int kSeeds = 8;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<std::pair<double, SmallVec>> best;
  auto consider = [&](const SmallVec& v) {
    const double value = direction_value(H, m, v);
    if (best.size() < kSeeds) {
      best.emplace_back(value, v);
    } else {
      auto worst = std::min_element(best.begin(), best.end(),
                                    [](const auto& a, const auto& b) { return a.first < b.first; });
      if (value > worst->first) *worst = {value, v};
    }
  };
  for (int i = 0; i < n; ++i) consider(SmallVec::Unit(n, i));
  for (int k = 0; k < kDirections; ++k) {
    SmallVec v(n);
    for (int i = 0; i < n; ++i) v(i) = gauss(rng);
    const double norm = v.norm();
    if (norm > 0) consider(v / norm);
  }
  double result = 0.0;
  for (const auto& [value, v] : best) {
    result = std::max(result, std::max(value, refine_direction(H, m, v)));
  }
  return result;
}

double sup_norm_D2(const Scenario& psi, const Lattice& lattice, std::uint64_t seed) {
  const auto refs = lattice.closure_refs();
  if (refs.empty()) throw validation_error("sup_norm_D2: empty region");
  if (psi.constant_hessian()) {
    return sup_direction_norm(psi.hessian(lattice.coord(refs.front())), psi.m(), psi.n(), seed);
  }
  double best = 0.0;
  for (std::size_t ref : refs) {
    best = std::max(best, sup_direction_norm(psi.hessian(lattice.coord(ref)), psi.m(), psi.n(), seed));
  }
  return best;
}

}  // namespace mcf
