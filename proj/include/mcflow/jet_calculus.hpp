// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "mcflow/grid_domain.hpp"
#include "mcflow/scenarios.hpp"
#include "mcflow/small_linalg.hpp"

namespace mcf {

/// The map f: Ω → R^m at one time, one m-vector per lattice reference.
/// Exterior nodes hold zeros and are never read.
struct GraphField {
  std::shared_ptr<const Lattice> lattice;
  int m = 1;
  double t = 0.0;
  std::vector<double> values;

  static GraphField zeros(std::shared_ptr<const Lattice> lattice, int m);
  /// Samples ψ at every non-exterior node and boundary intersection.
  static GraphField sample(std::shared_ptr<const Lattice> lattice, const Scenario& psi);

  std::span<const double> at(std::size_t ref) const {
    return {values.data() + ref * m, static_cast<std::size_t>(m)};
  }
  std::span<double> at(std::size_t ref) {
    return {values.data() + ref * m, static_cast<std::size_t>(m)};
  }
  double value(std::size_t ref, int alpha) const { return values[ref * m + alpha]; }
};

/// Df (m×n) and D²f (one symmetric n×n slice per component).
struct Jet {
  int m = 0;
  int n = 0;
  Small df;
  Hessian d2;
};

struct StencilTerm {
  std::size_t ref;
  double weight;
};

/// Weighted sum over at most six references.
struct StencilRow {
  std::array<StencilTerm, 6> terms{};
  int size = 0;

  void add(std::size_t ref, double weight) {
    if (weight != 0.0) terms[size++] = StencilTerm{ref, weight};
  }
  double apply(const GraphField& f, int alpha) const {
    double s = 0.0;
    for (int k = 0; k < size; ++k) s += terms[k].weight * f.value(terms[k].ref, alpha);
    return s;
  }
};

enum class MixedRule : std::uint8_t {
  cross,                  // four diagonal nodes, second order
  quadrant,               // one-sided corner, first order
  derivative_difference,  // difference of neighbouring ∂_j stencils, first order
  missing,                // nothing available inside the closure; row is zero
};

/// Finite-difference rows at one interior node. first[i] approximates ∂_i,
/// second[i][j] (i ≤ j) approximates ∂_i∂_j. Axis rows use central or
/// Shortley–Weller three-point weights; mixed rows use `mixed_rule`.
struct NodeStencil {
  int n = 0;
  std::array<StencilRow, kMaxDim> first;
  std::array<std::array<StencilRow, kMaxDim>, kMaxDim> second;
  std::array<std::array<MixedRule, kMaxDim>, kMaxDim> mixed_rule{};
  /// Some mixed row is not the second-order cross stencil.
  bool fallback = false;
};

NodeStencil node_stencil(const Lattice& lattice, std::size_t interior_pos);

Jet jet_from_stencil(const GraphField& field, const NodeStencil& stencil);

/// Throws unless `node` is an interior lattice node.
Jet jet_at(const GraphField& field, std::size_t node);

/// Central-difference jet of an analytic map sampled at x ± h e_i ± h e_j.
using Sampler = std::function<void(const Point&, std::span<double>)>;
Jet central_jet(const Sampler& sample, const Point& x, int n, int m, double h);

enum class Region { closure, boundary };

/// max over the lattice points of the region of |Dψ(x)|, using ψ's
/// analytic gradient.
double sup_norm_D(const Scenario& psi, const Lattice& lattice, Region region);

/// sup_{|v|=1} |D²ψ(v, v)| for a fixed Hessian: at least 10⁴ seeded
/// directions, then projected ascent to relative tolerance 1e-6 or better.
double sup_direction_norm(const Hessian& hessian, int m, int n, std::uint64_t seed);

/// max over the closure of sup_direction_norm(D²ψ(x)).
double sup_norm_D2(const Scenario& psi, const Lattice& lattice, std::uint64_t seed);

}  // namespace mcf
