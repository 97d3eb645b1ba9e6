// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "mcflow/jet_calculus.hpp"
#include "mcflow/small_linalg.hpp"

namespace mcf {

/// Induced metric g = I + DfᵀDf of the graph of f.
struct Metric {
  Small g;
  Small g_inv;
  double det = 1.0;
};

Metric induced_metric(const Small& df);

/// Singular values of Df with the bases used to build adapted frames.
Svd singular_values(const Small& df);

/// *Ω₁ = 1/√∏(1+λ_i²).
double star_omega1(std::span<const double> lambda);
double star_omega1(const SmallVec& lambda);

/// Eigenvalues of the form P(X,Y) = <π₁X,π₁Y> − <π₂X,π₂Y> restricted to the
/// tangent (n values) and normal (m values) spaces of the graph. Matched
/// slots get ±(1−λ²)/(1+λ²); unmatched tangent slots +1, normal slots −1.
struct PFormEigen {
  std::vector<double> tangent;
  std::vector<double> normal;
};

PFormEigen p_form_eigen(std::span<const double> lambda, int n, int m);

/// √det(I + DfᵀDf).
double area_density(const Small& df);

/// g^{ij} ∂_i∂_j f^α, one entry per component.
SmallVec system_residual(const Jet& jet);
SmallVec system_residual(const Jet& jet, const Small& g_inv);

/// Orthonormal frames of R^{n+m} adapted to the SVD of Df:
///   tangent e_i   = (a_i + λ_i a_{n+i}) / √(1+λ_i²)
///   normal  e_{n+i} = (a_{n+i} − λ_i a_i) / √(1+λ_i²)
/// padded with (a_i, 0) or (0, a_{n+i}) where there is no partner.
Ambient tangent_frame(const Svd& svd, int n, int m);  // (n+m)×n
Ambient normal_frame(const Svd& svd, int n, int m);   // (n+m)×m

/// Second fundamental form in the coordinate basis ∂_i F and a given
/// orthonormal normal frame: h_{αik} = (0, ∂_i∂_k f)·e_α.
struct SecondFundamentalForm {
  int n = 0;
  int m = 0;
  Hessian h;          // h[α](i, k)
  SmallVec H_components;  // H_α = g^{ik} h_{αik}
  AmbientVec H;       // Σ_α H_α e_α in R^{n+m}
  double A2 = 0.0;    // g^{ik} g^{jl} h_{αij} h_{αkl}
  Ambient normal;     // the frame that was used
};

SecondFundamentalForm second_fundamental_form(const Jet& jet);
SecondFundamentalForm second_fundamental_form(const Jet& jet, const Ambient& normal);

/// h re-expressed in the orthonormal SVD tangent frame e_i; in that frame
/// |A|² is the plain sum of squares.
Hessian adapted_second_fundamental_form(const SecondFundamentalForm& sff, const Svd& svd);

/// Σ h²_{αlk} + Σ λ_i² h²_{n+i,ik} + 2 Σ_{i<j} λ_iλ_j h_{n+i,jk} h_{n+j,ik},
/// with h given in the adapted frames (normal index α ↔ n+α).
double stability_bracket(std::span<const double> lambda, const Hessian& h_adapted, int n, int m);

/// max_{i≠j} |λ_i λ_j|.
double max_pair_product(std::span<const double> lambda);

/// v minus its orthogonal projection onto span{∂_i F} (v ∈ R^{n+m}).
AmbientVec normal_projection(const AmbientVec& v, const Small& df);

/// Everything above at one node.
struct GeomSample {
  Metric metric;
  Svd svd;
  double star_omega1 = 1.0;
  PFormEigen p_form;
  SecondFundamentalForm sff;
  SmallVec residual;
};

GeomSample geometry_at(const Jet& jet);

}  // namespace mcf
