// SPDX-License-Identifier: Apache-2.0
#include "mcflow/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "mcflow/error.hpp"

namespace mcf {

Metric induced_metric(const Small& df) {
  if (!all_finite(df)) throw Error(ErrorKind::numerical, "induced_metric: non-finite Df");
  const int n = static_cast<int>(df.cols());
  Metric out;
  out.g = Small::Identity(n, n) + df.transpose() * df;
  // g ≥ I, so the unpivoted Cholesky factor is well conditioned.
  double L[kMaxDim][kMaxDim] = {};
  double det = 1.0;
  for (int j = 0; j < n; ++j) {
    double d = out.g(j, j);
    for (int k = 0; k < j; ++k) d -= L[j][k] * L[j][k];
    L[j][j] = std::sqrt(d);
    det *= d;
    for (int i = j + 1; i < n; ++i) {
      double v = out.g(i, j);
      for (int k = 0; k < j; ++k) v -= L[i][k] * L[j][k];
      L[i][j] = v / L[j][j];
    }
  }
  // Linv lower triangular, g⁻¹ = Linvᵀ Linv.
  double Li[kMaxDim][kMaxDim] = {};
  for (int j = 0; j < n; ++j) {
    Li[j][j] = 1.0 / L[j][j];
    for (int i = j + 1; i < n; ++i) {
      double v = 0.0;
      for (int k = j; k < i; ++k) v -= L[i][k] * Li[k][j];
      Li[i][j] = v / L[i][i];
    }
  }
  out.g_inv.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double v = 0.0;
      for (int k = j; k < n; ++k) v += Li[k][i] * Li[k][j];
      out.g_inv(i, j) = out.g_inv(j, i) = v;
    }
  }
  out.det = det;
  return out;
}

Svd singular_values(const Small& df) { return singular_value_decomposition(df); }

double star_omega1(std::span<const double> lambda) {
  double prod = 1.0;
  for (double l : lambda) prod *= 1.0 + l * l;
  return 1.0 / std::sqrt(prod);
}

double star_omega1(const SmallVec& lambda) {
  return star_omega1(std::span<const double>(lambda.data(), static_cast<std::size_t>(lambda.size())));
}

PFormEigen p_form_eigen(std::span<const double> lambda, int n, int m) {
  PFormEigen out;
  out.tangent.assign(n, 1.0);
  out.normal.assign(m, -1.0);
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    const double l2 = lambda[i] * lambda[i];
    const double t = (1.0 - l2) / (1.0 + l2);
    out.tangent[i] = t;
    out.normal[i] = -t;
  }
  return out;
}

double area_density(const Small& df) { return std::sqrt(induced_metric(df).det); }

SmallVec system_residual(const Jet& jet, const Small& g_inv) {
  SmallVec r(jet.m);
  for (int a = 0; a < jet.m; ++a) r(a) = g_inv.cwiseProduct(jet.d2[a]).sum();
  return r;
}

SmallVec system_residual(const Jet& jet) {
  return system_residual(jet, induced_metric(jet.df).g_inv);
}

Ambient tangent_frame(const Svd& svd, int n, int m) {
  Ambient E = Ambient::Zero(n + m, n);
  const auto r = svd.values.size();
  for (int i = 0; i < n; ++i) {
    if (i < r) {
      const double l = svd.values(i);
      const double s = 1.0 / std::sqrt(1.0 + l * l);
      E.col(i).head(n) = s * svd.source.col(i);
      E.col(i).tail(m) = s * l * svd.target.col(i);
    } else {
      E.col(i).head(n) = svd.source.col(i);
    }
  }
  return E;
}

Ambient normal_frame(const Svd& svd, int n, int m) {
  Ambient N = Ambient::Zero(n + m, m);
  const auto r = svd.values.size();
  for (int a = 0; a < m; ++a) {
    if (a < r) {
      const double l = svd.values(a);
      const double s = 1.0 / std::sqrt(1.0 + l * l);
      N.col(a).head(n) = -s * l * svd.source.col(a);
      N.col(a).tail(m) = s * svd.target.col(a);
    } else {
      N.col(a).tail(m) = svd.target.col(a);
    }
  }
  return N;
}

SecondFundamentalForm second_fundamental_form(const Jet& jet, const Ambient& normal) {
  const int n = jet.n, m = jet.m;
  const Metric metric = induced_metric(jet.df);
  SecondFundamentalForm out;
  out.n = n;
  out.m = m;
  out.normal = normal;
  out.H_components.resize(m);
  for (int a = 0; a < m; ++a) {
    Small h = Small::Zero(n, n);
    for (int b = 0; b < m; ++b) h += normal(n + b, a) * jet.d2[b];
    out.h[a] = h;
    out.H_components(a) = metric.g_inv.cwiseProduct(h).sum();
    const Small gh = metric.g_inv * h;
    out.A2 += (gh * gh).trace();
  }
  out.H = normal * out.H_components;
  return out;
}

SecondFundamentalForm second_fundamental_form(const Jet& jet) {
  const Svd svd = singular_values(jet.df);
  return second_fundamental_form(jet, normal_frame(svd, jet.n, jet.m));
}

Hessian adapted_second_fundamental_form(const SecondFundamentalForm& sff, const Svd& svd) {
  const int n = sff.n;
  Small E(n, n);
  const auto r = svd.values.size();
  for (int i = 0; i < n; ++i) {
    const double l = i < r ? svd.values(i) : 0.0;
    E.col(i) = svd.source.col(i) / std::sqrt(1.0 + l * l);
  }
  Hessian out;
  for (int a = 0; a < sff.m; ++a) out[a] = E.transpose() * sff.h[a] * E;
  return out;
}

double stability_bracket(std::span<const double> lambda, const Hessian& h, int n, int m) {
  const int r = std::min<int>({static_cast<int>(lambda.size()), n, m});
  double squares = 0.0;
  for (int a = 0; a < m; ++a) squares += h[a].squaredNorm();
  double diagonal = 0.0, cross = 0.0;
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < r; ++i) {
      diagonal += lambda[i] * lambda[i] * h[i](i, k) * h[i](i, k);
      for (int j = i + 1; j < r; ++j) {
        cross += lambda[i] * lambda[j] * h[i](j, k) * h[j](i, k);
      }
    }
  }
  return squares + diagonal + 2.0 * cross;
}

double max_pair_product(std::span<const double> lambda) {
  double best = 0.0;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    for (std::size_t j = i + 1; j < lambda.size(); ++j) {
      best = std::max(best, std::abs(lambda[i] * lambda[j]));
    }
  }
  return best;
}

AmbientVec normal_projection(const AmbientVec& v, const Small& df) {
  const auto n = df.cols(), m = df.rows();
  Ambient T(n + m, n);
  T.topRows(n) = Small::Identity(n, n);
  T.bottomRows(m) = df;
  const Metric metric = induced_metric(df);
  const SmallVec coeffs = metric.g_inv * (T.transpose() * v);
  return v - T * coeffs;
}

GeomSample geometry_at(const Jet& jet) {
  GeomSample s;
  s.metric = induced_metric(jet.df);
  s.svd = singular_values(jet.df);
  s.star_omega1 = star_omega1(s.svd.values);
  const std::span<const double> lambda(s.svd.values.data(),
                                       static_cast<std::size_t>(s.svd.values.size()));
  s.p_form = p_form_eigen(lambda, jet.n, jet.m);
  s.sff = second_fundamental_form(jet, normal_frame(s.svd, jet.n, jet.m));
  s.residual = system_residual(jet, s.metric.g_inv);
  return s;
}

}  // namespace mcf
