// SPDX-License-Identifier: Apache-2.0
#include "mcflow/small_linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "mcflow/error.hpp"

namespace mcf {
namespace {

constexpr int kMaxSweeps = 64;
// Columns count as orthogonal below this cosine.
constexpr double kOrthTol = 4.0 * std::numeric_limits<double>::epsilon();

template <class Column>
void normalize_sign(Column&& v) {
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (std::abs(v(k)) > 1e-14) {
      if (v(k) < 0) v = -v;
      return;
    }
  }
}

// Extend the first `filled` orthonormal columns of `basis` to a full
// orthonormal basis using canonical vectors, largest residual first.
void complete_basis(Small& basis, int filled) {
  const int dim = static_cast<int>(basis.rows());
  for (int col = filled; col < dim; ++col) {
    SmallVec best;
    double best_norm = -1.0;
    for (int k = 0; k < dim; ++k) {
      SmallVec candidate = SmallVec::Unit(dim, k);
      for (int pass = 0; pass < 2; ++pass) {
        for (int j = 0; j < col; ++j) {
          candidate -= basis.col(j).dot(candidate) * basis.col(j);
        }
      }
      const double norm = candidate.norm();
      if (norm > best_norm + 1e-12) {
        best_norm = norm;
        best = candidate;
      }
    }
    best /= best_norm;
    normalize_sign(best);
    basis.col(col) = best;
  }
}

}  // namespace

bool all_finite(const Small& M) {
  for (Eigen::Index j = 0; j < M.cols(); ++j) {
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
      if (!std::isfinite(M(i, j))) return false;
    }
  }
  return true;
}

Svd singular_value_decomposition(const Small& M) {
  if (!all_finite(M)) {
    throw Error(ErrorKind::numerical, "singular_value_decomposition: non-finite entry");
  }
  const int rows = static_cast<int>(M.rows());
  const int cols = static_cast<int>(M.cols());
  const int rank_slots = std::min(rows, cols);

  Small W = M;
  Small V = Small::Identity(cols, cols);
  // Columns below this squared norm are numerically zero; rotating them
  // only shuffles round-off.
  const double negligible = kOrthTol * kOrthTol * M.squaredNorm();
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < cols - 1; ++p) {
      for (int q = p + 1; q < cols; ++q) {
        const double alpha = W.col(p).squaredNorm();
        const double beta = W.col(q).squaredNorm();
        const double gamma = W.col(p).dot(W.col(q));
        if (gamma == 0.0 || alpha <= negligible || beta <= negligible ||
            std::abs(gamma) <= kOrthTol * std::sqrt(alpha * beta)) {
          continue;
        }
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (int k = 0; k < rows; ++k) {
          const double wp = W(k, p), wq = W(k, q);
          W(k, p) = c * wp - s * wq;
          W(k, q) = s * wp + c * wq;
        }
        for (int k = 0; k < cols; ++k) {
          const double vp = V(k, p), vq = V(k, q);
          V(k, p) = c * vp - s * vq;
          V(k, q) = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }

  std::array<double, kMaxDim> sigma{};
  std::array<int, kMaxDim> order{};
  for (int j = 0; j < cols; ++j) sigma[j] = W.col(j).norm();
  std::iota(order.begin(), order.begin() + cols, 0);
  std::stable_sort(order.begin(), order.begin() + cols,
                   [&](int a, int b) { return sigma[a] > sigma[b]; });

  Svd out;
  out.values.resize(rank_slots);
  out.source.resize(cols, cols);
  out.target.resize(rows, rows);
  const double scale = sigma[order[0]];
  const double cutoff = scale > 0 ? 1e-14 * scale : 0.0;

  int matched = 0;
  for (int i = 0; i < cols; ++i) {
    auto a = out.source.col(i);
    a = V.col(order[i]);
    SmallVec w = W.col(order[i]);
    for (Eigen::Index k = 0; k < a.size(); ++k) {
      if (std::abs(a(k)) > 1e-14) {
        if (a(k) < 0) {
          a = -a;
          w = -w;
        }
        break;
      }
    }
    if (i < rank_slots) {
      out.values(i) = sigma[order[i]];
      if (sigma[order[i]] > cutoff && matched == i) {
        out.target.col(i) = w / sigma[order[i]];
        ++matched;
      }
    }
  }
  // Re-orthonormalise the matched target columns; Jacobi leaves them
  // orthogonal only to working precision relative to the largest value.
  for (int i = 0; i < matched; ++i) {
    auto u = out.target.col(i);
    for (int j = 0; j < i; ++j) u -= out.target.col(j).dot(u) * out.target.col(j);
    u.normalize();
  }
  complete_basis(out.target, matched);
  return out;
}

double operator_norm(const Small& M) {
  if (M.size() == 0) return 0.0;
  return singular_value_decomposition(M).values(0);
}

}  // namespace mcf
