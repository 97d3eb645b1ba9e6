// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

namespace mcf {

/// Base dimension n and codimension m are both at most four.
inline constexpr int kMaxDim = 4;

/// m×n differentials, n×n metrics and Hessian slices. Never heap-allocates.
using Small = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                            Eigen::ColMajor, kMaxDim, kMaxDim>;
using SmallVec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor,
                               kMaxDim, 1>;

/// Vectors and frames in the ambient space R^{n+m}.
using Ambient = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                              Eigen::ColMajor, 2 * kMaxDim, 2 * kMaxDim>;
using AmbientVec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor,
                                 2 * kMaxDim, 1>;

/// Singular value decomposition of an m×n matrix M (m, n ≤ 4).
///
/// values holds the min(m,n) singular values in descending order.
/// source.col(i) = a_i (orthonormal basis of R^n), target.col(i) = a_{n+i}
/// (orthonormal basis of R^m), with M a_i = λ_i a_{n+i} for i < min(m,n).
/// Columns past min(m,n) are canonical completions. Every source column has
/// its first nonzero component positive; target columns paired with a
/// positive singular value follow from M a_i / λ_i, completions are
/// normalised the same way as source columns.
struct Svd {
  SmallVec values;
  Small source;
  Small target;
};

/// One-sided (Hestenes) Jacobi. Throws on non-finite input.
Svd singular_value_decomposition(const Small& M);

/// Largest singular value, |M| = sup_{|v|=1} |M v|.
double operator_norm(const Small& M);

bool all_finite(const Small& M);

}  // namespace mcf
