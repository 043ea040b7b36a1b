#pragma once

#include <Eigen/Dense>

namespace semspace {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Relative tolerance for every rank decision: a singular value counts as
/// nonzero when it exceeds kRankTolerance times the largest one.
inline constexpr double kRankTolerance = 1e-10;

Vector singularValues(const Matrix& a);

/// Number of singular values above relTol * (largest singular value).
/// The zero matrix (and the empty matrix) has rank 0.
Index numericalRank(const Matrix& a, double relTol = kRankTolerance);

/// Thin Q factor of a Householder QR of `columns`, with signs chosen so the
/// diagonal of R is nonnegative. The first j columns of the result span the
/// first j input columns whenever those are independent.
Matrix orthonormalizeColumns(const Matrix& columns);

/// Largest deviation of basisᵀ·basis from the identity, in max-abs norm.
double orthonormalityDefect(const Matrix& basis);

}  // namespace semspace
