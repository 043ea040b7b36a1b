#include "semspace/linalg.hpp"

namespace semspace {

Vector singularValues(const Matrix& a) {
  if (a.size() == 0) return Vector();
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues();
}

Index numericalRank(const Matrix& a, double relTol) {
  const Vector s = singularValues(a);
  if (s.size() == 0 || s(0) <= 0.0) return 0;
  const double cutoff = relTol * s(0);
  Index rank = 0;
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff) ++rank;
  }
  return rank;
}

Matrix orthonormalizeColumns(const Matrix& columns) {
  const Index rows = columns.rows();
  const Index cols = columns.cols();
  Eigen::HouseholderQR<Matrix> qr(columns);
  Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
  const Matrix& r = qr.matrixQR();
  for (Index j = 0; j < cols; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

double orthonormalityDefect(const Matrix& basis) {
  const Index k = basis.cols();
  return (basis.transpose() * basis - Matrix::Identity(k, k)).cwiseAbs().maxCoeff();
}

}  // namespace semspace
