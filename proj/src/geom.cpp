#include "semspace/geom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "semspace/error.hpp"

namespace semspace::geom {

namespace {

constexpr double kOrthonormalTolerance = 1e-10;
constexpr double kContainmentTolerance = 1e-10;

void requireSameShape(const GrassmannPoint& u, const GrassmannPoint& w) {
  if (u.ambientDim() != w.ambientDim() || u.k() != w.k()) {
    throw Error(ErrorKind::DimensionMismatch, "Grassmann points live in different Grassmannians");
  }
}

}  // namespace

ProjectivePoint ProjectivePoint::fromVector(const Vector& v) {
  const double n = v.norm();
  if (v.size() == 0 || !(n > 0.0)) throw Error(ErrorKind::ZeroVector, "cannot normalize a zero vector");
  Vector rep = v / n;
  for (Index i = 0; i < rep.size(); ++i) {
    if (rep(i) != 0.0) {
      if (rep(i) < 0.0) rep = -rep;
      break;
    }
  }
  return ProjectivePoint(std::move(rep));
}

double projDistance(const ProjectivePoint& x, const ProjectivePoint& y) {
  if (x.ambientDim() != y.ambientDim()) {
    throw Error(ErrorKind::DimensionMismatch, "projective points of different dimension");
  }
  // Same value as arccos|<x,y>| on the clamped inner product, computed from
  // the chord lengths of the aligned representatives.
  const Vector& a = x.rep();
  const Vector b = a.dot(y.rep()) < 0.0 ? Vector(-y.rep()) : y.rep();
  return 2.0 * std::atan2((a - b).norm(), (a + b).norm());
}

GrassmannPoint GrassmannPoint::fromOrthonormal(Matrix basis) {
  if (basis.cols() < 1 || basis.cols() > basis.rows()) {
    throw Error(ErrorKind::InvalidArgument, "Grassmann basis must satisfy 1 <= k <= M");
  }
  if (orthonormalityDefect(basis) > kOrthonormalTolerance) {
    throw Error(ErrorKind::InvalidArgument, "Grassmann basis is not column-orthonormal");
  }
  return GrassmannPoint(std::move(basis));
}

GrassmannPoint grassmannPoint(const Matrix& a, SpanOrientation orientation, double relTol) {
  const Matrix columns = orientation == SpanOrientation::Rows ? Matrix(a.transpose()) : a;
  if (columns.cols() < 1 || columns.rows() < 1) {
    throw Error(ErrorKind::InvalidArgument, "no spanning vectors");
  }
  const Index rank = numericalRank(columns, relTol);
  if (rank < columns.cols()) {
    throw Error(ErrorKind::RankDeficient, "spanning vectors are linearly dependent", rank);
  }
  return GrassmannPoint::fromOrthonormal(orthonormalizeColumns(columns));
}

GrassmannPoint asGrassmann(const ProjectivePoint& x) {
  return GrassmannPoint::fromOrthonormal(Matrix(x.rep()));
}

ProjectivePoint asProjective(const GrassmannPoint& line) {
  if (line.k() != 1) throw Error(ErrorKind::DimensionMismatch, "not a 1-dimensional subspace");
  return ProjectivePoint::fromVector(line.basis().col(0));
}

Vector principalAngles(const GrassmannPoint& u, const GrassmannPoint& w) {
  requireSameShape(u, w);
  const Matrix c = u.basis().transpose() * w.basis();
  const Matrix s = w.basis() - u.basis() * c;
  const Vector cosines = Eigen::JacobiSVD<Matrix>(c).singularValues();   // descending
  const Vector sines = Eigen::JacobiSVD<Matrix>(s).singularValues();     // descending
  const Index k = u.k();
  Vector angles(k);
  for (Index i = 0; i < k; ++i) {
    // i-th largest cosine pairs with the i-th smallest sine.
    const double sn = i < sines.size() ? sines(sines.size() - 1 - i) : 0.0;
    angles(i) = std::atan2(std::max(sn, 0.0), std::max(cosines(i), 0.0));
  }
  std::sort(angles.data(), angles.data() + k);
  return angles;
}

double grassmannDistance(const GrassmannPoint& u, const GrassmannPoint& w) {
  return principalAngles(u, w).norm();
}

TangentVector logMap(const GrassmannPoint& base, const GrassmannPoint& target) {
  requireSameShape(base, target);
  const Matrix& y = base.basis();
  const Matrix& x = target.basis();

  // Procrustes-align the target basis with the base, then read the angles off
  // the component orthogonal to the base.
  Eigen::JacobiSVD<Matrix> align(x.transpose() * y, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& cosines = align.singularValues();
  if (cosines(cosines.size() - 1) <= kRankTolerance) {
    throw Error(ErrorKind::CutLocus, "a principal angle reaches pi/2; the logarithm is not unique");
  }
  const Matrix aligned = x * align.matrixU() * align.matrixV().transpose();
  const Matrix h = aligned - y * (y.transpose() * aligned);

  Eigen::JacobiSVD<Matrix> svd(h, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sines = svd.singularValues();  // descending, pairs with ascending cosines
  const Index k = base.k();
  Vector angles(k);
  for (Index i = 0; i < k; ++i) {
    angles(i) = std::atan2(std::max(sines(i), 0.0), std::max(cosines(k - 1 - i), 0.0));
  }
  Matrix delta = svd.matrixU() * angles.asDiagonal() * svd.matrixV().transpose();
  return TangentVector{base, std::move(delta)};
}

GrassmannPoint expMap(const GrassmannPoint& base, const Matrix& delta) {
  if (delta.rows() != base.ambientDim() || delta.cols() != base.k()) {
    throw Error(ErrorKind::DimensionMismatch, "tangent vector shape does not match its base");
  }
  if (delta.isZero(0.0)) return base;
  const double defect = (base.basis().transpose() * delta).cwiseAbs().maxCoeff();
  if (defect > kOrthonormalTolerance * (1.0 + delta.norm())) {
    throw Error(ErrorKind::InvalidArgument, "tangent vector is not horizontal");
  }
  Eigen::JacobiSVD<Matrix> svd(delta, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  const Matrix& v = svd.matrixV();
  const Matrix moved = base.basis() * v * s.array().cos().matrix().asDiagonal() * v.transpose() +
                       svd.matrixU() * s.array().sin().matrix().asDiagonal() * v.transpose();
  return GrassmannPoint::fromOrthonormal(orthonormalizeColumns(moved));
}

GrassmannPoint geodesic(const GrassmannPoint& u, const GrassmannPoint& w, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorKind::InvalidArgument, "geodesic parameter outside [0, 1]");
  if (t == 0.0) return u;
  const TangentVector tv = logMap(u, w);
  return expMap(u, t * tv.delta);
}

FlagPoint FlagPoint::fromChain(std::vector<GrassmannPoint> chain) {
  if (chain.empty()) throw Error(ErrorKind::InvalidArgument, "empty flag");
  const Index m = chain.front().ambientDim();
  for (std::size_t j = 0; j < chain.size(); ++j) {
    if (chain[j].ambientDim() != m || chain[j].k() != static_cast<Index>(j + 1)) {
      throw Error(ErrorKind::DimensionMismatch, "flag levels must have dimensions 1, 2, ...");
    }
    if (j > 0) {
      const Matrix& prev = chain[j - 1].basis();
      const Matrix& cur = chain[j].basis();
      const double residual = (prev - cur * (cur.transpose() * prev)).norm();
      if (residual >= kContainmentTolerance) {
        throw Error(ErrorKind::InvalidArgument, "flag level not contained in the next one",
                    static_cast<long long>(j + 1));
      }
    }
  }
  return FlagPoint(std::move(chain));
}

FlagPoint flagPoint(const Matrix& rows, double relTol) {
  if (rows.rows() < 1 || rows.cols() < 1) throw Error(ErrorKind::InvalidArgument, "empty flag matrix");
  for (Index k = 1; k <= rows.rows(); ++k) {
    if (numericalRank(rows.topRows(k), relTol) < k) {
      throw Error(ErrorKind::FlagDegenerate, "row depends on its predecessors", static_cast<long long>(k));
    }
  }
  const Matrix q = orthonormalizeColumns(rows.transpose());
  std::vector<GrassmannPoint> chain;
  chain.reserve(static_cast<std::size_t>(rows.rows()));
  for (Index k = 1; k <= rows.rows(); ++k) {
    chain.push_back(GrassmannPoint::fromOrthonormal(q.leftCols(k)));
  }
  return FlagPoint::fromChain(std::move(chain));
}

double flagDistance(const FlagPoint& f, const FlagPoint& g, std::span<const double> weights) {
  if (f.length() != g.length() || f.ambientDim() != g.ambientDim()) {
    throw Error(ErrorKind::DimensionMismatch, "flags have different signatures");
  }
  if (!weights.empty() && weights.size() != f.length()) {
    throw Error(ErrorKind::InvalidArgument, "one weight per flag level expected");
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < f.length(); ++j) {
    const double w = weights.empty() ? 1.0 : weights[j];
    if (w < 0.0) throw Error(ErrorKind::InvalidArgument, "negative flag level weight");
    const double d = grassmannDistance(f.chain()[j], g.chain()[j]);
    sum += w * d * d;
  }
  return std::sqrt(sum);
}

}  // namespace semspace::geom
