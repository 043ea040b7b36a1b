#pragma once

#include <span>
#include <vector>

#include "semspace/linalg.hpp"

namespace semspace::geom {

/// A line in R^M, stored as a unit vector whose first nonzero coordinate is
/// positive so that equal lines have bit-identical representatives.
class ProjectivePoint {
 public:
  /// Throws ZeroVector for v = 0.
  static ProjectivePoint fromVector(const Vector& v);

  const Vector& rep() const { return rep_; }
  Index ambientDim() const { return rep_.size(); }

 private:
  explicit ProjectivePoint(Vector rep) : rep_(std::move(rep)) {}
  Vector rep_;
};

inline ProjectivePoint projectivePoint(const Vector& v) { return ProjectivePoint::fromVector(v); }

/// Fubini-Study distance arccos|<x, y>| in [0, pi/2].
double projDistance(const ProjectivePoint& x, const ProjectivePoint& y);

/// A k-plane in R^M, represented by an M x k column-orthonormal basis.
class GrassmannPoint {
 public:
  /// Accepts a basis that is already column-orthonormal (checked to 1e-10).
  static GrassmannPoint fromOrthonormal(Matrix basis);

  const Matrix& basis() const { return basis_; }
  Index k() const { return basis_.cols(); }
  Index ambientDim() const { return basis_.rows(); }

 private:
  explicit GrassmannPoint(Matrix basis) : basis_(std::move(basis)) {}
  Matrix basis_;
};

enum class SpanOrientation { Rows, Columns };

/// Orthonormal basis of the row span (Rows) or column span (Columns) of `a`.
/// Throws RankDeficient with the numerical rank when the spanning vectors are
/// dependent at relTol.
GrassmannPoint grassmannPoint(const Matrix& a, SpanOrientation orientation,
                              double relTol = kRankTolerance);

/// The 1-dimensional Grassmann point of a projective point.
GrassmannPoint asGrassmann(const ProjectivePoint& x);
ProjectivePoint asProjective(const GrassmannPoint& line);

/// Principal angles in ascending order. Angles come from atan2(sin, cos) of
/// paired singular values, which stays accurate for tiny angles where a bare
/// arccos loses half the digits.
Vector principalAngles(const GrassmannPoint& u, const GrassmannPoint& w);

double grassmannDistance(const GrassmannPoint& u, const GrassmannPoint& w);

struct TangentVector {
  GrassmannPoint base;
  Matrix delta;  // M x k, horizontal: baseᵀ delta = 0

  double norm() const { return delta.norm(); }
};

/// Riemannian logarithm. Throws CutLocus when some principal angle reaches
/// pi/2 (baseᵀ target singular at kRankTolerance), where the minimizing
/// geodesic is not unique.
TangentVector logMap(const GrassmannPoint& base, const GrassmannPoint& target);

GrassmannPoint expMap(const GrassmannPoint& base, const Matrix& delta);
inline GrassmannPoint expMap(const TangentVector& tv) { return expMap(tv.base, tv.delta); }

/// Point at parameter t on the minimizing geodesic from u (t = 0) to w (t = 1).
GrassmannPoint geodesic(const GrassmannPoint& u, const GrassmannPoint& w, double t);

/// Nested chain V_1 ⊂ V_2 ⊂ ... with dim V_j = j.
class FlagPoint {
 public:
  /// Validates dimensions 1..N, a common ambient space, and containment of
  /// each level in the next (projection residual < 1e-10).
  static FlagPoint fromChain(std::vector<GrassmannPoint> chain);

  const std::vector<GrassmannPoint>& chain() const { return chain_; }
  std::size_t length() const { return chain_.size(); }
  Index ambientDim() const { return chain_.front().ambientDim(); }

 private:
  explicit FlagPoint(std::vector<GrassmannPoint> chain) : chain_(std::move(chain)) {}
  std::vector<GrassmannPoint> chain_;
};

/// Flag V_k = span of the first k rows of `rows`. Throws FlagDegenerate with
/// the 1-based index of the first row that depends on its predecessors.
FlagPoint flagPoint(const Matrix& rows, double relTol = kRankTolerance);

/// Root of the (optionally weighted) sum of squared level distances. An empty
/// weight list means all weights 1.
double flagDistance(const FlagPoint& f, const FlagPoint& g, std::span<const double> weights = {});

}  // namespace semspace::geom
