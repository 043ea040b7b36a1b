#include "semspace/paths.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "semspace/error.hpp"

namespace semspace::paths {

namespace {

void checkPath(const ProjectivePath& p) {
  if (p.vertices.empty()) throw Error(ErrorKind::InvalidArgument, "path has no vertices", std::nullopt, p.textId);
  for (const auto& v : p.vertices) {
    if (v.ambientDim() != p.ambientDim()) {
      throw Error(ErrorKind::DimensionMismatch, "path vertices of different dimension", std::nullopt, p.textId);
    }
  }
}

void checkPair(const ProjectivePath& a, const ProjectivePath& b) {
  checkPath(a);
  checkPath(b);
  if (a.ambientDim() != b.ambientDim()) {
    throw Error(ErrorKind::DimensionMismatch, "paths live in different projective spaces");
  }
}

// Fubini-Study distance between unit vectors, sign-agnostic.
double lineDistance(const Vector& x, const Vector& y) {
  const double dot = x.dot(y);
  const double s = dot < 0.0 ? -1.0 : 1.0;
  return 2.0 * std::atan2((x - s * y).norm(), (x + s * y).norm());
}

template <class Dist>
double frechetDp(std::size_t n, std::size_t m, Dist&& dist) {
  std::vector<double> prev(m), cur(m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double d = dist(i, j);
      double best;
      if (i == 0 && j == 0) {
        best = 0.0;
      } else if (i == 0) {
        best = cur[j - 1];
      } else if (j == 0) {
        best = prev[j];
      } else {
        best = std::min({prev[j], prev[j - 1], cur[j - 1]});
      }
      cur[j] = std::max(best, d);
    }
    std::swap(prev, cur);
  }
  return prev[m - 1];
}

}  // namespace

ProjectivePath textPath(const Matrix& lexemeByContext, std::string textId) {
  if (lexemeByContext.cols() < 1) throw Error(ErrorKind::InvalidArgument, "text has no contexts", std::nullopt, textId);
  ProjectivePath path{std::move(textId), {}};
  path.vertices.reserve(static_cast<std::size_t>(lexemeByContext.cols()));
  for (Index j = 0; j < lexemeByContext.cols(); ++j) {
    const Vector column = lexemeByContext.col(j);
    if (column.isZero(0.0)) {
      throw Error(ErrorKind::EmptyContext, "context vector is zero", static_cast<long long>(j + 1), path.textId);
    }
    path.vertices.push_back(geom::ProjectivePoint::fromVector(column));
  }
  return path;
}

std::vector<Vector> refinePath(const ProjectivePath& path, int m) {
  checkPath(path);
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "refinement must be >= 1");
  std::vector<Vector> out;
  out.reserve((path.vertices.size() - 1) * static_cast<std::size_t>(m) + 1);
  out.push_back(path.vertices.front().rep());
  for (std::size_t e = 0; e + 1 < path.vertices.size(); ++e) {
    const Vector& a = path.vertices[e].rep();
    const Vector b = a.dot(path.vertices[e + 1].rep()) < 0.0 ? Vector(-path.vertices[e + 1].rep())
                                                            : path.vertices[e + 1].rep();
    const double theta = 2.0 * std::atan2((a - b).norm(), (a + b).norm());
    const double sinTheta = std::sin(theta);
    for (int s = 1; s <= m; ++s) {
      const double t = static_cast<double>(s) / m;
      Vector p;
      if (sinTheta < 1e-12) {
        p = (1.0 - t) * a + t * b;
      } else {
        p = (std::sin((1.0 - t) * theta) / sinTheta) * a + (std::sin(t * theta) / sinTheta) * b;
      }
      out.push_back(p.normalized());
    }
  }
  return out;
}

double discreteFrechet(const ProjectivePath& a, const ProjectivePath& b) {
  checkPair(a, b);
  return frechetDp(a.vertices.size(), b.vertices.size(), [&](std::size_t i, std::size_t j) {
    return geom::projDistance(a.vertices[i], b.vertices[j]);
  });
}

FrechetEstimate frechetDistance(const ProjectivePath& a, const ProjectivePath& b, int refinement) {
  checkPair(a, b);
  if (refinement < 1) throw Error(ErrorKind::InvalidArgument, "refinement must be >= 1");
  const auto ra = refinePath(a, refinement);
  const auto rb = refinePath(b, refinement);

  double longestEdge = 0.0;
  for (const auto* p : {&a, &b}) {
    for (std::size_t e = 0; e + 1 < p->vertices.size(); ++e) {
      longestEdge = std::max(longestEdge, geom::projDistance(p->vertices[e], p->vertices[e + 1]));
    }
  }
  FrechetEstimate out;
  out.value = frechetDp(ra.size(), rb.size(), [&](std::size_t i, std::size_t j) { return lineDistance(ra[i], rb[j]); });
  out.errorBound = 2.0 * longestEdge / refinement;
  return out;
}

double pathLength(const ProjectivePath& path) {
  checkPath(path);
  double total = 0.0;
  for (std::size_t e = 0; e + 1 < path.vertices.size(); ++e) {
    total += geom::projDistance(path.vertices[e], path.vertices[e + 1]);
  }
  return total;
}

}  // namespace semspace::paths
