#pragma once

#include <string>
#include <vector>

#include "semspace/geom.hpp"

namespace semspace::paths {

/// Vertices in context order; consecutive vertices are joined by the shorter
/// great-circle arc between their aligned representatives.
struct ProjectivePath {
  std::string textId;
  std::vector<geom::ProjectivePoint> vertices;

  Index ambientDim() const { return vertices.front().ambientDim(); }
};

/// One vertex per column of the lexeme-by-context matrix. Throws
/// EmptyContext with the 1-based column of the first zero column.
ProjectivePath textPath(const Matrix& lexemeByContext, std::string textId = {});

/// Great-circle subdivision of a path: each edge split into `m` equal arcs.
std::vector<Vector> refinePath(const ProjectivePath& path, int m);

/// Coupling dynamic program with the Fubini-Study ground metric.
double discreteFrechet(const ProjectivePath& a, const ProjectivePath& b);

struct FrechetEstimate {
  double value = 0.0;
  double errorBound = 0.0;  // 2 x longest sub-arc; continuous distance lies in [value - bound, value]
};

FrechetEstimate frechetDistance(const ProjectivePath& a, const ProjectivePath& b, int refinement);

double pathLength(const ProjectivePath& path);

}  // namespace semspace::paths
