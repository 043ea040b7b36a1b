#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "semspace/geom.hpp"

namespace semspace::topology {

struct DistanceMatrix {
  std::vector<std::string> ids;
  Matrix d;

  std::size_t size() const { return ids.size(); }
};

using AnyPoint = std::variant<geom::ProjectivePoint, geom::GrassmannPoint, geom::FlagPoint>;

/// Pairwise geodesic distances with the metric of the point kind. Ids default
/// to "0", "1", ... Throws KindMismatch for mixed kinds.
DistanceMatrix distanceMatrix(std::span<const AnyPoint> points, std::vector<std::string> ids = {});

/// Zeroes the distance of each listed vertex pair, so the corresponding edges
/// are born at scale 0 (consecutive vertices of a text path).
DistanceMatrix withPathEdges(DistanceMatrix dm, std::span<const std::pair<std::size_t, std::size_t>> edges);

struct Simplex {
  std::vector<std::size_t> vertices;  // sorted
  double birth = 0.0;

  int dim() const { return static_cast<int>(vertices.size()) - 1; }
};

/// Simplices ordered by (birth, dimension, vertex list).
struct FilteredComplex {
  std::vector<Simplex> simplices;
  double maxScale = 0.0;
  int maxDim = 0;
};

/// All simplices of dimension <= maxDim whose vertices are pairwise within
/// maxScale; a simplex is born at its largest pairwise distance.
FilteredComplex vietorisRips(const DistanceMatrix& dm, double maxScale, int maxDim);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct PersistenceInterval {
  int dim = 0;
  double birth = 0.0;
  double death = kInfinity;

  bool operator==(const PersistenceInterval&) const = default;
};

/// Intervals sorted by (dim, birth, death). Only dimensions below the
/// complex's maxDim are reported: a top-dimensional class could be killed by
/// simplices the complex does not contain.
struct Barcode {
  std::vector<PersistenceInterval> intervals;
  int maxReportedDim = -1;

  std::size_t count(int dim) const;
  std::size_t infiniteCount(int dim) const;
};

/// Column reduction of the boundary matrix over the two-element field.
/// Zero-length intervals are dropped.
Barcode persistentHomology(const FilteredComplex& fc);

struct CoveringOptions {
  double epsilon = 0.0;           // ball radius is epsilon / 2
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  bool convexityGuard = true;     // clamp the radius below pi/4
};

/// Result of Monte-Carlo covering queries. A reported simplex or codeword is
/// certified by a witness sample; absence is only evidence.
struct NerveComplex {
  std::vector<std::vector<std::size_t>> facets;  // maximal witnessed index sets, sorted
  std::map<std::vector<std::size_t>, std::size_t> hits;  // witness count per observed membership set
  std::size_t pointCount = 0;
  std::size_t samples = 0;
  double radius = 0.0;
  bool radiusClamped = false;

  bool contains(const std::vector<std::size_t>& simplex) const;
  /// Every face of a facet up to dimension maxDim, sorted by (dim, lex).
  std::vector<std::vector<std::size_t>> simplices(int maxDim) const;
};

NerveComplex cechNerveApprox(std::span<const AnyPoint> points, const CoveringOptions& options);

struct NeuralCode {
  std::set<std::string> words;               // bit i is '1' when the sample lies in ball i
  std::map<std::string, std::size_t> hits;
  std::size_t m = 0;
  std::size_t samples = 0;
  double radius = 0.0;
  bool radiusClamped = false;
};

NeuralCode neuralCode(std::span<const AnyPoint> points, const CoveringOptions& options);

/// The support (indices of '1' bits) of a codeword.
std::vector<std::size_t> support(const std::string& word);

}  // namespace semspace::topology
