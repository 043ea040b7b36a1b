#include "semspace/topology.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>

#include "semspace/error.hpp"

namespace semspace::topology {

namespace {

double pointDistance(const AnyPoint& a, const AnyPoint& b) {
  return std::visit(
      [&](const auto& x) -> double {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b);
        if constexpr (std::is_same_v<T, geom::ProjectivePoint>) {
          return geom::projDistance(x, y);
        } else if constexpr (std::is_same_v<T, geom::GrassmannPoint>) {
          return geom::grassmannDistance(x, y);
        } else {
          return geom::flagDistance(x, y);
        }
      },
      a);
}

void requireHomogeneous(std::span<const AnyPoint> points) {
  for (const auto& p : points) {
    if (p.index() != points.front().index()) {
      throw Error(ErrorKind::KindMismatch, "point list mixes projective, Grassmann and flag points");
    }
  }
}

Matrix gaussianMatrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  }
  return m;
}

// Uniform sample from the ambient manifold of `prototype` (Haar measure via
// Gaussian matrices).
AnyPoint sampleLike(const AnyPoint& prototype, std::mt19937_64& rng) {
  return std::visit(
      [&](const auto& x) -> AnyPoint {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, geom::ProjectivePoint>) {
          return geom::ProjectivePoint::fromVector(gaussianMatrix(x.ambientDim(), 1, rng).col(0));
        } else if constexpr (std::is_same_v<T, geom::GrassmannPoint>) {
          return geom::GrassmannPoint::fromOrthonormal(orthonormalizeColumns(gaussianMatrix(x.ambientDim(), x.k(), rng)));
        } else {
          const auto n = static_cast<Index>(x.length());
          return geom::flagPoint(gaussianMatrix(n, x.ambientDim(), rng));
        }
      },
      prototype);
}

struct CoverRadius {
  double radius;
  bool clamped;
};

CoverRadius resolveRadius(const CoveringOptions& options) {
  if (!(options.epsilon > 0.0)) throw Error(ErrorKind::InvalidArgument, "covering scale must be positive");
  if (options.samples == 0) throw Error(ErrorKind::InvalidArgument, "sample budget must be positive");
  const double limit = std::nextafter(std::numbers::pi / 4.0, 0.0);
  const double r = options.epsilon / 2.0;
  if (options.convexityGuard && r > limit) return {limit, true};
  return {r, false};
}

// Calls visit(membership) once per ambient sample, membership[i] true when the
// sample lies in ball i.
template <class Visit>
void sampleMemberships(std::span<const AnyPoint> points, const CoveringOptions& options, double radius, Visit&& visit) {
  std::mt19937_64 rng(options.seed);
  std::vector<bool> member(points.size());
  for (std::size_t s = 0; s < options.samples; ++s) {
    const AnyPoint sample = sampleLike(points.front(), rng);
    for (std::size_t i = 0; i < points.size(); ++i) member[i] = pointDistance(sample, points[i]) <= radius;
    visit(member);
  }
}

bool isSubset(const std::vector<std::size_t>& small, const std::vector<std::size_t>& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

}  // namespace

DistanceMatrix distanceMatrix(std::span<const AnyPoint> points, std::vector<std::string> ids) {
  requireHomogeneous(points);
  const std::size_t n = points.size();
  if (ids.empty()) {
    for (std::size_t i = 0; i < n; ++i) ids.push_back(std::to_string(i));
  }
  if (ids.size() != n) throw Error(ErrorKind::SizeMismatch, "one id per point expected");
  DistanceMatrix dm{std::move(ids), Matrix::Zero(static_cast<Index>(n), static_cast<Index>(n))};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = pointDistance(points[i], points[j]);
      dm.d(static_cast<Index>(i), static_cast<Index>(j)) = d;
      dm.d(static_cast<Index>(j), static_cast<Index>(i)) = d;
    }
  }
  return dm;
}

DistanceMatrix withPathEdges(DistanceMatrix dm, std::span<const std::pair<std::size_t, std::size_t>> edges) {
  for (const auto& [a, b] : edges) {
    if (a >= dm.size() || b >= dm.size()) throw Error(ErrorKind::IndexError, "path edge outside the point set");
    dm.d(static_cast<Index>(a), static_cast<Index>(b)) = 0.0;
    dm.d(static_cast<Index>(b), static_cast<Index>(a)) = 0.0;
  }
  return dm;
}

FilteredComplex vietorisRips(const DistanceMatrix& dm, double maxScale, int maxDim) {
  if (!(maxScale > 0.0)) throw Error(ErrorKind::InvalidArgument, "maximal scale must be positive");
  if (maxDim < 0) throw Error(ErrorKind::InvalidArgument, "maximal dimension must be >= 0");
  const std::size_t n = dm.size();
  if (static_cast<std::size_t>(dm.d.rows()) != n || static_cast<std::size_t>(dm.d.cols()) != n) {
    throw Error(ErrorKind::DimensionMismatch, "distance matrix does not match its ids");
  }

  std::vector<std::vector<std::size_t>> later(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (dm.d(static_cast<Index>(i), static_cast<Index>(j)) <= maxScale) later[i].push_back(j);
    }
  }

  FilteredComplex fc;
  fc.maxScale = maxScale;
  fc.maxDim = maxDim;
  std::vector<std::size_t> clique;

  auto expand = [&](auto&& self, double birth, const std::vector<std::size_t>& candidates) -> void {
    fc.simplices.push_back({clique, birth});
    if (static_cast<int>(clique.size()) == maxDim + 1) return;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      const std::size_t v = candidates[c];
      double b = birth;
      for (std::size_t u : clique) b = std::max(b, dm.d(static_cast<Index>(u), static_cast<Index>(v)));
      std::vector<std::size_t> next;
      for (std::size_t c2 = c + 1; c2 < candidates.size(); ++c2) {
        if (dm.d(static_cast<Index>(v), static_cast<Index>(candidates[c2])) <= maxScale) next.push_back(candidates[c2]);
      }
      clique.push_back(v);
      self(self, b, next);
      clique.pop_back();
    }
  };
  for (std::size_t i = 0; i < n; ++i) {
    clique.assign(1, i);
    expand(expand, 0.0, later[i]);
  }

  std::sort(fc.simplices.begin(), fc.simplices.end(), [](const Simplex& a, const Simplex& b) {
    if (a.birth != b.birth) return a.birth < b.birth;
    if (a.vertices.size() != b.vertices.size()) return a.vertices.size() < b.vertices.size();
    return a.vertices < b.vertices;
  });
  return fc;
}

std::size_t Barcode::count(int dim) const {
  return static_cast<std::size_t>(std::count_if(intervals.begin(), intervals.end(),
                                                [&](const PersistenceInterval& iv) { return iv.dim == dim; }));
}

std::size_t Barcode::infiniteCount(int dim) const {
  return static_cast<std::size_t>(std::count_if(intervals.begin(), intervals.end(), [&](const PersistenceInterval& iv) {
    return iv.dim == dim && std::isinf(iv.death);
  }));
}

Barcode persistentHomology(const FilteredComplex& fc) {
  const std::size_t n = fc.simplices.size();
  std::map<std::vector<std::size_t>, std::size_t> position;
  for (std::size_t j = 0; j < n; ++j) position.emplace(fc.simplices[j].vertices, j);

  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::vector<std::size_t>> columns(n);
  std::vector<std::size_t> pivotOwner(n, kNone);
  std::vector<bool> killed(n, false);
  std::vector<bool> creator(n, false);

  Barcode out;
  out.maxReportedDim = fc.maxDim - 1;

  for (std::size_t j = 0; j < n; ++j) {
    const Simplex& s = fc.simplices[j];
    std::vector<std::size_t> col;
    if (s.vertices.size() > 1) {
      for (std::size_t drop = 0; drop < s.vertices.size(); ++drop) {
        std::vector<std::size_t> face;
        face.reserve(s.vertices.size() - 1);
        for (std::size_t v = 0; v < s.vertices.size(); ++v) {
          if (v != drop) face.push_back(s.vertices[v]);
        }
        const auto it = position.find(face);
        if (it == position.end() || it->second >= j) {
          throw Error(ErrorKind::InvalidArgument, "filtration lists a simplex before one of its faces");
        }
        col.push_back(it->second);
      }
      std::sort(col.begin(), col.end());
    }

    while (!col.empty() && pivotOwner[col.back()] != kNone) {
      const auto& other = columns[pivotOwner[col.back()]];
      std::vector<std::size_t> sum;
      sum.reserve(col.size() + other.size());
      std::set_symmetric_difference(col.begin(), col.end(), other.begin(), other.end(), std::back_inserter(sum));
      col.swap(sum);
    }

    if (col.empty()) {
      creator[j] = true;
    } else {
      const std::size_t low = col.back();
      pivotOwner[low] = j;
      killed[low] = true;
      const Simplex& born = fc.simplices[low];
      if (born.dim() <= out.maxReportedDim && s.birth > born.birth) {
        out.intervals.push_back({born.dim(), born.birth, s.birth});
      }
    }
    columns[j] = std::move(col);
  }

  for (std::size_t j = 0; j < n; ++j) {
    const Simplex& s = fc.simplices[j];
    if (creator[j] && !killed[j] && s.dim() <= out.maxReportedDim) {
      out.intervals.push_back({s.dim(), s.birth, kInfinity});
    }
  }

  std::sort(out.intervals.begin(), out.intervals.end(), [](const PersistenceInterval& a, const PersistenceInterval& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    if (a.birth != b.birth) return a.birth < b.birth;
    return a.death < b.death;
  });
  return out;
}

bool NerveComplex::contains(const std::vector<std::size_t>& simplex) const {
  if (simplex.empty()) return false;
  std::vector<std::size_t> sorted = simplex;
  std::sort(sorted.begin(), sorted.end());
  return std::any_of(facets.begin(), facets.end(), [&](const auto& f) { return isSubset(sorted, f); });
}

std::vector<std::vector<std::size_t>> NerveComplex::simplices(int maxDim) const {
  std::set<std::vector<std::size_t>> faces;
  for (const auto& facet : facets) {
    const std::size_t size = facet.size();
    if (size >= 63) throw Error(ErrorKind::InvalidArgument, "facet too large to enumerate its faces");
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << size); ++mask) {
      if (std::popcount(mask) > maxDim + 1) continue;
      std::vector<std::size_t> face;
      for (std::size_t b = 0; b < size; ++b) {
        if (mask & (std::uint64_t{1} << b)) face.push_back(facet[b]);
      }
      faces.insert(std::move(face));
    }
  }
  std::vector<std::vector<std::size_t>> out(faces.begin(), faces.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
  return out;
}

NerveComplex cechNerveApprox(std::span<const AnyPoint> points, const CoveringOptions& options) {
  requireHomogeneous(points);
  const auto [radius, clamped] = resolveRadius(options);
  NerveComplex nerve;
  nerve.pointCount = points.size();
  nerve.samples = options.samples;
  nerve.radius = radius;
  nerve.radiusClamped = clamped;
  if (points.empty()) return nerve;

  sampleMemberships(points, options, radius, [&](const std::vector<bool>& member) {
    std::vector<std::size_t> set;
    for (std::size_t i = 0; i < member.size(); ++i) {
      if (member[i]) set.push_back(i);
    }
    if (!set.empty()) ++nerve.hits[set];
  });

  std::vector<std::vector<std::size_t>> observed;
  for (const auto& [set, count] : nerve.hits) observed.push_back(set);
  std::stable_sort(observed.begin(), observed.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });
  for (const auto& set : observed) {
    const bool covered = std::any_of(nerve.facets.begin(), nerve.facets.end(), [&](const auto& f) { return isSubset(set, f); });
    if (!covered) nerve.facets.push_back(set);
  }
  std::sort(nerve.facets.begin(), nerve.facets.end());
  return nerve;
}

NeuralCode neuralCode(std::span<const AnyPoint> points, const CoveringOptions& options) {
  requireHomogeneous(points);
  const auto [radius, clamped] = resolveRadius(options);
  NeuralCode code;
  code.m = points.size();
  code.samples = options.samples;
  code.radius = radius;
  code.radiusClamped = clamped;
  if (points.empty()) return code;

  sampleMemberships(points, options, radius, [&](const std::vector<bool>& member) {
    std::string word(member.size(), '0');
    for (std::size_t i = 0; i < member.size(); ++i) {
      if (member[i]) word[i] = '1';
    }
    ++code.hits[word];
    code.words.insert(std::move(word));
  });
  return code;
}

std::vector<std::size_t> support(const std::string& word) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (word[i] == '1') out.push_back(i);
  }
  return out;
}

}  // namespace semspace::topology
