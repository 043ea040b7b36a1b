#include "semspace/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <set>

namespace semspace::consensus {

MergedCorpus mergeCorpora(std::span<const UserCorpus> users) {
  MergedCorpus out;
  if (users.empty()) return out;
  out.dictionary = users.front().dictionary;
  for (const auto& user : users) {
    if (user.dictionary != out.dictionary) {
      throw Error(ErrorKind::DictionaryMismatch, "users do not share one dictionary").withSubject(user.userId);
    }
  }
  const Index m = static_cast<Index>(out.dictionary.size());

  std::map<std::string, Index> width;
  for (const auto& user : users) {
    for (const auto& text : user.texts) {
      if (text.values.rows() != m) {
        throw Error(ErrorKind::DimensionMismatch, "text matrix row count differs from the dictionary size")
            .withSubject(user.userId + "/" + text.textId);
      }
      const auto [it, inserted] = width.emplace(text.textId, text.values.cols());
      if (!inserted && it->second != text.values.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "users disagree on the context count of a shared text")
            .withSubject(text.textId);
      }
    }
  }

  std::map<std::string, Index> offset;
  Index total = 0;
  for (const auto& [id, w] : width) {
    offset[id] = total;
    for (Index j = 0; j < w; ++j) out.contexts.push_back({id, j});
    total += w;
  }

  for (const auto& user : users) {
    UserView view{user.userId, {}, Matrix::Zero(m, total)};
    for (const auto& text : user.texts) {
      view.matrix.middleCols(offset.at(text.textId), text.values.cols()) = text.values;
      view.corpusIds.push_back(text.textId);
    }
    std::sort(view.corpusIds.begin(), view.corpusIds.end());
    view.corpusIds.erase(std::unique(view.corpusIds.begin(), view.corpusIds.end()), view.corpusIds.end());
    out.views.push_back(std::move(view));
  }
  return out;
}

geom::GrassmannPoint userPoint(const UserView& view) {
  try {
    return geom::grassmannPoint(view.matrix, geom::SpanOrientation::Rows);
  } catch (const Error& e) {
    throw e.withSubject(view.userId);
  }
}

void validateWeights(std::span<const double> weights, std::size_t count) {
  if (weights.size() != count) {
    throw Error(ErrorKind::DimensionMismatch, "one weight per point is required");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorKind::InvalidArgument, "weights must be nonnegative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw Error(ErrorKind::InvalidArgument, "weights must sum to 1");
}

std::vector<double> uniformWeights(std::size_t count) {
  return std::vector<double>(count, count == 0 ? 0.0 : 1.0 / static_cast<double>(count));
}

double potential(std::span<const geom::GrassmannPoint> points, std::span<const double> weights,
                 const geom::GrassmannPoint& p) {
  double v = 0.0;
  for (std::size_t a = 0; a < points.size(); ++a) {
    if (weights[a] == 0.0) continue;
    const double d = geom::grassmannDistance(points[a], p);
    v += weights[a] * d * d;
  }
  return v;
}

Matrix descentDirection(std::span<const geom::GrassmannPoint> points, std::span<const double> weights,
                        const geom::GrassmannPoint& p) {
  Matrix g = Matrix::Zero(p.ambientDim(), p.k());
  for (std::size_t a = 0; a < points.size(); ++a) {
    if (weights[a] == 0.0) continue;
    g += weights[a] * geom::logMap(p, points[a]).delta;
  }
  return g;
}

KarcherResult karcherBarycenter(std::span<const geom::GrassmannPoint> points, std::span<const double> weights,
                                const KarcherOptions& options) {
  if (points.empty()) throw Error(ErrorKind::InvalidArgument, "barycenter of an empty point set");
  validateWeights(weights, points.size());
  for (const auto& p : points) {
    if (p.ambientDim() != points.front().ambientDim() || p.k() != points.front().k()) {
      throw Error(ErrorKind::DimensionMismatch, "points lie on different Grassmannians");
    }
  }
  if (!(options.step > 0.0) || !(options.tol > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "step and tolerance must be positive");
  }

  const auto start = static_cast<std::size_t>(std::max_element(weights.begin(), weights.end()) - weights.begin());
  KarcherResult out{points[start], 0.0, 0, 0, {}, {}, 0.0, true};
  for (std::size_t a = 0; a < points.size(); ++a) {
    for (std::size_t b = a + 1; b < points.size(); ++b) {
      out.maxPairwiseDistance = std::max(out.maxPairwiseDistance, geom::grassmannDistance(points[a], points[b]));
    }
  }
  out.convexityOk = out.maxPairwiseDistance < std::numbers::pi / 2;

  double v = potential(points, weights, out.point);
  Matrix g = descentDirection(points, weights, out.point);
  while (true) {
    out.finalGradNorm = g.norm();
    out.gradNormTrace.push_back(out.finalGradNorm);
    out.potentialTrace.push_back(v);
    if (out.finalGradNorm < options.tol) return out;
    if (out.iterations >= options.maxIter) {
      throw NoConvergenceError("barycenter iteration did not reach the gradient tolerance", std::move(out));
    }

    // Potential differences near the minimum fall below the rounding of V.
    const double slack = 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + v);
    double h = options.step;
    std::optional<geom::GrassmannPoint> next;
    double vNext = 0.0;
    while (h > options.step * 1e-12) {
      auto candidate = geom::expMap(out.point, h * g);
      vNext = potential(points, weights, candidate);
      if (vNext <= v + slack) {
        next = std::move(candidate);
        break;
      }
      h *= 0.5;
      ++out.backtracks;
    }
    if (!next) throw NoConvergenceError("no descent step found", std::move(out));
    out.point = std::move(*next);
    v = vNext;
    g = descentDirection(points, weights, out.point);
    ++out.iterations;
  }
}

std::vector<geom::ProjectivePoint> crossLanguageAverage(
    const std::map<std::string, std::vector<geom::ProjectivePoint>>& pointsByLanguage,
    const std::map<std::string, double>& weights, const KarcherOptions& options) {
  if (pointsByLanguage.empty()) return {};
  const std::size_t length = pointsByLanguage.begin()->second.size();
  std::vector<double> lambda;
  for (const auto& [language, path] : pointsByLanguage) {
    if (path.size() != length) {
      throw Error(ErrorKind::DimensionMismatch, "languages have different vertex counts").withSubject(language);
    }
    if (!weights.empty()) {
      const auto it = weights.find(language);
      if (it == weights.end()) throw Error(ErrorKind::InvalidArgument, "missing language weight").withSubject(language);
      lambda.push_back(it->second);
    }
  }
  if (weights.empty()) {
    lambda = uniformWeights(pointsByLanguage.size());
  } else if (weights.size() != pointsByLanguage.size()) {
    throw Error(ErrorKind::InvalidArgument, "weights name a language without points");
  }

  std::vector<geom::ProjectivePoint> out;
  out.reserve(length);
  for (std::size_t i = 0; i < length; ++i) {
    std::vector<geom::GrassmannPoint> lines;
    for (const auto& [language, path] : pointsByLanguage) lines.push_back(geom::asGrassmann(path[i]));
    out.push_back(geom::asProjective(karcherBarycenter(lines, lambda, options).point));
  }
  return out;
}

namespace {

double supCost(const topology::PersistenceInterval& a, const topology::PersistenceInterval& b) {
  const double db = std::abs(a.birth - b.birth);
  double dd = 0.0;
  if (std::isinf(a.death) != std::isinf(b.death)) {
    dd = topology::kInfinity;
  } else if (!std::isinf(a.death)) {
    dd = std::abs(a.death - b.death);
  }
  return std::max(db, dd);
}

double halfLength(const topology::PersistenceInterval& a) { return 0.5 * (a.death - a.birth); }

}  // namespace

BarcodeMatching greedyMatch(const topology::Barcode& a, const topology::Barcode& b, int dim) {
  std::vector<topology::PersistenceInterval> left, right;
  for (const auto& i : a.intervals) if (i.dim == dim) left.push_back(i);
  for (const auto& i : b.intervals) if (i.dim == dim) right.push_back(i);

  struct Candidate {
    double cost;
    std::size_t i, j;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < left.size(); ++i) {
    for (std::size_t j = 0; j < right.size(); ++j) {
      const double c = supCost(left[i], right[j]);
      if (c <= std::max(halfLength(left[i]), halfLength(right[j]))) candidates.push_back({c, i, j});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& x, const Candidate& y) { return x.cost < y.cost; });

  BarcodeMatching out{dim, 0, 0, 0, 0.0};
  std::vector<bool> usedLeft(left.size()), usedRight(right.size());
  for (const auto& c : candidates) {
    if (usedLeft[c.i] || usedRight[c.j]) continue;
    usedLeft[c.i] = usedRight[c.j] = true;
    ++out.matched;
    out.cost = std::max(out.cost, c.cost);
  }
  for (std::size_t i = 0; i < left.size(); ++i) {
    if (!usedLeft[i]) {
      ++out.unmatchedLeft;
      out.cost = std::max(out.cost, halfLength(left[i]));
    }
  }
  for (std::size_t j = 0; j < right.size(); ++j) {
    if (!usedRight[j]) {
      ++out.unmatchedRight;
      out.cost = std::max(out.cost, halfLength(right[j]));
    }
  }
  return out;
}

MergedComplexSummary barycentricComplexMerge(const topology::DistanceMatrix& merged,
                                             std::span<const UserMembership> users, double epsilon, int maxDim) {
  MergedComplexSummary out;
  out.epsilon = epsilon;
  out.complex = topology::vietorisRips(merged, epsilon, maxDim);
  out.barcode = topology::persistentHomology(out.complex);

  std::vector<std::set<std::size_t>> memberSets;
  for (const auto& user : users) {
    std::set<std::size_t> members(user.points.begin(), user.points.end());
    for (std::size_t p : members) {
      if (p >= merged.size()) throw Error(ErrorKind::IndexError, "user point index outside the merged set").withSubject(user.userId);
    }
    const std::vector<std::size_t> sorted(members.begin(), members.end());

    topology::DistanceMatrix sub;
    sub.d.resize(static_cast<Index>(sorted.size()), static_cast<Index>(sorted.size()));
    for (std::size_t r = 0; r < sorted.size(); ++r) {
      sub.ids.push_back(merged.ids[sorted[r]]);
      for (std::size_t c = 0; c < sorted.size(); ++c) {
        sub.d(static_cast<Index>(r), static_cast<Index>(c)) =
            merged.d(static_cast<Index>(sorted[r]), static_cast<Index>(sorted[c]));
      }
    }
    UserComplexSummary summary{user.userId, sorted, topology::persistentHomology(topology::vietorisRips(sub, epsilon, maxDim)), {}};
    for (int q = 0; q <= 1 && q < maxDim; ++q) summary.comparison.push_back(greedyMatch(summary.barcode, out.barcode, q));
    out.users.push_back(std::move(summary));
    memberSets.push_back(std::move(members));
  }

  out.owners.reserve(out.complex.simplices.size());
  for (const auto& s : out.complex.simplices) {
    std::vector<std::size_t> owners;
    for (std::size_t u = 0; u < memberSets.size(); ++u) {
      if (std::all_of(s.vertices.begin(), s.vertices.end(), [&](std::size_t v) { return memberSets[u].count(v) > 0; })) {
        owners.push_back(u);
      }
    }
    out.owners.push_back(std::move(owners));
  }
  return out;
}

}  // namespace semspace::consensus
