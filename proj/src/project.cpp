#include "semspace/project.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "semspace/error.hpp"
#include "semspace/union_find.hpp"

namespace semspace::project {

TagMap::TagMap(std::vector<std::size_t> target, std::vector<std::string> names)
    : target_(std::move(target)), names_(std::move(names)) {
  if (names_.size() > target_.size()) {
    throw Error(ErrorKind::InvalidTagMap, "more semes than lexemes");
  }
  std::vector<bool> hit(names_.size(), false);
  for (std::size_t t : target_) {
    if (t >= names_.size()) throw Error(ErrorKind::InvalidTagMap, "lexeme mapped outside the seme range");
    hit[t] = true;
  }
  for (std::size_t s = 0; s < hit.size(); ++s) {
    if (!hit[s]) throw Error(ErrorKind::InvalidTagMap, "tag map is not surjective", std::nullopt, names_[s]);
  }
}

TagMap TagMap::identity(const std::vector<std::string>& lexemes) {
  std::vector<std::size_t> target(lexemes.size());
  for (std::size_t i = 0; i < target.size(); ++i) target[i] = i;
  return TagMap(std::move(target), lexemes);
}

TagMap tagMapFromGroups(const corpus::Dictionary& dict, const SemeGroups& groups, bool keepUnlisted) {
  const std::size_t unset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> target(dict.size(), unset);
  std::vector<std::string> names;
  for (const auto& [label, members] : groups) {
    const std::size_t s = names.size();
    names.push_back(label);
    for (const auto& lex : members) {
      const auto idx = dict.indexOf(lex);
      if (!idx) throw Error(ErrorKind::InvalidTagMap, "tag map names an unknown lexeme", std::nullopt, lex);
      if (target[*idx] != unset) {
        throw Error(ErrorKind::InvalidTagMap, "lexeme assigned to two semes", std::nullopt, lex);
      }
      target[*idx] = s;
    }
  }
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (target[i] != unset) continue;
    if (!keepUnlisted) throw Error(ErrorKind::InvalidTagMap, "lexeme has no seme", std::nullopt, dict[i]);
    target[i] = names.size();
    names.push_back(dict[i]);
  }
  return TagMap(std::move(target), std::move(names));
}

corpus::CountMatrix applyTagMapCounts(const corpus::CountMatrix& cm, const TagMap& tag) {
  if (static_cast<std::size_t>(cm.counts.rows()) != tag.lexemeCount()) {
    throw Error(ErrorKind::DimensionMismatch, "count matrix rows do not match the tag map");
  }
  corpus::CountMatrix out{corpus::CountArray::Zero(static_cast<Index>(tag.semeCount()), cm.counts.cols())};
  for (std::size_t i = 0; i < tag.lexemeCount(); ++i) {
    out.counts.row(static_cast<Index>(tag.seme(i))) += cm.counts.row(static_cast<Index>(i));
  }
  return out;
}

Matrix projectionMatrix(const TagMap& tag) {
  Matrix q = Matrix::Zero(static_cast<Index>(tag.semeCount()), static_cast<Index>(tag.lexemeCount()));
  for (std::size_t i = 0; i < tag.lexemeCount(); ++i) q(static_cast<Index>(tag.seme(i)), static_cast<Index>(i)) = 1.0;
  return q;
}

ProjectedSubspace projectSubspace(const geom::GrassmannPoint& p, const TagMap& tag) {
  if (static_cast<std::size_t>(p.ambientDim()) != tag.lexemeCount()) {
    throw Error(ErrorKind::DimensionMismatch, "subspace ambient dimension does not match the tag map");
  }
  const Matrix image = projectionMatrix(tag) * p.basis();
  const Index rank = numericalRank(image);
  if (rank == p.k()) return geom::grassmannPoint(image, geom::SpanOrientation::Columns);

  RankDrop drop{rank, std::nullopt};
  if (rank > 0) {
    Eigen::JacobiSVD<Matrix> svd(image, Eigen::ComputeThinU);
    drop.image = geom::GrassmannPoint::fromOrthonormal(svd.matrixU().leftCols(rank));
  }
  return drop;
}

Index intersectionDim(const geom::GrassmannPoint& u, const geom::GrassmannPoint& w) {
  if (u.ambientDim() != w.ambientDim()) {
    throw Error(ErrorKind::DimensionMismatch, "subspaces live in different ambient spaces");
  }
  Matrix joined(u.ambientDim(), u.k() + w.k());
  joined << u.basis(), w.basis();
  return u.k() + w.k() - numericalRank(joined);
}

ProjectabilityReport kProjectability(const std::vector<NamedPoint>& points, const TagMap& tag, Index k) {
  ProjectabilityReport report;
  report.k = k;
  if (points.empty()) return report;
  const Index n = points.front().point.k();
  const Index m = points.front().point.ambientDim();
  for (const auto& np : points) {
    if (np.point.k() != n || np.point.ambientDim() != m) {
      throw Error(ErrorKind::DimensionMismatch, "points must share (N, M)", std::nullopt, np.id);
    }
  }
  if (k < 0 || k > n) throw Error(ErrorKind::InvalidArgument, "k must satisfy 0 <= k <= N");

  // Projected image of each point; nullopt when everything maps to zero.
  std::vector<std::optional<geom::GrassmannPoint>> images;
  images.reserve(points.size());
  for (const auto& np : points) {
    auto projected = projectSubspace(np.point, tag);
    if (auto* g = std::get_if<geom::GrassmannPoint>(&projected)) {
      images.emplace_back(*g);
    } else {
      auto& drop = std::get<RankDrop>(projected);
      report.rankDrops.push_back(np.id);
      images.push_back(drop.image);
    }
  }

  // Deterministic pair order: lexicographic in ids.
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return points[a].id < points[b].id; });

  for (std::size_t a = 0; a < order.size(); ++a) {
    for (std::size_t b = a + 1; b < order.size(); ++b) {
      const std::size_t i = order[a], j = order[b];
      ++report.pairsChecked;
      const Index before = intersectionDim(points[i].point, points[j].point);
      const Index after = (images[i] && images[j]) ? intersectionDim(*images[i], *images[j]) : 0;
      Violation v{points[i].id, points[j].id, before, after};
      if (before >= k) report.preexisting.push_back(v);
      if (after >= k && after > before) report.violations.push_back(v);
      if (after != before) report.isomorphicallyProjectable = false;
    }
  }
  if (!report.rankDrops.empty()) report.isomorphicallyProjectable = false;
  return report;
}

std::vector<std::vector<std::size_t>> unsupervisedGroups(const Matrix& x, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw Error(ErrorKind::InvalidArgument, "similarity threshold must lie in (0, 1]");
  const auto n = static_cast<std::size_t>(x.rows());
  const Vector norms = x.rowwise().norm();
  UnionFind uf(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (norms(static_cast<Index>(i)) == 0.0) continue;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (norms(static_cast<Index>(j)) == 0.0) continue;
      const double cosine = x.row(static_cast<Index>(i)).dot(x.row(static_cast<Index>(j))) /
                            (norms(static_cast<Index>(i)) * norms(static_cast<Index>(j)));
      if (cosine >= theta) uf.unite(i, j);
    }
  }
  std::map<std::size_t, std::vector<std::size_t>> byRoot;
  for (std::size_t i = 0; i < n; ++i) byRoot[uf.find(i)].push_back(i);
  std::vector<std::vector<std::size_t>> groups;
  groups.reserve(byRoot.size());
  for (auto& [root, members] : byRoot) groups.push_back(std::move(members));
  return groups;
}

paths::ProjectivePath projectPath(const paths::ProjectivePath& path, const TagMap& tag) {
  const Matrix q = projectionMatrix(tag);
  paths::ProjectivePath out{path.textId, {}};
  out.vertices.reserve(path.vertices.size());
  for (std::size_t v = 0; v < path.vertices.size(); ++v) {
    if (static_cast<std::size_t>(path.vertices[v].ambientDim()) != tag.lexemeCount()) {
      throw Error(ErrorKind::DimensionMismatch, "path dimension does not match the tag map", std::nullopt, path.textId);
    }
    const Vector image = q * path.vertices[v].rep();
    if (image.norm() <= kRankTolerance) {
      throw Error(ErrorKind::KernelVertex, "vertex lies in the kernel of the projection",
                  static_cast<long long>(v + 1), path.textId);
    }
    out.vertices.push_back(geom::ProjectivePoint::fromVector(image));
  }
  return out;
}

}  // namespace semspace::project
