#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "semspace/corpus.hpp"
#include "semspace/geom.hpp"
#include "semspace/paths.hpp"

namespace semspace::project {

/// Total surjective map from lexeme indices onto seme indices.
class TagMap {
 public:
  /// Throws InvalidTagMap unless every target is < names.size() and every
  /// seme receives at least one lexeme.
  TagMap(std::vector<std::size_t> target, std::vector<std::string> names);

  static TagMap identity(const std::vector<std::string>& lexemes);

  std::size_t lexemeCount() const { return target_.size(); }
  std::size_t semeCount() const { return names_.size(); }
  std::size_t seme(std::size_t lexeme) const { return target_[lexeme]; }
  const std::vector<std::size_t>& targets() const { return target_; }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::size_t> target_;
  std::vector<std::string> names_;
};

using SemeGroups = std::vector<std::pair<std::string, std::vector<std::string>>>;

/// Builds a tag map from {label: [lexeme, ...]} groups over a dictionary.
/// Lexemes not listed in any group become singleton semes named after
/// themselves when keepUnlisted is set; otherwise they make the map invalid.
TagMap tagMapFromGroups(const corpus::Dictionary& dict, const SemeGroups& groups, bool keepUnlisted = true);

corpus::CountMatrix applyTagMapCounts(const corpus::CountMatrix& cm, const TagMap& tag);

/// M' x M 0/1 matrix with Q(s, i) = 1 iff lexeme i maps to seme s.
Matrix projectionMatrix(const TagMap& tag);

struct RankDrop {
  Index newRank = 0;
  std::optional<geom::GrassmannPoint> image;  // span of the image when newRank > 0
};

using ProjectedSubspace = std::variant<geom::GrassmannPoint, RankDrop>;

ProjectedSubspace projectSubspace(const geom::GrassmannPoint& p, const TagMap& tag);

/// dim U + dim W - rank [U | W]; the two subspaces may differ in dimension.
Index intersectionDim(const geom::GrassmannPoint& u, const geom::GrassmannPoint& w);

struct NamedPoint {
  std::string id;
  geom::GrassmannPoint point;
};

struct Violation {
  std::string first;
  std::string second;
  Index before = 0;
  Index after = 0;
};

struct ProjectabilityReport {
  Index k = 0;
  std::size_t pairsChecked = 0;
  /// Pairs whose images meet in dimension >= k where the sources met in a
  /// smaller dimension: information lost by the projection.
  std::vector<Violation> violations;
  /// Pairs already meeting in dimension >= k before projection.
  std::vector<Violation> preexisting;
  std::vector<std::string> rankDrops;
  /// No rank drop and no pair changed its intersection dimension.
  bool isomorphicallyProjectable = true;
};

ProjectabilityReport kProjectability(const std::vector<NamedPoint>& points, const TagMap& tag, Index k);

/// Connected components of the cosine-similarity graph on the rows of `x`
/// (edge iff cosine >= theta, zero rows isolated). Groups are sorted
/// internally and ordered by their smallest member.
std::vector<std::vector<std::size_t>> unsupervisedGroups(const Matrix& x, double theta);

/// Applies Q to every vertex and renormalizes. Throws KernelVertex with the
/// 1-based vertex position when a vertex maps to zero.
paths::ProjectivePath projectPath(const paths::ProjectivePath& path, const TagMap& tag);

}  // namespace semspace::project
