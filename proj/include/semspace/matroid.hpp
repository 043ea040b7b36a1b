#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "semspace/linalg.hpp"

namespace semspace::matroid {

/// Strictly increasing 0-based column indices.
using MinorIndex = std::vector<std::size_t>;

inline constexpr std::uint64_t kDefaultEnumerationCap = 2'000'000;

/// Determinant of the N x N submatrix of the N x M matrix `p` on columns `cols`.
double minorDeterminant(const Matrix& p, const MinorIndex& cols);

/// 1e-10 * (max |entry|)^N, which scales like the minors under row scaling.
double defaultMinorTolerance(const Matrix& p);

/// Binomial coefficient saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// Lexicographic stream over all N-subsets of {0..M-1} with their minors.
class MinorStream {
 public:
  explicit MinorStream(const Matrix& p);

  /// Advances to the next subset; returns false when exhausted.
  bool next();
  const MinorIndex& index() const { return current_; }
  double determinant() const;

 private:
  const Matrix* p_;
  MinorIndex current_;
  bool started_ = false;
  bool done_ = false;
};

struct MatroidStratum {
  std::vector<MinorIndex> members;
  double tau = 0.0;
  std::uint64_t examined = 0;
};

struct StratumOptions {
  std::optional<double> tau;  // default: defaultMinorTolerance
  std::uint64_t cap = kDefaultEnumerationCap;
};

/// Exact enumeration of {I : |Δ_I| > tau}. Throws TooManyMinors when C(M, N)
/// exceeds the cap; stream with MinorStream instead.
MatroidStratum matroidStratum(const Matrix& p, const StratumOptions& options = {});

enum class GaleRelation { Leq, Geq, Equal, Incomparable };

std::string_view toString(GaleRelation r);

/// Componentwise comparison of the sorted index lists. Throws SizeMismatch
/// for different cardinalities.
GaleRelation galeCompare(MinorIndex i, MinorIndex j);

/// Compares σ⁻¹I with σ⁻¹J, where sigma[g] is the image of g.
GaleRelation galeCompareUnderPermutation(const MinorIndex& i, const MinorIndex& j,
                                         std::span<const std::size_t> sigma);

/// σ⁻¹I, sorted.
MinorIndex pullback(const MinorIndex& i, std::span<const std::size_t> sigma);

struct NonnegativityVerdict {
  bool totallyNonnegative = true;
  std::optional<MinorIndex> witness;  // lexicographically first minor below -tau
  double witnessValue = 0.0;
  double tau = 0.0;
};

NonnegativityVerdict isTotallyNonnegative(const Matrix& p, const StratumOptions& options = {});

struct PositroidVerdict {
  bool inCell = false;
  std::string reason;
  std::optional<MinorIndex> witness;
  double tau = 0.0;
};

/// True when all maximal minors are >= -tau and every nonvanishing one is
/// > tau. Rank-deficient input (empty stratum) fails with an explicit reason.
PositroidVerdict positroidCellCheck(const Matrix& p, const StratumOptions& options = {});

}  // namespace semspace::matroid
