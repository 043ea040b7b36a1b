#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "semspace/error.hpp"
#include "semspace/geom.hpp"
#include "semspace/topology.hpp"

namespace semspace::consensus {

/// Lexeme-by-context matrix of one text as seen by one user.
struct TextMatrix {
  std::string textId;
  Matrix values;  // M x (contexts of the text)
};

struct UserCorpus {
  std::string userId;
  std::vector<std::string> dictionary;
  std::vector<TextMatrix> texts;
};

struct ContextRef {
  std::string textId;
  Index position = 0;
};

/// A user's matrix over the merged context list; columns of texts the user
/// does not hold are zero.
struct UserView {
  std::string userId;
  std::vector<std::string> corpusIds;
  Matrix matrix;
};

struct MergedCorpus {
  std::vector<std::string> dictionary;
  std::vector<ContextRef> contexts;  // texts sorted by id, contexts by position
  std::vector<UserView> views;       // in input order
};

/// Throws DictionaryMismatch when the users' dictionaries differ and
/// DimensionMismatch when one text has different context counts.
MergedCorpus mergeCorpora(std::span<const UserCorpus> users);

/// Row span of the view in Gr(M, N_total); RankDeficient carries the user id.
geom::GrassmannPoint userPoint(const UserView& view);

/// Nonnegative, summing to one within 1e-12.
void validateWeights(std::span<const double> weights, std::size_t count);
std::vector<double> uniformWeights(std::size_t count);

/// V(p) = Σ λ_α δ(p_α, p)².
double potential(std::span<const geom::GrassmannPoint> points, std::span<const double> weights,
                 const geom::GrassmannPoint& p);

/// Σ λ_α log_p(p_α), half the negative Riemannian gradient of V.
Matrix descentDirection(std::span<const geom::GrassmannPoint> points, std::span<const double> weights,
                        const geom::GrassmannPoint& p);

struct KarcherOptions {
  double step = 0.5;
  double tol = 1e-10;
  std::size_t maxIter = 10'000;
};

struct KarcherResult {
  geom::GrassmannPoint point;
  double finalGradNorm = 0.0;
  std::size_t iterations = 0;
  std::size_t backtracks = 0;
  std::vector<double> gradNormTrace;   // one entry per visited iterate
  std::vector<double> potentialTrace;  // same length
  double maxPairwiseDistance = 0.0;
  bool convexityOk = true;  // maxPairwiseDistance < π/2
};

class NoConvergenceError : public Error {
 public:
  NoConvergenceError(const std::string& message, KarcherResult last)
      : Error(ErrorKind::NoConvergence, message), last_(std::move(last)) {}
  const KarcherResult& last() const { return last_; }

 private:
  KarcherResult last_;
};

/// Weighted geodesic barycenter by gradient descent p <- exp_p(h Σ λ_α log_p p_α)
/// from the highest-weight point (first on ties). A step whose potential
/// exceeds the current one by more than rounding is retried with h halved.
KarcherResult karcherBarycenter(std::span<const geom::GrassmannPoint> points, std::span<const double> weights,
                                const KarcherOptions& options = {});

/// Vertex-wise barycenter of paths given in several languages. Empty weights
/// mean uniform; otherwise one weight per language.
std::vector<geom::ProjectivePoint> crossLanguageAverage(
    const std::map<std::string, std::vector<geom::ProjectivePoint>>& pointsByLanguage,
    const std::map<std::string, double>& weights = {}, const KarcherOptions& options = {});

struct UserMembership {
  std::string userId;
  std::vector<std::size_t> points;  // indices into the merged distance matrix
};

/// Greedy matching of two barcodes in one dimension. Pairs are taken by
/// increasing sup-norm cost; unmatched bars cost half their length.
struct BarcodeMatching {
  int dim = 0;
  std::size_t matched = 0;
  std::size_t unmatchedLeft = 0;
  std::size_t unmatchedRight = 0;
  double cost = 0.0;
};

BarcodeMatching greedyMatch(const topology::Barcode& a, const topology::Barcode& b, int dim);

struct UserComplexSummary {
  std::string userId;
  std::vector<std::size_t> points;
  topology::Barcode barcode;
  std::vector<BarcodeMatching> comparison;  // dims 0 and 1 against the merged barcode
};

struct MergedComplexSummary {
  double epsilon = 0.0;
  topology::FilteredComplex complex;
  topology::Barcode barcode;
  /// For every simplex of the merged complex, the users holding all its vertices.
  std::vector<std::vector<std::size_t>> owners;
  std::vector<UserComplexSummary> users;
};

MergedComplexSummary barycentricComplexMerge(const topology::DistanceMatrix& merged,
                                             std::span<const UserMembership> users, double epsilon,
                                             int maxDim = 2);

}  // namespace semspace::consensus
