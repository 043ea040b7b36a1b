#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "semspace/linalg.hpp"

namespace semspace::corpus {

struct Document {
  std::string id;
  std::string raw;
  std::optional<std::string> language;
};

struct TokenizerConfig {
  std::set<std::string> stoplist;
  bool lowercase = true;
  /// Optional surface-form -> lexeme table applied after lowercasing and
  /// before the stoplist.
  std::map<std::string, std::string> normalization;
};

/// Filtered tokens of one document plus the structural boundaries seen while
/// scanning it. Boundaries are token positions at which a new sentence or
/// paragraph starts (never 0, strictly increasing).
struct TokenStream {
  std::vector<std::string> tokens;
  std::vector<std::size_t> sentenceStarts;
  std::vector<std::size_t> paragraphStarts;
};

/// Splits `doc.raw` into maximal alphabetic runs. Bytes >= 0x80 count as
/// letters so UTF-8 words stay whole; only ASCII letters are lowercased.
/// Throws EmptyDocument when nothing survives filtering and InvalidEncoding
/// on malformed UTF-8.
TokenStream tokenize(const Document& doc, const TokenizerConfig& config);

struct SegmentationPolicy {
  enum class Kind { Sentence, Paragraph, Window };
  Kind kind = Kind::Sentence;
  std::size_t width = 0;
  std::size_t stride = 0;

  static SegmentationPolicy sentence() { return {Kind::Sentence, 0, 0}; }
  static SegmentationPolicy paragraph() { return {Kind::Paragraph, 0, 0}; }
  static SegmentationPolicy window(std::size_t width, std::size_t stride) {
    return {Kind::Window, width, stride};
  }
};

/// Half-open token range [begin, end).
struct ContextRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool operator==(const ContextRange&) const = default;
};

struct ContextSegmentation {
  SegmentationPolicy policy;
  std::vector<ContextRange> contexts;
};

ContextSegmentation segmentContexts(const TokenStream& stream, const SegmentationPolicy& policy);

enum class DictionaryOrdering { Apparition, Frequency, External };

class Dictionary {
 public:
  Dictionary() = default;
  /// Validates distinctness and stoplist exclusion.
  Dictionary(std::vector<std::string> lexemes, DictionaryOrdering ordering,
             std::set<std::string> stoplist = {});

  const std::vector<std::string>& lexemes() const { return lexemes_; }
  DictionaryOrdering ordering() const { return ordering_; }
  const std::set<std::string>& stoplist() const { return stoplist_; }
  std::size_t size() const { return lexemes_.size(); }
  std::optional<std::size_t> indexOf(const std::string& lexeme) const;
  const std::string& operator[](std::size_t i) const { return lexemes_[i]; }

 private:
  std::vector<std::string> lexemes_;
  DictionaryOrdering ordering_ = DictionaryOrdering::External;
  std::set<std::string> stoplist_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Apparition ordering scans texts in the given order; frequency ordering
/// sorts by decreasing total count with ties broken by apparition.
Dictionary buildDictionary(std::span<const TokenStream> texts, DictionaryOrdering ordering,
                           const std::set<std::string>& stoplist = {});

/// `order[a]` is the global index of the lexeme at apparition position a;
/// `sigma[g]` is the apparition position of global index g. Lexemes absent
/// from the text follow the present ones in relative global order.
struct ApparitionPermutation {
  std::vector<std::size_t> order;
  std::vector<std::size_t> sigma;
};

ApparitionPermutation apparitionPermutation(const Dictionary& global,
                                            std::span<const std::string> textTokens);

using CountArray = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Lexemes by contexts. A token lying in several overlapping contexts is
/// counted once in each of them.
struct CountMatrix {
  CountArray counts;
  std::int64_t total() const { return counts.sum(); }
};

CountMatrix countMatrix(std::span<const std::string> tokens, const ContextSegmentation& segmentation,
                        const Dictionary& dict);

struct FrequencyMatrix {
  Matrix p;
  Vector rowMarginals;
  Vector colMarginals;

  /// Wraps an already-normalized probability matrix after checking it is
  /// nonnegative and sums to 1 within 1e-12.
  static FrequencyMatrix fromProbabilities(Matrix p);
};

FrequencyMatrix frequencyMatrix(const CountMatrix& cm);

struct PpmiMatrix {
  Matrix x;
};

/// Ratios within this distance of independence (log ratio <= tolerance) map
/// to exactly zero.
inline constexpr double kPpmiBoundaryTolerance = 1e-12;

PpmiMatrix ppmiMatrix(const FrequencyMatrix& fm);

struct EntropyWeighting {
  Vector entropy;                       // nats, one per row
  Matrix weighted;                      // S^{-1} log(1 + m), rows with S = 0 use weight 1
  std::vector<std::size_t> zeroRows;    // rows skipped because they are identically zero
};

/// Entropy weighting of the rows of any nonnegative matrix; the per-row
/// context distribution is the row normalized by its sum.
EntropyWeighting entropyWeight(const Matrix& nonnegative);
EntropyWeighting entropyWeight(const FrequencyMatrix& fm);

struct ZipfFit {
  double kappa = 0.0;
  double exponent = 0.0;   // B in log F = kappa - B log k
  double residual = 0.0;   // RMS of the log-log regression
  std::size_t ranksUsed = 0;
};

/// Ordinary least squares on (log k, log F_k) after sorting by decreasing
/// frequency; zero frequencies are dropped. Throws InsufficientData below 3
/// usable ranks.
ZipfFit zipfFit(std::span<const double> frequencies);

/// Total token count per dictionary entry across the given streams.
std::vector<double> tokenFrequencies(const Dictionary& dict, std::span<const TokenStream> texts);

}  // namespace semspace::corpus
