#include "semspace/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "semspace/error.hpp"

namespace semspace::corpus {

namespace {

bool isValidUtf8(const std::string& s) {
  std::size_t i = 0;
  const std::size_t n = s.size();
  while (i < n) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t extra = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      extra = 1;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + extra >= n) return false;
    for (std::size_t k = 1; k <= extra; ++k) {
      const auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    // Overlong forms, surrogates, out of range.
    if ((extra == 1 && cp < 0x80) || (extra == 2 && cp < 0x800) || (extra == 3 && cp < 0x10000) ||
        cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      return false;
    }
    i += extra + 1;
  }
  return true;
}

bool isWordByte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

}  // namespace

TokenStream tokenize(const Document& doc, const TokenizerConfig& config) {
  if (!isValidUtf8(doc.raw)) {
    throw Error(ErrorKind::InvalidEncoding, "document is not valid UTF-8", std::nullopt, doc.id);
  }

  TokenStream out;
  bool pendingSentence = false;
  bool pendingParagraph = false;
  int newlineRun = 0;

  auto emit = [&](std::string word) {
    if (config.lowercase) {
      for (char& ch : word) {
        if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
      }
    }
    if (auto it = config.normalization.find(word); it != config.normalization.end()) {
      word = it->second;
    }
    if (word.empty() || config.stoplist.contains(word)) return;
    if (!out.tokens.empty()) {
      const std::size_t pos = out.tokens.size();
      if (pendingParagraph) {
        out.paragraphStarts.push_back(pos);
        out.sentenceStarts.push_back(pos);
      } else if (pendingSentence) {
        out.sentenceStarts.push_back(pos);
      }
    }
    pendingSentence = false;
    pendingParagraph = false;
    out.tokens.push_back(std::move(word));
  };

  const std::string& raw = doc.raw;
  std::size_t i = 0;
  while (i < raw.size()) {
    const auto c = static_cast<unsigned char>(raw[i]);
    if (isWordByte(c)) {
      std::size_t j = i;
      while (j < raw.size() && isWordByte(static_cast<unsigned char>(raw[j]))) ++j;
      emit(raw.substr(i, j - i));
      newlineRun = 0;
      i = j;
      continue;
    }
    if (c == '\n') {
      if (++newlineRun >= 2) pendingParagraph = true;
    } else if (c == '.' || c == '!' || c == '?') {
      pendingSentence = true;
      newlineRun = 0;
    } else if (c != ' ' && c != '\t' && c != '\r') {
      newlineRun = 0;
    }
    ++i;
  }

  if (out.tokens.empty()) {
    throw Error(ErrorKind::EmptyDocument, "no tokens left after filtering", std::nullopt, doc.id);
  }
  return out;
}

ContextSegmentation segmentContexts(const TokenStream& stream, const SegmentationPolicy& policy) {
  const std::size_t n = stream.tokens.size();
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "cannot segment an empty token stream");

  ContextSegmentation seg{policy, {}};
  auto partitionAt = [&](const std::vector<std::size_t>& starts) {
    std::size_t begin = 0;
    for (std::size_t s : starts) {
      if (s > begin && s < n) {
        seg.contexts.push_back({begin, s});
        begin = s;
      }
    }
    seg.contexts.push_back({begin, n});
  };

  switch (policy.kind) {
    case SegmentationPolicy::Kind::Sentence:
      partitionAt(stream.sentenceStarts);
      break;
    case SegmentationPolicy::Kind::Paragraph:
      partitionAt(stream.paragraphStarts);
      break;
    case SegmentationPolicy::Kind::Window: {
      if (policy.width < 1 || policy.stride < 1) {
        throw Error(ErrorKind::InvalidArgument, "window width and stride must be >= 1");
      }
      for (std::size_t start = 0; start < n; start += policy.stride) {
        const std::size_t end = std::min(start + policy.width, n);
        seg.contexts.push_back({start, end});
        if (end == n) break;
      }
      break;
    }
  }
  return seg;
}

Dictionary::Dictionary(std::vector<std::string> lexemes, DictionaryOrdering ordering,
                       std::set<std::string> stoplist)
    : lexemes_(std::move(lexemes)), ordering_(ordering), stoplist_(std::move(stoplist)) {
  index_.reserve(lexemes_.size());
  for (std::size_t i = 0; i < lexemes_.size(); ++i) {
    if (stoplist_.contains(lexemes_[i])) {
      throw Error(ErrorKind::InvalidArgument, "dictionary lexeme is in the stoplist", std::nullopt,
                  lexemes_[i]);
    }
    if (!index_.emplace(lexemes_[i], i).second) {
      throw Error(ErrorKind::InvalidArgument, "duplicate dictionary lexeme", std::nullopt,
                  lexemes_[i]);
    }
  }
}

std::optional<std::size_t> Dictionary::indexOf(const std::string& lexeme) const {
  if (auto it = index_.find(lexeme); it != index_.end()) return it->second;
  return std::nullopt;
}

Dictionary buildDictionary(std::span<const TokenStream> texts, DictionaryOrdering ordering,
                           const std::set<std::string>& stoplist) {
  if (texts.empty()) throw Error(ErrorKind::InvalidArgument, "corpus is empty");

  std::vector<std::string> apparition;
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& text : texts) {
    for (const auto& tok : text.tokens) {
      if (stoplist.contains(tok)) continue;
      auto [it, inserted] = counts.emplace(tok, 0);
      if (inserted) apparition.push_back(tok);
      ++it->second;
    }
  }

  if (ordering == DictionaryOrdering::Frequency) {
    std::stable_sort(apparition.begin(), apparition.end(),
                     [&](const std::string& a, const std::string& b) { return counts[a] > counts[b]; });
  }
  return Dictionary(std::move(apparition), ordering, stoplist);
}

ApparitionPermutation apparitionPermutation(const Dictionary& global,
                                            std::span<const std::string> textTokens) {
  const std::size_t m = global.size();
  ApparitionPermutation out;
  out.sigma.assign(m, m);
  std::vector<bool> seen(m, false);
  for (const auto& tok : textTokens) {
    const auto idx = global.indexOf(tok);
    if (!idx) throw Error(ErrorKind::OutOfVocabulary, "text lexeme missing from dictionary", std::nullopt, tok);
    if (!seen[*idx]) {
      seen[*idx] = true;
      out.order.push_back(*idx);
    }
  }
  for (std::size_t g = 0; g < m; ++g) {
    if (!seen[g]) out.order.push_back(g);
  }
  for (std::size_t a = 0; a < m; ++a) out.sigma[out.order[a]] = a;
  return out;
}

CountMatrix countMatrix(std::span<const std::string> tokens, const ContextSegmentation& segmentation,
                        const Dictionary& dict) {
  const auto contexts = static_cast<Index>(segmentation.contexts.size());
  CountMatrix cm{CountArray::Zero(static_cast<Index>(dict.size()), contexts)};
  for (Index j = 0; j < contexts; ++j) {
    const auto& range = segmentation.contexts[static_cast<std::size_t>(j)];
    if (range.begin > range.end || range.end > tokens.size()) {
      throw Error(ErrorKind::InvalidArgument, "context range outside the token stream");
    }
    for (std::size_t t = range.begin; t < range.end; ++t) {
      const auto idx = dict.indexOf(tokens[t]);
      if (!idx) {
        throw Error(ErrorKind::OutOfVocabulary, "token missing from dictionary", std::nullopt, tokens[t]);
      }
      ++cm.counts(static_cast<Index>(*idx), j);
    }
  }
  return cm;
}

FrequencyMatrix FrequencyMatrix::fromProbabilities(Matrix p) {
  if (p.size() == 0) throw Error(ErrorKind::EmptyCounts, "empty probability matrix");
  if (p.minCoeff() < 0.0) throw Error(ErrorKind::InvalidArgument, "negative probability");
  if (std::abs(p.sum() - 1.0) > 1e-12) {
    throw Error(ErrorKind::InvalidArgument, "probabilities do not sum to 1");
  }
  FrequencyMatrix fm;
  fm.rowMarginals = p.rowwise().sum();
  fm.colMarginals = p.colwise().sum().transpose();
  fm.p = std::move(p);
  return fm;
}

FrequencyMatrix frequencyMatrix(const CountMatrix& cm) {
  if (cm.counts.size() > 0 && cm.counts.minCoeff() < 0) {
    throw Error(ErrorKind::InvalidArgument, "negative count");
  }
  const std::int64_t total = cm.counts.size() == 0 ? 0 : cm.total();
  if (total <= 0) throw Error(ErrorKind::EmptyCounts, "count matrix is identically zero");
  FrequencyMatrix fm;
  fm.p = cm.counts.cast<double>() / static_cast<double>(total);
  fm.rowMarginals = fm.p.rowwise().sum();
  fm.colMarginals = fm.p.colwise().sum().transpose();
  return fm;
}

PpmiMatrix ppmiMatrix(const FrequencyMatrix& fm) {
  PpmiMatrix out{Matrix::Zero(fm.p.rows(), fm.p.cols())};
  for (Index j = 0; j < fm.p.cols(); ++j) {
    for (Index i = 0; i < fm.p.rows(); ++i) {
      const double pij = fm.p(i, j);
      if (pij <= 0.0) continue;
      const double v = std::log(pij / (fm.rowMarginals(i) * fm.colMarginals(j)));
      if (v > kPpmiBoundaryTolerance) out.x(i, j) = v;
    }
  }
  return out;
}

EntropyWeighting entropyWeight(const Matrix& m) {
  if (m.size() > 0 && m.minCoeff() < 0.0) {
    throw Error(ErrorKind::InvalidArgument, "entropy weighting needs a nonnegative matrix");
  }
  EntropyWeighting out{Vector::Zero(m.rows()), Matrix::Zero(m.rows(), m.cols()), {}};
  for (Index i = 0; i < m.rows(); ++i) {
    const double rowSum = m.row(i).sum();
    if (rowSum <= 0.0) {
      out.zeroRows.push_back(static_cast<std::size_t>(i));
      continue;
    }
    double s = 0.0;
    for (Index c = 0; c < m.cols(); ++c) {
      const double q = m(i, c) / rowSum;
      if (q > 0.0) s -= q * std::log(q);
    }
    out.entropy(i) = s;
    const double weight = s > 0.0 ? 1.0 / s : 1.0;
    for (Index c = 0; c < m.cols(); ++c) out.weighted(i, c) = weight * std::log1p(m(i, c));
  }
  return out;
}

EntropyWeighting entropyWeight(const FrequencyMatrix& fm) { return entropyWeight(fm.p); }

ZipfFit zipfFit(std::span<const double> frequencies) {
  std::vector<double> f;
  for (double v : frequencies) {
    if (v > 0.0) f.push_back(v);
  }
  if (f.size() < 3) {
    throw Error(ErrorKind::InsufficientData, "Zipf fit needs at least 3 positive frequencies",
                static_cast<long long>(f.size()));
  }
  std::sort(f.begin(), f.end(), std::greater<>());

  const auto n = f.size();
  std::vector<double> x(n), y(n);
  for (std::size_t k = 0; k < n; ++k) {
    x[k] = std::log(static_cast<double>(k + 1));
    y[k] = std::log(f[k]);
  }
  const double xm = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double ym = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sxx += (x[k] - xm) * (x[k] - xm);
    sxy += (x[k] - xm) * (y[k] - ym);
  }
  const double slope = sxy / sxx;

  ZipfFit fit;
  fit.exponent = -slope;
  fit.kappa = ym - slope * xm;
  double ss = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double r = y[k] - (fit.kappa + slope * x[k]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / static_cast<double>(n));
  fit.ranksUsed = n;
  return fit;
}

std::vector<double> tokenFrequencies(const Dictionary& dict, std::span<const TokenStream> texts) {
  std::vector<double> freq(dict.size(), 0.0);
  for (const auto& text : texts) {
    for (const auto& tok : text.tokens) {
      if (auto idx = dict.indexOf(tok)) freq[*idx] += 1.0;
    }
  }
  return freq;
}

}  // namespace semspace::corpus
