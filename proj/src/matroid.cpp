#include "semspace/matroid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "semspace/error.hpp"

namespace semspace::matroid {

namespace {

void checkShape(const Matrix& p) {
  if (p.rows() < 1 || p.rows() > p.cols()) {
    throw Error(ErrorKind::InvalidArgument, "minor enumeration needs 1 <= N <= M");
  }
}

double determinantOn(const Matrix& p, const MinorIndex& cols) {
  const Index n = p.rows();
  Matrix sub(n, n);
  for (Index c = 0; c < n; ++c) sub.col(c) = p.col(static_cast<Index>(cols[static_cast<std::size_t>(c)]));
  return sub.partialPivLu().determinant();
}

double resolveTau(const Matrix& p, const StratumOptions& options) {
  return options.tau ? *options.tau : defaultMinorTolerance(p);
}

void checkCap(const Matrix& p, const StratumOptions& options) {
  const auto count = binomial(static_cast<std::uint64_t>(p.cols()), static_cast<std::uint64_t>(p.rows()));
  if (count > options.cap) {
    throw Error(ErrorKind::TooManyMinors, "number of maximal minors exceeds the enumeration cap",
                count > static_cast<std::uint64_t>(std::numeric_limits<long long>::max())
                    ? std::numeric_limits<long long>::max()
                    : static_cast<long long>(count));
  }
}

}  // namespace

double minorDeterminant(const Matrix& p, const MinorIndex& cols) {
  if (static_cast<Index>(cols.size()) != p.rows() || p.rows() > p.cols()) {
    throw Error(ErrorKind::IndexError, "minor index must have exactly N entries");
  }
  for (std::size_t a = 0; a < cols.size(); ++a) {
    if (static_cast<Index>(cols[a]) >= p.cols() || (a > 0 && cols[a] <= cols[a - 1])) {
      throw Error(ErrorKind::IndexError, "minor index must be strictly increasing and in range");
    }
  }
  return determinantOn(p, cols);
}

double defaultMinorTolerance(const Matrix& p) {
  const double maxAbs = p.size() == 0 ? 0.0 : p.cwiseAbs().maxCoeff();
  return 1e-10 * std::pow(maxAbs, static_cast<double>(p.rows()));
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    const std::uint64_t factor = n - k + i;
    if (result > std::numeric_limits<std::uint64_t>::max() / factor) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    // result = C(n-k+i-1, i-1), so result * factor is divisible by i.
    result = result * factor / i;
  }
  return result;
}

MinorStream::MinorStream(const Matrix& p) : p_(&p) { checkShape(p); }

bool MinorStream::next() {
  if (done_) return false;
  const auto n = static_cast<std::size_t>(p_->rows());
  const auto m = static_cast<std::size_t>(p_->cols());
  if (!started_) {
    started_ = true;
    current_.resize(n);
    for (std::size_t a = 0; a < n; ++a) current_[a] = a;
    return true;
  }
  // Rightmost entry that can still move.
  std::size_t a = n;
  while (a > 0 && current_[a - 1] == m - n + (a - 1)) --a;
  if (a == 0) {
    done_ = true;
    return false;
  }
  ++current_[a - 1];
  for (std::size_t b = a; b < n; ++b) current_[b] = current_[b - 1] + 1;
  return true;
}

double MinorStream::determinant() const { return determinantOn(*p_, current_); }

MatroidStratum matroidStratum(const Matrix& p, const StratumOptions& options) {
  checkShape(p);
  checkCap(p, options);
  MatroidStratum out;
  out.tau = resolveTau(p, options);
  MinorStream stream(p);
  while (stream.next()) {
    ++out.examined;
    if (std::abs(stream.determinant()) > out.tau) out.members.push_back(stream.index());
  }
  return out;
}

std::string_view toString(GaleRelation r) {
  switch (r) {
    case GaleRelation::Leq: return "leq";
    case GaleRelation::Geq: return "geq";
    case GaleRelation::Equal: return "equal";
    case GaleRelation::Incomparable: return "incomparable";
  }
  return "incomparable";
}

GaleRelation galeCompare(MinorIndex i, MinorIndex j) {
  if (i.size() != j.size()) throw Error(ErrorKind::SizeMismatch, "Gale comparison of subsets of different size");
  std::sort(i.begin(), i.end());
  std::sort(j.begin(), j.end());
  bool leq = true, geq = true;
  for (std::size_t a = 0; a < i.size(); ++a) {
    if (i[a] > j[a]) leq = false;
    if (i[a] < j[a]) geq = false;
  }
  if (leq && geq) return GaleRelation::Equal;
  if (leq) return GaleRelation::Leq;
  if (geq) return GaleRelation::Geq;
  return GaleRelation::Incomparable;
}

MinorIndex pullback(const MinorIndex& i, std::span<const std::size_t> sigma) {
  std::vector<std::size_t> inverse(sigma.size(), sigma.size());
  for (std::size_t g = 0; g < sigma.size(); ++g) {
    if (sigma[g] >= sigma.size() || inverse[sigma[g]] != sigma.size()) {
      throw Error(ErrorKind::InvalidArgument, "sigma is not a permutation");
    }
    inverse[sigma[g]] = g;
  }
  MinorIndex out;
  out.reserve(i.size());
  for (std::size_t v : i) {
    if (v >= sigma.size()) throw Error(ErrorKind::IndexError, "index outside the permutation domain");
    out.push_back(inverse[v]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

GaleRelation galeCompareUnderPermutation(const MinorIndex& i, const MinorIndex& j,
                                         std::span<const std::size_t> sigma) {
  if (i.size() != j.size()) throw Error(ErrorKind::SizeMismatch, "Gale comparison of subsets of different size");
  return galeCompare(pullback(i, sigma), pullback(j, sigma));
}

NonnegativityVerdict isTotallyNonnegative(const Matrix& p, const StratumOptions& options) {
  checkShape(p);
  checkCap(p, options);
  NonnegativityVerdict out;
  out.tau = resolveTau(p, options);
  MinorStream stream(p);
  while (stream.next()) {
    const double det = stream.determinant();
    if (det < -out.tau) {
      out.totallyNonnegative = false;
      out.witness = stream.index();
      out.witnessValue = det;
      break;
    }
  }
  return out;
}

PositroidVerdict positroidCellCheck(const Matrix& p, const StratumOptions& options) {
  checkShape(p);
  checkCap(p, options);
  PositroidVerdict out;
  out.tau = resolveTau(p, options);
  StratumOptions resolved = options;
  resolved.tau = out.tau;

  const auto tnn = isTotallyNonnegative(p, resolved);
  if (!tnn.totallyNonnegative) {
    out.reason = "negative maximal minor";
    out.witness = tnn.witness;
    return out;
  }
  const auto stratum = matroidStratum(p, resolved);
  if (stratum.members.empty()) {
    out.reason = "rank deficient: empty matroid stratum";
    return out;
  }
  for (const auto& idx : stratum.members) {
    if (!(minorDeterminant(p, idx) > out.tau)) {
      out.reason = "nonvanishing minor is not positive";
      out.witness = idx;
      return out;
    }
  }
  out.inCell = true;
  out.reason = "all nonvanishing maximal minors positive";
  return out;
}

}  // namespace semspace::matroid
