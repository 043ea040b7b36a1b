#pragma once

// Independent reference computations for the property tests. Each oracle
// takes a different route from the production code it checks.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <tuple>
#include <vector>

#include <Eigen/LU>

#include "semspace/linalg.hpp"

namespace semspace::oracle {

/// All k-subsets of {0..n-1} in lexicographic order, by bitmask filtering.
inline std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) s.push_back(i);
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Rank of the column submatrix by singular values.
inline Index columnRank(const Matrix& p, const std::vector<std::size_t>& cols) {
  Matrix sub(p.rows(), static_cast<Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) sub.col(static_cast<Index>(c)) = p.col(static_cast<Index>(cols[c]));
  return numericalRank(sub);
}

/// Minimum over every monotone coupling of the maximum coupled distance, by
/// exhaustive enumeration of lattice paths.
inline double frechetByCouplings(const Matrix& d) {
  const Index n = d.rows(), m = d.cols();
  double best = std::numeric_limits<double>::infinity();
  std::function<void(Index, Index, double)> walk = [&](Index i, Index j, double worst) {
    worst = std::max(worst, d(i, j));
    if (worst >= best) return;
    if (i == n - 1 && j == m - 1) {
      best = worst;
      return;
    }
    if (i + 1 < n) walk(i + 1, j, worst);
    if (j + 1 < m) walk(i, j + 1, worst);
    if (i + 1 < n && j + 1 < m) walk(i + 1, j + 1, worst);
  };
  walk(0, 0, 0.0);
  return best;
}

/// Rank over the two-element field of vectors packed into 64-bit words, by
/// building an echelon basis indexed by leading bit.
inline std::size_t rankGF2(const std::vector<std::uint64_t>& vectors) {
  std::uint64_t basis[64] = {};
  std::size_t rank = 0;
  for (std::uint64_t v : vectors) {
    for (int bit = 63; bit >= 0 && v; --bit) {
      if (!((v >> bit) & 1u)) continue;
      if (!basis[bit]) {
        basis[bit] = v;
        ++rank;
        v = 0;
      } else {
        v ^= basis[bit];
      }
    }
  }
  return rank;
}

struct OracleBar {
  int dim;
  double birth;
  double death;  // +inf for essential classes
  bool operator<(const OracleBar& o) const {
    return std::tie(dim, birth, death) < std::tie(o.dim, o.birth, o.death);
  }
  bool operator==(const OracleBar& o) const = default;
};

/// Vietoris-Rips barcode in dimensions 0..maxDim-1 from persistent Betti
/// numbers β_q^{a,b} = dim Z_q(K_a) - dim(B_q(K_b) ∩ C_q(K_a)), each obtained
/// from ranks of boundary matrices over GF(2), followed by inclusion-exclusion
/// over the grid of filtration values. Needs at most 64 simplices per dimension.
inline std::vector<OracleBar> ripsBarcode(const Matrix& dist, double maxScale, int maxDim) {
  const auto n = static_cast<std::size_t>(dist.rows());
  struct Cell {
    std::vector<std::size_t> v;
    double birth;
  };
  std::vector<std::vector<Cell>> cells(static_cast<std::size_t>(maxDim) + 1);
  for (int q = 0; q <= maxDim; ++q) {
    for (auto& s : subsets(n, static_cast<std::size_t>(q) + 1)) {
      double b = 0.0;
      for (std::size_t a = 0; a < s.size(); ++a)
        for (std::size_t c = a + 1; c < s.size(); ++c) b = std::max(b, dist(static_cast<Index>(s[a]), static_cast<Index>(s[c])));
      if (b <= maxScale) cells[static_cast<std::size_t>(q)].push_back({std::move(s), b});
    }
  }
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> values;
  for (const auto& level : cells)
    for (const auto& c : level) values.push_back(c.birth);
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  values.push_back(inf);
  const std::size_t t = values.size() - 1;

  // Columns of ∂_{q+1} over the q-cells, one bitmask per (q+1)-cell.
  std::vector<std::vector<std::uint64_t>> boundary(static_cast<std::size_t>(maxDim) + 1);
  for (int q = 1; q <= maxDim; ++q) {
    const auto& faces = cells[static_cast<std::size_t>(q) - 1];
    if (faces.size() > 64) throw std::invalid_argument("oracle limited to 64 simplices per dimension");
    for (const auto& c : cells[static_cast<std::size_t>(q)]) {
      std::uint64_t col = 0;
      for (std::size_t r = 0; r < faces.size(); ++r)
        if (std::includes(c.v.begin(), c.v.end(), faces[r].v.begin(), faces[r].v.end())) col |= std::uint64_t{1} << r;
      boundary[static_cast<std::size_t>(q)].push_back(col);
    }
  }
  auto faceMask = [&](int q, double a) {
    std::uint64_t m = 0;
    const auto& faces = cells[static_cast<std::size_t>(q)];
    for (std::size_t r = 0; r < faces.size(); ++r)
      if (faces[r].birth <= a) m |= std::uint64_t{1} << r;
    return m;
  };
  // rank of ∂_q on q-cells born <= b, with rows restricted by `rows`
  auto rankOf = [&](int q, double b, std::uint64_t rows) -> long {
    if (q < 1 || q > maxDim) return 0;
    std::vector<std::uint64_t> cols;
    const auto& cs = cells[static_cast<std::size_t>(q)];
    for (std::size_t c = 0; c < cs.size(); ++c)
      if (cs[c].birth <= b) cols.push_back(boundary[static_cast<std::size_t>(q)][c] & rows);
    return static_cast<long>(rankGF2(cols));
  };
  auto betti = [&](int q, double a, double b) -> long {
    long count = 0;
    for (const auto& c : cells[static_cast<std::size_t>(q)]) count += c.birth <= a ? 1 : 0;
    const long z = count - rankOf(q, a, ~std::uint64_t{0});
    const long all = rankOf(q + 1, b, ~std::uint64_t{0});
    const long outside = rankOf(q + 1, b, ~faceMask(q, a));
    return z - (all - outside);
  };

  std::vector<OracleBar> bars;
  for (int q = 0; q < maxDim; ++q) {
    std::map<std::pair<std::size_t, std::size_t>, long> memo;
    // β with a = values[i-1] (0 when i == 0) and b = values[j]
    auto beta = [&](std::size_t i, std::size_t j) -> long {
      if (i == 0) return 0;
      const auto key = std::make_pair(i, j);
      if (auto it = memo.find(key); it != memo.end()) return it->second;
      return memo[key] = betti(q, values[i - 1], values[j]);
    };
    for (std::size_t i = 1; i <= t; ++i) {
      for (std::size_t j = i; j <= t; ++j) {
        long mult;
        if (j == t) {
          mult = beta(i, t) - beta(i - 1, t);
        } else {
          mult = beta(i, j - 1) - beta(i, j) - beta(i - 1, j - 1) + beta(i - 1, j);
        }
        for (long r = 0; r < mult; ++r) bars.push_back({q, values[i - 1], j == t ? inf : values[j]});
      }
    }
  }
  std::sort(bars.begin(), bars.end());
  return bars;
}

/// dim(U ∩ W) from the kernel of [U, -W].
inline Index intersectionDimByKernel(const Matrix& u, const Matrix& w) {
  Matrix stacked(u.rows(), u.cols() + w.cols());
  stacked << u, -w;
  Eigen::FullPivLU<Matrix> lu(stacked);
  lu.setThreshold(1e-10);
  return lu.dimensionOfKernel();
}

}  // namespace semspace::oracle
