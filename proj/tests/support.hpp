#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "semspace/error.hpp"
#include "semspace/geom.hpp"

namespace semspace::testing {

/// Kind of the Error thrown by f, or nullopt when f returns normally.
template <class F>
std::optional<ErrorKind> errorKind(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

template <class F>
bool throwsKind(F&& f, ErrorKind kind) {
  return errorKind(std::forward<F>(f)) == kind;
}

/// Seeded source for the property tests. Every generator draws from the one
/// engine so a failing case is reproduced by its seed alone.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : engine_(seed) {}

  std::mt19937_64& engine() { return engine_; }

  double normal() { return normal_(engine_); }
  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  std::size_t index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(engine_);
  }

  Matrix gaussian(Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index c = 0; c < cols; ++c)
      for (Index r = 0; r < rows; ++r) m(r, c) = normal();
    return m;
  }

  Vector gaussianVector(Index n) { return gaussian(n, 1).col(0); }

  Matrix orthogonal(Index n) { return orthonormalizeColumns(gaussian(n, n)); }

  geom::GrassmannPoint grassmann(Index m, Index k) {
    return geom::GrassmannPoint::fromOrthonormal(orthonormalizeColumns(gaussian(m, k)));
  }

  geom::ProjectivePoint projective(Index m) { return geom::ProjectivePoint::fromVector(gaussianVector(m)); }

  geom::FlagPoint flag(Index m, Index length) { return geom::flagPoint(gaussian(length, m)); }

  /// rows x cols matrix with the given singular values and random singular vectors.
  Matrix withSingularValues(Index rows, Index cols, const Vector& sigma) {
    const Index r = sigma.size();
    return orthonormalizeColumns(gaussian(rows, r)) * sigma.asDiagonal() *
           orthonormalizeColumns(gaussian(cols, r)).transpose();
  }

  /// Singular values with sigma_k / sigma_{k+1} >= ratio: the top k drawn in
  /// [1, 2], the rest below 1 / ratio.
  Vector gappedSpectrum(Index r, Index k, double ratio) {
    std::vector<double> top, rest;
    for (Index i = 0; i < k; ++i) top.push_back(uniform(1.0, 2.0));
    for (Index i = k; i < r; ++i) rest.push_back(uniform(0.05, 1.0 / ratio));
    std::sort(top.rbegin(), top.rend());
    std::sort(rest.rbegin(), rest.rend());
    Vector s(r);
    for (Index i = 0; i < r; ++i) s(i) = i < k ? top[static_cast<std::size_t>(i)] : rest[static_cast<std::size_t>(i - k)];
    return s;
  }

  /// Point at geodesic distance `distance` from `base` in a random direction.
  geom::GrassmannPoint near(const geom::GrassmannPoint& base, double distance) {
    const Matrix& y = base.basis();
    Matrix delta = gaussian(y.rows(), y.cols());
    delta -= y * (y.transpose() * delta);
    delta *= distance / delta.norm();
    return geom::expMap(base, delta);
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace semspace::testing
