#pragma once

#include <string_view>
#include <vector>

#include "semspace/error.hpp"
#include "semspace/geom.hpp"

namespace semspace::latent {

/// Thin SVD truncated at the numerical rank. Signs are fixed so the
/// largest-magnitude entry of every left singular vector is positive.
struct SvdResult {
  Matrix u;      // M x r
  Vector sigma;  // r, nonincreasing, positive
  Matrix v;      // N x r
  Index rank = 0;
};

SvdResult svd(const Matrix& p, double relTol = kRankTolerance);

/// Best rank-k approximation U_k Σ_k V_kᵀ. Throws InvalidTruncation unless
/// 1 <= k <= rank.
Matrix truncate(const SvdResult& s, Index k);

/// Term co-occurrence matrix PᵀP.
Matrix cooccurrence(const Matrix& p);

// -- Perron chart ------------------------------------------------------------
// A acts on lines x = (1, y) by x -> A x; in the chart y -> (A3 + A4 y) / (A1 + A2 y)
// with A1 scalar, A2 a row, A3 a column and A4 the trailing block.

/// One chart step. Throws ChartEscape when A1 + A2 y vanishes.
Vector perronChartStep(const Matrix& a, const Vector& y);

/// ‖A3 + A4 y - y A1 - y (A2 y)‖, zero exactly at chart fixed points.
double perronStationarityResidual(const Matrix& a, const Vector& y);

struct PerronChartResult {
  Vector y;
  std::size_t iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

/// Iterates the chart map until successive iterates differ by at most
/// tol * (1 + ‖y‖), or the step is below 1e-8 * (1 + ‖y‖) and has not reached
/// a new minimum for 100 steps (the rounding floor), or maxIter steps were taken.
PerronChartResult perronChartIterate(const Matrix& a, Vector y0, double tol = 1e-14,
                                     std::size_t maxIter = 1'000'000);

/// Unit vector of the line (1, y).
Vector chartLine(const Vector& y);

// -- Grassmannian chart and Riccati flow ---------------------------------------

/// Blocks of A in the splitting R^N = U ⊕ W given by the columns of an
/// orthogonal frame [U | W]; the chart point L : U -> W is the graph
/// span(frame · [I; L]).
class ChartState {
 public:
  /// Coordinate splitting: U = first k axes.
  static ChartState fromBlocks(Matrix a1, Matrix a2, Matrix a3, Matrix a4);
  static ChartState coordinate(const Matrix& a, Index k);
  /// Splitting rotated so that U = span(v0) and W is its orthogonal complement.
  static ChartState around(const Matrix& a, const geom::GrassmannPoint& v0);

  Index k() const { return a1_.rows(); }
  Index n() const { return frame_.rows(); }
  const Matrix& frame() const { return frame_; }
  const Matrix& a1() const { return a1_; }
  const Matrix& a2() const { return a2_; }
  const Matrix& a3() const { return a3_; }
  const Matrix& a4() const { return a4_; }

  /// A3 + A4 L - L A1 - L A2 L.
  Matrix riccatiField(const Matrix& l) const;
  /// Chart step (A3 + A4 L)(A1 + A2 L)^{-1}; throws ChartEscape on a singular denominator.
  Matrix step(const Matrix& l) const;
  /// L finite with ‖L‖ <= 1e10 and σ_min(A1 + A2 L) > 1e-10 (‖A1‖ + ‖A2‖ ‖L‖).
  bool inChart(const Matrix& l) const;

  geom::GrassmannPoint subspace(const Matrix& l) const;
  /// Inverse of subspace(); throws ChartEscape for points outside the chart.
  Matrix coordinate(const geom::GrassmannPoint& p) const;

 private:
  ChartState(Matrix frame, Matrix a1, Matrix a2, Matrix a3, Matrix a4);
  Matrix frame_, a1_, a2_, a3_, a4_;
};

/// ChartEscape raised by the Riccati integrator, carrying the last state that
/// was still inside the chart.
class ChartEscapeError : public Error {
 public:
  ChartEscapeError(const std::string& message, Matrix lastValid, double time)
      : Error(ErrorKind::ChartEscape, message), lastValid_(std::move(lastValid)), time_(time) {}
  const Matrix& lastValid() const { return lastValid_; }
  double time() const { return time_; }

 private:
  Matrix lastValid_;
  double time_;
};

struct RiccatiOptions {
  double step = 0.0;      // 0 selects 0.05 / ‖A‖₂
  double maxTime = 0.0;   // 0 selects 200000 steps
  double tol = 1e-9;      // stop once ‖dL/dt‖_F < tol
  std::size_t sampleEvery = 50;
};

struct RiccatiSample {
  double t = 0.0;
  Matrix l;
};

struct RiccatiResult {
  Matrix l;
  double time = 0.0;
  std::size_t steps = 0;
  double residual = 0.0;  // ‖dL/dt‖_F at l
  bool converged = false;
  std::vector<RiccatiSample> trajectory;
};

/// Classic fourth-order Runge-Kutta integration of dL/dt = A3 + A4 L - L A1 - L A2 L.
RiccatiResult riccatiFlow(const ChartState& chart, Matrix l0, const RiccatiOptions& options = {});

// -- Power sequence ------------------------------------------------------------

struct PowerOptions {
  double tol = 1e-12;
  std::size_t maxIter = 100'000;
};

struct PowerResult {
  geom::GrassmannPoint limit;
  std::size_t iterations = 0;
  /// Observed contraction of successive steps, an estimate of |λ_{k+1}| / |λ_k|.
  double gapEstimate = 0.0;
  /// Eigenvalues of the Rayleigh quotient VᵀAV at the limit, by decreasing modulus.
  Vector rayleighValues;
};

/// Iterates V <- orth(A V). Throws NoGap when |λ_k| = |λ_{k+1}| at relative
/// tolerance 1e-10 or the iteration stalls, DegenerateStart when v0 meets the
/// complementary eigenspace.
PowerResult grassmannPowerSequence(const Matrix& a, const geom::GrassmannPoint& v0, const PowerOptions& options = {});

enum class LatentMethod { Svd, Power, Riccati };

std::string_view toString(LatentMethod m);
LatentMethod parseLatentMethod(std::string_view name);

struct LatentOptions {
  PowerOptions power;
  RiccatiOptions riccati;
};

/// Top-k latent context subspace of P in G(k, N): span of the k leading
/// right singular vectors, equivalently the dominant eigenspace of PᵀP.
geom::GrassmannPoint latentSubspace(const Matrix& p, Index k, LatentMethod method, const LatentOptions& options = {});

/// Deterministic start for the iterative methods: A applied to the k
/// coordinate axes with the largest diagonal entries of A.
geom::GrassmannPoint defaultStart(const Matrix& a, Index k);

}  // namespace semspace::latent
