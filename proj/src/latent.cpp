#include "semspace/latent.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>

namespace semspace::latent {

namespace {

bool isSymmetric(const Matrix& a) {
  return (a - a.transpose()).norm() <= 1e-12 * std::max(a.norm(), 1.0);
}

double spectralNorm(const Matrix& a) {
  const Vector s = singularValues(a);
  return s.size() == 0 ? 0.0 : s(0);
}

// Eigenvalues by decreasing modulus together with the matching left
// eigenvectors (rows, unit norm). The rows of the top k span the annihilator
// of the complementary invariant subspace.
struct Spectrum {
  Eigen::VectorXcd values;
  Eigen::MatrixXcd left;
};

Spectrum spectrumOf(const Matrix& a) {
  const Index n = a.rows();
  Spectrum out;
  Eigen::VectorXcd values(n);
  Eigen::MatrixXcd left(n, n);
  if (isSymmetric(a)) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (a + a.transpose()));
    values = es.eigenvalues().cast<std::complex<double>>();
    left = es.eigenvectors().transpose().cast<std::complex<double>>();
  } else {
    Eigen::EigenSolver<Matrix> es(a);
    values = es.eigenvalues();
    left = es.eigenvectors().inverse();
  }
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index i, Index j) { return std::abs(values(i)) > std::abs(values(j)); });
  out.values.resize(n);
  out.left.resize(n, n);
  for (Index r = 0; r < n; ++r) {
    out.values(r) = values(order[static_cast<std::size_t>(r)]);
    out.left.row(r) = left.row(order[static_cast<std::size_t>(r)]).normalized();
  }
  return out;
}

void requireGap(const Spectrum& spec, Index k) {
  if (k >= spec.values.size()) return;
  const double top = std::abs(spec.values(k - 1));
  const double next = std::abs(spec.values(k));
  if (!(top > 0.0) || next >= top * (1.0 - 1e-10)) {
    throw Error(ErrorKind::NoGap, "no spectral gap between the k-th and (k+1)-th eigenvalue", static_cast<long long>(k));
  }
}

void requireAdmissibleStart(const Spectrum& spec, const geom::GrassmannPoint& v0) {
  const Index k = v0.k();
  if (k >= spec.values.size()) return;
  const Eigen::MatrixXcd pairing = spec.left.topRows(k) * v0.basis().cast<std::complex<double>>();
  const auto s = Eigen::JacobiSVD<Eigen::MatrixXcd>(pairing).singularValues();
  if (s(s.size() - 1) <= kRankTolerance) {
    throw Error(ErrorKind::DegenerateStart, "start subspace meets the complementary eigenspace");
  }
}

Matrix solveRight(const Matrix& numerator, const Matrix& denominator) {
  // X = numerator * denominator^{-1}
  return denominator.transpose().partialPivLu().solve(numerator.transpose()).transpose();
}

}  // namespace

SvdResult svd(const Matrix& p, double relTol) {
  if (p.size() == 0) throw Error(ErrorKind::InvalidArgument, "SVD of an empty matrix");
  Eigen::JacobiSVD<Matrix> dec(p, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = dec.singularValues();
  Index r = 0;
  if (s(0) > 0.0) {
    while (r < s.size() && s(r) > relTol * s(0)) ++r;
  }
  SvdResult out{dec.matrixU().leftCols(r), s.head(r), dec.matrixV().leftCols(r), r};
  for (Index j = 0; j < r; ++j) {
    Index arg = 0;
    out.u.col(j).cwiseAbs().maxCoeff(&arg);
    if (out.u(arg, j) < 0.0) {
      out.u.col(j) = -out.u.col(j);
      out.v.col(j) = -out.v.col(j);
    }
  }
  return out;
}

Matrix truncate(const SvdResult& s, Index k) {
  if (k < 1 || k > s.rank) {
    throw Error(ErrorKind::InvalidTruncation, "truncation rank must satisfy 1 <= k <= rank", static_cast<long long>(k));
  }
  return s.u.leftCols(k) * s.sigma.head(k).asDiagonal() * s.v.leftCols(k).transpose();
}

Matrix cooccurrence(const Matrix& p) { return p.transpose() * p; }

Vector perronChartStep(const Matrix& a, const Vector& y) {
  const Index n = a.rows();
  if (n < 2 || a.cols() != n || y.size() != n - 1) {
    throw Error(ErrorKind::DimensionMismatch, "chart step needs an N x N matrix and an (N-1)-vector");
  }
  const double a1 = a(0, 0);
  const double a2y = a.row(0).tail(n - 1).dot(y);
  const double den = a1 + a2y;
  const double scale = std::abs(a1) + a.row(0).tail(n - 1).norm() * y.norm();
  if (den == 0.0 || std::abs(den) <= kRankTolerance * scale) {
    throw Error(ErrorKind::ChartEscape, "the image line leaves the chart (first component vanishes)");
  }
  return (a.col(0).tail(n - 1) + a.bottomRightCorner(n - 1, n - 1) * y) / den;
}

double perronStationarityResidual(const Matrix& a, const Vector& y) {
  const Index n = a.rows();
  const Vector r = a.col(0).tail(n - 1) + a.bottomRightCorner(n - 1, n - 1) * y - y * a(0, 0) -
                   y * a.row(0).tail(n - 1).dot(y);
  return r.norm();
}

PerronChartResult perronChartIterate(const Matrix& a, Vector y0, double tol, std::size_t maxIter) {
  PerronChartResult out;
  out.y = std::move(y0);
  constexpr std::size_t kStall = 100;
  double best = std::numeric_limits<double>::infinity();
  std::size_t sinceBest = 0;
  while (out.iterations < maxIter) {
    Vector next = perronChartStep(a, out.y);
    const double step = (next - out.y).norm();
    out.y = std::move(next);
    ++out.iterations;
    const double scale = 1.0 + out.y.norm();
    if (step <= tol * scale) {
      out.converged = true;
      break;
    }
    if (step < best) {
      best = step;
      sinceBest = 0;
    } else if (step <= 1e-8 * scale && ++sinceBest >= kStall) {
      out.converged = true;
      break;
    }
  }
  out.residual = perronStationarityResidual(a, out.y);
  return out;
}

Vector chartLine(const Vector& y) {
  Vector x(y.size() + 1);
  x << 1.0, y;
  return x.normalized();
}

ChartState::ChartState(Matrix frame, Matrix a1, Matrix a2, Matrix a3, Matrix a4)
    : frame_(std::move(frame)), a1_(std::move(a1)), a2_(std::move(a2)), a3_(std::move(a3)), a4_(std::move(a4)) {}

ChartState ChartState::fromBlocks(Matrix a1, Matrix a2, Matrix a3, Matrix a4) {
  const Index k = a1.rows();
  const Index rest = a4.rows();
  if (k < 1 || a1.cols() != k || a2.rows() != k || a2.cols() != rest || a3.rows() != rest || a3.cols() != k ||
      a4.cols() != rest) {
    throw Error(ErrorKind::DimensionMismatch, "inconsistent chart block partition");
  }
  return ChartState(Matrix::Identity(k + rest, k + rest), std::move(a1), std::move(a2), std::move(a3), std::move(a4));
}

ChartState ChartState::coordinate(const Matrix& a, Index k) {
  const Index n = a.rows();
  if (a.cols() != n || k < 1 || k > n) throw Error(ErrorKind::DimensionMismatch, "chart needs a square matrix and 1 <= k <= N");
  return fromBlocks(a.topLeftCorner(k, k), a.topRightCorner(k, n - k), a.bottomLeftCorner(n - k, k),
                    a.bottomRightCorner(n - k, n - k));
}

ChartState ChartState::around(const Matrix& a, const geom::GrassmannPoint& v0) {
  const Index n = a.rows();
  const Index k = v0.k();
  if (a.cols() != n || v0.ambientDim() != n) throw Error(ErrorKind::DimensionMismatch, "start subspace does not match A");
  Eigen::HouseholderQR<Matrix> qr(v0.basis());
  const Matrix full = qr.householderQ() * Matrix::Identity(n, n);
  Matrix frame(n, n);
  frame << v0.basis(), full.rightCols(n - k);
  const Matrix rotated = frame.transpose() * a * frame;
  return ChartState(frame, rotated.topLeftCorner(k, k), rotated.topRightCorner(k, n - k),
                    rotated.bottomLeftCorner(n - k, k), rotated.bottomRightCorner(n - k, n - k));
}

Matrix ChartState::riccatiField(const Matrix& l) const {
  return a3_ + a4_ * l - l * a1_ - l * (a2_ * l);
}

bool ChartState::inChart(const Matrix& l) const {
  if (!l.allFinite() || l.norm() > 1.0 / kRankTolerance) return false;
  const Vector s = singularValues(a1_ + a2_ * l);
  const double scale = a1_.norm() + a2_.norm() * l.norm();
  return s(s.size() - 1) > kRankTolerance * scale;
}

Matrix ChartState::step(const Matrix& l) const {
  if (!inChart(l)) throw Error(ErrorKind::ChartEscape, "A1 + A2 L is singular");
  return solveRight(a3_ + a4_ * l, a1_ + a2_ * l);
}

geom::GrassmannPoint ChartState::subspace(const Matrix& l) const {
  if (l.rows() != n() - k() || l.cols() != k()) throw Error(ErrorKind::DimensionMismatch, "chart coordinate has the wrong shape");
  Matrix graph(n(), k());
  graph << Matrix::Identity(k(), k()), l;
  return geom::GrassmannPoint::fromOrthonormal(orthonormalizeColumns(frame_ * graph));
}

Matrix ChartState::coordinate(const geom::GrassmannPoint& p) const {
  if (p.ambientDim() != n() || p.k() != k()) throw Error(ErrorKind::DimensionMismatch, "point does not match the chart");
  const Matrix z = frame_.transpose() * p.basis();
  const Matrix top = z.topRows(k());
  const Vector s = singularValues(top);
  if (!(s(s.size() - 1) > kRankTolerance)) throw Error(ErrorKind::ChartEscape, "point lies outside the chart");
  return solveRight(z.bottomRows(n() - k()), top);
}

RiccatiResult riccatiFlow(const ChartState& chart, Matrix l0, const RiccatiOptions& options) {
  if (l0.rows() != chart.n() - chart.k() || l0.cols() != chart.k()) {
    throw Error(ErrorKind::DimensionMismatch, "initial chart point has the wrong shape");
  }
  if (!chart.inChart(l0)) throw ChartEscapeError("initial point outside the chart", l0, 0.0);

  double h = options.step;
  if (h <= 0.0) {
    Matrix full(chart.n(), chart.n());
    full << chart.a1(), chart.a2(), chart.a3(), chart.a4();
    const double norm = spectralNorm(full);
    h = norm > 0.0 ? 0.05 / norm : 0.05;
  }
  const double maxTime = options.maxTime > 0.0 ? options.maxTime : 200'000.0 * h;
  const std::size_t every = std::max<std::size_t>(options.sampleEvery, 1);

  auto orientation = [&](const Matrix& l) { return (chart.a1() + chart.a2() * l).determinant() > 0.0; };

  RiccatiResult out;
  out.l = std::move(l0);
  bool side = orientation(out.l);
  out.trajectory.push_back({0.0, out.l});
  while (true) {
    const Matrix k1 = chart.riccatiField(out.l);
    out.residual = k1.norm();
    if (out.residual < options.tol) {
      out.converged = true;
      break;
    }
    if (out.time >= maxTime) break;
    const Matrix k2 = chart.riccatiField(out.l + (0.5 * h) * k1);
    const Matrix k3 = chart.riccatiField(out.l + (0.5 * h) * k2);
    const Matrix k4 = chart.riccatiField(out.l + h * k3);
    Matrix next = out.l + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    // A sign change of det(A1 + A2 L) means the step crossed a singular point.
    if (!chart.inChart(next) || orientation(next) != side) {
      throw ChartEscapeError("Riccati trajectory left the chart", out.l, out.time);
    }
    out.l = std::move(next);
    out.time += h;
    ++out.steps;
    if (out.steps % every == 0) out.trajectory.push_back({out.time, out.l});
  }
  if (out.trajectory.back().t != out.time) out.trajectory.push_back({out.time, out.l});
  return out;
}

PowerResult grassmannPowerSequence(const Matrix& a, const geom::GrassmannPoint& v0, const PowerOptions& options) {
  const Index n = a.rows();
  const Index k = v0.k();
  if (a.cols() != n || v0.ambientDim() != n) throw Error(ErrorKind::DimensionMismatch, "start subspace does not match A");

  const Spectrum spec = spectrumOf(a);
  requireGap(spec, k);
  requireAdmissibleStart(spec, v0);

  Matrix v = v0.basis();
  double prevStep = 0.0;
  PowerResult out{v0, 0, 0.0, {}};
  bool converged = false;
  while (out.iterations < options.maxIter) {
    const Matrix av = a * v;
    if (numericalRank(av) < k) throw Error(ErrorKind::DegenerateStart, "A collapses the current iterate");
    const auto next = geom::GrassmannPoint::fromOrthonormal(orthonormalizeColumns(av));
    const double step = geom::grassmannDistance(next, geom::GrassmannPoint::fromOrthonormal(v));
    if (prevStep > 0.0 && step > 0.0) out.gapEstimate = step / prevStep;
    prevStep = step;
    v = next.basis();
    ++out.iterations;
    if (step < options.tol) {
      converged = true;
      break;
    }
  }
  if (!converged) throw Error(ErrorKind::NoGap, "power sequence did not settle; spectral gap too small");

  out.limit = geom::GrassmannPoint::fromOrthonormal(v);
  Eigen::EigenSolver<Matrix> rq(v.transpose() * a * v, false);
  std::vector<std::complex<double>> values(rq.eigenvalues().data(), rq.eigenvalues().data() + k);
  std::stable_sort(values.begin(), values.end(), [](auto x, auto y) { return std::abs(x) > std::abs(y); });
  out.rayleighValues.resize(k);
  for (Index i = 0; i < k; ++i) out.rayleighValues(i) = values[static_cast<std::size_t>(i)].real();
  return out;
}

std::string_view toString(LatentMethod m) {
  switch (m) {
    case LatentMethod::Svd: return "svd";
    case LatentMethod::Power: return "power";
    case LatentMethod::Riccati: return "riccati";
  }
  return "svd";
}

LatentMethod parseLatentMethod(std::string_view name) {
  if (name == "svd") return LatentMethod::Svd;
  if (name == "power") return LatentMethod::Power;
  if (name == "riccati") return LatentMethod::Riccati;
  throw Error(ErrorKind::InvalidArgument, "unknown latent method: " + std::string(name));
}

geom::GrassmannPoint defaultStart(const Matrix& a, Index k) {
  const Index n = a.rows();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) { return a(i, i) > a(j, j); });
  Matrix axes = Matrix::Zero(n, k);
  for (Index j = 0; j < k; ++j) axes(order[static_cast<std::size_t>(j)], j) = 1.0;
  const Matrix pushed = a * axes;
  return geom::GrassmannPoint::fromOrthonormal(orthonormalizeColumns(numericalRank(pushed) == k ? pushed : axes));
}

geom::GrassmannPoint latentSubspace(const Matrix& p, Index k, LatentMethod method, const LatentOptions& options) {
  const SvdResult s = svd(p);
  if (k < 1 || k > s.rank) {
    throw Error(ErrorKind::InvalidTruncation, "latent dimension must satisfy 1 <= k <= rank", static_cast<long long>(k));
  }
  if (method == LatentMethod::Svd) return geom::GrassmannPoint::fromOrthonormal(s.v.leftCols(k));

  const Matrix a = cooccurrence(p);
  const geom::GrassmannPoint start = defaultStart(a, k);
  if (method == LatentMethod::Power) return grassmannPowerSequence(a, start, options.power).limit;

  const Spectrum spec = spectrumOf(a);
  requireGap(spec, k);
  requireAdmissibleStart(spec, start);
  const ChartState chart = ChartState::around(a, start);
  const RiccatiResult flow = riccatiFlow(chart, Matrix::Zero(a.rows() - k, k), options.riccati);
  if (!flow.converged) throw Error(ErrorKind::NoConvergence, "Riccati flow did not reach a stationary point");
  return chart.subspace(flow.l);
}

}  // namespace semspace::latent
