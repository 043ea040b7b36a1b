#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "semspace/latent.hpp"
#include "support.hpp"

using namespace semspace;
using namespace semspace::latent;
using testing::throwsKind;

namespace {

Matrix diag(std::initializer_list<double> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v(i++) = x;
  return v.asDiagonal();
}

/// Dominant eigenvector of a general real matrix from the full eigen-decomposition.
Vector dominantEigenvector(const Matrix& a) {
  Eigen::EigenSolver<Matrix> es(a);
  Index best = 0;
  es.eigenvalues().cwiseAbs().maxCoeff(&best);
  return es.eigenvectors().col(best).real().normalized();
}

/// Top-k eigenspace of a symmetric matrix.
geom::GrassmannPoint topEigenspace(const Matrix& a, Index k) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  return geom::GrassmannPoint::fromOrthonormal(es.eigenvectors().rightCols(k));
}

}  // namespace

TEST_CASE("svd examples") {
  const auto s = svd(diag({3, 1}));
  CHECK(s.rank == 2);
  CHECK(s.sigma(0) == doctest::Approx(3.0));
  CHECK(s.sigma(1) == doctest::Approx(1.0));
  CHECK(s.u.cwiseAbs().isApprox(Matrix::Identity(2, 2)));
  CHECK(s.v.cwiseAbs().isApprox(Matrix::Identity(2, 2)));

  Vector a(3), b(4);
  a << 1, 2, 3;
  b << 1, -1, 0, 2;
  CHECK(svd(a * b.transpose()).rank == 1);
  CHECK(throwsKind([] { svd(Matrix(0, 0)); }, ErrorKind::InvalidArgument));
}

TEST_CASE("svd reconstruction and sign convention") {
  testing::Gen gen(51);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix p = gen.gaussian(static_cast<Index>(gen.index(1, 8)), static_cast<Index>(gen.index(1, 8)));
    const auto s = svd(p);
    CHECK((p - s.u * s.sigma.asDiagonal() * s.v.transpose()).norm() < 1e-10 * std::max(1.0, p.norm()));
    for (Index j = 0; j < s.rank; ++j) {
      Index arg = 0;
      s.u.col(j).cwiseAbs().maxCoeff(&arg);
      CHECK(s.u(arg, j) > 0.0);
      if (j > 0) CHECK(s.sigma(j) <= s.sigma(j - 1));
      CHECK(s.sigma(j) > 0.0);
    }
    CHECK(orthonormalityDefect(s.u) < 1e-12);
    CHECK(orthonormalityDefect(s.v) < 1e-12);
    // bit-identical on repeated evaluation
    const auto again = svd(p);
    CHECK(again.u == s.u);
    CHECK(again.v == s.v);
  }
}

TEST_CASE("truncation") {
  const auto d = svd(diag({3, 1}));
  CHECK(truncate(d, 1).isApprox(diag({3, 0})));
  CHECK(throwsKind([&] { truncate(d, 3); }, ErrorKind::InvalidTruncation));
  CHECK(throwsKind([&] { truncate(d, 0); }, ErrorKind::InvalidTruncation));

  testing::Gen gen(52);
  for (int trial = 0; trial < 30; ++trial) {
    const Matrix p = gen.gaussian(5, 7);
    const auto s = svd(p);
    CHECK((truncate(s, s.rank) - p).norm() < 1e-8 * p.norm());
    const Index k = static_cast<Index>(gen.index(1, static_cast<std::size_t>(s.rank)));
    const Matrix best = truncate(s, k);
    const double expected = s.sigma.tail(s.rank - k).norm();
    CHECK(std::abs((p - best).norm() - expected) <= 1e-10);
    for (int c = 0; c < 100; ++c) {
      const Matrix other = best + 0.1 * gen.gaussian(5, k) * gen.gaussian(k, 7);
      const auto os = svd(other);
      const Matrix candidate = truncate(os, std::min(k, os.rank));
      CHECK((p - candidate).norm() >= expected - 1e-10);
    }
  }
}

TEST_CASE("co-occurrence") {
  CHECK(cooccurrence(Matrix::Identity(3, 3)).isIdentity());
  testing::Gen gen(53);
  const Matrix rows = orthonormalizeColumns(gen.gaussian(5, 3)).transpose();
  const Matrix a = cooccurrence(rows);
  for (Index i = 0; i < 5; ++i)
    for (Index j = 0; j < 5; ++j) CHECK(a(i, j) == doctest::Approx(rows.col(i).dot(rows.col(j))));

  const Matrix p = gen.gaussian(4, 6);
  Eigen::SelfAdjointEigenSolver<Matrix> es(cooccurrence(p));
  const Vector ev = es.eigenvalues().reverse().head(4);
  const Vector sq = svd(p).sigma.array().square();
  CHECK((ev - sq).norm() <= 1e-10);
}

TEST_CASE("Perron chart step") {
  Vector y(1);
  y << 0.5;
  CHECK(perronChartStep(diag({2, 1}), y)(0) == 0.25);
  Vector zero = Vector::Zero(2);
  CHECK(perronChartStep(diag({2, 1, 1}), zero).isZero(0.0));

  Matrix escape(2, 2);
  escape << 1, 1, 0, 1;
  Vector bad(1);
  bad << -1.0;
  CHECK(throwsKind([&] { perronChartStep(escape, bad); }, ErrorKind::ChartEscape));
}

TEST_CASE("Perron chart iteration finds the dominant eigenvector") {
  testing::Gen gen(54);
  int tested = 0;
  while (tested < 50) {
    const Matrix a = gen.gaussian(5, 5).cwiseAbs();  // positive: Perron root is simple and real
    Eigen::EigenSolver<Matrix> es(a);
    Vector mods = es.eigenvalues().cwiseAbs();
    std::sort(mods.data(), mods.data() + mods.size(), std::greater<>());
    if (mods(0) / mods(1) < 1.05) continue;
    ++tested;
    const auto r = perronChartIterate(a, Vector::Zero(4));
    CHECK(r.converged);
    CHECK(r.residual < 1e-10);
    const Vector x = chartLine(r.y);
    const Vector e = dominantEigenvector(a);
    const double sign = x.dot(e) < 0.0 ? -1.0 : 1.0;
    const double angle = 2.0 * std::asin(std::min(1.0, (x - sign * e).norm() / 2.0));
    CHECK(angle < 1e-8);
  }
}

TEST_CASE("chart states") {
  testing::Gen gen(55);
  const Matrix a = gen.gaussian(5, 5);
  const auto c = ChartState::coordinate(a, 2);
  CHECK(c.k() == 2);
  CHECK(c.n() == 5);
  CHECK(c.a4() == a.bottomRightCorner(3, 3));
  CHECK(throwsKind([] { ChartState::fromBlocks(Matrix::Ones(2, 2), Matrix::Ones(2, 3), Matrix::Ones(2, 2), Matrix::Ones(3, 3)); },
                   ErrorKind::DimensionMismatch));

  const auto v0 = gen.grassmann(5, 2);
  const auto around = ChartState::around(a, v0);
  CHECK(grassmannDistance(around.subspace(Matrix::Zero(3, 2)), v0) < 1e-12);
  const Matrix l = 0.3 * gen.gaussian(3, 2);
  CHECK((around.coordinate(around.subspace(l)) - l).norm() < 1e-12);

  // The chart step is the action of A on subspaces.
  const auto image = geom::grassmannPoint(a * around.subspace(l).basis(), geom::SpanOrientation::Columns);
  CHECK(grassmannDistance(around.subspace(around.step(l)), image) < 1e-10);
}

TEST_CASE("Riccati flow: scalar decay") {
  const auto chart = ChartState::fromBlocks(Matrix::Ones(1, 1), Matrix::Zero(1, 1), Matrix::Zero(1, 1), Matrix::Zero(1, 1));
  RiccatiOptions opt;
  opt.step = 0.01;
  opt.sampleEvery = 10;
  const auto r = riccatiFlow(chart, Matrix::Constant(1, 1, 2.0), opt);
  CHECK(r.converged);
  CHECK(std::abs(r.l(0, 0)) < 1e-9);
  CHECK(r.trajectory.size() > 3);
  for (const auto& s : r.trajectory) CHECK(std::abs(s.l(0, 0) - 2.0 * std::exp(-s.t)) < 1e-9);
}

TEST_CASE("Riccati flow: stationary start and chart escape") {
  testing::Gen gen(56);
  const Matrix a = gen.gaussian(4, 4);
  const Matrix s = a + a.transpose();
  const auto top = topEigenspace(s, 2);
  const auto chart = ChartState::around(s, top);
  const auto r = riccatiFlow(chart, Matrix::Zero(2, 2));
  CHECK(r.steps == 0);
  CHECK(r.converged);
  CHECK(r.trajectory.size() == 1);

  Matrix rot(2, 2);
  rot << 0, 1, -1, 0;
  const auto spin = ChartState::coordinate(rot, 1);
  RiccatiOptions opt;
  opt.step = 1e-3;
  try {
    riccatiFlow(spin, Matrix::Ones(1, 1), opt);
    FAIL("expected ChartEscape");
  } catch (const ChartEscapeError& e) {
    CHECK((e.kind() == ErrorKind::ChartEscape));
    CHECK(std::abs(e.time() - std::atan(1.0)) < 2e-3);
    CHECK(e.lastValid()(0, 0) > 0.0);
    CHECK(e.lastValid()(0, 0) < 2e-3);
  }
}

TEST_CASE("power sequence examples") {
  Vector v(2);
  v << 1, 1;
  const auto start = geom::GrassmannPoint::fromOrthonormal(v.normalized());
  const auto r = grassmannPowerSequence(diag({4, 1}), start);
  CHECK(geom::grassmannDistance(r.limit, geom::GrassmannPoint::fromOrthonormal(Vector::Unit(2, 0))) < 1e-10);
  CHECK(r.gapEstimate == doctest::Approx(0.25).epsilon(1e-3));
  CHECK(r.rayleighValues(0) == doctest::Approx(4.0));

  testing::Gen gen(57);
  const Matrix p = gen.withSingularValues(6, 8, gen.gappedSpectrum(6, 3, 1.5));
  const Matrix a = cooccurrence(p);
  const auto top = topEigenspace(a, 3);
  CHECK(grassmannPowerSequence(a, top).iterations <= 1);

  CHECK(throwsKind([&] { grassmannPowerSequence(Matrix::Identity(3, 3), gen.grassmann(3, 1)); }, ErrorKind::NoGap));
  const auto orthogonal = geom::GrassmannPoint::fromOrthonormal(Vector::Unit(2, 1));
  CHECK(throwsKind([&] { grassmannPowerSequence(diag({4, 1}), orthogonal); }, ErrorKind::DegenerateStart));
}

TEST_CASE("power sequence matches the eigendecomposition and ignores the start") {
  testing::Gen gen(58);
  for (int trial = 0; trial < 10; ++trial) {
    const Index k = static_cast<Index>(gen.index(1, 4));
    const Matrix p = gen.withSingularValues(20, 20, gen.gappedSpectrum(20, k, 1.1));
    const Matrix a = cooccurrence(p);
    const auto oracle = topEigenspace(a, k);
    const auto first = grassmannPowerSequence(a, defaultStart(a, k));
    CHECK(geom::grassmannDistance(first.limit, oracle) < 1e-8);
    for (int s = 0; s < 20; ++s) {
      const auto other = grassmannPowerSequence(a, gen.grassmann(20, k));
      CHECK(geom::grassmannDistance(other.limit, first.limit) < 1e-8);
    }
  }
}

TEST_CASE("Riccati stationary points coincide with power limits") {
  testing::Gen gen(59);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = static_cast<Index>(gen.index(4, 10));
    const Index k = static_cast<Index>(gen.index(1, static_cast<std::size_t>(n) - 1));
    const Matrix a = cooccurrence(gen.withSingularValues(n, n, gen.gappedSpectrum(n, k, 1.2)));
    const auto start = defaultStart(a, k);
    const auto chart = ChartState::around(a, start);
    const auto flow = riccatiFlow(chart, Matrix::Zero(n - k, k));
    REQUIRE(flow.converged);
    CHECK(chart.riccatiField(flow.l).norm() < 1e-8);
    const auto power = grassmannPowerSequence(a, start);
    CHECK((chart.coordinate(power.limit) - flow.l).norm() < 1e-6);
  }
}

TEST_CASE("latent subspace methods") {
  Matrix p = diag({5, 3, 2, 1});
  for (auto m : {LatentMethod::Svd, LatentMethod::Power, LatentMethod::Riccati}) {
    const auto g = latentSubspace(p, 2, m);
    CHECK(geom::grassmannDistance(g, geom::GrassmannPoint::fromOrthonormal(Matrix::Identity(4, 2))) < 1e-6);
  }
  CHECK((parseLatentMethod("riccati") == LatentMethod::Riccati));
  CHECK(toString(LatentMethod::Power) == "power");
  CHECK(throwsKind([] { parseLatentMethod("qr"); }, ErrorKind::InvalidArgument));

  testing::Gen gen(60);
  const Matrix q = gen.gaussian(3, 5);
  const auto all = latentSubspace(q, 3, LatentMethod::Svd);
  CHECK(geom::grassmannDistance(all, geom::grassmannPoint(q, geom::SpanOrientation::Rows)) < 1e-10);
  CHECK(throwsKind([&] { latentSubspace(q, 4, LatentMethod::Svd); }, ErrorKind::InvalidTruncation));

  const Matrix flat = diag({2, 2, 1});
  CHECK_NOTHROW(latentSubspace(flat, 1, LatentMethod::Svd));
  CHECK(throwsKind([&] { latentSubspace(flat, 1, LatentMethod::Power); }, ErrorKind::NoGap));
  CHECK(throwsKind([&] { latentSubspace(flat, 1, LatentMethod::Riccati); }, ErrorKind::NoGap));
}

TEST_CASE("latent methods agree pairwise on gapped matrices") {
  testing::Gen gen(61);
  for (int trial = 0; trial < 10; ++trial) {
    const Index k = static_cast<Index>(gen.index(1, 4));
    const Matrix p = gen.withSingularValues(8, 12, gen.gappedSpectrum(8, k, 1.1));
    const auto s = latentSubspace(p, k, LatentMethod::Svd);
    const auto w = latentSubspace(p, k, LatentMethod::Power);
    const auto r = latentSubspace(p, k, LatentMethod::Riccati);
    CHECK(geom::grassmannDistance(s, w) < 1e-6);
    CHECK(geom::grassmannDistance(s, r) < 1e-6);
    CHECK(geom::grassmannDistance(w, r) < 1e-6);
  }
}
