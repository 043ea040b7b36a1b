#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "semspace/consensus.hpp"
#include "support.hpp"

using namespace semspace;
using namespace semspace::consensus;
using geom::GrassmannPoint;
using testing::throwsKind;

namespace {

const std::vector<std::string> kDict{"a", "b"};

UserCorpus user(std::string id, std::vector<TextMatrix> texts) { return {std::move(id), kDict, std::move(texts)}; }

std::vector<oracle::OracleBar> asOracleBars(const topology::Barcode& b) {
  std::vector<oracle::OracleBar> out;
  for (const auto& i : b.intervals) out.push_back({i.dim, i.birth, i.death});
  std::sort(out.begin(), out.end());
  return out;
}

topology::DistanceMatrix planar(const Matrix& pts) {
  topology::DistanceMatrix dm;
  dm.d.resize(pts.rows(), pts.rows());
  for (Index i = 0; i < pts.rows(); ++i) {
    dm.ids.push_back(std::to_string(i));
    for (Index j = 0; j < pts.rows(); ++j) dm.d(i, j) = (pts.row(i) - pts.row(j)).norm();
  }
  return dm;
}

}  // namespace

TEST_CASE("merging corpora") {
  const Matrix t1 = (Matrix(2, 2) << 1, 0, 0, 1).finished();
  const Matrix t2 = (Matrix(2, 3) << 1, 2, 3, 4, 5, 6).finished();

  const std::vector<UserCorpus> same{user("u", {{"t1", t1}}), user("v", {{"t1", t1}})};
  const auto m = mergeCorpora(same);
  CHECK(m.contexts.size() == 2);
  CHECK(m.views[0].matrix == m.views[1].matrix);

  const std::vector<UserCorpus> disjoint{user("u", {{"t2", t2}}), user("v", {{"t1", t1}})};
  const auto d = mergeCorpora(disjoint);
  REQUIRE(d.contexts.size() == 5);
  CHECK(d.contexts[0].textId == "t1");
  CHECK(d.contexts[2].textId == "t2");
  CHECK(d.contexts[4].position == 2);
  CHECK(d.views[0].userId == "u");
  CHECK(d.views[0].matrix.leftCols(2).isZero(0.0));
  CHECK(d.views[0].matrix.rightCols(3) == t2);
  CHECK(d.views[1].matrix.leftCols(2) == t1);
  CHECK(d.views[1].matrix.rightCols(3).isZero(0.0));
  CHECK(d.views[0].corpusIds == std::vector<std::string>{"t2"});

  const std::vector<UserCorpus> overlap{user("u", {{"t1", t1}, {"t2", t2}}), user("v", {{"t1", 2.0 * t1}})};
  const auto o = mergeCorpora(overlap);
  CHECK(o.contexts.size() == 5);
  CHECK(o.views[1].matrix.leftCols(2) == 2.0 * t1);

  std::vector<UserCorpus> mismatch{user("u", {{"t1", t1}}), user("v", {{"t1", t1}})};
  mismatch[1].dictionary = {"a", "c"};
  try {
    mergeCorpora(mismatch);
    FAIL("expected DictionaryMismatch");
  } catch (const Error& e) {
    CHECK((e.kind() == ErrorKind::DictionaryMismatch));
    CHECK(e.subject() == "v");
  }
  const std::vector<UserCorpus> widths{user("u", {{"t1", t1}}), user("v", {{"t1", t2}})};
  CHECK(throwsKind([&] { mergeCorpora(widths); }, ErrorKind::DimensionMismatch));
}

TEST_CASE("user points") {
  const Matrix t = (Matrix(2, 3) << 1, 0, 0, 0, 1, 0).finished();
  const std::vector<UserCorpus> users{user("u", {{"t", t}}), user("v", {{"t", 3.0 * t + Matrix::Zero(2, 3)}})};
  const auto m = mergeCorpora(users);
  const auto p = userPoint(m.views[0]);
  CHECK(p.k() == 2);
  CHECK(p.ambientDim() == 3);
  CHECK(geom::grassmannDistance(p, GrassmannPoint::fromOrthonormal(Matrix::Identity(3, 2))) < 1e-12);
  CHECK(geom::grassmannDistance(p, userPoint(m.views[1])) < 1e-12);

  const std::vector<UserCorpus> deficient{user("w", {{"t", Matrix::Ones(2, 3)}})};
  try {
    userPoint(mergeCorpora(deficient).views[0]);
    FAIL("expected RankDeficient");
  } catch (const Error& e) {
    CHECK((e.kind() == ErrorKind::RankDeficient));
    CHECK(e.subject() == "w");
  }
}

TEST_CASE("zero padding keeps the span on the held columns") {
  testing::Gen gen(71);
  const Matrix a = gen.gaussian(2, 3);
  const Matrix b = gen.gaussian(2, 4);
  const std::vector<UserCorpus> users{user("u", {{"t1", a}}), user("v", {{"t1", a}, {"t2", b}})};
  const auto m = mergeCorpora(users);
  const auto padded = userPoint(m.views[0]);
  const auto plain = geom::grassmannPoint(a, geom::SpanOrientation::Rows);
  CHECK(padded.basis().bottomRows(4).isZero(0.0));
  const auto restricted = GrassmannPoint::fromOrthonormal(padded.basis().topRows(3));
  CHECK(geom::grassmannDistance(restricted, plain) < 1e-12);
}

TEST_CASE("user distance shrinks as corpora overlap more") {
  testing::Gen gen(72);
  std::vector<TextMatrix> texts;
  for (int i = 0; i < 6; ++i) texts.push_back({"t" + std::to_string(i), gen.gaussian(2, 3)});
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t held = 1; held <= texts.size(); ++held) {
    const std::vector<UserCorpus> users{
        user("full", texts), user("part", std::vector<TextMatrix>(texts.begin(), texts.begin() + static_cast<long>(held)))};
    const auto m = mergeCorpora(users);
    const double d = geom::grassmannDistance(userPoint(m.views[0]), userPoint(m.views[1]));
    CHECK(d <= previous + 1e-12);
    previous = d;
  }
  CHECK(previous < 1e-12);
}

TEST_CASE("weights") {
  const std::vector<double> good{0.25, 0.75};
  CHECK_NOTHROW(validateWeights(good, 2));
  CHECK(throwsKind([&] { validateWeights(good, 3); }, ErrorKind::DimensionMismatch));
  const std::vector<double> negative{-0.5, 1.5};
  CHECK(throwsKind([&] { validateWeights(negative, 2); }, ErrorKind::InvalidArgument));
  const std::vector<double> heavy{0.5, 0.6};
  CHECK(throwsKind([&] { validateWeights(heavy, 2); }, ErrorKind::InvalidArgument));
  const auto u = uniformWeights(4);
  CHECK(u.size() == 4);
  CHECK(u[2] == 0.25);
}

TEST_CASE("Karcher barycenter examples") {
  testing::Gen gen(73);
  const auto p = gen.grassmann(5, 2);
  const auto q = gen.near(p, 0.6);
  const std::vector<GrassmannPoint> pair{p, q};

  const std::vector<double> first{1.0, 0.0};
  const auto r = karcherBarycenter(pair, first);
  CHECK(r.point.basis() == p.basis());
  CHECK(r.iterations == 0);

  const std::vector<double> half{0.5, 0.5};
  const auto mid = karcherBarycenter(pair, half);
  CHECK(geom::grassmannDistance(mid.point, geom::geodesic(p, q, 0.5)) < 1e-8);
  CHECK(mid.finalGradNorm < 1e-10);
  CHECK(mid.convexityOk);
  CHECK(mid.gradNormTrace.size() == mid.potentialTrace.size());
  CHECK(mid.gradNormTrace.size() == mid.iterations + 1);

  const std::vector<GrassmannPoint> same{p, p, p};
  const auto s = karcherBarycenter(same, uniformWeights(3));
  CHECK(s.iterations == 0);
  CHECK(s.point.basis() == p.basis());
}

TEST_CASE("Karcher barycenter on a single geodesic") {
  testing::Gen gen(74);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = gen.grassmann(6, 2);
    const auto q = gen.near(p, gen.uniform(0.1, 1.2));
    const double lambda = gen.uniform(0.0, 1.0);
    const std::vector<GrassmannPoint> pair{p, q};
    const std::vector<double> w{lambda, 1.0 - lambda};
    const auto r = karcherBarycenter(pair, w);
    CHECK(geom::grassmannDistance(r.point, geom::geodesic(p, q, 1.0 - lambda)) < 1e-7);
  }
}

TEST_CASE("Karcher barycenter descent and permutation invariance") {
  testing::Gen gen(75);
  for (int trial = 0; trial < 20; ++trial) {
    const auto center = gen.grassmann(6, 2);
    std::vector<GrassmannPoint> pts;
    for (int i = 0; i < 4; ++i) pts.push_back(gen.near(center, gen.uniform(0.05, 0.6)));
    std::vector<double> w;
    double total = 0.0;
    for (int i = 0; i < 4; ++i) total += w.emplace_back(gen.uniform(0.1, 1.0));
    for (auto& x : w) x /= total;
    w[3] = 1.0 - w[0] - w[1] - w[2];

    const auto r = karcherBarycenter(pts, w);
    CHECK(r.finalGradNorm < 1e-10);
    CHECK(descentDirection(pts, w, r.point).norm() < 1e-10);
    for (std::size_t i = 1; i < r.potentialTrace.size(); ++i) {
      const double prev = r.potentialTrace[i - 1];
      CHECK(r.potentialTrace[i] <= prev + 64 * std::numeric_limits<double>::epsilon() * (1.0 + prev));
    }
    const double vb = potential(pts, w, r.point);
    for (const auto& x : pts) CHECK(vb <= potential(pts, w, x) + 1e-10);

    std::vector<std::size_t> order{3, 1, 0, 2};
    std::vector<GrassmannPoint> pp;
    std::vector<double> pw;
    for (auto i : order) {
      pp.push_back(pts[i]);
      pw.push_back(w[i]);
    }
    CHECK(geom::grassmannDistance(karcherBarycenter(pp, pw).point, r.point) < 1e-9);
  }
}

TEST_CASE("Karcher barycenter reports non-convergence and convexity") {
  testing::Gen gen(76);
  const auto p = gen.grassmann(4, 1);
  const std::vector<GrassmannPoint> pair{p, gen.near(p, 1.0)};
  KarcherOptions opt;
  opt.maxIter = 2;
  try {
    karcherBarycenter(pair, uniformWeights(2), opt);
    FAIL("expected NoConvergence");
  } catch (const NoConvergenceError& e) {
    CHECK((e.kind() == ErrorKind::NoConvergence));
    CHECK(e.last().iterations == 2);
  }

  // Two principal angles of 1.2: distance 1.2 * sqrt(2) > π/2.
  const double a = 1.2;
  Matrix tilted = Matrix::Zero(4, 2);
  tilted << std::cos(a), 0, 0, std::cos(a), std::sin(a), 0, 0, std::sin(a);
  const std::vector<GrassmannPoint> wide{GrassmannPoint::fromOrthonormal(Matrix::Identity(4, 2)),
                                         GrassmannPoint::fromOrthonormal(tilted)};
  const std::vector<double> w{0.9, 0.1};
  const auto r = karcherBarycenter(wide, w);
  CHECK_FALSE(r.convexityOk);
  CHECK(r.maxPairwiseDistance == doctest::Approx(a * std::numbers::sqrt2));
  CHECK(geom::grassmannDistance(r.point, geom::geodesic(wide[0], wide[1], 0.1)) < 1e-8);
}

TEST_CASE("cross-language averaging") {
  testing::Gen gen(77);
  const std::vector<geom::ProjectivePoint> en{gen.projective(4), gen.projective(4)};
  CHECK(crossLanguageAverage({{"en", en}})[1].rep() == en[1].rep());

  std::vector<geom::ProjectivePoint> de;
  for (const auto& x : en) de.push_back(geom::asProjective(gen.near(geom::asGrassmann(x), 0.4)));
  const auto avg = crossLanguageAverage({{"en", en}, {"de", de}});
  REQUIRE(avg.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    const auto mid = geom::geodesic(geom::asGrassmann(en[i]), geom::asGrassmann(de[i]), 0.5);
    CHECK(geom::projDistance(avg[i], geom::asProjective(mid)) < 1e-8);
  }

  // Renaming the languages swaps their order in the map.
  const auto swapped = crossLanguageAverage({{"b", en}, {"a", de}});
  for (std::size_t i = 0; i < 2; ++i) CHECK(geom::projDistance(avg[i], swapped[i]) < 1e-10);

  const auto weighted = crossLanguageAverage({{"en", en}, {"de", de}}, {{"en", 1.0}, {"de", 0.0}});
  CHECK(weighted[0].rep() == en[0].rep());

  const std::vector<geom::ProjectivePoint> shortPath{en[0]};
  CHECK(throwsKind([&] { crossLanguageAverage({{"en", en}, {"de", shortPath}}); }, ErrorKind::DimensionMismatch));
}

TEST_CASE("greedy barcode matching") {
  topology::Barcode a, b;
  a.maxReportedDim = b.maxReportedDim = 1;
  a.intervals = {{0, 0.0, topology::kInfinity}, {0, 0.0, 1.0}, {1, 0.5, 0.9}};
  b.intervals = {{0, 0.0, topology::kInfinity}, {0, 0.0, 1.2}};
  const auto m0 = greedyMatch(a, b, 0);
  CHECK(m0.matched == 2);
  CHECK(m0.cost == doctest::Approx(0.2));
  const auto m1 = greedyMatch(a, b, 1);
  CHECK(m1.matched == 0);
  CHECK(m1.unmatchedLeft == 1);
  CHECK(m1.cost == doctest::Approx(0.2));
  const auto self = greedyMatch(a, a, 0);
  CHECK(self.cost == 0.0);
  CHECK(self.unmatchedLeft + self.unmatchedRight == 0);
}

TEST_CASE("barycentric complex merge") {
  Matrix pts(6, 2);
  pts << 0, 0, 1, 0, 0, 1, 50, 0, 51, 0, 50, 1;
  const auto dm = planar(pts);

  const std::vector<UserMembership> same{{"u", {0, 1, 2}}, {"v", {0, 1, 2}}};
  const auto sub = planar(pts.topRows(3));
  const auto s = barycentricComplexMerge(sub, same, 2.0);
  CHECK(s.users[0].barcode.intervals == s.barcode.intervals);
  CHECK(s.users[1].barcode.intervals == s.barcode.intervals);
  for (const auto& o : s.owners) CHECK(o == std::vector<std::size_t>{0, 1});
  CHECK(s.users[0].comparison.size() == 2);
  CHECK(s.users[0].comparison[0].cost == 0.0);

  const std::vector<UserMembership> apart{{"u", {0, 1, 2}}, {"v", {3, 4, 5}}};
  const auto far = barycentricComplexMerge(dm, apart, 2.0);
  CHECK(far.barcode.infiniteCount(0) == far.users[0].barcode.infiniteCount(0) + far.users[1].barcode.infiniteCount(0));
  CHECK(far.barcode.infiniteCount(0) == 2);
  for (std::size_t i = 0; i < far.complex.simplices.size(); ++i) CHECK(far.owners[i].size() == 1);

  const std::vector<UserMembership> bad{{"u", {9}}};
  CHECK(throwsKind([&] { barycentricComplexMerge(dm, bad, 1.0); }, ErrorKind::IndexError));
}

TEST_CASE("merge over a subset equals the superset's barcode") {
  testing::Gen gen(78);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix pts(6, 2);
    for (Index i = 0; i < 6; ++i) pts.row(i) << gen.uniform(0, 1), gen.uniform(0, 1);
    const auto dm = planar(pts);
    const std::vector<UserMembership> users{{"big", {0, 1, 2, 3, 4, 5}}, {"small", {1, 3, 4}}};
    const auto s = barycentricComplexMerge(dm, users, 0.8, 2);
    CHECK(s.barcode.intervals == s.users[0].barcode.intervals);
    CHECK(asOracleBars(s.barcode) == oracle::ripsBarcode(dm.d, 0.8, 2));
  }
}
