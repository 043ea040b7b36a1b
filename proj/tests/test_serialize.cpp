#include <doctest.h>

#include <cmath>
#include <limits>

#include "semspace/serialize.hpp"
#include "support.hpp"

using namespace semspace;
using namespace semspace::serialize;
using testing::throwsKind;

TEST_CASE("hex floats round-trip exactly") {
  CHECK(hexFloat(1.0) == "0x1p+0");
  CHECK(hexFloat(0.5) == "0x1p-1");
  CHECK(parseHexFloat("0x1.8p+1") == 3.0);
  CHECK(throwsKind([] { parseHexFloat("abc"); }, ErrorKind::ParseError));
  CHECK(throwsKind([] { parseHexFloat("1.0x"); }, ErrorKind::ParseError));

  testing::Gen gen(81);
  for (int i = 0; i < 1000; ++i) {
    const double x = gen.normal() * std::pow(10.0, gen.uniform(-300, 300));
    CHECK(parseHexFloat(hexFloat(x)) == x);
    CHECK(std::strtod(formatDouble(x).c_str(), nullptr) == x);
  }
  CHECK(parseHexFloat(hexFloat(std::numeric_limits<double>::denorm_min())) == std::numeric_limits<double>::denorm_min());
  CHECK(formatDouble(0.1) == "0.1");
  CHECK(formatDouble(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(formatDouble(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("matrix JSON") {
  testing::Gen gen(82);
  const Matrix m = gen.gaussian(3, 4);
  CHECK(matrixFromJson(matrixToJson(m, true)) == m);
  CHECK(matrixFromJson(Json::parse(matrixToJson(m).dump())) == m);
  const auto j = matrixToJson(Matrix::Identity(2, 2));
  CHECK(j.dump() == R"({"rows":2,"cols":2,"data":[[1.0,0.0],[0.0,1.0]]})");

  CHECK(throwsKind([] { matrixFromJson(Json::parse(R"({"rows":2,"cols":1,"data":[[1]]})")); }, ErrorKind::ParseError));
  CHECK(throwsKind([] { matrixFromJson(Json::parse(R"({"rows":1,"cols":2,"data":[[1]]})")); }, ErrorKind::ParseError));
  CHECK(throwsKind([] { matrixFromJson(Json::parse(R"({"rows":1,"cols":1,"data":[[true]]})")); }, ErrorKind::ParseError));
  CHECK(throwsKind([] { matrixFromJson(Json::parse(R"({"cols":1})")); }, ErrorKind::ParseError));
}

TEST_CASE("matrix CSV") {
  const Matrix m = (Matrix(2, 2) << 1, 0.5, -2, 0.1).finished();
  CHECK(matrixToCsv(m) == "1,0.5\n-2,0.1\n");
  CHECK(matrixToCsv(m, {"a", "b"}, {"c1", "c2"}) == ",c1,c2\na,1,0.5\nb,-2,0.1\n");
}

TEST_CASE("point JSON round trips") {
  testing::Gen gen(83);
  const auto x = gen.projective(4);
  const auto jx = toJson(x, true);
  CHECK(jx.at("kind") == "projective");
  CHECK(jx.at("ambient") == 4);
  CHECK(projectiveFromJson(jx).rep() == x.rep());

  const auto g = gen.grassmann(5, 2);
  const auto jg = toJson(g, true);
  CHECK(jg.at("k") == 2);
  CHECK(grassmannFromJson(jg).basis() == g.basis());
  CHECK(grassmannDistance(grassmannFromJson(Json::parse(toJson(g).dump())), g) < 1e-12);

  const auto f = gen.flag(5, 3);
  const auto jf = toJson(f, true);
  CHECK(jf.at("length") == 3);
  const auto back = flagFromJson(jf);
  REQUIRE(back.length() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(back.chain()[i].basis() == f.chain()[i].basis());

  CHECK(throwsKind([&] { grassmannFromJson(jx); }, ErrorKind::ParseError));
  CHECK(throwsKind([&] { projectiveFromJson(Json::array()); }, ErrorKind::ParseError));
}

TEST_CASE("barcode serialization") {
  topology::Barcode b;
  b.maxReportedDim = 1;
  b.intervals = {{0, 0.0, topology::kInfinity}, {1, 0.25, 0.5}};
  CHECK(toJson(b).dump() ==
        R"({"max_reported_dim":1,"intervals":[{"dim":0,"birth":0.0,"death":"inf"},{"dim":1,"birth":0.25,"death":0.5}]})");
  CHECK(barcodeToCsv(b) == "dim,birth,death\n0,0,inf\n1,0.25,0.5\n");
}

TEST_CASE("error objects") {
  const Error plain(ErrorKind::NoGap, "no gap");
  CHECK(errorToJson(plain).dump() == R"({"error":{"kind":"NoGap","message":"no gap"}})");
  const Error full(ErrorKind::FlagDegenerate, "row depends", 3, "text7");
  const auto j = errorToJson(full);
  CHECK(j.at("error").at("detail") == 3);
  CHECK(j.at("error").at("subject") == "text7");
}
