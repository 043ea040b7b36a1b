#include "semspace/serialize.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace semspace::serialize {

std::string hexFloat(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", x);
  return buf;
}

double parseHexFloat(const std::string& s) {
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw Error(ErrorKind::ParseError, "not a floating-point literal: " + s);
  return x;
}

std::string formatDouble(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

double entryFromJson(const Json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parseHexFloat(v.get<std::string>());
  throw Error(ErrorKind::ParseError, "matrix entry is neither a number nor a hex-float string");
}

void requireKind(const Json& j, const char* kind) {
  if (!j.is_object() || !j.contains("kind") || j.at("kind") != kind) {
    throw Error(ErrorKind::ParseError, std::string("expected a serialized ") + kind + " point");
  }
}

}  // namespace

Json matrixToJson(const Matrix& m, bool exact) {
  Json data = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) {
      if (exact) {
        row.push_back(hexFloat(m(r, c)));
      } else {
        row.push_back(m(r, c));
      }
    }
    data.push_back(std::move(row));
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Matrix matrixFromJson(const Json& j) {
  try {
    const auto rows = j.at("rows").get<Index>();
    const auto cols = j.at("cols").get<Index>();
    const Json& data = j.at("data");
    if (rows < 0 || cols < 0 || data.size() != static_cast<std::size_t>(rows)) {
      throw Error(ErrorKind::ParseError, "matrix row count does not match its data");
    }
    Matrix m(rows, cols);
    for (Index r = 0; r < rows; ++r) {
      const Json& row = data.at(static_cast<std::size_t>(r));
      if (row.size() != static_cast<std::size_t>(cols)) throw Error(ErrorKind::ParseError, "ragged matrix row");
      for (Index c = 0; c < cols; ++c) m(r, c) = entryFromJson(row.at(static_cast<std::size_t>(c)));
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

std::string matrixToCsv(const Matrix& m, const std::vector<std::string>& rowLabels,
                        const std::vector<std::string>& colLabels) {
  const bool labelled = !rowLabels.empty();
  if ((labelled && rowLabels.size() != static_cast<std::size_t>(m.rows())) ||
      (!colLabels.empty() && colLabels.size() != static_cast<std::size_t>(m.cols()))) {
    throw Error(ErrorKind::DimensionMismatch, "CSV labels do not match the matrix shape");
  }
  std::ostringstream out;
  if (!colLabels.empty()) {
    if (labelled) out << ',';
    for (std::size_t c = 0; c < colLabels.size(); ++c) out << (c ? "," : "") << colLabels[c];
    out << '\n';
  }
  for (Index r = 0; r < m.rows(); ++r) {
    if (labelled) out << rowLabels[static_cast<std::size_t>(r)] << ',';
    for (Index c = 0; c < m.cols(); ++c) out << (c ? "," : "") << formatDouble(m(r, c));
    out << '\n';
  }
  return out.str();
}

Json toJson(const geom::ProjectivePoint& p, bool exact) {
  Json rep = Json::array();
  for (Index i = 0; i < p.ambientDim(); ++i) {
    if (exact) {
      rep.push_back(hexFloat(p.rep()(i)));
    } else {
      rep.push_back(p.rep()(i));
    }
  }
  return Json{{"kind", "projective"}, {"ambient", p.ambientDim()}, {"rep", std::move(rep)}};
}

Json toJson(const geom::GrassmannPoint& p, bool exact) {
  return Json{{"kind", "grassmann"}, {"k", p.k()}, {"ambient", p.ambientDim()}, {"basis", matrixToJson(p.basis(), exact)}};
}

Json toJson(const geom::FlagPoint& p, bool exact) {
  Json chain = Json::array();
  for (const auto& level : p.chain()) chain.push_back(toJson(level, exact));
  return Json{{"kind", "flag"}, {"length", p.length()}, {"ambient", p.ambientDim()}, {"chain", std::move(chain)}};
}

geom::ProjectivePoint projectiveFromJson(const Json& j) {
  requireKind(j, "projective");
  const Json& rep = j.at("rep");
  Vector v(static_cast<Index>(rep.size()));
  for (std::size_t i = 0; i < rep.size(); ++i) v(static_cast<Index>(i)) = entryFromJson(rep[i]);
  return geom::ProjectivePoint::fromVector(v);
}

geom::GrassmannPoint grassmannFromJson(const Json& j) {
  requireKind(j, "grassmann");
  return geom::GrassmannPoint::fromOrthonormal(matrixFromJson(j.at("basis")));
}

geom::FlagPoint flagFromJson(const Json& j) {
  requireKind(j, "flag");
  std::vector<geom::GrassmannPoint> chain;
  for (const auto& level : j.at("chain")) chain.push_back(grassmannFromJson(level));
  return geom::FlagPoint::fromChain(std::move(chain));
}

Json toJson(const topology::Barcode& b) {
  Json bars = Json::array();
  for (const auto& i : b.intervals) {
    Json death = std::isinf(i.death) ? Json("inf") : Json(i.death);
    bars.push_back(Json{{"dim", i.dim}, {"birth", i.birth}, {"death", std::move(death)}});
  }
  return Json{{"max_reported_dim", b.maxReportedDim}, {"intervals", std::move(bars)}};
}

std::string barcodeToCsv(const topology::Barcode& b) {
  std::ostringstream out;
  out << "dim,birth,death\n";
  for (const auto& i : b.intervals) out << i.dim << ',' << formatDouble(i.birth) << ',' << formatDouble(i.death) << '\n';
  return out.str();
}

Json errorToJson(const Error& e) {
  Json body{{"kind", std::string(toString(e.kind()))}, {"message", e.what()}};
  if (e.detail()) body["detail"] = *e.detail();
  if (!e.subject().empty()) body["subject"] = e.subject();
  return Json{{"error", std::move(body)}};
}

}  // namespace semspace::serialize
