#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "semspace/error.hpp"
#include "semspace/geom.hpp"
#include "semspace/topology.hpp"

namespace semspace::serialize {

using Json = nlohmann::ordered_json;

/// C99 hexadecimal float, exact for every finite double.
std::string hexFloat(double x);
double parseHexFloat(const std::string& s);

/// {"rows", "cols", "data": [[...], ...]}; with exact = true every entry is a
/// hex-float string instead of a number.
Json matrixToJson(const Matrix& m, bool exact = false);
Matrix matrixFromJson(const Json& j);

/// Shortest round-trip decimal for each entry; optional header row and
/// leading label column.
std::string matrixToCsv(const Matrix& m, const std::vector<std::string>& rowLabels = {},
                        const std::vector<std::string>& colLabels = {});

/// Shortest decimal that parses back to the same double.
std::string formatDouble(double x);

Json toJson(const geom::ProjectivePoint& p, bool exact = false);
Json toJson(const geom::GrassmannPoint& p, bool exact = false);
Json toJson(const geom::FlagPoint& p, bool exact = false);

geom::ProjectivePoint projectiveFromJson(const Json& j);
geom::GrassmannPoint grassmannFromJson(const Json& j);
geom::FlagPoint flagFromJson(const Json& j);

Json toJson(const topology::Barcode& b);
/// dim,birth,death with "inf" for essential classes.
std::string barcodeToCsv(const topology::Barcode& b);

/// {"error": {"kind", "message", "detail"?, "subject"?}}
Json errorToJson(const Error& e);

}  // namespace semspace::serialize
