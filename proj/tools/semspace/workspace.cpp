#include "workspace.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "semspace/latent.hpp"

namespace semspace::cli {

std::string sha256Hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::IoError, "SHA-256 digest failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < length; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

namespace {

Json defaults() {
  return Json::parse(R"({
    "manifest": "manifest.json",
    "normalization": null,
    "dictionary": {"ordering": "frequency", "size": 30},
    "segmentation": {"kind": "sentence", "width": 0, "stride": 0},
    "transforms": ["frequency", "ppmi"],
    "geometry": "grassmann",
    "embedding": {"k": 2, "flag_length": 2, "path_source": "transformed"},
    "distance": {"metric": "grassmann", "refine": 8},
    "ph": {"max_scale": 3.0, "max_dim": 2},
    "code": {"latent_dim": 3, "epsilon": 0.8},
    "project": {"tagmap": null, "k": 1},
    "latent": {"k": 3},
    "consensus": {"epsilon": 2.5},
    "demo": {"seed": 0, "samples": 1000},
    "tolerances": {
      "karcher": 1e-10,
      "karcher_step": 0.5,
      "karcher_max_iter": 10000,
      "power": 1e-12,
      "power_max_iter": 100000,
      "riccati": 1e-9
    }
  })");
}

void mergeInto(Json& target, const Json& source, const std::string& path) {
  for (const auto& [key, value] : source.items()) {
    if (!target.contains(key)) throw Error(ErrorKind::ParseError, "unknown config key", std::nullopt, path + key);
    Json& slot = target[key];
    if (slot.is_object() && value.is_object()) {
      mergeInto(slot, value, path + key + ".");
    } else {
      slot = value;
    }
  }
}

void validate(const Json& c) {
  const auto& t = c.at("transforms");
  if (!t.is_array() || t.empty() || t.front() != "frequency") {
    throw Error(ErrorKind::ParseError, "transform chain must start with frequency");
  }
  std::size_t stage = 0;
  for (const auto& step : t) {
    const std::size_t rank = step == "frequency" ? 1 : step == "ppmi" ? 2 : step == "entropy" ? 3 : 0;
    if (rank == 0) throw Error(ErrorKind::ParseError, "unknown transform", std::nullopt, step.dump());
    if (rank <= stage) throw Error(ErrorKind::ParseError, "transform chain out of order", std::nullopt, step.dump());
    stage = rank;
  }
  const std::string g = c.at("geometry");
  if (g != "grassmann" && g != "flag" && g != "path") throw Error(ErrorKind::ParseError, "unknown geometry", std::nullopt, g);
  const std::string m = c.at("distance").at("metric");
  if (m != "grassmann" && m != "flag" && m != "frechet") throw Error(ErrorKind::ParseError, "unknown metric", std::nullopt, m);
  const std::string o = c.at("dictionary").at("ordering");
  if (o != "frequency" && o != "apparition") throw Error(ErrorKind::ParseError, "unknown dictionary ordering", std::nullopt, o);
  const std::string s = c.at("segmentation").at("kind");
  if (s != "sentence" && s != "paragraph" && s != "window") throw Error(ErrorKind::ParseError, "unknown segmentation", std::nullopt, s);
  const std::string ps = c.at("embedding").at("path_source");
  if (ps != "transformed" && ps != "counts") throw Error(ErrorKind::ParseError, "unknown path source", std::nullopt, ps);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot read file", std::nullopt, p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Json resolveConfig(const Json& fromFile, const std::vector<std::string>& toleranceOverrides) {
  if (!fromFile.is_object()) throw Error(ErrorKind::ParseError, "config must be a JSON object");
  Json c = defaults();
  mergeInto(c, fromFile, "");
  for (const auto& o : toleranceOverrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::InvalidArgument, "tolerance override must be name=value", std::nullopt, o);
    const std::string name = o.substr(0, eq);
    if (!c["tolerances"].contains(name)) throw Error(ErrorKind::InvalidArgument, "unknown tolerance", std::nullopt, name);
    c["tolerances"][name] = serialize::parseHexFloat(o.substr(eq + 1));
  }
  validate(c);
  return c;
}

Workspace::Workspace(fs::path configPath, const std::vector<std::string>& toleranceOverrides)
    : base_(configPath.parent_path()) {
  const std::string raw = slurp(configPath);
  hashes_[configPath.filename().string()] = sha256Hex(raw);
  Json parsed;
  try {
    parsed = Json::parse(raw);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what(), std::nullopt, configPath.filename().string());
  }
  config_ = resolveConfig(parsed, toleranceOverrides);
}

std::string Workspace::read(const std::string& relative) {
  std::string raw = slurp(base_ / relative);
  hashes_[relative] = sha256Hex(raw);
  return raw;
}

Json Workspace::readJson(const std::string& relative) {
  const std::string raw = read(relative);
  try {
    return Json::parse(raw);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what(), std::nullopt, relative);
  }
}

Json Workspace::provenance(const std::string& command) const {
  Json inputs = Json::object();
  for (const auto& [name, hash] : hashes_) inputs[name] = hash;
  return Json{{"tool", kToolName}, {"version", SEMSPACE_VERSION}, {"command", command}, {"config", config_}, {"inputs", inputs}};
}

const Text& Corpus::text(const std::string& id) const {
  for (const auto& t : texts) {
    if (t.id == id) return t;
  }
  throw Error(ErrorKind::IndexError, "unknown text id", std::nullopt, id);
}

namespace {

corpus::SegmentationPolicy policyFrom(const Json& s) {
  const std::string kind = s.at("kind");
  if (kind == "paragraph") return corpus::SegmentationPolicy::paragraph();
  if (kind == "window") return corpus::SegmentationPolicy::window(s.at("width").get<std::size_t>(), s.at("stride").get<std::size_t>());
  return corpus::SegmentationPolicy::sentence();
}

Matrix transform(const corpus::CountMatrix& counts, const Json& chain) {
  const auto fm = corpus::frequencyMatrix(counts);
  Matrix x = fm.p;
  for (const auto& step : chain) {
    if (step == "ppmi") x = corpus::ppmiMatrix(fm).x;
    if (step == "entropy") x = corpus::entropyWeight(x).weighted;
  }
  return x;
}

}  // namespace

Corpus loadCorpus(Workspace& ws) {
  const Json& cfg = ws.config();
  const std::string manifestPath = cfg.at("manifest");
  const Json manifest = ws.readJson(manifestPath);
  const fs::path manifestDir = fs::path(manifestPath).parent_path();
  const auto rel = [&](const std::string& p) { return (manifestDir / p).lexically_normal().generic_string(); };

  corpus::TokenizerConfig tok;
  try {
    if (manifest.contains("stoplist")) {
      std::istringstream words(ws.read(rel(manifest.at("stoplist"))));
      for (std::string w; words >> w;) tok.stoplist.insert(w);
    }
    if (!cfg.at("normalization").is_null()) {
      tok.normalization = ws.readJson(cfg.at("normalization").get<std::string>()).get<std::map<std::string, std::string>>();
    }

    Corpus c;
    c.pathSource = cfg.at("embedding").at("path_source").get<std::string>();
    std::vector<corpus::TokenStream> streams;
    for (const auto& d : manifest.at("documents")) {
      corpus::Document doc{d.at("id"), ws.read(rel(d.at("path"))), std::nullopt};
      if (d.contains("language")) doc.language = d.at("language").get<std::string>();
      Text t;
      t.id = doc.id;
      t.language = doc.language.value_or("");
      t.stream = corpus::tokenize(doc, tok);
      streams.push_back(t.stream);
      c.texts.push_back(std::move(t));
    }

    const bool byFrequency = cfg.at("dictionary").at("ordering") == "frequency";
    c.full = corpus::buildDictionary(streams, byFrequency ? corpus::DictionaryOrdering::Frequency : corpus::DictionaryOrdering::Apparition,
                                     tok.stoplist);
    c.frequencies = corpus::tokenFrequencies(c.full, streams);
    const std::size_t size = std::min(cfg.at("dictionary").at("size").get<std::size_t>(), c.full.size());
    c.dictionary = corpus::Dictionary(std::vector<std::string>(c.full.lexemes().begin(), c.full.lexemes().begin() + static_cast<long>(size)),
                                      c.full.ordering(), tok.stoplist);

    const auto policy = policyFrom(cfg.at("segmentation"));
    for (auto& t : c.texts) {
      withSubject(t.id, [&] {
        const auto seg = corpus::segmentContexts(t.stream, policy);
        const auto all = corpus::countMatrix(t.stream.tokens, seg, c.full);
        t.contexts = seg.contexts.size();
        const corpus::CountArray top = all.counts.topRows(static_cast<Index>(size));
        for (Index j = 0; j < top.cols(); ++j) {
          if (top.col(j).any()) t.kept.push_back(static_cast<std::size_t>(j));
        }
        if (t.kept.empty()) throw Error(ErrorKind::EmptyCounts, "no context contains a dictionary lexeme");
        t.counts.counts.resize(top.rows(), static_cast<Index>(t.kept.size()));
        for (std::size_t j = 0; j < t.kept.size(); ++j) t.counts.counts.col(static_cast<Index>(j)) = top.col(static_cast<Index>(t.kept[j]));
        t.matrix = transform(t.counts, cfg.at("transforms"));
      });
    }

    const Json users = manifest.value("users", Json::array());
    std::size_t weighted = 0;
    for (const auto& u : users) weighted += u.contains("weight") ? 1 : 0;
    if (weighted != 0 && weighted != users.size()) throw Error(ErrorKind::ParseError, "either every user or no user carries a weight");
    for (const auto& u : users) {
      const double w = weighted ? u.at("weight").get<double>() : 1.0 / static_cast<double>(users.size());
      c.users.push_back({u.at("id"), u.at("texts").get<std::vector<std::string>>(), w});
      for (const auto& id : c.users.back().texts) c.text(id);
    }
    std::sort(c.users.begin(), c.users.end(), [](const User& a, const User& b) { return a.id < b.id; });
    for (const auto& a : manifest.value("alignments", Json::array())) {
      c.alignments.push_back({a.at("id"), a.at("texts").get<std::map<std::string, std::string>>()});
      for (const auto& [lang, id] : c.alignments.back().textsByLanguage) {
        if (c.text(id).language != lang) throw Error(ErrorKind::ParseError, "alignment language does not match the document tag", std::nullopt, id);
      }
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what(), std::nullopt, manifestPath);
  }
}

std::vector<const Text*> selectTexts(const Corpus& c, const std::vector<std::string>& selection) {
  std::vector<const Text*> out;
  for (const auto& id : selection) c.text(id);
  for (const auto& t : c.texts) {
    if (selection.empty() || std::find(selection.begin(), selection.end(), t.id) != selection.end()) out.push_back(&t);
  }
  return out;
}

geom::GrassmannPoint textSubspace(const Text& t, Index k) {
  return withSubject(t.id, [&] { return latent::latentSubspace(t.matrix.transpose(), k, latent::LatentMethod::Svd); });
}

paths::ProjectivePath textPath(const Corpus& c, const Text& t) {
  return withSubject(t.id, [&] {
    return c.pathSource == "counts" ? paths::textPath(t.counts.counts.cast<double>(), t.id) : paths::textPath(t.matrix, t.id);
  });
}

std::vector<std::size_t> flagContexts(const Text& t, std::size_t length) {
  std::vector<std::size_t> chosen;
  Matrix rows(0, t.matrix.rows());
  for (Index j = 0; j < t.matrix.cols() && chosen.size() < length; ++j) {
    Matrix next(rows.rows() + 1, rows.cols());
    next << rows, t.matrix.col(j).transpose();
    if (numericalRank(next) == next.rows()) {
      rows = std::move(next);
      chosen.push_back(static_cast<std::size_t>(j));
    }
  }
  if (length == 0 || chosen.size() < length) {
    throw Error(ErrorKind::FlagDegenerate, "fewer independent contexts than the flag length", static_cast<long long>(chosen.size()), t.id);
  }
  return chosen;
}

geom::FlagPoint textFlag(const Text& t, std::size_t length) {
  const auto chosen = flagContexts(t, length);
  Matrix rows(static_cast<Index>(chosen.size()), t.matrix.rows());
  for (std::size_t i = 0; i < chosen.size(); ++i) rows.row(static_cast<Index>(i)) = t.matrix.col(static_cast<Index>(chosen[i])).transpose();
  return withSubject(t.id, [&] { return geom::flagPoint(rows); });
}

void Output::text(const std::string& relative, const std::string& contents) {
  const fs::path p = root_ / relative;
  std::error_code ec;
  fs::create_directories(p.parent_path(), ec);
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write file", std::nullopt, p.string());
  out << contents;
  if (!out) throw Error(ErrorKind::IoError, "write failed", std::nullopt, p.string());
  written_.push_back(relative);
}

void Output::json(const std::string& relative, const Json& provenance, const Json& body) {
  Json doc{{"provenance", provenance}};
  for (const auto& [key, value] : body.items()) doc[key] = value;
  text(relative, doc.dump(2) + "\n");
}

}  // namespace semspace::cli
