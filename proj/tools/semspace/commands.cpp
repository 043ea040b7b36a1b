#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "semspace/consensus.hpp"
#include "semspace/latent.hpp"
#include "semspace/matroid.hpp"
#include "semspace/project.hpp"
#include "semspace/topology.hpp"

namespace semspace::cli {

using serialize::toJson;

Session::Session(const Options& o) : ws(o.config, o.tolerances), corpus(loadCorpus(ws)), out(o.out), options(o) {}

namespace {

std::vector<std::string> idsOf(const std::vector<const Text*>& texts) {
  std::vector<std::string> ids;
  for (const auto* t : texts) ids.push_back(t->id);
  return ids;
}

std::vector<std::string> contextLabels(const Text& t) {
  std::vector<std::string> labels;
  for (std::size_t j : t.kept) labels.push_back("c" + std::to_string(j));
  return labels;
}

Index embeddingK(const Session& s) { return s.ws.section("embedding").at("k").get<Index>(); }

Json errorBody(const Error& e) { return serialize::errorToJson(e).at("error"); }

Json minorList(const std::vector<matroid::MinorIndex>& minors) {
  Json out = Json::array();
  for (const auto& m : minors) out.push_back(m);
  return out;
}

latent::LatentOptions latentOptions(const Session& s) {
  latent::LatentOptions o;
  o.power.tol = s.ws.tolerance("power");
  o.power.maxIter = static_cast<std::size_t>(s.ws.tolerance("power_max_iter"));
  o.riccati.tol = s.ws.tolerance("riccati");
  return o;
}

consensus::KarcherOptions karcherOptions(const Session& s) {
  consensus::KarcherOptions o;
  o.tol = s.ws.tolerance("karcher");
  o.step = s.ws.tolerance("karcher_step");
  o.maxIter = static_cast<std::size_t>(s.ws.tolerance("karcher_max_iter"));
  return o;
}

std::string metricOf(const Session& s) {
  const std::string m = s.options.metric.value_or(s.ws.section("distance").at("metric").get<std::string>());
  if (m != "grassmann" && m != "flag" && m != "frechet") throw Error(ErrorKind::InvalidArgument, "unknown metric", std::nullopt, m);
  return m;
}

struct Distances {
  topology::DistanceMatrix dm;
  Matrix errorBounds;  // frechet only
  int refine = 0;
};

Distances distances(const Session& s, const std::vector<const Text*>& texts, const std::string& metric) {
  Distances out;
  out.dm.ids = idsOf(texts);
  const auto n = static_cast<Index>(texts.size());
  out.dm.d = Matrix::Zero(n, n);
  if (metric == "frechet") {
    out.refine = s.options.refine.value_or(s.ws.section("distance").at("refine").get<int>());
    out.errorBounds = Matrix::Zero(n, n);
    std::vector<paths::ProjectivePath> ps;
    for (const auto* t : texts) ps.push_back(textPath(s.corpus, *t));
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        const auto e = withSubject(texts[static_cast<std::size_t>(i)]->id, [&] {
          return paths::frechetDistance(ps[static_cast<std::size_t>(i)], ps[static_cast<std::size_t>(j)], out.refine);
        });
        out.dm.d(i, j) = out.dm.d(j, i) = e.value;
        out.errorBounds(i, j) = out.errorBounds(j, i) = e.errorBound;
      }
    }
    return out;
  }
  std::vector<topology::AnyPoint> pts;
  for (const auto* t : texts) {
    if (metric == "flag") {
      pts.emplace_back(textFlag(*t, s.ws.section("embedding").at("flag_length").get<std::size_t>()));
    } else {
      pts.emplace_back(textSubspace(*t, embeddingK(s)));
    }
  }
  out.dm = topology::distanceMatrix(pts, idsOf(texts));
  return out;
}

Json barcodeSummary(const topology::Barcode& b) {
  Json counts = Json::object();
  for (int q = 0; q <= b.maxReportedDim; ++q) {
    counts[std::to_string(q)] = Json{{"bars", b.count(q)}, {"essential", b.infiniteCount(q)}};
  }
  return counts;
}

Json matchingJson(const consensus::BarcodeMatching& m) {
  return Json{{"dim", m.dim}, {"matched", m.matched}, {"unmatched_user", m.unmatchedLeft},
              {"unmatched_merged", m.unmatchedRight}, {"cost", m.cost}};
}

}  // namespace

void ingest(Session& s) {
  const auto& c = s.corpus;
  s.out.json("matrices/dictionary.json", s.ws.provenance("ingest"),
             Json{{"ordering", s.ws.section("dictionary").at("ordering")},
                  {"size", c.dictionary.size()},
                  {"full_size", c.full.size()},
                  {"lexemes", c.dictionary.lexemes()}});
  Json texts = Json::array();
  for (const auto* t : selectTexts(c, s.options.texts)) {
    s.out.text("matrices/counts/" + t->id + ".csv",
               serialize::matrixToCsv(t->counts.counts.cast<double>(), c.dictionary.lexemes(), contextLabels(*t)));
    texts.push_back(Json{{"id", t->id},
                         {"language", t->language},
                         {"tokens", t->stream.tokens.size()},
                         {"sentences", t->stream.sentenceStarts.size() + 1},
                         {"paragraphs", t->stream.paragraphStarts.size() + 1},
                         {"contexts", t->contexts},
                         {"kept_contexts", t->kept}});
  }
  s.out.json("reports/ingest.json", s.ws.provenance("ingest"),
             Json{{"segmentation", s.ws.section("segmentation")}, {"texts", texts}});
}

void matrix(Session& s) {
  const auto& c = s.corpus;
  Json texts = Json::array();
  for (const auto* t : selectTexts(c, s.options.texts)) {
    s.out.text("matrices/" + t->id + ".csv", serialize::matrixToCsv(t->matrix, c.dictionary.lexemes(), contextLabels(*t)));
    texts.push_back(Json{{"id", t->id},
                         {"rows", t->matrix.rows()},
                         {"cols", t->matrix.cols()},
                         {"nonzero", (t->matrix.array() != 0.0).count()},
                         {"max", t->matrix.maxCoeff()}});
  }
  std::vector<double> freq = c.frequencies;
  std::sort(freq.begin(), freq.end(), std::greater<>());
  std::ostringstream zipfCsv;
  zipfCsv << "rank,frequency\n";
  for (std::size_t r = 0; r < freq.size(); ++r) zipfCsv << r + 1 << ',' << serialize::formatDouble(freq[r]) << '\n';
  s.out.text("reports/zipf.csv", zipfCsv.str());
  const auto fit = corpus::zipfFit(c.frequencies);
  s.out.json("reports/matrix.json", s.ws.provenance("matrix"),
             Json{{"transforms", s.ws.config().at("transforms")},
                  {"zipf", {{"kappa", fit.kappa}, {"exponent", fit.exponent}, {"residual", fit.residual}, {"ranks_used", fit.ranksUsed}}},
                  {"texts", texts}});
}

void embed(Session& s) {
  const std::string geometry = s.options.geometry.value_or(s.ws.config().at("geometry").get<std::string>());
  Json texts = Json::array();
  for (const auto* t : selectTexts(s.corpus, s.options.texts)) {
    Json entry{{"id", t->id}};
    Json point;
    if (geometry == "grassmann") {
      point = toJson(textSubspace(*t, embeddingK(s)));
    } else if (geometry == "flag") {
      const auto length = s.ws.section("embedding").at("flag_length").get<std::size_t>();
      point = toJson(textFlag(*t, length));
      std::vector<std::size_t> used;
      for (std::size_t j : flagContexts(*t, length)) used.push_back(t->kept[j]);
      entry["contexts"] = used;
    } else if (geometry == "path") {
      const auto p = textPath(s.corpus, *t);
      Json vertices = Json::array();
      for (const auto& v : p.vertices) vertices.push_back(toJson(v));
      point = Json{{"kind", "path"}, {"ambient", p.ambientDim()}, {"vertices", vertices}};
      entry["vertices"] = p.vertices.size();
      entry["length"] = paths::pathLength(p);
    } else {
      throw Error(ErrorKind::InvalidArgument, "unknown geometry", std::nullopt, geometry);
    }
    const std::string file = "points/" + geometry + "/" + t->id + ".json";
    s.out.json(file, s.ws.provenance("embed"), Json{{"text", t->id}, {"point", point}});
    entry["file"] = file;
    texts.push_back(entry);
  }
  s.out.json("reports/embed_" + geometry + ".json", s.ws.provenance("embed"), Json{{"geometry", geometry}, {"path_source", s.corpus.pathSource}, {"texts", texts}});
}

void stratum(Session& s) {
  Json texts = Json::array();
  for (const auto* t : selectTexts(s.corpus, s.options.texts)) {
    const Matrix p = textSubspace(*t, embeddingK(s)).basis().transpose();
    const auto st = withSubject(t->id, [&] { return matroid::matroidStratum(p); });
    const auto tnn = withSubject(t->id, [&] { return matroid::isTotallyNonnegative(p); });
    const auto pos = withSubject(t->id, [&] { return matroid::positroidCellCheck(p); });
    Json tnnJson{{"totally_nonnegative", tnn.totallyNonnegative}, {"tau", tnn.tau}};
    if (tnn.witness) tnnJson["witness"] = Json{{"minor", *tnn.witness}, {"value", tnn.witnessValue}};
    Json posJson{{"in_cell", pos.inCell}, {"reason", pos.reason}};
    if (pos.witness) posJson["witness"] = *pos.witness;
    texts.push_back(Json{{"id", t->id},
                         {"rows", p.rows()},
                         {"cols", p.cols()},
                         {"tau", st.tau},
                         {"examined", st.examined},
                         {"stratum_size", st.members.size()},
                         {"stratum", minorList(st.members)},
                         {"nonnegativity", tnnJson},
                         {"positroid", posJson}});
  }
  s.out.json("reports/stratum.json", s.ws.provenance("stratum"),
             Json{{"note", "minors are 0-based lexeme index sets over the dictionary"}, {"texts", texts}});
}

void dist(Session& s) {
  const std::string metric = metricOf(s);
  const auto texts = selectTexts(s.corpus, s.options.texts);
  const auto d = distances(s, texts, metric);
  s.out.text("matrices/dist_" + metric + ".csv", serialize::matrixToCsv(d.dm.d, d.dm.ids, d.dm.ids));
  Json body{{"metric", metric}, {"ids", d.dm.ids}, {"distances", serialize::matrixToJson(d.dm.d)}};
  if (metric == "frechet") {
    body["refine"] = d.refine;
    body["path_source"] = s.corpus.pathSource;
    body["error_bounds"] = serialize::matrixToJson(d.errorBounds);
  }
  s.out.json("reports/dist_" + metric + ".json", s.ws.provenance("dist"), body);
}

void project(Session& s) {
  const auto& cfg = s.ws.section("project");
  if (cfg.at("tagmap").is_null()) throw Error(ErrorKind::InvalidTagMap, "config names no tag map");
  const Json tm = s.ws.readJson(cfg.at("tagmap"));
  project::SemeGroups groups;
  try {
    for (const auto& [label, lexemes] : tm.at("groups").items()) groups.emplace_back(label, lexemes.get<std::vector<std::string>>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what(), std::nullopt, cfg.at("tagmap").get<std::string>());
  }
  const auto tag = project::tagMapFromGroups(s.corpus.dictionary, groups);
  const auto k = cfg.at("k").get<Index>();

  std::vector<project::NamedPoint> named;
  Json texts = Json::array();
  for (const auto* t : selectTexts(s.corpus, s.options.texts)) {
    const auto p = textSubspace(*t, embeddingK(s));
    named.push_back({t->id, p});
    const auto projected = withSubject(t->id, [&] { return project::projectSubspace(p, tag); });
    Json entry{{"id", t->id}};
    Json point;
    if (const auto* g = std::get_if<geom::GrassmannPoint>(&projected)) {
      point = toJson(*g);
    } else {
      const auto& drop = std::get<project::RankDrop>(projected);
      entry["rank_drop"] = drop.newRank;
      point = drop.image ? toJson(*drop.image) : Json(nullptr);
    }
    const auto path = withSubject(t->id, [&] { return project::projectPath(textPath(s.corpus, *t), tag); });
    Json vertices = Json::array();
    for (const auto& v : path.vertices) vertices.push_back(toJson(v));
    s.out.json("points/projected/" + t->id + ".json", s.ws.provenance("project"),
               Json{{"text", t->id}, {"subspace", point}, {"path", {{"kind", "path"}, {"ambient", path.ambientDim()}, {"vertices", vertices}}}});
    entry["path_length"] = paths::pathLength(path);
    texts.push_back(entry);
  }

  const auto report = project::kProjectability(named, tag, k);
  const auto violations = [](const std::vector<project::Violation>& vs) {
    Json out = Json::array();
    for (const auto& v : vs) out.push_back(Json{{"first", v.first}, {"second", v.second}, {"before", v.before}, {"after", v.after}});
    return out;
  };
  s.out.json("reports/project.json", s.ws.provenance("project"),
             Json{{"semes", tag.names()},
                  {"seme_count", tag.semeCount()},
                  {"k", report.k},
                  {"pairs_checked", report.pairsChecked},
                  {"violations", violations(report.violations)},
                  {"preexisting", violations(report.preexisting)},
                  {"rank_drops", report.rankDrops},
                  {"isomorphically_projectable", report.isomorphicallyProjectable},
                  {"texts", texts}});
}

void ph(Session& s) {
  const std::string metric = metricOf(s);
  const auto texts = selectTexts(s.corpus, s.options.texts);
  const auto d = distances(s, texts, metric);
  const auto& cfg = s.ws.section("ph");
  const double scale = cfg.at("max_scale");
  const int maxDim = cfg.at("max_dim");
  const auto fc = topology::vietorisRips(d.dm, scale, maxDim);
  const auto bars = topology::persistentHomology(fc);
  s.out.text("barcodes/" + metric + ".csv", serialize::barcodeToCsv(bars));
  s.out.json("barcodes/" + metric + ".json", s.ws.provenance("ph"),
             Json{{"metric", metric},
                  {"ids", d.dm.ids},
                  {"max_scale", scale},
                  {"max_dim", maxDim},
                  {"simplices", fc.simplices.size()},
                  {"summary", barcodeSummary(bars)},
                  {"barcode", toJson(bars)}});
}

void code(Session& s) {
  if (!s.options.seed) throw Error(ErrorKind::InvalidArgument, "code requires --seed");
  if (!s.options.samples) throw Error(ErrorKind::InvalidArgument, "code requires --samples");
  const auto& cfg = s.ws.section("code");
  const auto texts = selectTexts(s.corpus, s.options.texts);
  const auto dim = cfg.at("latent_dim").get<Index>();

  Index cols = 0;
  for (const auto* t : texts) cols += t->matrix.cols();
  Matrix all(s.corpus.dictionary.size(), cols);
  cols = 0;
  for (const auto* t : texts) {
    all.middleCols(cols, t->matrix.cols()) = t->matrix;
    cols += t->matrix.cols();
  }
  const auto basis = latent::latentSubspace(all.transpose(), dim, latent::LatentMethod::Svd).basis();

  std::vector<topology::AnyPoint> pts;
  Json points = Json::array();
  for (const auto* t : texts) {
    const Vector centroid = t->matrix.rowwise().sum();
    const auto p = withSubject(t->id, [&] { return geom::projectivePoint(basis.transpose() * centroid); });
    points.push_back(Json{{"id", t->id}, {"point", toJson(p)}});
    pts.emplace_back(p);
  }

  topology::CoveringOptions opt;
  opt.epsilon = cfg.at("epsilon");
  opt.samples = *s.options.samples;
  opt.seed = *s.options.seed;
  const auto nerve = topology::cechNerveApprox(pts, opt);
  const auto nc = topology::neuralCode(pts, opt);

  Json hits = Json::array();
  for (const auto& [set, count] : nerve.hits) hits.push_back(Json{{"set", set}, {"count", count}});
  Json words = Json::array();
  for (const auto& [word, count] : nc.hits) words.push_back(Json{{"word", word}, {"count", count}});
  s.out.json("reports/code.json", s.ws.provenance("code"),
             Json{{"seed", opt.seed},
                  {"samples", opt.samples},
                  {"epsilon", opt.epsilon},
                  {"radius", nerve.radius},
                  {"radius_clamped", nerve.radiusClamped},
                  {"points", points},
                  {"nerve", {{"facets", nerve.facets}, {"hits", hits}}},
                  {"code", {{"words", nc.words}, {"hits", words}}}});
}

void latent(Session& s) {
  const auto texts = selectTexts(s.corpus, s.options.texts);
  const Index k = s.options.k.value_or(s.ws.section("latent").at("k").get<Index>());
  const auto method = latent::parseLatentMethod(s.options.method.value_or("svd"));
  const auto opts = latentOptions(s);

  Index cols = 0;
  for (const auto* t : texts) cols += t->matrix.cols();
  Matrix all(s.corpus.dictionary.size(), cols);
  cols = 0;
  for (const auto* t : texts) {
    all.middleCols(cols, t->matrix.cols()) = t->matrix;
    cols += t->matrix.cols();
  }
  // Lexeme-space latent subspace: row space of the contexts-by-lexemes matrix.
  const Matrix p = all.transpose();
  const auto primary = latent::latentSubspace(p, k, method, opts);

  const auto sv = latent::svd(p);
  const Vector sigma = sv.sigma.head(std::min(sv.rank, k + 1));
  Json report{{"k", k}, {"method", latent::toString(method)}, {"lexemes", s.corpus.dictionary.size()}, {"contexts", cols},
              {"rank", sv.rank}, {"singular_values", std::vector<double>(sigma.data(), sigma.data() + sigma.size())}};
  if (k < sv.rank) report["eigen_gap_ratio"] = (sv.sigma(k - 1) * sv.sigma(k - 1)) / (sv.sigma(k) * sv.sigma(k));

  const Matrix a = latent::cooccurrence(p);
  Json agreement = Json::object();
  for (auto other : {latent::LatentMethod::Svd, latent::LatentMethod::Power, latent::LatentMethod::Riccati}) {
    const std::string name(latent::toString(other));
    try {
      Json entry{{"distance_to_primary", geom::grassmannDistance(latent::latentSubspace(p, k, other, opts), primary)}};
      if (other == latent::LatentMethod::Power) {
        const auto r = latent::grassmannPowerSequence(a, latent::defaultStart(a, k), opts.power);
        entry["iterations"] = r.iterations;
        entry["gap_estimate"] = r.gapEstimate;
      }
      if (other == latent::LatentMethod::Riccati) {
        const auto chart = latent::ChartState::around(a, latent::defaultStart(a, k));
        auto ro = opts.riccati;
        ro.sampleEvery = 0;
        const auto r = latent::riccatiFlow(chart, Matrix::Zero(chart.n() - k, k), ro);
        entry["time"] = r.time;
        entry["steps"] = r.steps;
        entry["stationarity_residual"] = r.residual;
      }
      agreement[name] = entry;
    } catch (const Error& e) {
      agreement[name] = Json{{"error", errorBody(e)}};
    }
  }
  report["agreement"] = agreement;
  const std::string tag(latent::toString(method));
  s.out.json("points/latent_" + tag + ".json", s.ws.provenance("latent"),
             Json{{"method", latent::toString(method)}, {"lexemes", s.corpus.dictionary.lexemes()}, {"point", toJson(primary)}});
  s.out.json("reports/latent_" + tag + ".json", s.ws.provenance("latent"), report);
}

void consensus(Session& s) {
  const auto& c = s.corpus;
  if (c.users.empty()) throw Error(ErrorKind::InsufficientData, "manifest lists no users");

  std::vector<consensus::UserCorpus> users;
  std::vector<double> weights;
  for (const auto& u : c.users) {
    consensus::UserCorpus uc{u.id, c.dictionary.lexemes(), {}};
    for (const auto& id : u.texts) uc.texts.push_back({id, c.text(id).matrix});
    users.push_back(std::move(uc));
    weights.push_back(u.weight);
  }
  consensus::validateWeights(weights, users.size());
  const auto merged = consensus::mergeCorpora(users);

  std::vector<geom::GrassmannPoint> points;
  Json userJson = Json::array();
  for (std::size_t i = 0; i < merged.views.size(); ++i) {
    points.push_back(consensus::userPoint(merged.views[i]));
    userJson.push_back(Json{{"id", merged.views[i].userId}, {"weight", weights[i]}, {"texts", merged.views[i].corpusIds}});
    s.out.json("points/users/" + merged.views[i].userId + ".json", s.ws.provenance("consensus"),
               Json{{"user", merged.views[i].userId}, {"point", toJson(points.back())}});
  }
  Matrix pairwise = Matrix::Zero(static_cast<Index>(points.size()), static_cast<Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      pairwise(static_cast<Index>(i), static_cast<Index>(j)) = pairwise(static_cast<Index>(j), static_cast<Index>(i)) =
          geom::grassmannDistance(points[i], points[j]);
    }
  }

  const auto bary = consensus::karcherBarycenter(points, weights, karcherOptions(s));
  s.out.json("points/barycenter.json", s.ws.provenance("consensus"), Json{{"point", toJson(bary.point)}});

  Json contexts = Json::array();
  for (const auto& ref : merged.contexts) contexts.push_back(Json{{"text", ref.textId}, {"context", c.text(ref.textId).kept[static_cast<std::size_t>(ref.position)]}});

  // Per-user complexes over the merged set of text subspaces.
  std::vector<const Text*> held;
  for (const auto& t : c.texts) {
    if (std::any_of(c.users.begin(), c.users.end(), [&](const User& u) { return std::count(u.texts.begin(), u.texts.end(), t.id) > 0; })) {
      held.push_back(&t);
    }
  }
  std::vector<consensus::UserMembership> memberships;
  for (const auto& u : c.users) {
    consensus::UserMembership m{u.id, {}};
    for (std::size_t i = 0; i < held.size(); ++i) {
      if (std::count(u.texts.begin(), u.texts.end(), held[i]->id) > 0) m.points.push_back(i);
    }
    memberships.push_back(std::move(m));
  }
  const double eps = s.ws.section("consensus").at("epsilon");
  const auto d = distances(s, held, "grassmann");
  const auto complex = consensus::barycentricComplexMerge(d.dm, memberships, eps);
  Json userComplexes = Json::array();
  for (const auto& u : complex.users) {
    Json cmp = Json::array();
    for (const auto& m : u.comparison) cmp.push_back(matchingJson(m));
    userComplexes.push_back(Json{{"id", u.userId}, {"summary", barcodeSummary(u.barcode)}, {"comparison", cmp}});
  }
  std::size_t shared = 0;
  for (const auto& o : complex.owners) shared += o.size() == c.users.size() ? 1 : 0;

  // Aligned texts are averaged over their common vertex prefix.
  Json aligned = Json::array();
  for (const auto& al : c.alignments) {
    std::map<std::string, std::vector<geom::ProjectivePoint>> byLanguage;
    std::size_t common = std::numeric_limits<std::size_t>::max();
    for (const auto& [lang, id] : al.textsByLanguage) {
      byLanguage[lang] = textPath(c, c.text(id)).vertices;
      common = std::min(common, byLanguage[lang].size());
    }
    for (auto& [lang, vertices] : byLanguage) vertices.erase(vertices.begin() + static_cast<long>(common), vertices.end());
    Json entry{{"id", al.id}, {"texts", al.textsByLanguage}, {"vertices_used", common}};
    try {
      const auto avg = consensus::crossLanguageAverage(byLanguage, {}, karcherOptions(s));
      Json vertices = Json::array();
      for (const auto& v : avg) vertices.push_back(toJson(v));
      s.out.json("points/aligned/" + al.id + ".json", s.ws.provenance("consensus"),
                 Json{{"alignment", al.id}, {"texts", al.textsByLanguage}, {"vertices", vertices}});
      std::vector<double> spread;
      for (std::size_t i = 0; i < avg.size(); ++i) {
        double worst = 0.0;
        for (const auto& [lang, vs] : byLanguage) worst = std::max(worst, geom::projDistance(vs[i], avg[i]));
        spread.push_back(worst);
      }
      entry["max_distance_to_language"] = spread;
    } catch (const Error& e) {
      entry["error"] = errorBody(e);
    }
    aligned.push_back(entry);
  }

  s.out.json("reports/consensus.json", s.ws.provenance("consensus"),
             Json{{"contexts", contexts},
                  {"users", userJson},
                  {"pairwise_distances", serialize::matrixToJson(pairwise)},
                  {"barycenter",
                   {{"iterations", bary.iterations},
                    {"backtracks", bary.backtracks},
                    {"final_grad_norm", bary.finalGradNorm},
                    {"potential", consensus::potential(points, weights, bary.point)},
                    {"grad_norm_trace", bary.gradNormTrace},
                    {"potential_trace", bary.potentialTrace},
                    {"distance_to_users", [&] {
                       std::vector<double> out;
                       for (const auto& p : points) out.push_back(geom::grassmannDistance(p, bary.point));
                       return out;
                     }()}}},
                  {"convexity", {{"max_pairwise_distance", bary.maxPairwiseDistance}, {"ok", bary.convexityOk}}},
                  {"complex",
                   {{"epsilon", eps},
                    {"texts", d.dm.ids},
                    {"simplices", complex.complex.simplices.size()},
                    {"simplices_held_by_all", shared},
                    {"summary", barcodeSummary(complex.barcode)},
                    {"users", userComplexes}}},
                  {"alignments", aligned}});
  if (!bary.convexityOk) {
    std::cerr << "warning: user points are not within pi/2 of each other; the barycenter may not be unique\n";
  }
}

namespace {

std::string slurpOrEmpty(const fs::path& p, bool& exists) {
  std::ifstream in(p, std::ios::binary);
  exists = static_cast<bool>(in);
  std::ostringstream ss;
  if (exists) ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int demo(const Options& options) {
  Options o = options;
  o.config = options.data / "config.json";
  o.texts.clear();
  Session s(o);
  const Json& demoCfg = s.ws.section("demo");
  s.options.seed = demoCfg.at("seed").get<std::uint64_t>();
  s.options.samples = demoCfg.at("samples").get<std::size_t>();

  ingest(s);
  matrix(s);
  for (const char* g : {"grassmann", "flag", "path"}) {
    s.options.geometry = g;
    embed(s);
  }
  stratum(s);
  for (const char* m : {"grassmann", "flag", "frechet"}) {
    s.options.metric = m;
    dist(s);
  }
  s.options.metric = std::nullopt;
  project(s);
  ph(s);
  code(s);
  for (const char* m : {"svd", "power", "riccati"}) {
    s.options.method = m;
    latent(s);
  }
  consensus(s);

  std::vector<std::string> files = s.out.written();
  std::sort(files.begin(), files.end());
  files.erase(std::unique(files.begin(), files.end()), files.end());

  Json mismatches = Json::array();
  if (options.updateGolden) {
    std::error_code ec;
    fs::remove_all(options.golden, ec);
    for (const auto& f : files) {
      fs::create_directories((options.golden / f).parent_path());
      fs::copy_file(s.out.root() / f, options.golden / f, fs::copy_options::overwrite_existing);
    }
  } else {
    for (const auto& f : files) {
      bool haveOut = false, haveGolden = false;
      const auto produced = slurpOrEmpty(s.out.root() / f, haveOut);
      const auto expected = slurpOrEmpty(options.golden / f, haveGolden);
      if (!haveGolden) {
        mismatches.push_back(Json{{"file", f}, {"reason", "missing golden file"}});
      } else if (produced != expected) {
        mismatches.push_back(Json{{"file", f}, {"reason", "content differs"}});
      }
    }
    if (fs::exists(options.golden)) {
      for (const auto& entry : fs::recursive_directory_iterator(options.golden)) {
        if (!entry.is_regular_file()) continue;
        const std::string rel = fs::relative(entry.path(), options.golden).generic_string();
        if (!std::binary_search(files.begin(), files.end(), rel)) mismatches.push_back(Json{{"file", rel}, {"reason", "not produced"}});
      }
    }
  }
  Json hashes = Json::object();
  for (const auto& f : files) {
    bool ok = false;
    hashes[f] = sha256Hex(slurpOrEmpty(s.out.root() / f, ok));
  }
  const bool pass = mismatches.empty();
  std::cout << Json{{"command", "demo"},
                    {"golden", options.updateGolden ? "updated" : pass ? "match" : "mismatch"},
                    {"files", files.size()},
                    {"mismatches", mismatches},
                    {"hashes", hashes}}
                   .dump(2)
            << '\n';
  return pass ? 0 : 1;
}

}  // namespace semspace::cli
