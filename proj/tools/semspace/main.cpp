#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

using namespace semspace;
using namespace semspace::cli;

int fail(const Error& e) {
  std::cout << serialize::errorToJson(e).dump(2) << '\n';
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  o.data = SEMSPACE_DATA_DIR;
  o.golden = fs::path(SEMSPACE_DATA_DIR) / "golden";

  CLI::App app{"Geometric semantic spaces from text corpora"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", SEMSPACE_VERSION);
  app.add_option("--config", o.config, "Pipeline config (JSON)");
  app.add_option("--out", o.out, "Output directory")->capture_default_str();
  app.add_option("--texts", o.texts, "Restrict to these text ids")->delimiter(',');
  app.add_option("--tol", o.tolerances, "Tolerance override name=value (repeatable)");

  using Command = void (*)(Session&);
  const std::map<std::string, std::pair<Command, std::string>> commands{
      {"ingest", {ingest, "Dictionary and count matrices"}},
      {"matrix", {matrix, "Frequency/PPMI/weighted matrices and Zipf report"}},
      {"embed", {embed, "Grassmann, flag or path serialization per text"}},
      {"stratum", {stratum, "Matroid stratum, total nonnegativity and positroid verdicts"}},
      {"dist", {dist, "Pairwise distance matrix"}},
      {"project", {project, "Tag-map projection and projectability report"}},
      {"ph", {ph, "Vietoris-Rips barcode"}},
      {"code", {code, "Cech nerve and neural code by sampling"}},
      {"latent", {latent, "Latent subspace and cross-method agreement"}},
      {"consensus", {consensus, "Merged user views and weighted barycenter"}},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, entry] : commands) subs[name] = app.add_subcommand(name, entry.second);

  subs["embed"]->add_option("--geometry", o.geometry, "grassmann | flag | path");
  subs["dist"]->add_option("--metric", o.metric, "grassmann | flag | frechet");
  subs["dist"]->add_option("--refine", o.refine, "Edge subdivisions for the Frechet estimate");
  subs["ph"]->add_option("--metric", o.metric, "grassmann | flag | frechet");
  subs["ph"]->add_option("--refine", o.refine, "Edge subdivisions for the Frechet estimate");
  subs["code"]->add_option("--seed", o.seed, "Sampling seed")->required();
  subs["code"]->add_option("--samples", o.samples, "Number of ambient samples")->required();
  subs["latent"]->add_option("--method", o.method, "svd | power | riccati");
  subs["latent"]->add_option("--k", o.k, "Latent dimension");

  auto* demoCmd = app.add_subcommand("demo", "Full pipeline on the bundled corpus, checked against golden outputs");
  demoCmd->add_option("--data", o.data, "Bundled corpus directory")->capture_default_str();
  demoCmd->add_option("--golden", o.golden, "Golden output directory")->capture_default_str();
  demoCmd->add_flag("--update-golden", o.updateGolden, "Replace the golden outputs with this run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(Error(ErrorKind::InvalidArgument, e.what()));
  }

  try {
    if (demoCmd->parsed()) return demo(o);
    for (const auto& [name, entry] : commands) {
      if (!subs[name]->parsed()) continue;
      if (o.config.empty()) throw Error(ErrorKind::InvalidArgument, "--config is required");
      Session s(o);
      entry.first(s);
      std::cout << serialize::Json{{"command", name}, {"written", s.out.written()}}.dump(2) << '\n';
    }
    return 0;
  } catch (const Error& e) {
    return fail(e);
  } catch (const std::exception& e) {
    return fail(Error(ErrorKind::IoError, e.what()));
  }
}
