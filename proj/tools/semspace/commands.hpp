#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "workspace.hpp"

namespace semspace::cli {

struct Options {
  fs::path config;
  fs::path out = "out";
  std::vector<std::string> texts;
  std::vector<std::string> tolerances;

  std::optional<std::string> geometry;
  std::optional<std::string> metric;
  std::optional<int> refine;
  std::optional<std::string> method;
  std::optional<Index> k;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;

  fs::path data;
  fs::path golden;
  bool updateGolden = false;
};

/// State shared by the commands of one invocation.
struct Session {
  Workspace ws;
  Corpus corpus;
  Output out;
  Options options;

  explicit Session(const Options& o);
};

void ingest(Session& s);
void matrix(Session& s);
void embed(Session& s);
void stratum(Session& s);
void dist(Session& s);
void project(Session& s);
void ph(Session& s);
void code(Session& s);
void latent(Session& s);
void consensus(Session& s);

/// Runs every command on the bundled corpus into options.out and compares the
/// files byte for byte with the golden directory. Returns the process exit code.
int demo(const Options& options);

}  // namespace semspace::cli
