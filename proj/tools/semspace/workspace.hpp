#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "semspace/corpus.hpp"
#include "semspace/geom.hpp"
#include "semspace/paths.hpp"
#include "semspace/serialize.hpp"

namespace semspace::cli {

namespace fs = std::filesystem;
using serialize::Json;

inline constexpr const char* kToolName = "semspace";

std::string sha256Hex(const std::string& bytes);

/// Defaults merged with the config file, then `name=value` tolerance
/// overrides. Unknown keys are rejected.
Json resolveConfig(const Json& fromFile, const std::vector<std::string>& toleranceOverrides);

/// Config plus every input file read through it, with content hashes.
class Workspace {
 public:
  Workspace(fs::path configPath, const std::vector<std::string>& toleranceOverrides);

  const Json& config() const { return config_; }
  const Json& section(const char* name) const { return config_.at(name); }
  double tolerance(const char* name) const { return config_.at("tolerances").at(name).get<double>(); }

  /// Reads a file named relative to the config directory and records its hash.
  std::string read(const std::string& relative);
  Json readJson(const std::string& relative);

  /// {"tool", "version", "command", "config", "inputs"}.
  Json provenance(const std::string& command) const;

 private:
  fs::path base_;
  Json config_;
  std::map<std::string, std::string> hashes_;
};

struct Text {
  std::string id;
  std::string language;
  corpus::TokenStream stream;
  std::size_t contexts = 0;           // before empty contexts are dropped
  std::vector<std::size_t> kept;      // 0-based positions of the nonempty contexts
  corpus::CountMatrix counts;         // truncated dictionary x kept contexts
  Matrix matrix;                      // after the transform chain
};

struct User {
  std::string id;
  std::vector<std::string> texts;
  double weight = 0.0;
};

struct Alignment {
  std::string id;
  std::map<std::string, std::string> textsByLanguage;
};

struct Corpus {
  corpus::Dictionary full;        // every lexeme, frequency ordered
  corpus::Dictionary dictionary;  // the leading `size` lexemes of `full`
  std::vector<double> frequencies;  // over `full`
  std::vector<Text> texts;          // manifest order
  std::vector<User> users;          // sorted by id
  std::vector<Alignment> alignments;
  std::string pathSource;  // "transformed" or "counts"

  const Text& text(const std::string& id) const;
};

/// Tokenizes, segments and counts every manifest document, then applies the
/// transform chain per text.
Corpus loadCorpus(Workspace& ws);

/// Texts named in `selection`, in manifest order; all texts when empty.
/// Throws IndexError for an unknown id.
std::vector<const Text*> selectTexts(const Corpus& c, const std::vector<std::string>& selection);

/// Text subspace in lexeme space: the leading k-dimensional latent subspace
/// of its context vectors.
geom::GrassmannPoint textSubspace(const Text& t, Index k);
/// Path through the text's context vectors, taken from the transformed
/// matrix or the raw counts as `Corpus::pathSource` says.
paths::ProjectivePath textPath(const Corpus& c, const Text& t);
/// Columns of the first `length` context vectors that each raise the rank of
/// their predecessors, in context order.
std::vector<std::size_t> flagContexts(const Text& t, std::size_t length);
/// Flag spanned by those context vectors.
geom::FlagPoint textFlag(const Text& t, std::size_t length);

/// Writes files under the output directory with the fixed layout.
class Output {
 public:
  explicit Output(fs::path root) : root_(std::move(root)) {}

  void text(const std::string& relative, const std::string& contents);
  /// Prepends {"provenance": ...} to the object.
  void json(const std::string& relative, const Json& provenance, const Json& body);

  const std::vector<std::string>& written() const { return written_; }
  const fs::path& root() const { return root_; }

 private:
  fs::path root_;
  std::vector<std::string> written_;
};

/// Runs `f`, attaching `subject` to any library error that lacks one.
template <class F>
auto withSubject(const std::string& subject, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (!e.subject().empty()) throw;
    throw e.withSubject(subject);
  }
}

}  // namespace semspace::cli
