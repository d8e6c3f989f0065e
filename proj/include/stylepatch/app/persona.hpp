#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "stylepatch/engine.hpp"
#include "stylepatch/pipeline.hpp"

namespace stylepatch::app {

/// Environment variable naming the default persona bundle.
inline constexpr const char* kConfigEnv = "STYLEPATCH_CONFIG";

/// A persona bundle file (JSON). Relative paths resolve against the
/// bundle's directory.
///
///   {
///     "name": "geek",
///     "lexicon": "lexicon.tsv",
///     "stylized_corpus": "stylized.txt",
///     "embeddings": "embeddings.txt",        optional
///     "repository": "repository.jsonl",      optional, output of `rewrite`
///     "trigger_rate": 0.2,
///     "rewrite_policy": {
///       "threshold": null, "top_m": 1, "neighbor_order": 2,
///       "ngram_order": 3, "smoothing": 0.1, "keywords": 5,
///       "confidence_weights": {"fluency": 0.5, "overlap": 0.5}
///     }
///   }
struct PersonaBundle {
  std::string name;
  std::filesystem::path lexicon;
  std::filesystem::path stylized_corpus;
  std::optional<std::filesystem::path> embeddings;
  std::optional<std::filesystem::path> repository;
  RewritePolicy policy;
  double trigger_rate = 0.2;

  /// Parses the bundle and checks that referenced files exist. Throws
  /// InputError otherwise.
  static PersonaBundle load(const std::filesystem::path& path);
  /// Bundle from `explicit_path`, or from the environment variable when
  /// empty. Throws InputError when neither is available.
  static PersonaBundle resolve(const std::string& explicit_path);
};

/// Parsed persona inputs ready for rewriting and serving.
struct LoadedPersona {
  PersonaBundle bundle;
  StyleResources style;
  LoadReport lexicon_report;

  static LoadedPersona load(const PersonaBundle& bundle);
};

/// Engine over a stylized repository file and the generic corpus file,
/// configured from the persona.
std::shared_ptr<Engine> make_engine(const LoadedPersona& persona,
                                    const std::filesystem::path& repository,
                                    std::shared_ptr<const Repository> generic,
                                    std::optional<double> trigger_rate = std::nullopt);

std::shared_ptr<const Repository> load_generic(const std::filesystem::path& corpus);

}  // namespace stylepatch::app
