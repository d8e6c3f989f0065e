#include "stylepatch/app/persona.hpp"

#include <cstdlib>
#include <fstream>

#include <nlohmann/json.hpp>

#include "stylepatch/error.hpp"

namespace stylepatch::app {
namespace {

std::filesystem::path resolve_file(const std::filesystem::path& base, const std::string& value,
                                   const char* field, bool must_exist = true) {
  std::filesystem::path p(value);
  if (p.is_relative()) p = base / p;
  if (must_exist && !std::filesystem::exists(p)) {
    throw InputError(std::string("persona field '") + field + "': missing file " + p.string());
  }
  return p;
}

}  // namespace

PersonaBundle PersonaBundle::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open persona bundle " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("persona bundle " + path.string() + ": " + e.what());
  }
  const auto base = path.parent_path();
  PersonaBundle b;
  try {
    b.name = doc.at("name").get<std::string>();
    b.lexicon = resolve_file(base, doc.at("lexicon").get<std::string>(), "lexicon");
    b.stylized_corpus =
        resolve_file(base, doc.at("stylized_corpus").get<std::string>(), "stylized_corpus");
    if (doc.contains("embeddings") && !doc["embeddings"].is_null()) {
      b.embeddings = resolve_file(base, doc["embeddings"].get<std::string>(), "embeddings");
    }
    if (doc.contains("repository") && !doc["repository"].is_null()) {
      b.repository = resolve_file(base, doc["repository"].get<std::string>(), "repository", false);
    }
    b.trigger_rate = doc.value("trigger_rate", 0.2);
    if (!(b.trigger_rate >= 0.0 && b.trigger_rate <= 1.0)) {
      throw InputError("persona trigger_rate must lie in [0, 1]");
    }
    if (doc.contains("rewrite_policy")) {
      const auto& rp = doc["rewrite_policy"];
      auto& p = b.policy;
      if (rp.contains("threshold") && !rp["threshold"].is_null()) {
        p.fluency.threshold = rp["threshold"].get<double>();
      }
      p.fluency.top_m = rp.value("top_m", p.fluency.top_m);
      p.neighbor_order = rp.value("neighbor_order", p.neighbor_order);
      p.ngram_order = rp.value("ngram_order", p.ngram_order);
      p.smoothing = rp.value("smoothing", p.smoothing);
      p.keywords = rp.value("keywords", p.keywords);
      if (rp.contains("confidence_weights")) {
        const auto& cw = rp["confidence_weights"];
        p.confidence.fluency = cw.value("fluency", p.confidence.fluency);
        p.confidence.overlap = cw.value("overlap", p.confidence.overlap);
      }
      if (p.fluency.top_m == 0) throw InputError("rewrite_policy.top_m must be >= 1");
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError("persona bundle " + path.string() + ": " + e.what());
  }
  return b;
}

PersonaBundle PersonaBundle::resolve(const std::string& explicit_path) {
  if (!explicit_path.empty()) return load(explicit_path);
  if (const char* env = std::getenv(kConfigEnv); env != nullptr && *env != '\0') return load(env);
  throw InputError(std::string("no persona bundle given and ") + kConfigEnv + " is unset");
}

LoadedPersona LoadedPersona::load(const PersonaBundle& bundle) {
  LoadReport report;
  auto lexicon = load_lexicon(bundle.lexicon, &report);
  const auto corpus = load_stylized_corpus(bundle.stylized_corpus);
  std::shared_ptr<const EmbeddingTable> embeddings;
  if (bundle.embeddings) {
    embeddings = std::make_shared<const EmbeddingTable>(EmbeddingTable::load(*bundle.embeddings));
  }
  return {bundle,
          StyleResources::prepare(std::move(lexicon), corpus, std::move(embeddings), bundle.policy),
          std::move(report)};
}

std::shared_ptr<const Repository> load_generic(const std::filesystem::path& corpus) {
  return std::make_shared<const Repository>(Repository::generic(load_dialogue_corpus(corpus)));
}

std::shared_ptr<Engine> make_engine(const LoadedPersona& persona,
                                    const std::filesystem::path& repository,
                                    std::shared_ptr<const Repository> generic,
                                    std::optional<double> trigger_rate) {
  auto styled = std::make_shared<const Repository>(load_repository(repository));
  EngineConfig config;
  config.persona = persona.bundle.name;
  config.trigger_rate = trigger_rate.value_or(persona.bundle.trigger_rate);
  config.confidence = persona.bundle.policy.confidence;
  return std::make_shared<Engine>(std::move(styled), std::move(generic), persona.style.embeddings,
                                  std::move(config));
}

}  // namespace stylepatch::app
