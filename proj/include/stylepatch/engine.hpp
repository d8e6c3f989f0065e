#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "stylepatch/corpus.hpp"
#include "stylepatch/embedding.hpp"
#include "stylepatch/index.hpp"
#include "stylepatch/transform.hpp"

namespace stylepatch {

struct RerankWeights {
  double context = 0.5;   // normalized recall score
  double response = 0.5;  // query / r' match
};

struct ConfidenceWeights {
  double fluency = 0.5;
  double overlap = 0.5;
};

struct EngineConfig {
  std::string persona;
  double trigger_rate = 0.2;
  std::size_t recall_k = kDefaultRecall;
  RerankWeights rerank;
  ConfidenceWeights confidence;
  std::string fallback = "…";
};

/// Throws ContractViolation for rates outside [0, 1], zero recall, or
/// negative / all-zero weights.
void validate(const EngineConfig& config);

/// Fluency range over the non-copied pairs of a repository.
struct FluencyStats {
  double min = 0.0;
  double max = 0.0;
};

/// weighted mean of min-max scaled fluency and overlap, in [0, 1]. A single
/// distinct fluency value scales to 1.
double style_confidence(double fluency, double overlap, const FluencyStats& stats,
                        const ConfidenceWeights& weights = {});
/// Copied pairs never carry style.
double style_confidence(const StylizedPair& pair, double fluency, double overlap,
                        const FluencyStats& stats, const ConfidenceWeights& weights = {});

inline constexpr double kNeverTrigger = std::numeric_limits<double>::infinity();

/// Confidence threshold that lets at least `rate` of the non-copied pairs
/// through, choosing the smallest such fraction (nearest rank). Rate 0 gives
/// +inf. Throws InputError("style never triggerable") without non-copied pairs.
double trigger_threshold(std::span<const double> confidences, double rate);
double set_trigger_rate(const std::vector<StylizedPair>& repository, double rate);

/// Query-response match used by the re-ranker and the relevance proxy.
class ResponseMatcher {
 public:
  virtual ~ResponseMatcher() = default;
  [[nodiscard]] virtual double match(const Utterance& query, const Utterance& response) const = 0;
};

/// Cosine between token-mean embedding vectors, clamped to [0, 1]. Falls
/// back to Jaccard overlap of folded token sets when there is no table or
/// either side has no in-vocabulary token.
class EmbeddingMatcher final : public ResponseMatcher {
 public:
  explicit EmbeddingMatcher(const EmbeddingTable* table = nullptr) : table_(table) {}
  [[nodiscard]] double match(const Utterance& query, const Utterance& response) const override;

 private:
  const EmbeddingTable* table_;
};

double jaccard(std::span<const std::string> a, std::span<const std::string> b);

/// A repository with its index. Immutable once built.
class Repository {
 public:
  explicit Repository(std::vector<StylizedPair> pairs, Bm25Params params = {});
  /// Generic repository: every dialogue pair under the copy rule.
  static Repository generic(const std::vector<DialoguePair>& pairs, Bm25Params params = {});

  [[nodiscard]] const std::vector<StylizedPair>& pairs() const { return pairs_; }
  [[nodiscard]] const InvertedIndex& index() const { return index_; }
  [[nodiscard]] const StylizedPair& at(PairId id) const;
  [[nodiscard]] std::size_t stylized_count() const { return stylized_; }

 private:
  std::vector<StylizedPair> pairs_;
  InvertedIndex index_;
  std::unordered_map<PairId, std::size_t> position_;
  std::size_t stylized_ = 0;
};

struct RankedCandidate {
  PairId pair_id;
  double recall_score;
  double rerank_score;
  double style_confidence;
};

/// score = alpha * recall / max_recall + beta * match(query, r'); descending,
/// ties to the lower id.
std::vector<RankedCandidate> rerank(const Utterance& query, std::span<const SearchHit> hits,
                                    const Repository& repository, const ResponseMatcher& matcher,
                                    const RerankWeights& weights);

struct EngineResponse {
  Utterance final_text;
  std::string reply;  // rendered final_text
  bool triggered = false;
  std::optional<PairId> source_pair;
  bool fallback = false;
  double threshold = kNeverTrigger;  // tau of the settings snapshot used
  std::vector<RankedCandidate> styled_debug;
  std::vector<RankedCandidate> generic_debug;
};

struct Turn {
  std::string user;
  std::string reply;
  bool triggered;
};

/// Append-only transcript. Appends from concurrent requests serialize on
/// the session's own mutex.
class Session {
 public:
  explicit Session(std::string id) : id_(std::move(id)) {}
  [[nodiscard]] const std::string& id() const { return id_; }
  void append(Turn turn);
  [[nodiscard]] std::vector<Turn> turns() const;

 private:
  std::string id_;
  mutable std::mutex mutex_;
  std::vector<Turn> turns_;
};

class SessionStore {
 public:
  /// Existing session for `id`, or a new empty one.
  std::shared_ptr<Session> open(const std::string& id);
  [[nodiscard]] std::shared_ptr<Session> find(const std::string& id) const;

 private:
  mutable std::mutex mutex_;
  std::unordered_map<std::string, std::shared_ptr<Session>> sessions_;
};

/// Patched retrieval pipeline over a stylized and a generic repository.
///
/// Configuration changes swap an immutable snapshot, so every request sees
/// a single consistent (config, threshold) pair.
class Engine {
 public:
  Engine(std::shared_ptr<const Repository> styled, std::shared_ptr<const Repository> generic,
         std::shared_ptr<const EmbeddingTable> embeddings, EngineConfig config);

  /// Recomputes the threshold; returns it.
  double set_trigger_rate(double rate);
  void set_config(EngineConfig config);
  [[nodiscard]] EngineConfig config() const;
  [[nodiscard]] double threshold() const;

  [[nodiscard]] EngineResponse respond(std::string_view utterance) const;
  EngineResponse respond(Session& session, std::string_view utterance) const;
  [[nodiscard]] EngineResponse generic_respond(std::string_view utterance) const;

  [[nodiscard]] const Repository& styled() const { return *styled_; }
  [[nodiscard]] const Repository& generic() const { return *generic_; }
  [[nodiscard]] const ResponseMatcher& matcher() const { return matcher_; }

 private:
  struct Settings {
    EngineConfig config;
    double threshold;
  };
  [[nodiscard]] std::shared_ptr<const Settings> snapshot() const;
  [[nodiscard]] std::shared_ptr<const Settings> make_settings(EngineConfig config) const;

  std::shared_ptr<const Repository> styled_;
  std::shared_ptr<const Repository> generic_;
  std::shared_ptr<const EmbeddingTable> embeddings_;
  EmbeddingMatcher matcher_;
  mutable std::mutex settings_mutex_;
  std::shared_ptr<const Settings> settings_;
};

}  // namespace stylepatch
