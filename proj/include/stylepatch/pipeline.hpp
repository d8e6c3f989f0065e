#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "stylepatch/corpus.hpp"
#include "stylepatch/embedding.hpp"
#include "stylepatch/engine.hpp"
#include "stylepatch/fluency.hpp"
#include "stylepatch/rewrite.hpp"
#include "stylepatch/transform.hpp"

namespace stylepatch {

struct RewritePolicy {
  FluencyPolicy fluency;
  std::size_t neighbor_order = 2;
  std::size_t ngram_order = NgramModel::kDefaultOrder;
  double smoothing = NgramModel::kDefaultSmoothing;
  std::size_t keywords = kContextKeywords;
  ConfidenceWeights confidence;
};

/// Everything derived from one persona's inputs that rewriting needs.
struct StyleResources {
  Lexicon lexicon;
  JargonContextTable table;
  std::shared_ptr<const NgramModel> model;
  std::shared_ptr<const EmbeddingTable> embeddings;  // may be null

  static StyleResources prepare(Lexicon lexicon, const StylizedCorpus& corpus,
                                std::shared_ptr<const EmbeddingTable> embeddings,
                                const RewritePolicy& policy);
};

struct RewriteStats {
  std::size_t pairs = 0;
  std::size_t rewritten = 0;  // non-copied records
  std::size_t copied = 0;
  std::size_t candidates = 0;  // generated before filtering
  std::size_t accepted = 0;    // passed the fluency filter
  double mean_fluency = 0.0;   // over non-copied records
};

struct RewriteResult {
  std::vector<StylizedPair> repository;
  RewriteStats stats;
};

/// Rewrites every pair of the generic corpus. Each source pair contributes
/// its top_m accepted candidates, or one copied record when none survive.
/// Records get dense ids in source order; style confidences are scaled over
/// the fluency range of the whole output.
RewriteResult rewrite_corpus(const std::vector<DialoguePair>& corpus, const StyleResources& style,
                             const RewritePolicy& policy);

/// Rewrites a single response directly, without patching the repository:
/// the best accepted candidate, or the response unchanged.
Utterance direct_rewrite(const Utterance& response, const StyleResources& style,
                         const RewritePolicy& policy);

}  // namespace stylepatch
