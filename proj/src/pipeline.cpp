#include "stylepatch/pipeline.hpp"

#include <algorithm>

namespace stylepatch {

StyleResources StyleResources::prepare(Lexicon lexicon, const StylizedCorpus& corpus,
                                       std::shared_ptr<const EmbeddingTable> embeddings,
                                       const RewritePolicy& policy) {
  StyleResources style;
  style.table = build_context_table(corpus, lexicon, policy.neighbor_order);
  style.lexicon = std::move(lexicon);
  style.model = std::make_shared<const NgramModel>(
      NgramModel::train(corpus, policy.ngram_order, policy.smoothing));
  style.embeddings = std::move(embeddings);
  return style;
}

namespace {

struct Accepted {
  const DialoguePair* pair;
  std::optional<CandidateResponse> candidate;
};

}  // namespace

RewriteResult rewrite_corpus(const std::vector<DialoguePair>& corpus, const StyleResources& style,
                             const RewritePolicy& policy) {
  RewriteResult result;
  auto& stats = result.stats;
  stats.pairs = corpus.size();

  std::vector<Accepted> accepted;
  for (const auto& pair : corpus) {
    auto candidates = generate_candidates(pair.response, style.lexicon, style.table, pair.id);
    stats.candidates += candidates.size();
    // Drop candidates whose jargon a longer overlapping phrase would claim
    // during alignment; their aligned response would miss the synonym.
    std::erase_if(candidates, [&](const CandidateResponse& c) {
      return !alignment_keeps_jargon(c, style.lexicon);
    });
    auto kept = filter(std::move(candidates), *style.model, policy.fluency.threshold);
    stats.accepted += kept.size();
    keep_best(kept, policy.fluency.top_m);
    if (kept.empty()) {
      accepted.push_back({&pair, std::nullopt});
      continue;
    }
    for (auto& c : kept) accepted.push_back({&pair, std::move(c)});
  }

  FluencyStats range;
  bool any = false;
  double fluency_sum = 0.0;
  for (const auto& a : accepted) {
    if (!a.candidate) continue;
    const double f = *a.candidate->fluency;
    range.min = any ? std::min(range.min, f) : f;
    range.max = any ? std::max(range.max, f) : f;
    any = true;
    fluency_sum += f;
  }

  result.repository.reserve(accepted.size());
  for (const auto& a : accepted) {
    const CandidateResponse* c = a.candidate ? &*a.candidate : nullptr;
    const double confidence =
        c ? style_confidence(*c->fluency, c->overlap, range, policy.confidence) : 0.0;
    auto record = assemble_pair(*a.pair, c, style.lexicon, style.embeddings.get(), policy.keywords,
                                confidence);
    record.pair_id = result.repository.size();
    if (record.copied) {
      ++stats.copied;
    } else {
      ++stats.rewritten;
    }
    result.repository.push_back(std::move(record));
  }
  if (stats.rewritten > 0) stats.mean_fluency = fluency_sum / static_cast<double>(stats.rewritten);
  return result;
}

Utterance direct_rewrite(const Utterance& response, const StyleResources& style,
                         const RewritePolicy& policy) {
  const DialoguePair pair{0, {}, response};
  FluencyPolicy single = policy.fluency;
  single.top_m = 1;
  const auto kept = rewrite_pair(pair, style.lexicon, style.table, *style.model, single);
  if (kept.empty()) return response;
  return from_tokens(kept.front().tokens);
}

}  // namespace stylepatch
