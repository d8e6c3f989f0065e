#pragma once

#include <cstddef>
#include <vector>

#include "stylepatch/candidate.hpp"
#include "stylepatch/corpus.hpp"
#include "stylepatch/fluency.hpp"

namespace stylepatch {

/// Longest substituted span, in tokens ("fewer than five words").
inline constexpr std::size_t kMaxSpanLength = 4;

/// Fraction of the original tokens a substitution preserves: (n - span) / n.
/// Throws ContractViolation unless 1 <= span_len <= n.
double overlap_ratio(std::size_t original_len, std::size_t span_len);

/// True when the k padded neighbors of [begin, end) in `folded` match the
/// observed contexts of the jargon; reports which side matched.
bool context_matches(std::span<const std::string> folded, std::size_t begin, std::size_t end,
                     const JargonContexts& contexts, std::size_t k, MatchedSide* side = nullptr);

/// Every single-span jargon substitution of the response that satisfies the
/// word, length and context constraints.
///
/// Spans are 1..4 tokens long, contain no punctuation token, and either the
/// k tokens before the span match a preceding context of the jargon or the
/// k tokens after it match a succeeding one. Substitutions that reproduce the
/// original tokens are skipped. The result is sorted by overlap descending,
/// then (span_start, jargon_index) ascending, and deduplicated by resulting
/// tokens keeping the first.
std::vector<CandidateResponse> generate_candidates(const Utterance& response, const Lexicon& lexicon,
                                                   const JargonContextTable& table,
                                                   PairId pair_id = 0);

/// Orders scored candidates by (fluency, overlap) descending and keeps the
/// first top_m.
void keep_best(std::vector<CandidateResponse>& scored, std::size_t top_m);

/// Candidates for one pair that pass the fluency filter, best first by
/// (fluency, overlap). An empty result means the pair is copied unchanged.
std::vector<CandidateResponse> rewrite_pair(const DialoguePair& pair, const Lexicon& lexicon,
                                            const JargonContextTable& table,
                                            const FluencyScorer& scorer,
                                            const FluencyPolicy& policy);

}  // namespace stylepatch
