#include "stylepatch/rewrite.hpp"

#include <algorithm>
#include <set>

#include "stylepatch/error.hpp"

namespace stylepatch {

const char* to_string(MatchedSide side) {
  switch (side) {
    case MatchedSide::preceding:
      return "preceding";
    case MatchedSide::succeeding:
      return "succeeding";
    case MatchedSide::both:
      return "both";
  }
  return "?";
}

double overlap_ratio(std::size_t original_len, std::size_t span_len) {
  if (span_len < 1 || span_len > original_len) {
    throw ContractViolation("overlap_ratio requires 1 <= span_len <= original_len");
  }
  return static_cast<double>(original_len - span_len) / static_cast<double>(original_len);
}

bool context_matches(std::span<const std::string> folded, std::size_t begin, std::size_t end,
                     const JargonContexts& contexts, std::size_t k, MatchedSide* side) {
  const bool pre = !contexts.preceding.empty() &&
                   contexts.preceding.contains(preceding_window(folded, begin, k));
  const bool suc = !contexts.succeeding.empty() &&
                   contexts.succeeding.contains(succeeding_window(folded, end, k));
  if (side != nullptr) {
    *side = pre && suc ? MatchedSide::both : (pre ? MatchedSide::preceding : MatchedSide::succeeding);
  }
  return pre || suc;
}

std::vector<CandidateResponse> generate_candidates(const Utterance& response, const Lexicon& lexicon,
                                                   const JargonContextTable& table,
                                                   PairId pair_id) {
  std::vector<CandidateResponse> out;
  const std::size_t n = response.size();
  if (n == 0 || lexicon.empty() || table.per_jargon.size() != lexicon.size()) return out;
  const std::span<const std::string> folded(response.folded);
  const std::size_t k = table.neighbor_order;

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j <= std::min(n, i + kMaxSpanLength); ++j) {
      // Extending past a punctuation token can never become valid again.
      if (is_punctuation_token(response.tokens[j - 1])) break;
      for (std::size_t e = 0; e < lexicon.size(); ++e) {
        MatchedSide side{};
        if (!context_matches(folded, i, j, table.per_jargon[e], k, &side)) continue;
        const auto& entry = lexicon[e];
        if (std::equal(folded.begin() + static_cast<std::ptrdiff_t>(i),
                       folded.begin() + static_cast<std::ptrdiff_t>(j), entry.jargon_folded.begin(),
                       entry.jargon_folded.end())) {
          continue;
        }
        CandidateResponse c;
        c.tokens.reserve(n - (j - i) + entry.jargon.size());
        c.tokens.insert(c.tokens.end(), response.tokens.begin(),
                        response.tokens.begin() + static_cast<std::ptrdiff_t>(i));
        c.tokens.insert(c.tokens.end(), entry.jargon.begin(), entry.jargon.end());
        c.tokens.insert(c.tokens.end(), response.tokens.begin() + static_cast<std::ptrdiff_t>(j),
                        response.tokens.end());
        c.substitution = {pair_id, i, j, e, side};
        c.overlap = overlap_ratio(n, j - i);
        c.jargon_length = entry.jargon.size();
        out.push_back(std::move(c));
      }
    }
  }

  std::sort(out.begin(), out.end(), [](const CandidateResponse& a, const CandidateResponse& b) {
    if (a.overlap != b.overlap) return a.overlap > b.overlap;
    if (a.substitution.span_start != b.substitution.span_start) {
      return a.substitution.span_start < b.substitution.span_start;
    }
    return a.substitution.jargon_index < b.substitution.jargon_index;
  });
  std::set<TokenSeq> seen;
  std::erase_if(out, [&seen](const CandidateResponse& c) { return !seen.insert(c.tokens).second; });
  return out;
}

std::vector<CandidateResponse> rewrite_pair(const DialoguePair& pair, const Lexicon& lexicon,
                                            const JargonContextTable& table,
                                            const FluencyScorer& scorer,
                                            const FluencyPolicy& policy) {
  auto kept = filter(generate_candidates(pair.response, lexicon, table, pair.id), scorer,
                     policy.threshold);
  keep_best(kept, policy.top_m);
  return kept;
}

void keep_best(std::vector<CandidateResponse>& scored, std::size_t top_m) {
  std::stable_sort(scored.begin(), scored.end(),
                   [](const CandidateResponse& a, const CandidateResponse& b) {
                     if (*a.fluency != *b.fluency) return *a.fluency > *b.fluency;
                     return a.overlap > b.overlap;
                   });
  if (scored.size() > top_m) scored.resize(top_m);
}

}  // namespace stylepatch
