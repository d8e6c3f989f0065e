#pragma once

#include <cstddef>
#include <optional>

#include "stylepatch/corpus.hpp"

namespace stylepatch {

enum class MatchedSide { preceding, succeeding, both };

const char* to_string(MatchedSide side);

/// Replacement of the half-open token span [span_start, span_end) of a
/// response by one lexicon jargon phrase.
struct SpanSubstitution {
  PairId pair_id = 0;
  std::size_t span_start = 0;
  std::size_t span_end = 0;
  std::size_t jargon_index = 0;
  MatchedSide matched_side = MatchedSide::preceding;

  [[nodiscard]] std::size_t span_length() const { return span_end - span_start; }
};

struct CandidateResponse {
  TokenSeq tokens;
  SpanSubstitution substitution;
  double overlap = 0.0;
  std::optional<double> fluency;
  /// Number of inserted jargon tokens, starting at substitution.span_start.
  std::size_t jargon_length = 0;

  [[nodiscard]] std::size_t jargon_begin() const { return substitution.span_start; }
  [[nodiscard]] std::size_t jargon_end() const { return substitution.span_start + jargon_length; }
};

}  // namespace stylepatch
