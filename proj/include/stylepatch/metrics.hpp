#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "stylepatch/corpus.hpp"
#include "stylepatch/engine.hpp"

namespace stylepatch {

/// Distinct n-grams (counted within each response) over the total number of
/// tokens across all responses. 0 when there are no tokens.
double distinct_n(std::span<const Utterance> responses, std::size_t n);

/// Machine proxy for the 0-2 style scale: 2 when a lexicon phrase occurs as
/// a contiguous (folded) token run, else 0. The weak-style band is not
/// detectable this way.
int style_degree_proxy(const Utterance& response, const Lexicon& lexicon);

/// Proxy for human relevance: the re-ranker's query/response match.
double relevance_proxy(const Utterance& query, const Utterance& response,
                       const ResponseMatcher& matcher);

/// Arithmetic mean of a relevance and a style score.
double rsa(double relevance, double style);

/// |distinct(r1) ∩ distinct(u2)| / |distinct(u2)|; 0 for an empty u2.
double followup_overlap(const Utterance& r1, const Utterance& u2);

struct SweepPoint {
  double trigger_rate;
  double relevance_proxy;
  double style_proxy;
  double triggered_fraction;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  std::vector<std::vector<Utterance>> replies;  // per rate, per query
};

/// Runs every query at each trigger rate (ascending) and averages the
/// proxies. The engine is left at the last rate.
SweepResult trigger_sweep(Engine& engine, const Lexicon& lexicon,
                          std::span<const std::string> queries, std::span<const double> rates);

/// Header plus one row per rate, values in fixed 6-decimal format.
void write_sweep_csv(std::ostream& out, std::span<const SweepPoint> points);

}  // namespace stylepatch
