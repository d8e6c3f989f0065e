#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <unordered_set>
#include <vector>

#include "stylepatch/candidate.hpp"

namespace stylepatch {

/// Relative fluency of the substituted part of a candidate. Higher is more
/// fluent; only the ordering of scores matters to the filter.
class FluencyScorer {
 public:
  virtual ~FluencyScorer() = default;
  [[nodiscard]] virtual double score(const CandidateResponse& candidate) const = 0;
};

/// Add-k smoothed n-gram model over boundary-padded posts.
///
/// Every post is padded with (order - 1) boundary symbols on each side and
/// all n-grams of length 1..order are counted. The conditional probability
/// of a token given its (order - 1) predecessors is
///   (c(h w) + k) / (sum_v c(h v) + k * V)
/// where V counts the observed vocabulary plus the unknown symbol.
class NgramModel final : public FluencyScorer {
 public:
  static constexpr std::size_t kDefaultOrder = 3;
  static constexpr double kDefaultSmoothing = 0.1;

  /// Throws InputError("no training data") for an empty corpus.
  static NgramModel train(const StylizedCorpus& corpus, std::size_t order = kDefaultOrder,
                          double smoothing = kDefaultSmoothing);

  /// Reads a count dump written by `dump`. The order is the longest n-gram.
  static NgramModel load(std::istream& in, double smoothing = kDefaultSmoothing);
  /// Sorted `n-gram TAB count` lines, n-gram tokens separated by spaces.
  void dump(std::ostream& out) const;

  [[nodiscard]] std::size_t order() const { return order_; }
  [[nodiscard]] double smoothing() const { return smoothing_; }
  [[nodiscard]] std::size_t vocab_size() const { return vocab_.size(); }
  [[nodiscard]] std::size_t count(std::span<const std::string> ngram) const;
  [[nodiscard]] const std::map<Ngram, std::size_t>& counts() const { return counts_; }

  /// Maps out-of-vocabulary tokens to the unknown symbol. Input is folded.
  [[nodiscard]] std::string map_token(const std::string& folded) const;

  /// log P(token | history), history length order - 1, tokens already mapped.
  [[nodiscard]] double log_prob(std::span<const std::string> history,
                                const std::string& token) const;

  /// Mean log probability over the jargon tokens and the (order - 1) tokens
  /// after them, each conditioned on its (order - 1) predecessors. Only the
  /// jargon plus (order - 1) tokens of context on each side influence it.
  [[nodiscard]] double window_logprob(const CandidateResponse& candidate) const;

  [[nodiscard]] double score(const CandidateResponse& candidate) const override {
    return window_logprob(candidate);
  }

 private:
  NgramModel(std::size_t order, double smoothing) : order_(order), smoothing_(smoothing) {}
  void finalize();

  std::size_t order_;
  double smoothing_;
  std::map<Ngram, std::size_t> counts_;
  std::map<Ngram, std::size_t> context_totals_;  // sum of continuations of a history
  std::unordered_set<std::string> vocab_;
};

struct FluencyPolicy {
  /// Minimum per-token log probability. Without one, each response keeps
  /// the upper half of its candidates by score.
  std::optional<double> threshold;
  std::size_t top_m = 1;
};

/// Scores every candidate, keeps those at or above the threshold and returns
/// them by descending score (ties keep their input order).
std::vector<CandidateResponse> filter(std::vector<CandidateResponse> candidates,
                                      const FluencyScorer& scorer, std::optional<double> threshold);

}  // namespace stylepatch
