#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "stylepatch/corpus.hpp"
#include "stylepatch/transform.hpp"

namespace stylepatch {

struct Posting {
  PairId doc_id;
  std::size_t tf;

  friend bool operator==(const Posting&, const Posting&) = default;
};

struct SearchHit {
  PairId pair_id;
  double score;
};

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};

/// Number of contexts recalled before re-ranking.
inline constexpr std::size_t kDefaultRecall = 100;

/// Document handed to the index: an id and its folded terms.
struct IndexDocument {
  PairId id;
  std::span<const std::string> terms;
};

/// BM25 inverted index. Rebuilt from scratch, never updated in place.
class InvertedIndex {
 public:
  InvertedIndex() = default;

  /// Throws InputError on a duplicated document id.
  static InvertedIndex build(std::span<const IndexDocument> docs, Bm25Params params = {});
  /// Indexes the folded tokens of c', keyword augmentation included.
  static InvertedIndex build(const std::vector<StylizedPair>& pairs, Bm25Params params = {});

  /// Top-k documents by BM25 summed over distinct query terms, descending,
  /// ties to the lower id. Documents scoring zero are left out.
  [[nodiscard]] std::vector<SearchHit> search(std::span<const std::string> folded_query,
                                              std::size_t k = kDefaultRecall) const;
  [[nodiscard]] std::vector<SearchHit> search(const Utterance& query,
                                              std::size_t k = kDefaultRecall) const {
    return search(query.folded, k);
  }

  /// idf = ln(1 + (N - df + 0.5) / (df + 0.5))
  [[nodiscard]] double idf(std::size_t df) const;

  [[nodiscard]] std::size_t doc_count() const { return doc_len_.size(); }
  [[nodiscard]] double avg_doc_len() const { return avg_doc_len_; }
  [[nodiscard]] const std::map<std::string, std::vector<Posting>>& postings() const {
    return postings_;
  }
  [[nodiscard]] const std::map<PairId, std::size_t>& doc_lengths() const { return doc_len_; }
  [[nodiscard]] const Bm25Params& params() const { return params_; }

  /// One `term TAB doc:tf doc:tf ...` line per term, terms in byte order.
  void write_snapshot(std::ostream& out) const;

 private:
  Bm25Params params_;
  std::map<std::string, std::vector<Posting>> postings_;
  std::map<PairId, std::size_t> doc_len_;
  double avg_doc_len_ = 0.0;
};

}  // namespace stylepatch
