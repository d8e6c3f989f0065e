#include "stylepatch/index.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>
#include <unordered_map>

#include "stylepatch/error.hpp"

namespace stylepatch {

InvertedIndex InvertedIndex::build(std::span<const IndexDocument> docs, Bm25Params params) {
  InvertedIndex index;
  index.params_ = params;
  std::size_t total_len = 0;
  for (const auto& doc : docs) {
    if (!index.doc_len_.emplace(doc.id, doc.terms.size()).second) {
      throw InputError("duplicate pair id " + std::to_string(doc.id));
    }
    total_len += doc.terms.size();
    std::map<std::string, std::size_t> tf;
    for (const auto& term : doc.terms) ++tf[term];
    for (const auto& [term, n] : tf) index.postings_[term].push_back({doc.id, n});
  }
  for (auto& [term, list] : index.postings_) {
    std::sort(list.begin(), list.end(),
              [](const Posting& a, const Posting& b) { return a.doc_id < b.doc_id; });
  }
  if (!docs.empty()) {
    index.avg_doc_len_ = static_cast<double>(total_len) / static_cast<double>(docs.size());
  }
  return index;
}

InvertedIndex InvertedIndex::build(const std::vector<StylizedPair>& pairs, Bm25Params params) {
  std::vector<IndexDocument> docs;
  docs.reserve(pairs.size());
  for (const auto& p : pairs) docs.push_back({p.pair_id, p.c_prime.folded});
  return build(docs, params);
}

double InvertedIndex::idf(std::size_t df) const {
  const auto n = static_cast<double>(doc_count());
  const auto d = static_cast<double>(df);
  return std::log(1.0 + (n - d + 0.5) / (d + 0.5));
}

std::vector<SearchHit> InvertedIndex::search(std::span<const std::string> folded_query,
                                             std::size_t k) const {
  if (k == 0) throw ContractViolation("search requires k >= 1");
  std::vector<SearchHit> hits;
  if (doc_count() == 0) return hits;

  const std::set<std::string> terms(folded_query.begin(), folded_query.end());
  std::unordered_map<PairId, double> acc;
  const double k1 = params_.k1;
  const double b = params_.b;
  for (const auto& term : terms) {
    const auto it = postings_.find(term);
    if (it == postings_.end()) continue;
    const double w = idf(it->second.size());
    for (const auto& p : it->second) {
      const auto tf = static_cast<double>(p.tf);
      const auto dl = static_cast<double>(doc_len_.at(p.doc_id));
      acc[p.doc_id] += w * tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * dl / avg_doc_len_));
    }
  }
  hits.reserve(acc.size());
  for (const auto& [id, score] : acc) {
    if (score > 0.0) hits.push_back({id, score});
  }
  const auto better = [](const SearchHit& x, const SearchHit& y) {
    if (x.score != y.score) return x.score > y.score;
    return x.pair_id < y.pair_id;
  };
  const std::size_t take = std::min(k, hits.size());
  std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(take), hits.end(),
                    better);
  hits.resize(take);
  return hits;
}

void InvertedIndex::write_snapshot(std::ostream& out) const {
  for (const auto& [term, list] : postings_) {
    out << term << '\t';
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (i > 0) out << ' ';
      out << list[i].doc_id << ':' << list[i].tf;
    }
    out << '\n';
  }
}

}  // namespace stylepatch
