#include "stylepatch/fluency.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "stylepatch/error.hpp"

namespace stylepatch {

NgramModel NgramModel::train(const StylizedCorpus& corpus, std::size_t order, double smoothing) {
  if (corpus.posts.empty()) throw InputError("no training data");
  if (order == 0) throw ContractViolation("n-gram order must be >= 1");
  if (!(smoothing > 0.0)) throw ContractViolation("add-k constant must be positive");

  NgramModel model(order, smoothing);
  const std::string boundary(kBoundary);
  for (const auto& post : corpus.posts) {
    // Unigram models still see each sentence edge once.
    const std::size_t pad = std::max<std::size_t>(1, order - 1);
    TokenSeq padded(pad, boundary);
    padded.insert(padded.end(), post.folded.begin(), post.folded.end());
    padded.insert(padded.end(), pad, boundary);
    for (std::size_t n = 1; n <= order; ++n) {
      for (std::size_t i = 0; i + n <= padded.size(); ++i) {
        ++model.counts_[Ngram(padded.begin() + static_cast<std::ptrdiff_t>(i),
                              padded.begin() + static_cast<std::ptrdiff_t>(i + n))];
      }
    }
  }
  model.finalize();
  return model;
}

void NgramModel::finalize() {
  context_totals_.clear();
  vocab_.clear();
  for (const auto& [ngram, c] : counts_) {
    if (ngram.size() == 1) vocab_.insert(ngram.front());
    context_totals_[Ngram(ngram.begin(), ngram.end() - 1)] += c;
  }
  vocab_.insert(std::string(kBoundary));
  vocab_.insert(std::string(kUnknown));
}

NgramModel NgramModel::load(std::istream& in, double smoothing) {
  std::map<Ngram, std::size_t> counts;
  std::size_t order = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.rfind('\t');
    if (tab == std::string::npos) {
      throw InputError("n-gram dump line " + std::to_string(line_no) + ": missing count");
    }
    std::istringstream words(line.substr(0, tab));
    Ngram ngram;
    for (std::string w; words >> w;) ngram.push_back(w);
    std::size_t value = 0;
    try {
      value = std::stoull(line.substr(tab + 1));
    } catch (const std::exception&) {
      throw InputError("n-gram dump line " + std::to_string(line_no) + ": bad count");
    }
    if (ngram.empty()) throw InputError("n-gram dump line " + std::to_string(line_no) + ": empty");
    order = std::max(order, ngram.size());
    counts[std::move(ngram)] = value;
  }
  if (counts.empty()) throw InputError("no training data");
  NgramModel model(order, smoothing);
  model.counts_ = std::move(counts);
  model.finalize();
  return model;
}

void NgramModel::dump(std::ostream& out) const {
  for (const auto& [ngram, c] : counts_) out << join(ngram) << '\t' << c << '\n';
}

std::size_t NgramModel::count(std::span<const std::string> ngram) const {
  const auto it = counts_.find(Ngram(ngram.begin(), ngram.end()));
  return it == counts_.end() ? 0 : it->second;
}

std::string NgramModel::map_token(const std::string& folded) const {
  return vocab_.contains(folded) ? folded : std::string(kUnknown);
}

double NgramModel::log_prob(std::span<const std::string> history, const std::string& token) const {
  Ngram key(history.begin(), history.end());
  const auto ctx = context_totals_.find(key);
  const double total = ctx == context_totals_.end() ? 0.0 : static_cast<double>(ctx->second);
  key.push_back(token);
  const auto joint = static_cast<double>(count(key));
  const double k = smoothing_;
  return std::log((joint + k) / (total + k * static_cast<double>(vocab_.size())));
}

double NgramModel::window_logprob(const CandidateResponse& candidate) const {
  const std::size_t ctx = order_ - 1;
  const std::size_t begin = candidate.jargon_begin();
  const std::size_t end = candidate.jargon_end();
  if (end > candidate.tokens.size() || candidate.jargon_length == 0) {
    throw ContractViolation("candidate without a valid jargon span");
  }

  // Window: ctx tokens before the jargon, the jargon, ctx tokens after it.
  const std::string boundary(kBoundary);
  TokenSeq window;
  window.reserve(2 * ctx + candidate.jargon_length);
  for (std::size_t d = ctx; d > 0; --d) {
    window.push_back(begin >= d ? map_token(fold(candidate.tokens[begin - d])) : boundary);
  }
  for (std::size_t i = begin; i < end; ++i) window.push_back(map_token(fold(candidate.tokens[i])));
  for (std::size_t d = 0; d < ctx; ++d) {
    window.push_back(end + d < candidate.tokens.size() ? map_token(fold(candidate.tokens[end + d]))
                                                       : boundary);
  }

  double sum = 0.0;
  std::size_t scored = 0;
  for (std::size_t t = ctx; t < window.size(); ++t) {
    sum += log_prob(std::span(window).subspan(t - ctx, ctx), window[t]);
    ++scored;
  }
  return sum / static_cast<double>(scored);
}

std::vector<CandidateResponse> filter(std::vector<CandidateResponse> candidates,
                                      const FluencyScorer& scorer, std::optional<double> threshold) {
  for (auto& c : candidates) c.fluency = scorer.score(c);
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const CandidateResponse& a, const CandidateResponse& b) {
                     return *a.fluency > *b.fluency;
                   });
  if (candidates.empty()) return candidates;
  double cut = 0.0;
  if (threshold) {
    cut = *threshold;
  } else {
    // Upper half by rank; candidates tied with the cut-off score stay.
    cut = *candidates[(candidates.size() + 1) / 2 - 1].fluency;
  }
  std::erase_if(candidates, [cut](const CandidateResponse& c) { return !(*c.fluency >= cut); });
  return candidates;
}

}  // namespace stylepatch
