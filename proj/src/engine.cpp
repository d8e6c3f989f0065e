#include "stylepatch/engine.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "stylepatch/error.hpp"

namespace stylepatch {

void validate(const EngineConfig& config) {
  if (!(config.trigger_rate >= 0.0 && config.trigger_rate <= 1.0)) {
    throw ContractViolation("trigger_rate must lie in [0, 1]");
  }
  if (config.recall_k == 0) throw ContractViolation("recall_k must be >= 1");
  const auto& r = config.rerank;
  const auto& c = config.confidence;
  if (r.context < 0 || r.response < 0 || !(r.context + r.response > 0)) {
    throw ContractViolation("rerank weights must be nonnegative with a positive sum");
  }
  if (c.fluency < 0 || c.overlap < 0 || !(c.fluency + c.overlap > 0)) {
    throw ContractViolation("confidence weights must be nonnegative with a positive sum");
  }
}

double style_confidence(double fluency, double overlap, const FluencyStats& stats,
                        const ConfidenceWeights& weights) {
  const double span = stats.max - stats.min;
  double normalized = span > 0.0 ? (fluency - stats.min) / span : 1.0;
  normalized = std::clamp(normalized, 0.0, 1.0);
  const double total = weights.fluency + weights.overlap;
  return std::clamp((weights.fluency * normalized + weights.overlap * overlap) / total, 0.0, 1.0);
}

double style_confidence(const StylizedPair& pair, double fluency, double overlap,
                        const FluencyStats& stats, const ConfidenceWeights& weights) {
  if (pair.copied) return 0.0;
  return style_confidence(fluency, overlap, stats, weights);
}

double trigger_threshold(std::span<const double> confidences, double rate) {
  if (!(rate >= 0.0 && rate <= 1.0)) throw ContractViolation("trigger rate must lie in [0, 1]");
  if (confidences.empty()) throw InputError("style never triggerable");
  if (rate == 0.0) return kNeverTrigger;
  std::vector<double> sorted(confidences.begin(), confidences.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const auto m = static_cast<double>(sorted.size());
  // Smallest count whose fraction reaches the rate; the epsilon absorbs
  // rounding in rate * m (0.3 * 10 is slightly above 3).
  auto need = static_cast<std::size_t>(std::ceil(rate * m - 1e-9));
  need = std::clamp<std::size_t>(need, 1, sorted.size());
  return sorted[need - 1];
}

double set_trigger_rate(const std::vector<StylizedPair>& repository, double rate) {
  std::vector<double> confidences;
  for (const auto& p : repository) {
    if (!p.copied) confidences.push_back(p.style_confidence);
  }
  return trigger_threshold(confidences, rate);
}

double jaccard(std::span<const std::string> a, std::span<const std::string> b) {
  const std::set<std::string> sa(a.begin(), a.end());
  const std::set<std::string> sb(b.begin(), b.end());
  if (sa.empty() && sb.empty()) return 0.0;
  std::size_t common = 0;
  for (const auto& t : sa) common += sb.count(t);
  return static_cast<double>(common) / static_cast<double>(sa.size() + sb.size() - common);
}

double EmbeddingMatcher::match(const Utterance& query, const Utterance& response) const {
  if (table_ != nullptr) {
    const auto q = phrase_vector(*table_, query.folded);
    const auto r = phrase_vector(*table_, response.folded);
    if (q && r) return std::clamp(cosine(*q, *r), 0.0, 1.0);
  }
  return jaccard(query.folded, response.folded);
}

Repository::Repository(std::vector<StylizedPair> pairs, Bm25Params params)
    : pairs_(std::move(pairs)), index_(InvertedIndex::build(pairs_, params)) {
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    position_.emplace(pairs_[i].pair_id, i);
    if (!pairs_[i].copied) ++stylized_;
  }
}

Repository Repository::generic(const std::vector<DialoguePair>& pairs, Bm25Params params) {
  std::vector<StylizedPair> copied;
  copied.reserve(pairs.size());
  for (const auto& p : pairs) copied.push_back(copy_pair(p));
  return Repository(std::move(copied), params);
}

const StylizedPair& Repository::at(PairId id) const {
  const auto it = position_.find(id);
  if (it == position_.end()) throw ContractViolation("unknown pair id " + std::to_string(id));
  return pairs_[it->second];
}

std::vector<RankedCandidate> rerank(const Utterance& query, std::span<const SearchHit> hits,
                                    const Repository& repository, const ResponseMatcher& matcher,
                                    const RerankWeights& weights) {
  std::vector<RankedCandidate> ranked;
  if (hits.empty()) return ranked;
  double top = 0.0;
  for (const auto& h : hits) top = std::max(top, h.score);
  ranked.reserve(hits.size());
  for (const auto& h : hits) {
    const auto& pair = repository.at(h.pair_id);
    const double recall = top > 0.0 ? h.score / top : 0.0;
    double score = weights.context * recall;
    if (weights.response != 0.0) score += weights.response * matcher.match(query, pair.r_prime);
    ranked.push_back({h.pair_id, h.score, score, pair.style_confidence});
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const RankedCandidate& a, const RankedCandidate& b) {
                     if (a.rerank_score != b.rerank_score) return a.rerank_score > b.rerank_score;
                     return a.pair_id < b.pair_id;
                   });
  return ranked;
}

void Session::append(Turn turn) {
  const std::lock_guard lock(mutex_);
  turns_.push_back(std::move(turn));
}

std::vector<Turn> Session::turns() const {
  const std::lock_guard lock(mutex_);
  return turns_;
}

std::shared_ptr<Session> SessionStore::open(const std::string& id) {
  const std::lock_guard lock(mutex_);
  auto& slot = sessions_[id];
  if (!slot) slot = std::make_shared<Session>(id);
  return slot;
}

std::shared_ptr<Session> SessionStore::find(const std::string& id) const {
  const std::lock_guard lock(mutex_);
  const auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

Engine::Engine(std::shared_ptr<const Repository> styled, std::shared_ptr<const Repository> generic,
               std::shared_ptr<const EmbeddingTable> embeddings, EngineConfig config)
    : styled_(std::move(styled)),
      generic_(std::move(generic)),
      embeddings_(std::move(embeddings)),
      matcher_(embeddings_.get()) {
  if (!styled_ || !generic_) throw ContractViolation("engine needs both repositories");
  settings_ = make_settings(std::move(config));
}

std::shared_ptr<const Engine::Settings> Engine::make_settings(EngineConfig config) const {
  validate(config);
  // A repository without stylized pairs simply never triggers.
  const double tau = styled_->stylized_count() == 0 ? kNeverTrigger
                                                    : stylepatch::set_trigger_rate(
                                                          styled_->pairs(), config.trigger_rate);
  return std::make_shared<const Settings>(Settings{std::move(config), tau});
}

std::shared_ptr<const Engine::Settings> Engine::snapshot() const {
  const std::lock_guard lock(settings_mutex_);
  return settings_;
}

double Engine::set_trigger_rate(double rate) {
  auto config = snapshot()->config;
  config.trigger_rate = rate;
  auto next = make_settings(std::move(config));
  const double tau = next->threshold;
  const std::lock_guard lock(settings_mutex_);
  settings_ = std::move(next);
  return tau;
}

void Engine::set_config(EngineConfig config) {
  auto next = make_settings(std::move(config));
  const std::lock_guard lock(settings_mutex_);
  settings_ = std::move(next);
}

EngineConfig Engine::config() const { return snapshot()->config; }

double Engine::threshold() const { return snapshot()->threshold; }

namespace {

void finish(EngineResponse& out, const Utterance& text) {
  out.final_text = text;
  out.reply = render(text.tokens);
}

// Recall over the generic repository, re-rank, take the best original response.
void generic_branch(const Repository& generic, const ResponseMatcher& matcher,
                    const EngineConfig& config, const Utterance& query, EngineResponse& out) {
  const auto hits = generic.index().search(query, config.recall_k);
  out.generic_debug = rerank(query, hits, generic, matcher, config.rerank);
  out.triggered = false;
  if (out.generic_debug.empty()) {
    out.source_pair.reset();
    out.fallback = true;
    finish(out, tokenize(config.fallback));
    return;
  }
  const auto& top = generic.at(out.generic_debug.front().pair_id);
  out.source_pair = top.pair_id;
  finish(out, top.r);
}

}  // namespace

EngineResponse Engine::respond(std::string_view utterance) const {
  const auto settings = snapshot();
  const auto query = tokenize(utterance);
  EngineResponse out;
  out.threshold = settings->threshold;
  const auto hits = styled_->index().search(query, settings->config.recall_k);
  out.styled_debug = rerank(query, hits, *styled_, matcher_, settings->config.rerank);
  if (!out.styled_debug.empty()) {
    const auto& top = styled_->at(out.styled_debug.front().pair_id);
    if (!top.copied && top.style_confidence >= settings->threshold) {
      out.triggered = true;
      out.source_pair = top.pair_id;
      finish(out, top.r_styled);
      return out;
    }
  }
  generic_branch(*generic_, matcher_, settings->config, query, out);
  return out;
}

EngineResponse Engine::respond(Session& session, std::string_view utterance) const {
  auto out = respond(utterance);
  session.append({std::string(utterance), out.reply, out.triggered});
  return out;
}

EngineResponse Engine::generic_respond(std::string_view utterance) const {
  const auto settings = snapshot();
  EngineResponse out;
  generic_branch(*generic_, matcher_, settings->config, tokenize(utterance), out);
  return out;
}

}  // namespace stylepatch
