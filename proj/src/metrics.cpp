#include "stylepatch/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <set>

#include "stylepatch/error.hpp"

namespace stylepatch {

double distinct_n(std::span<const Utterance> responses, std::size_t n) {
  if (n == 0) throw ContractViolation("distinct_n requires n >= 1");
  std::set<std::vector<std::string>> grams;
  std::size_t total = 0;
  for (const auto& r : responses) {
    total += r.size();
    for (std::size_t i = 0; i + n <= r.size(); ++i) {
      grams.emplace(r.folded.begin() + static_cast<std::ptrdiff_t>(i),
                    r.folded.begin() + static_cast<std::ptrdiff_t>(i + n));
    }
  }
  if (total == 0) return 0.0;
  return static_cast<double>(grams.size()) / static_cast<double>(total);
}

int style_degree_proxy(const Utterance& response, const Lexicon& lexicon) {
  const std::span<const std::string> folded(response.folded);
  for (std::size_t i = 0; i < folded.size(); ++i) {
    for (std::size_t len = 1; len <= lexicon.max_jargon_length() && i + len <= folded.size(); ++len) {
      if (lexicon.find(folded.subspan(i, len))) return 2;
    }
  }
  return 0;
}

double relevance_proxy(const Utterance& query, const Utterance& response,
                       const ResponseMatcher& matcher) {
  return matcher.match(query, response);
}

double rsa(double relevance, double style) { return (relevance + style) / 2.0; }

double followup_overlap(const Utterance& r1, const Utterance& u2) {
  const std::set<std::string> a(r1.folded.begin(), r1.folded.end());
  const std::set<std::string> b(u2.folded.begin(), u2.folded.end());
  if (b.empty()) return 0.0;
  std::size_t common = 0;
  for (const auto& t : b) common += a.count(t);
  return static_cast<double>(common) / static_cast<double>(b.size());
}

SweepResult trigger_sweep(Engine& engine, const Lexicon& lexicon,
                          std::span<const std::string> queries, std::span<const double> rates) {
  if (!std::is_sorted(rates.begin(), rates.end())) {
    throw ContractViolation("sweep rates must be ascending");
  }
  SweepResult result;
  for (const double rate : rates) {
    engine.set_trigger_rate(rate);
    SweepPoint point{rate, 0.0, 0.0, 0.0};
    std::vector<Utterance> replies;
    replies.reserve(queries.size());
    for (const auto& q : queries) {
      const auto query = tokenize(q);
      const auto response = engine.respond(q);
      point.relevance_proxy += relevance_proxy(query, response.final_text, engine.matcher());
      point.style_proxy += style_degree_proxy(response.final_text, lexicon);
      point.triggered_fraction += response.triggered ? 1.0 : 0.0;
      replies.push_back(response.final_text);
    }
    if (!queries.empty()) {
      const auto n = static_cast<double>(queries.size());
      point.relevance_proxy /= n;
      point.style_proxy /= n;
      point.triggered_fraction /= n;
    }
    result.points.push_back(point);
    result.replies.push_back(std::move(replies));
  }
  return result;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepPoint> points) {
  out << "rate,relevance_proxy,style_proxy,triggered_fraction\n";
  char line[128];
  for (const auto& p : points) {
    std::snprintf(line, sizeof line, "%.6f,%.6f,%.6f,%.6f\n", p.trigger_rate, p.relevance_proxy,
                  p.style_proxy, p.triggered_fraction);
    out << line;
  }
}

}  // namespace stylepatch
