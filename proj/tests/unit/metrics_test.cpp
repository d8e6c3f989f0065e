#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "stylepatch/error.hpp"
#include "stylepatch/metrics.hpp"

namespace sp = stylepatch;
using sp::TokenSeq;

namespace {

std::vector<sp::Utterance> utts(std::initializer_list<const char*> lines) {
  std::vector<sp::Utterance> out;
  for (const char* l : lines) out.push_back(sp::tokenize(l));
  return out;
}

}  // namespace

TEST(DistinctN, HandValues) {
  EXPECT_DOUBLE_EQ(sp::distinct_n(utts({"a b", "a c"}), 1), 0.75);
  EXPECT_DOUBLE_EQ(sp::distinct_n(utts({"a b", "a c"}), 2), 0.5);
  EXPECT_DOUBLE_EQ(sp::distinct_n(utts({"a a a a"}), 1), 0.25);
  EXPECT_DOUBLE_EQ(sp::distinct_n(utts({}), 1), 0.0);
  EXPECT_DOUBLE_EQ(sp::distinct_n(utts({"a b c"}), 1), 1.0);
  EXPECT_THROW(sp::distinct_n(utts({"a"}), 0), sp::ContractViolation);
}

TEST(DistinctN, NgramsDoNotCrossResponses) {
  EXPECT_DOUBLE_EQ(sp::distinct_n(utts({"a", "b"}), 2), 0.0);
}

TEST(DistinctN, MatchesSetOracle) {
  std::mt19937 rng(1234);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<oracle::Tokens> raw;
    std::vector<sp::Utterance> u;
    std::size_t total = 0;
    while (total < 2000) {
      auto t = oracle::random_tokens(rng, oracle::uniform(rng, 1, 15), 50);
      total += t.size();
      u.push_back(sp::from_tokens(t));
      raw.push_back(std::move(t));
    }
    for (std::size_t n = 1; n <= 3; ++n) {
      ASSERT_EQ(sp::distinct_n(u, n), oracle::distinct_n(raw, n));
      const double d = sp::distinct_n(u, n);
      ASSERT_GT(d, 0.0);
      ASSERT_LE(d, 1.0);
    }
  }
}

TEST(StyleDegree, Proxy) {
  const sp::Lexicon lex("pokemon", {sp::make_entry("fire blast", "burn")});
  EXPECT_EQ(sp::style_degree_proxy(sp::tokenize("use Fire Blast now"), lex), 2);
  EXPECT_EQ(sp::style_degree_proxy(sp::tokenize("use burn now"), lex), 0);
  EXPECT_EQ(sp::style_degree_proxy(sp::tokenize("fire, blast"), lex), 0);
}

TEST(Relevance, Proxy) {
  const sp::EmbeddingMatcher lexical;
  EXPECT_DOUBLE_EQ(sp::relevance_proxy(sp::tokenize("a b"), sp::tokenize("a b"), lexical), 1.0);
  EXPECT_DOUBLE_EQ(sp::relevance_proxy(sp::tokenize("a b"), sp::tokenize("c d"), lexical), 0.0);
  std::istringstream in("x 3 4\ny 4 3\n");
  const auto table = sp::EmbeddingTable::read(in);
  const sp::EmbeddingMatcher m(&table);
  EXPECT_NEAR(sp::relevance_proxy(sp::tokenize("x"), sp::tokenize("y"), m), 24.0 / 25.0, 1e-12);
}

TEST(Rsa, Arithmetic) {
  EXPECT_NEAR(sp::rsa(0.86, 1.53), 1.195, 1e-12);
  EXPECT_NEAR(sp::rsa(1.45, 0.17), 0.81, 1e-12);
  EXPECT_DOUBLE_EQ(sp::rsa(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(sp::rsa(0.3, 1.7), sp::rsa(1.7, 0.3));
}

TEST(FollowupOverlap, DistinctWordsOfSecondUtterance) {
  EXPECT_NEAR(sp::followup_overlap(sp::tokenize("a b c"), sp::tokenize("b c d")), 2.0 / 3.0, 1e-12);
  EXPECT_DOUBLE_EQ(sp::followup_overlap(sp::tokenize("a b"), sp::tokenize("c d")), 0.0);
  EXPECT_DOUBLE_EQ(sp::followup_overlap(sp::tokenize("a b c"), sp::tokenize("c a a")), 1.0);
  EXPECT_DOUBLE_EQ(sp::followup_overlap(sp::tokenize("a"), sp::tokenize("")), 0.0);
}

TEST(SweepCsv, HeaderAndFormatting) {
  const std::vector<sp::SweepPoint> pts{{0.0, 0.5, 0.0, 0.0}, {1.0, 0.25, 2.0, 1.0 / 3.0}};
  std::ostringstream out;
  sp::write_sweep_csv(out, pts);
  EXPECT_EQ(out.str(),
            "rate,relevance_proxy,style_proxy,triggered_fraction\n"
            "0.000000,0.500000,0.000000,0.000000\n"
            "1.000000,0.250000,2.000000,0.333333\n");
}

TEST(Sweep, MonotoneColumnsAndPatchOffRow) {
  std::vector<sp::DialoguePair> base;
  std::vector<sp::StylizedPair> styled;
  for (std::size_t i = 0; i < 10; ++i) {
    const std::string c = "topic" + std::to_string(i) + " question";
    base.push_back({i, sp::tokenize(c), sp::tokenize("plain answer " + std::to_string(i))});
    auto p = sp::copy_pair(base.back());
    p.r_styled = sp::tokenize("ping answer " + std::to_string(i));
    p.jargon_used = {0};
    p.copied = false;
    p.style_confidence = static_cast<double>(i) / 10.0;
    styled.push_back(p);
  }
  auto generic = std::make_shared<const sp::Repository>(sp::Repository::generic(base));
  sp::Engine engine(std::make_shared<const sp::Repository>(styled), generic, nullptr, {});
  const sp::Lexicon lex("s", {sp::make_entry("ping", "call")});
  std::vector<std::string> queries;
  for (int i = 0; i < 10; ++i) queries.push_back("topic" + std::to_string(i));
  const std::vector<double> rates{0.0, 0.1, 0.35, 0.5, 0.8, 1.0};
  const auto sweep = sp::trigger_sweep(engine, lex, queries, rates);
  ASSERT_EQ(sweep.points.size(), rates.size());
  EXPECT_DOUBLE_EQ(sweep.points[0].style_proxy, 0.0);
  EXPECT_DOUBLE_EQ(sweep.points[0].triggered_fraction, 0.0);
  EXPECT_DOUBLE_EQ(sweep.points.back().triggered_fraction, 1.0);
  EXPECT_DOUBLE_EQ(sweep.points.back().style_proxy, 2.0);
  EXPECT_DOUBLE_EQ(sweep.points[2].triggered_fraction, 0.4);
  for (std::size_t i = 1; i < sweep.points.size(); ++i) {
    EXPECT_GE(sweep.points[i].triggered_fraction, sweep.points[i - 1].triggered_fraction);
    EXPECT_GE(sweep.points[i].style_proxy, sweep.points[i - 1].style_proxy);
  }
  const std::vector<double> unsorted{0.5, 0.1};
  EXPECT_THROW(sp::trigger_sweep(engine, lex, queries, unsorted), sp::ContractViolation);
}
