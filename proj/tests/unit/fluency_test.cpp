#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "stylepatch/error.hpp"
#include "stylepatch/fluency.hpp"

namespace sp = stylepatch;
using sp::Ngram;

namespace {

const std::string B(sp::kBoundary);

sp::StylizedCorpus corpus(std::initializer_list<const char*> lines) {
  sp::StylizedCorpus c;
  for (const char* l : lines) c.posts.push_back(sp::tokenize(l));
  return c;
}

sp::CandidateResponse candidate(const std::string& text, std::size_t begin, std::size_t len) {
  sp::CandidateResponse c;
  c.tokens = sp::tokenize(text).tokens;
  c.substitution.span_start = begin;
  c.substitution.span_end = begin + 1;
  c.jargon_length = len;
  return c;
}

std::vector<oracle::Tokens> folded_posts(const sp::StylizedCorpus& c) {
  std::vector<oracle::Tokens> out;
  for (const auto& p : c.posts) out.push_back(p.folded);
  return out;
}

}  // namespace

TEST(NgramTrain, BigramCountsOfPaddedPost) {
  const auto m = sp::NgramModel::train(corpus({"a b c"}), 2);
  EXPECT_EQ(m.count(Ngram{B, "a"}), 1u);
  EXPECT_EQ(m.count(Ngram{"a", "b"}), 1u);
  EXPECT_EQ(m.count(Ngram{"b", "c"}), 1u);
  EXPECT_EQ(m.count(Ngram{"c", B}), 1u);
  std::size_t bigrams = 0;
  for (const auto& [g, c] : m.counts()) bigrams += g.size() == 2 ? c : 0;
  EXPECT_EQ(bigrams, 4u);
  // a, b, c, boundary, unknown
  EXPECT_EQ(m.vocab_size(), 5u);
}

TEST(NgramTrain, EmptyCorpusFails) {
  try {
    sp::NgramModel::train({}, 3);
    FAIL();
  } catch (const sp::InputError& e) {
    EXPECT_STREQ(e.what(), "no training data");
  }
}

TEST(NgramTrain, DuplicatePostDoublesCounts) {
  const auto once = sp::NgramModel::train(corpus({"a b c"}), 3);
  const auto twice = sp::NgramModel::train(corpus({"a b c", "a b c"}), 3);
  ASSERT_EQ(once.counts().size(), twice.counts().size());
  for (const auto& [g, c] : once.counts()) EXPECT_EQ(twice.count(g), 2 * c);
}

TEST(NgramTrain, CountsConsistentAcrossOrders) {
  const auto m = sp::NgramModel::train(corpus({"a b a c", "b b a", "c a b c a"}), 3);
  for (const auto& [g, c] : m.counts()) {
    if (g.size() == 3) continue;
    std::size_t ext = 0;
    for (const auto& [h, d] : m.counts()) {
      if (h.size() == g.size() + 1 && std::equal(g.begin(), g.end(), h.begin())) ext += d;
    }
    EXPECT_LE(ext, c);
  }
}

TEST(NgramDump, RoundTripsThroughLoad) {
  const auto m = sp::NgramModel::train(corpus({"the cat sat", "a cat ran"}), 3);
  std::stringstream buf;
  m.dump(buf);
  const auto again = sp::NgramModel::load(buf);
  EXPECT_EQ(again.order(), 3u);
  EXPECT_EQ(again.counts(), m.counts());
  const auto c = candidate("the cat ran", 1, 1);
  EXPECT_DOUBLE_EQ(again.window_logprob(c), m.window_logprob(c));
}

TEST(WindowLogprob, MatchesHandComputedValue) {
  // Trained on exactly the candidate sentence; bigram model, jargon "b".
  const auto m = sp::NgramModel::train(corpus({"a b c"}), 2, 0.1);
  const auto c = candidate("a b c", 1, 1);
  // V = 5; P(b|a) = (1+.1)/(1+.5), P(c|b) = (1+.1)/(1+.5)
  const double expect = (std::log(1.1 / 1.5) + std::log(1.1 / 1.5)) / 2;
  EXPECT_NEAR(m.window_logprob(c), expect, 1e-12);
}

TEST(WindowLogprob, SeenContextBeatsUnseen) {
  const auto m = sp::NgramModel::train(
      corpus({"this program is fully multi-threaded today", "my code is fast", "fully charged"}));
  const auto seen = candidate("the code is fully multi-threaded today", 4, 1);
  const auto unseen = candidate("the code was never multi-threaded now", 4, 1);
  EXPECT_GT(m.window_logprob(seen), m.window_logprob(unseen));
}

TEST(WindowLogprob, AllUnknownWindowEqualsBaseline) {
  const auto m = sp::NgramModel::train(corpus({"a b c", "b c d"}), 3);
  const auto c = candidate("xx yy zz ww qq", 2, 1);
  const std::string u(sp::kUnknown);
  const std::vector<std::string> h{u, u};
  EXPECT_NEAR(m.window_logprob(c), m.log_prob(h, u), 1e-12);
  EXPECT_TRUE(std::isfinite(m.window_logprob(c)));
}

TEST(WindowLogprob, DistantTokensDoNotMatter) {
  const auto m = sp::NgramModel::train(corpus({"a b c d e f g", "c d x e"}), 3);
  const auto c1 = candidate("a b c d e f g h", 3, 1);
  auto c2 = c1;
  c2.tokens[0] = "zzz";
  c2.tokens[7] = "yyy";
  EXPECT_DOUBLE_EQ(m.window_logprob(c1), m.window_logprob(c2));
  auto c3 = c1;
  c3.tokens[5] = "yyy";  // inside the trailing context
  EXPECT_NE(m.window_logprob(c1), m.window_logprob(c3));
}

TEST(WindowLogprob, MatchesChainRuleOracle) {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t order = oracle::uniform(rng, 1, 4);
    const double k = std::vector<double>{0.01, 0.1, 0.5, 1.0}[rng() % 4];
    sp::StylizedCorpus t;
    std::size_t total = 0;
    while (total < 40) {
      const auto toks = oracle::random_tokens(rng, oracle::uniform(rng, 1, 8), 8);
      total += toks.size();
      t.posts.push_back(sp::from_tokens(toks));
    }
    const auto m = sp::NgramModel::train(t, order, k);
    const auto sentence = oracle::random_tokens(rng, oracle::uniform(rng, 1, 10), 10);
    const std::size_t begin = oracle::uniform(rng, 0, sentence.size() - 1);
    const std::size_t len = oracle::uniform(rng, 1, sentence.size() - begin);
    sp::CandidateResponse c;
    c.tokens = sentence;
    c.substitution.span_start = begin;
    c.jargon_length = len;
    const double want = oracle::window_logprob(folded_posts(t), order, k, sentence, begin, begin + len);
    ASSERT_NEAR(m.window_logprob(c), want, 1e-9) << "trial " << trial;
  }
}

TEST(Filter, DegenerateThresholds) {
  const auto m = sp::NgramModel::train(corpus({"a b c", "a c b"}), 2);
  std::vector<sp::CandidateResponse> cs{candidate("a b c", 1, 1), candidate("a c b", 1, 1),
                                        candidate("q r s", 1, 1)};
  const auto all = sp::filter(cs, m, -std::numeric_limits<double>::infinity());
  ASSERT_EQ(all.size(), 3u);
  for (std::size_t i = 1; i < all.size(); ++i) EXPECT_GE(*all[i - 1].fluency, *all[i].fluency);
  EXPECT_TRUE(sp::filter(cs, m, std::numeric_limits<double>::infinity()).empty());
}

TEST(Filter, ThresholdComparison) {
  struct Fixed final : sp::FluencyScorer {
    double score(const sp::CandidateResponse& c) const override {
      return c.tokens.front() == "good" ? -1.0 : -3.0;
    }
  } scorer;
  const auto kept = sp::filter({candidate("bad x", 0, 1), candidate("good x", 0, 1)}, scorer, -2.0);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0].tokens.front(), "good");
}

TEST(Filter, DefaultKeepsUpperHalf) {
  struct ByLength final : sp::FluencyScorer {
    double score(const sp::CandidateResponse& c) const override {
      return -static_cast<double>(c.tokens.size());
    }
  } scorer;
  std::vector<sp::CandidateResponse> cs;
  for (const char* s : {"a", "a b", "a b c", "a b c d", "a b c d e"}) cs.push_back(candidate(s, 0, 1));
  EXPECT_EQ(sp::filter(cs, scorer, std::nullopt).size(), 3u);
  cs.pop_back();
  EXPECT_EQ(sp::filter(cs, scorer, std::nullopt).size(), 2u);
}

TEST(Filter, LowerThresholdGivesSuperset) {
  std::mt19937 rng(4);
  const auto m = sp::NgramModel::train(corpus({"a b c d", "b c a", "d d a b"}), 3);
  std::vector<sp::CandidateResponse> cs;
  for (int i = 0; i < 30; ++i) {
    const auto toks = oracle::random_tokens(rng, 5, 5);
    sp::CandidateResponse c;
    c.tokens = toks;
    c.jargon_length = 1;
    c.substitution.span_start = oracle::uniform(rng, 0, 4);
    cs.push_back(c);
  }
  std::uniform_real_distribution<double> th(-4.0, 0.0);
  for (int i = 0; i < 100; ++i) {
    double lo = th(rng), hi = th(rng);
    if (lo > hi) std::swap(lo, hi);
    const auto big = sp::filter(cs, m, lo);
    const auto small = sp::filter(cs, m, hi);
    ASSERT_GE(big.size(), small.size());
    for (const auto& s : small) {
      ASSERT_TRUE(std::any_of(big.begin(), big.end(), [&](const auto& b) {
        return b.tokens == s.tokens && b.jargon_begin() == s.jargon_begin();
      }));
    }
  }
}
