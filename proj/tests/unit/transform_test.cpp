#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "stylepatch/error.hpp"
#include "stylepatch/rewrite.hpp"
#include "stylepatch/transform.hpp"

namespace sp = stylepatch;
using sp::TokenSeq;

namespace {

sp::EmbeddingTable toy_table() {
  std::istringstream in("fast 1 0\nquick 0.9 0.1\nslow -1 0\nbanana 0 1\n");
  return sp::EmbeddingTable::read(in);
}

}  // namespace

TEST(Embedding, ReadsWithAndWithoutHeader) {
  std::istringstream with("2 3\nA 1 2 3\nb 4 5 6\n");
  const auto t = sp::EmbeddingTable::read(with);
  EXPECT_EQ(t.dim(), 3u);
  EXPECT_EQ(t.size(), 2u);
  ASSERT_TRUE(t.lookup("a").has_value());
  EXPECT_DOUBLE_EQ((*t.lookup("A"))[2], 3.0);
  EXPECT_EQ(toy_table().size(), 4u);
}

TEST(Embedding, RejectsDimensionMismatch) {
  std::istringstream in("a 1 2\nb 1 2 3\n");
  EXPECT_THROW(sp::EmbeddingTable::read(in), sp::InputError);
}

TEST(Embedding, FirstDuplicateWins) {
  std::istringstream in("a 1 0\nA 0 1\n");
  const auto t = sp::EmbeddingTable::read(in);
  EXPECT_EQ(t.size(), 1u);
  EXPECT_DOUBLE_EQ((*t.lookup("a"))[0], 1.0);
}

TEST(PhraseVector, MeanOfInVocabularyTokens) {
  const auto t = toy_table();
  EXPECT_EQ(*sp::phrase_vector(t, TokenSeq{"fast"}), (sp::Vector{1, 0}));
  const auto v = *sp::phrase_vector(t, TokenSeq{"fast", "banana", "zzz"});
  EXPECT_DOUBLE_EQ(v[0], 0.5);
  EXPECT_DOUBLE_EQ(v[1], 0.5);
  EXPECT_FALSE(sp::phrase_vector(t, TokenSeq{"zzz", "yyy"}).has_value());
}

TEST(NearestKeywords, HandCosineExample) {
  const auto t = toy_table();
  EXPECT_EQ(sp::nearest_keywords(t, TokenSeq{"fast"}, 2), (TokenSeq{"quick", "banana"}));
  EXPECT_EQ(sp::nearest_keywords(t, TokenSeq{"fast"}, 10), (TokenSeq{"quick", "banana", "slow"}));
  EXPECT_TRUE(sp::nearest_keywords(t, TokenSeq{"zzz"}, 3).empty());
}

TEST(NearestKeywords, TiesBreakLexicographically) {
  std::istringstream in("q 1 0\nb 0 1\na 0 1\nc 0 1\n");
  const auto t = sp::EmbeddingTable::read(in);
  EXPECT_EQ(sp::nearest_keywords(t, TokenSeq{"q"}, 2), (TokenSeq{"a", "b"}));
}

TEST(NearestKeywords, InvariantUnderScaling) {
  std::mt19937 rng(8);
  std::normal_distribution<double> g;
  sp::EmbeddingTable t(5);
  for (int i = 0; i < 60; ++i) {
    std::vector<double> v(5);
    for (auto& x : v) x = g(rng);
    t.add("w" + std::to_string(i), v);
  }
  for (const double f : {0.001, 3.0, 1e4}) {
    const auto s = t.scaled(f);
    for (int i = 0; i < 20; ++i) {
      const TokenSeq phrase{"w" + std::to_string(i), "w" + std::to_string(i + 20)};
      EXPECT_EQ(sp::nearest_keywords(t, phrase, 5), sp::nearest_keywords(s, phrase, 5));
    }
  }
}

TEST(Align, ReplacesJargonWithSynonym) {
  const sp::Lexicon lex("s", {sp::make_entry("access token", "key")});
  EXPECT_EQ(sp::align_response(sp::tokenize("use the access token now"), lex).tokens,
            (TokenSeq{"use", "the", "key", "now"}));
  EXPECT_EQ(sp::align_response(sp::tokenize("nothing here"), lex).tokens,
            (TokenSeq{"nothing", "here"}));
}

TEST(Align, OverlappingPrefersLeftmostLongest) {
  const sp::Lexicon lex("s", {sp::make_entry("a b", "X"), sp::make_entry("b c", "Y"),
                              sp::make_entry("a", "Z")});
  const auto al = sp::align_with_spans(sp::tokenize("a b c"), lex);
  EXPECT_EQ(al.aligned.tokens, (TokenSeq{"X", "c"}));
  ASSERT_EQ(al.spans.size(), 1u);
  EXPECT_EQ(al.spans[0].styled_pos, 0u);
  EXPECT_EQ(al.spans[0].prime_pos, 0u);
}

TEST(Align, CaseFoldedMatchKeepsOtherTokens) {
  const sp::Lexicon lex("s", {sp::make_entry("fire blast", "big burn")});
  const auto al = sp::align_with_spans(sp::tokenize("Use FIRE Blast , Now"), lex);
  EXPECT_EQ(al.aligned.tokens, (TokenSeq{"Use", "big", "burn", ",", "Now"}));
  EXPECT_EQ(al.spans[0].prime_pos, 1u);
}

TEST(RewriteContext, AppendsKeywordsOrSynonym) {
  const auto t = toy_table();
  const auto c = sp::tokenize("is it good ?");
  const auto out = sp::rewrite_context(c, TokenSeq{"fast"}, &t, TokenSeq{"speedy"}, 2);
  EXPECT_EQ(out.tokens, (TokenSeq{"is", "it", "good", "?", "quick", "banana"}));
  EXPECT_EQ(out.augmented, 2u);
  EXPECT_EQ(out.visible_tokens().size(), 4u);

  const auto fb = sp::rewrite_context(c, TokenSeq{"zzz"}, &t, TokenSeq{"learn", "by", "analogy"});
  EXPECT_EQ(fb.tokens.size(), 7u);
  EXPECT_EQ(fb.tokens.back(), "analogy");
  EXPECT_EQ(fb.augmented, 3u);

  EXPECT_EQ(sp::rewrite_context(c, TokenSeq{"fast"}, &t, TokenSeq{"x"}, 0), c);
  EXPECT_EQ(sp::rewrite_context(c, TokenSeq{"fast"}, nullptr, TokenSeq{"x"}).tokens.back(), "x");
}

TEST(AssemblePair, CopiedPattern) {
  const sp::Lexicon lex("s", {sp::make_entry("zz", "y")});
  const sp::DialoguePair pair{4, sp::tokenize("hi"), sp::tokenize("hello")};
  const auto s = sp::assemble_pair(pair, nullptr, lex, nullptr);
  EXPECT_TRUE(s.copied);
  EXPECT_EQ(s.pair_id, 4u);
  EXPECT_EQ(s.c_prime, s.c);
  EXPECT_EQ(s.r_prime, s.r);
  EXPECT_EQ(s.r_styled, s.r);
  EXPECT_TRUE(s.jargon_used.empty());
  EXPECT_EQ(s.style_confidence, 0.0);
}

TEST(AssemblePair, StylizedPairInvariants) {
  const sp::Lexicon lex("s", {sp::make_entry("ping", "call"), sp::make_entry("reboot", "restart")});
  sp::JargonContextTable t;
  t.per_jargon.resize(2);
  t.per_jargon[0].preceding.insert({"will", "probably"});
  const sp::DialoguePair pair{
      1, sp::tokenize("talk soon ?"), sp::tokenize("i will probably call you after the reboot")};
  const auto cands = sp::generate_candidates(pair.response, lex, t, pair.id);
  ASSERT_FALSE(cands.empty());
  const auto s = sp::assemble_pair(pair, &cands[0], lex, nullptr, 5, 0.7);
  EXPECT_FALSE(s.copied);
  EXPECT_EQ(sp::join(s.r_styled.tokens), "i will probably ping you after the reboot");
  // both lexicon hits of the styled response are recorded
  EXPECT_EQ(s.jargon_used, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(sp::join(s.r_prime.tokens), "i will probably call you after the restart");
  EXPECT_EQ(s.c_prime.tokens, (TokenSeq{"talk", "soon", "?", "call"}));
  EXPECT_DOUBLE_EQ(s.style_confidence, 0.7);
}

TEST(AssemblePair, ThrowsWhenJargonMissing) {
  const sp::Lexicon lex("s", {sp::make_entry("ping", "call")});
  const sp::DialoguePair pair{0, sp::tokenize("x"), sp::tokenize("a b")};
  sp::CandidateResponse c;
  c.tokens = {"a", "b"};
  c.jargon_length = 1;
  EXPECT_THROW(sp::assemble_pair(pair, &c, lex, nullptr), sp::InternalError);
}

TEST(AlignmentKeepsJargon, DetectsOverlapCapture) {
  const sp::Lexicon lex("s", {sp::make_entry("b", "Q"), sp::make_entry("a b", "P")});
  sp::CandidateResponse c;
  c.tokens = {"a", "b"};  // "b" inserted at 1 but "a b" claims it
  c.substitution.span_start = 1;
  c.substitution.jargon_index = *lex.find(TokenSeq{"b"});
  c.jargon_length = 1;
  EXPECT_FALSE(sp::alignment_keeps_jargon(c, lex));
  c.tokens = {"x", "b"};
  EXPECT_TRUE(sp::alignment_keeps_jargon(c, lex));
}

TEST(Repository, JsonLinesRoundTrip) {
  const sp::Lexicon lex("s", {sp::make_entry("ping", "call")});
  sp::JargonContextTable t;
  t.per_jargon.resize(1);
  t.per_jargon[0].preceding.insert({"will", "probably"});
  std::vector<sp::StylizedPair> repo;
  const sp::DialoguePair a{0, sp::tokenize("talk soon?"), sp::tokenize("i will probably call you")};
  const sp::DialoguePair b{1, sp::tokenize("hi \"there\""), sp::tokenize("hello\\ ok")};
  const auto cands = sp::generate_candidates(a.response, lex, t, 0);
  repo.push_back(sp::assemble_pair(a, &cands[0], lex, nullptr, 5, 0.25));
  repo.push_back(sp::assemble_pair(b, nullptr, lex, nullptr));
  std::stringstream buf;
  sp::write_repository(buf, repo);
  const std::string first = buf.str().substr(0, buf.str().find('\n'));
  EXPECT_EQ(first.find("{\"pair_id\":0,\"c\":"), 0u);
  for (const char* field : {"c_prime", "r_prime", "r_styled", "jargon_used", "style_confidence", "copied"}) {
    EXPECT_NE(first.find(std::string("\"") + field + "\""), std::string::npos) << field;
  }
  const auto again = sp::read_repository(buf);
  ASSERT_EQ(again.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(again[i].pair_id, repo[i].pair_id);
    EXPECT_EQ(again[i].c.tokens, repo[i].c.tokens);
    EXPECT_EQ(again[i].c_prime.tokens, repo[i].c_prime.tokens);
    EXPECT_EQ(again[i].c_prime.augmented, repo[i].c_prime.augmented);
    EXPECT_EQ(again[i].r_prime.tokens, repo[i].r_prime.tokens);
    EXPECT_EQ(again[i].r_styled.tokens, repo[i].r_styled.tokens);
    EXPECT_EQ(again[i].jargon_used, repo[i].jargon_used);
    EXPECT_DOUBLE_EQ(again[i].style_confidence, repo[i].style_confidence);
    EXPECT_EQ(again[i].copied, repo[i].copied);
  }
}

TEST(Repository, RejectsMalformedLines) {
  std::istringstream bad("{\"pair_id\": 0}\n");
  EXPECT_THROW(sp::read_repository(bad), sp::InputError);
  std::istringstream junk("not json\n");
  EXPECT_THROW(sp::read_repository(junk), sp::InputError);
}

TEST(Align, RoundTripOnNestingFreeLexicon) {
  std::mt19937 rng(21);
  // jargon j<i> <i>, synonym s<i>; synonyms never contain jargon tokens
  std::vector<sp::JargonEntry> entries;
  for (int i = 0; i < 20; ++i) {
    entries.push_back(sp::make_entry("j" + std::to_string(i) + (i % 3 ? " k" + std::to_string(i) : ""),
                                     "s" + std::to_string(i)));
  }
  const sp::Lexicon lex("s", entries);
  for (int trial = 0; trial < 300; ++trial) {
    TokenSeq styled;
    for (int w = 0; w < 8; ++w) {
      if (rng() % 3 == 0) {
        const auto& e = lex[rng() % lex.size()];
        styled.insert(styled.end(), e.jargon.begin(), e.jargon.end());
      } else {
        styled.push_back("w" + std::to_string(rng() % 5));
      }
    }
    const auto al = sp::align_with_spans(sp::from_tokens(styled), lex);
    TokenSeq back;
    std::size_t pos = 0;
    for (const auto& span : al.spans) {
      back.insert(back.end(), al.aligned.tokens.begin() + static_cast<long>(pos),
                  al.aligned.tokens.begin() + static_cast<long>(span.prime_pos));
      back.insert(back.end(), lex[span.jargon_index].jargon.begin(), lex[span.jargon_index].jargon.end());
      pos = span.prime_pos + lex[span.jargon_index].synonym.size();
    }
    back.insert(back.end(), al.aligned.tokens.begin() + static_cast<long>(pos), al.aligned.tokens.end());
    ASSERT_EQ(back, styled);
  }
}
