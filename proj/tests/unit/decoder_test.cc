// Copyright 2026 The embseg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "embseg/decoder.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "embseg/embedding.h"
#include "embseg/errors.h"
#include "embseg/lexicon.h"
#include "embseg/random.h"
#include "embseg/simcache.h"
#include "gtest/gtest.h"
#include "oracles.h"

namespace embseg {
namespace {

using testing::BruteForceSegment;
using testing::Chars;
using testing::DecodeCase;
using testing::OracleScore;
using testing::RandomDecodeCase;

// Similarities given by an explicit table; unlisted pairs are 0.
class TableSimilarity : public Similarity {
 public:
  void Set(WordId a, WordId b, double v) {
    values_[{std::min(a, b), std::max(a, b)}] = v;
  }
  double operator()(WordId a, WordId b) const override {
    const auto it = values_.find({std::min(a, b), std::max(a, b)});
    return it == values_.end() ? 0.0 : it->second;
  }

 private:
  std::map<std::pair<WordId, WordId>, double> values_;
};

Lexicon LexiconOf(std::initializer_list<std::string> words) {
  Lexicon lex;
  lex.Add(kBeginMarker);
  lex.Add(kEndMarker);
  for (const std::string& w : words) lex.Add(w);
  return lex;
}

EmbeddingTable Constant(std::size_t rows) {
  EmbeddingTable t(rows, 3);
  for (double& x : t.data()) x = 1.0;
  return t;
}

std::vector<std::string> Names(const Lexicon& lex,
                               const std::vector<WordId>& ids) {
  std::vector<std::string> out;
  for (const WordId id : ids) out.push_back(lex.Word(id));
  return out;
}

TEST(WordLogProbTest, Examples) {
  TableSimilarity sim;
  sim.Set(5, 1, 0.2);
  sim.Set(5, 2, 0.4);
  sim.Set(5, 3, 0.9);
  sim.Set(5, 4, 0.5);
  EXPECT_EQ(WordLogProb(5, std::vector<WordId>{}, 4, sim), 0.0);
  EXPECT_EQ(WordLogProb(5, std::vector<WordId>{4}, 4, sim), 0.5);
  EXPECT_DOUBLE_EQ(WordLogProb(5, std::vector<WordId>{1, 2, 3}, 4, sim), 0.5);
  // Only the f most recent predecessors count.
  EXPECT_DOUBLE_EQ(WordLogProb(5, std::vector<WordId>{1, 2, 3}, 2, sim), 0.3);
}

TEST(UpdateMeanLogProbTest, Examples) {
  const double l = -0.25;
  const double q = 0.75;
  EXPECT_DOUBLE_EQ(UpdateMeanLogProb(l, 2, std::vector<double>{q}),
                   (l + q) / 2);
  EXPECT_EQ(UpdateMeanLogProb(l, 3, std::vector<double>{}), l);
  EXPECT_EQ(UpdateMeanLogProb(0.0, 1, std::vector<double>{q}), q);
  EXPECT_DOUBLE_EQ(UpdateMeanLogProb(0.5, 3, std::vector<double>{0.2, 0.8}),
                   (0.5 * 2 + 1.0) / 4);
}

TEST(ExtendTest, BothRulesFire) {
  const Lexicon lex = LexiconOf({"天", "气", "天气"});
  const EmbeddingTable t = Constant(lex.size());
  const DirectSimilarity sim(t);
  FragmentSearch search("天气", lex, sim, 4);
  std::vector<Hypothesis> first;
  search.Extend(search.Initial(), 5, &first);
  ASSERT_EQ(first.size(), 1u);
  EXPECT_EQ(search.BufferText(first[0]), "天");

  std::vector<Hypothesis> second;
  search.Extend(first[0], 5, &second);
  ASSERT_EQ(second.size(), 2u);
  std::vector<std::string> buffers;
  for (const Hypothesis& h : second) buffers.push_back(search.BufferText(h));
  std::sort(buffers.begin(), buffers.end());
  EXPECT_EQ(buffers, (std::vector<std::string>{"天气", "气"}));
  for (const Hypothesis& h : second) {
    if (search.BufferText(h) == "气") {
      EXPECT_EQ(Names(lex, search.Words(h)), (std::vector<std::string>{"天"}));
      EXPECT_EQ(h.words, 2u);
    }
  }
}

TEST(ExtendTest, FullBufferOnlyFlushes) {
  const Lexicon lex = LexiconOf({"天", "气"});
  const EmbeddingTable t = Constant(lex.size());
  const DirectSimilarity sim(t);
  FragmentSearch search("天气", lex, sim, 4);
  std::vector<Hypothesis> first;
  search.Extend(search.Initial(), 1, &first);
  std::vector<Hypothesis> second;
  search.Extend(first[0], 1, &second);
  ASSERT_EQ(second.size(), 1u);
  EXPECT_EQ(search.BufferText(second[0]), "气");
}

TEST(ExtendTest, OutOfDictionaryFullBufferDies) {
  const Lexicon lex = LexiconOf({"气"});
  const EmbeddingTable t = Constant(lex.size());
  const DirectSimilarity sim(t);
  FragmentSearch search("天气", lex, sim, 4);
  std::vector<Hypothesis> first;
  search.Extend(search.Initial(), 1, &first);
  std::vector<Hypothesis> second;
  search.Extend(first[0], 1, &second);
  EXPECT_TRUE(second.empty());
}

TEST(BeamSearchTest, SingleCharactersOnly) {
  const Lexicon lex = LexiconOf({"甲", "乙", "丙"});
  Rng rng(1);
  const EmbeddingTable t = InitEmbeddings(lex.size(), 8, rng);
  const DirectSimilarity sim(t);
  const auto r = BeamSearch("甲乙丙乙", lex, sim, 10, 5, {});
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(Names(lex, r->words),
            (std::vector<std::string>{"甲", "乙", "丙", "乙"}));
  EXPECT_NEAR(r->score, OracleScore(lex, t, {"甲", "乙", "丙", "乙"}, 4),
              1e-12);
}

TEST(BeamSearchTest, UnknownCharacterGivesNone) {
  const Lexicon lex = LexiconOf({"甲", "乙", "甲乙"});
  const EmbeddingTable t = Constant(lex.size());
  const DirectSimilarity sim(t);
  EXPECT_FALSE(BeamSearch("甲丁乙", lex, sim, 10, 5, {}).has_value());
  FragmentSearch search("甲丁乙", lex, sim, 4);
  EXPECT_FALSE(search.HasAnySegmentation());
}

TEST(BeamSearchTest, RejectsBadInput) {
  const Lexicon lex = LexiconOf({"甲"});
  const EmbeddingTable t = Constant(lex.size());
  const DirectSimilarity sim(t);
  EXPECT_THROW(BeamSearch("", lex, sim, 10, 5, {}), InvalidArgument);
  EXPECT_THROW(BeamSearch("\xFF", lex, sim, 10, 5, {}), InvalidArgument);
  Lexicon bare;
  bare.Add("甲");
  EXPECT_THROW(BeamSearch("甲", bare, sim, 10, 5, {}), InvalidArgument);
}

// With equal similarities every segmentation scores 1, so the tie rule
// decides: fewer words first, then longer earlier words.
TEST(BeamSearchTest, TieBreaking) {
  const Lexicon lex = LexiconOf({"a", "b", "c", "ab", "bc"});
  const EmbeddingTable t = Constant(lex.size());
  const DirectSimilarity sim(t);
  const auto r = BeamSearch("abc", lex, sim, 16, 3, {});
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(Names(lex, r->words), (std::vector<std::string>{"ab", "c"}));
  const auto oracle = BruteForceSegment("abc", lex, t, 4);
  ASSERT_TRUE(oracle.has_value());
  EXPECT_EQ(oracle->words, (std::vector<std::string>{"ab", "c"}));

  const Lexicon with_whole = LexiconOf({"a", "b", "c", "ab", "abc"});
  const EmbeddingTable t2 = Constant(with_whole.size());
  const DirectSimilarity sim2(t2);
  EXPECT_EQ(Names(with_whole, BeamSearch("abc", with_whole, sim2, 16, 3, {})->words),
            (std::vector<std::string>{"abc"}));
}

// Saturated beams reproduce exhaustive enumeration, and the running mean
// matches recomputation on every hypothesis.
TEST(BeamSearchTest, MatchesBruteForceProperty) {
  Rng rng(77);
  int decodable = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const DecodeCase c = RandomDecodeCase(rng, 8);
    const DirectSimilarity sim(c.table);
    const std::size_t n = Chars(c.fragment).size();
    DecoderOptions options;
    options.verify_incremental = true;
    SearchStats stats;
    const auto got = BeamSearch(c.fragment, c.lexicon, sim,
                                std::size_t{1} << (n - 1), n, options, &stats);
    const auto want = BruteForceSegment(c.fragment, c.lexicon, c.table, 4);
    ASSERT_EQ(got.has_value(), want.has_value()) << c.fragment;
    EXPECT_EQ(stats.verified, stats.hypotheses);
    EXPECT_LT(stats.max_incremental_error, 1e-9);
    if (!got) continue;
    ++decodable;
    EXPECT_EQ(Names(c.lexicon, got->words), want->words) << c.fragment;
    EXPECT_NEAR(got->score, want->score, 1e-9);
  }
  EXPECT_GT(decodable, 150);
}

TEST(BeamSearchTest, WiderBeamNeverWorseThanNarrowBeamAtSaturation) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const DecodeCase c = RandomDecodeCase(rng, 9);
    const DirectSimilarity sim(c.table);
    const std::size_t n = Chars(c.fragment).size();
    const auto best =
        BeamSearch(c.fragment, c.lexicon, sim, std::size_t{1} << (n - 1), n, {});
    if (!best) continue;
    for (std::size_t k = 1; k <= 8; ++k) {
      const auto r = BeamSearch(c.fragment, c.lexicon, sim, k, n, {});
      if (r) {
        EXPECT_LE(r->score, best->score + 1e-12);
      }
    }
  }
}

TEST(SegmenterTest, GrowsForLongWord) {
  const Lexicon lex = LexiconOf({"甲乙丙丁戊己", "甲", "乙"});
  Rng rng(2);
  const EmbeddingTable t = InitEmbeddings(lex.size(), 8, rng);
  const DirectSimilarity sim(t);
  EXPECT_FALSE(BeamSearch("甲乙丙丁戊己", lex, sim, 10, 5, {}).has_value());
  const Segmenter segmenter(lex, sim, BeamParams{}, DecoderOptions{});
  const FragmentResult r = segmenter.SegmentFragment("甲乙丙丁戊己", nullptr);
  EXPECT_FALSE(r.fallback);
  EXPECT_EQ(r.growth_rounds, 1u);
  EXPECT_EQ(r.tokens, (SegmentedSentence{"甲乙丙丁戊己"}));
}

TEST(SegmenterTest, DecodableFragmentNeedsNoGrowth) {
  const Lexicon lex = LexiconOf({"甲", "乙", "甲乙"});
  Rng rng(3);
  const EmbeddingTable t = InitEmbeddings(lex.size(), 8, rng);
  const DirectSimilarity sim(t);
  const Segmenter segmenter(lex, sim, BeamParams{}, DecoderOptions{});
  const FragmentResult r = segmenter.SegmentFragment("甲乙甲", nullptr);
  EXPECT_FALSE(r.fallback);
  EXPECT_EQ(r.growth_rounds, 0u);
  const auto direct = BeamSearch("甲乙甲", lex, sim, 10, 5, {});
  EXPECT_EQ(r.tokens, Names(lex, direct->words));
}

TEST(SegmenterTest, FallbackReturnsBaselineVerbatim) {
  const Lexicon lex = LexiconOf({"甲", "乙"});
  const EmbeddingTable t = Constant(lex.size());
  const DirectSimilarity sim(t);
  BeamParams params;
  params.retry_cap = 2;
  const Segmenter segmenter(lex, sim, params, DecoderOptions{});
  const SegmentedSentence baseline = {"甲丙", "乙"};
  const FragmentResult r = segmenter.SegmentFragment("甲丙乙", &baseline);
  EXPECT_TRUE(r.fallback);
  EXPECT_EQ(r.tokens, baseline);
  const FragmentResult chars = segmenter.SegmentFragment("甲丙乙", nullptr);
  EXPECT_EQ(chars.tokens, (SegmentedSentence{"甲", "丙", "乙"}));
  EXPECT_EQ(segmenter.fallbacks(), 2u);
}

// A tiling exists but only through a word longer than any allowed length,
// so growth is exhausted under an explicit cap.
TEST(SegmenterTest, RetryCapBoundsGrowth) {
  const Lexicon lex = LexiconOf({"甲乙丙丁戊己庚辛"});
  const EmbeddingTable t = Constant(lex.size());
  const DirectSimilarity sim(t);
  BeamParams params;
  params.retry_cap = 1;
  const Segmenter capped(lex, sim, params, DecoderOptions{});
  const SegmentedSentence baseline = {"甲乙丙丁", "戊己庚辛"};
  const FragmentResult r = capped.SegmentFragment("甲乙丙丁戊己庚辛", &baseline);
  EXPECT_TRUE(r.fallback);
  EXPECT_EQ(r.growth_rounds, 1u);
  EXPECT_EQ(r.tokens, baseline);

  const Segmenter open(lex, sim, BeamParams{}, DecoderOptions{});
  const FragmentResult grown = open.SegmentFragment("甲乙丙丁戊己庚辛", &baseline);
  EXPECT_FALSE(grown.fallback);
  EXPECT_EQ(grown.growth_rounds, 3u);
}

TEST(SegmenterTest, SegmentLineKeepsDelimiters) {
  const Lexicon lex = LexiconOf({"今天", "天气", "好", "很"});
  const EmbeddingTable t = Constant(lex.size());
  const DirectSimilarity sim(t);
  const Segmenter segmenter(lex, sim, BeamParams{}, DecoderOptions{});
  EXPECT_EQ(segmenter.SegmentLine("今天天气，很好！", nullptr),
            "今天 天气 ， 很 好 ！");
  const SegmentedSentence baseline = {"今天天", "气", "，", "很好", "！"};
  EXPECT_EQ(segmenter.SegmentLine("今天天气，很好！", &baseline),
            "今天 天气 ， 很 好 ！");
  const SegmentedSentence wrong = {"今天", "天", "，"};
  EXPECT_THROW(segmenter.SegmentLine("今天天气，很好！", &wrong),
               StructuralError);
  EXPECT_EQ(segmenter.SegmentLine("", nullptr), "");
}

// Output always tiles the fragment; without fallback every word is in D.
TEST(SegmenterTest, TilingAndClosureProperty) {
  Rng rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const DecodeCase c = RandomDecodeCase(rng, 10);
    const DirectSimilarity sim(c.table);
    const Segmenter segmenter(c.lexicon, sim, BeamParams{}, DecoderOptions{});
    const FragmentResult r = segmenter.SegmentFragment(c.fragment, nullptr);
    std::string joined;
    for (const std::string& w : r.tokens) {
      joined += w;
      if (!r.fallback) {
        EXPECT_TRUE(c.lexicon.Find(w).has_value()) << w;
      }
    }
    EXPECT_EQ(joined, c.fragment);
  }
}

TEST(BeamParamsTest, Validation) {
  BeamParams p;
  EXPECT_NO_THROW(p.Validate());
  p.beam_size = 0;
  EXPECT_THROW(p.Validate(), InvalidArgument);
  p = {};
  p.max_word_len = 0;
  EXPECT_THROW(p.Validate(), InvalidArgument);
}

}  // namespace
}  // namespace embseg
