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

#include "embseg/sampler.h"

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "embseg/errors.h"
#include "embseg/lexicon.h"
#include "embseg/random.h"
#include "gtest/gtest.h"
#include "oracles.h"

namespace embseg {
namespace {

using testing::BruteForceContextNegatives;

Lexicon LexiconOf(std::initializer_list<const char*> words) {
  Lexicon lex;
  lex.Add(kBeginMarker);
  lex.Add(kEndMarker);
  for (const char* w : words) lex.Add(w);
  return lex;
}

std::set<std::pair<std::string, std::string>> Named(
    const Lexicon& lex, const std::vector<WordPair>& pairs) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& [a, b] : pairs) out.emplace(lex.Word(a), lex.Word(b));
  return out;
}

TEST(PositivesTest, Examples) {
  const std::vector<WordId> s = {10, 11, 12};
  EXPECT_EQ(Positives(s, 1, 4), (std::vector<WordPair>{{11, 10}, {11, 12}}));
  EXPECT_EQ(Positives(s, 0, 1), (std::vector<WordPair>{{10, 11}}));
  std::vector<WordId> longer(20);
  for (int i = 0; i < 20; ++i) longer[i] = i;
  EXPECT_EQ(Positives(longer, 10, 4).size(), 8u);
  EXPECT_TRUE(Positives(std::vector<WordId>{3}, 0, 4).empty());
}

TEST(ContextNegativesTest, OverlapExample) {
  const Lexicon lex = LexiconOf({"今天", "天气", "天天", "好", "很"});
  const std::vector<WordId> s = {lex.Id("今天"), lex.Id("天气"), lex.Id("很")};
  const auto named = Named(lex, ContextNegatives(s, 2, 4, lex));
  EXPECT_TRUE(named.count({"很", "天天"}));
  EXPECT_FALSE(named.count({"很", "天气"}));
  EXPECT_FALSE(named.count({"很", "今天"}));
}

TEST(ContextNegativesTest, EmptyContext) {
  const Lexicon lex = LexiconOf({"好"});
  const std::vector<WordId> s = {lex.Id("好")};
  EXPECT_TRUE(ContextNegatives(s, 0, 4, lex).empty());
  const std::vector<WordId> marked = {lex.begin_marker(), lex.Id("好"),
                                      lex.end_marker()};
  EXPECT_TRUE(ContextNegatives(marked, 1, 4, lex).empty());
}

TEST(ContextNegativesTest, NoDictionarySubstrings) {
  const Lexicon lex = LexiconOf({"甲乙", "丙丁"});
  const std::vector<WordId> s = {lex.Id("甲乙"), lex.Id("丙丁")};
  EXPECT_TRUE(ContextNegatives(s, 1, 4, lex).empty());
}

TEST(ContextNegativesTest, MayEqualTargetString) {
  const Lexicon lex = LexiconOf({"ab", "a", "b"});
  const std::vector<WordId> s = {lex.Id("a"), lex.Id("b"), lex.Id("ab")};
  // SL = "ab" and "ab" is not in C = {a, b}.
  EXPECT_TRUE(Named(lex, ContextNegatives(s, 2, 4, lex)).count({"ab", "ab"}));
}

// Random sentences over a small alphabet compared against full substring
// enumeration.
TEST(ContextNegativesTest, MatchesBruteForceProperty) {
  Rng rng(42);
  const std::vector<std::string> alphabet = {"甲", "乙", "丙", "丁", "戊"};
  for (int trial = 0; trial < 300; ++trial) {
    Lexicon lex;
    lex.Add(kBeginMarker);
    lex.Add(kEndMarker);
    const std::size_t v = 5 + UniformIndex(rng, 25);
    while (lex.size() < v) {
      std::string w;
      const std::size_t n = 1 + UniformIndex(rng, 3);
      for (std::size_t i = 0; i < n; ++i) w += alphabet[UniformIndex(rng, 5)];
      lex.Add(w);
    }
    std::vector<std::string> words = {std::string(kBeginMarker)};
    const std::size_t len = 1 + UniformIndex(rng, 10);
    for (std::size_t i = 0; i < len; ++i) {
      words.push_back(lex.Word(2 + UniformIndex(rng, lex.size() - 2)));
    }
    words.push_back(std::string(kEndMarker));
    std::vector<WordId> ids;
    for (const auto& w : words) ids.push_back(lex.Id(w));
    const std::size_t window = 1 + UniformIndex(rng, 4);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      std::set<std::string> got;
      for (const auto& [t, o] : ContextNegatives(ids, i, window, lex)) {
        EXPECT_EQ(t, ids[i]);
        EXPECT_TRUE(got.insert(lex.Word(o)).second) << "duplicate";
      }
      EXPECT_EQ(got, BruteForceContextNegatives(words, i, window, lex));
    }
  }
}

TEST(InWordNegativesTest, ThreeCharacterWord) {
  const Lexicon lex = LexiconOf({"甲", "乙", "丙", "甲乙", "乙丙", "甲乙丙"});
  const auto got = Named(lex, InWordNegatives("甲乙丙", lex));
  const std::set<std::pair<std::string, std::string>> want = {
      {"甲", "乙"}, {"甲", "丙"}, {"乙", "丙"}, {"甲乙", "丙"}, {"甲", "乙丙"}};
  EXPECT_EQ(got, want);
  EXPECT_EQ(InWordNegatives("甲乙丙", lex).size(), 5u);
}

TEST(InWordNegativesTest, SingleCharacter) {
  const Lexicon lex = LexiconOf({"甲"});
  EXPECT_TRUE(InWordNegatives("甲", lex).empty());
}

TEST(InWordNegativesTest, MissingMiddleCharacter) {
  const Lexicon without = LexiconOf({"甲", "丙", "甲乙"});
  EXPECT_EQ(Named(without, InWordNegatives("甲乙丙", without)),
            (std::set<std::pair<std::string, std::string>>{{"甲", "丙"},
                                                           {"甲乙", "丙"}}));
  const Lexicon with = LexiconOf({"甲", "丙", "甲乙", "乙丙"});
  EXPECT_EQ(Named(with, InWordNegatives("甲乙丙", with)).size(), 3u);
}

// Number of ordered disjoint (left, right) substring pairs of a k-character
// string: choose 0 <= a < b <= c < d <= k, excluding the whole string.
std::size_t DisjointPairCount(std::size_t k) {
  std::size_t n = 0;
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b <= k; ++b)
      for (std::size_t c = b; c < k; ++c)
        for (std::size_t d = c + 1; d <= k; ++d) ++n;
  return n;
}

TEST(InWordNegativesTest, CountsWithDistinctCharacters) {
  const std::vector<std::string> chars = {"甲", "乙", "丙", "丁", "戊", "己"};
  for (std::size_t k = 2; k <= chars.size(); ++k) {
    Lexicon lex;
    std::string word;
    for (std::size_t i = 0; i < k; ++i) word += chars[i];
    for (std::size_t a = 0; a < k; ++a) {
      std::string s;
      for (std::size_t b = a; b < k; ++b) {
        s += chars[b];
        lex.Add(s);
      }
    }
    EXPECT_EQ(InWordNegatives(word, lex).size(), DisjointPairCount(k)) << k;
  }
  EXPECT_EQ(DisjointPairCount(3), 5u);
}

TEST(NoiseNegativesTest, Basics) {
  const Lexicon lex = LexiconOf({"a", "b"});
  const NoiseSampler noise(lex, NoiseDistribution::kUniform);
  Rng rng(1);
  EXPECT_TRUE(NoiseNegatives(2, 0, rng, noise).empty());
  for (int i = 0; i < 1000; ++i) {
    const auto one = NoiseNegatives(2, 1, rng, noise);
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one[0].first, 2);
    EXPECT_NE(one[0].second, 2);
  }
  Lexicon single;
  single.Add("x");
  const NoiseSampler lonely(single, NoiseDistribution::kUniform);
  EXPECT_TRUE(NoiseNegatives(0, 3, rng, lonely).empty());
}

TEST(NoiseNegativesTest, UniformFrequencies) {
  Lexicon lex;
  for (int i = 0; i < 100; ++i) lex.Add("w" + std::to_string(i), 1 + i * i);
  const NoiseSampler noise(lex, NoiseDistribution::kUniform);
  Rng rng(9);
  std::vector<int> hist(100, 0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) ++hist[NoiseNegatives(0, 1, rng, noise)[0].second];
  EXPECT_EQ(hist[0], 0);
  for (int i = 1; i < 100; ++i) {
    EXPECT_NEAR(static_cast<double>(hist[i]) / draws, 1.0 / 99, 0.005);
  }
}

TEST(NoiseNegativesTest, UnigramPowerFavoursFrequentWords) {
  Lexicon lex;
  lex.Add("rare", 1);
  lex.Add("common", 10000);
  lex.Add("other", 1);
  const NoiseSampler noise(lex, NoiseDistribution::kUnigram075);
  Rng rng(2);
  int common = 0;
  for (int i = 0; i < 10000; ++i) common += noise.Draw(rng) == 1;
  // 1000 / (1000 + 2) of the mass.
  EXPECT_GT(common, 9900);
}

TEST(ClassWeightsTest, Examples) {
  EXPECT_EQ(ComputeClassWeights(1, 1, 0.2).negative, 1.0);
  EXPECT_EQ(ComputeClassWeights(1, 4, 0.2).negative, 0.375);
  EXPECT_EQ(ComputeClassWeights(1, 4, 0.2).positive, 1.0);
  EXPECT_NEAR(ComputeClassWeights(1, 100000000, 0.2).negative, 0.2 / 1.2,
              1e-8);
  EXPECT_NEAR(ComputeClassWeights(2, 6, 0.2).negative, 0.4444444444444444,
              1e-15);
  EXPECT_THROW(ComputeClassWeights(0, 3, 0.2), InvalidArgument);
}

TEST(ClassWeightsTest, BoundedWhenNegativesDominate) {
  for (std::size_t p = 1; p < 20; ++p) {
    for (std::size_t n = p; n < 60; ++n) {
      const double w = ComputeClassWeights(p, n, 0.2).negative;
      EXPECT_GT(w, 0.0);
      EXPECT_LE(w, 1.0);
    }
  }
}

TEST(OccurrenceBatchTest, SingleWordSentenceIsSkipped) {
  const Lexicon lex = LexiconOf({"好"});
  const NoiseSampler noise(lex, NoiseDistribution::kUniform);
  Rng rng(1);
  const std::vector<WordId> s = {lex.Id("好")};
  EXPECT_TRUE(BuildOccurrenceBatch(s, 0, lex, noise, rng, {}).empty());
}

// Batch contents agree with the individual generators.
TEST(OccurrenceBatchTest, ComposesGenerators) {
  const Lexicon lex =
      LexiconOf({"今天", "天气", "天天", "很", "好", "很好", "气", "今"});
  const NoiseSampler noise(lex, NoiseDistribution::kUniform);
  const std::vector<WordId> s = {lex.begin_marker(), lex.Id("今天"),
                                 lex.Id("天气"),     lex.Id("很好"),
                                 lex.end_marker()};
  SamplerConfig config;
  config.noise_negatives = 0;
  Rng rng(3);
  const OccurrenceBatch batch = BuildOccurrenceBatch(s, 3, lex, noise, rng, config);
  const auto pos = Positives(s, 3, config.window);
  const auto ctx = Named(lex, ContextNegatives(s, 3, config.window, lex));
  const auto inw = Named(lex, InWordNegatives("很好", lex));
  std::set<std::pair<std::string, std::string>> negatives = ctx;
  negatives.insert(inw.begin(), inw.end());

  EXPECT_EQ(batch.n_pos, pos.size());
  EXPECT_EQ(batch.n_neg, negatives.size());
  EXPECT_EQ(batch.samples.size(), batch.n_pos + batch.n_neg);
  const double w_neg =
      ComputeClassWeights(batch.n_pos, batch.n_neg, config.eta).negative;
  std::set<std::pair<std::string, std::string>> seen;
  for (const TrainingSample& t : batch.samples) {
    EXPECT_EQ(t.label == Label::kPositive,
              t.source == SampleSource::kContextPositive);
    if (t.label == Label::kPositive) {
      EXPECT_EQ(t.weight, 1.0);
    } else {
      EXPECT_EQ(t.weight, w_neg);
      seen.emplace(lex.Word(t.target), lex.Word(t.other));
    }
  }
  EXPECT_EQ(seen, negatives);
}

TEST(OccurrenceBatchTest, NoiseNeverPairsWordWithItself) {
  const Lexicon lex = LexiconOf({"a", "b", "c"});
  const NoiseSampler noise(lex, NoiseDistribution::kUniform);
  SamplerConfig config;
  config.noise_negatives = 3;
  Rng rng(8);
  const std::vector<WordId> s = {0, 2, 3, 4, 1};
  for (int i = 0; i < 500; ++i) {
    const auto batch = BuildOccurrenceBatch(s, 2, lex, noise, rng, config);
    for (const auto& t : batch.samples) {
      if (t.source == SampleSource::kNoiseNegative) {
        EXPECT_NE(t.other, 3);
      }
    }
  }
}

TEST(OccurrenceBatchTest, SinglePositiveWeightMode) {
  const Lexicon lex = LexiconOf({"a", "b", "c", "ab"});
  const NoiseSampler noise(lex, NoiseDistribution::kUniform);
  SamplerConfig config;
  config.weight_mode = WeightMode::kSinglePositive;
  config.noise_negatives = 0;
  Rng rng(1);
  const std::vector<WordId> s = {0, lex.Id("a"), lex.Id("b"), lex.Id("c"), 1};
  const auto batch = BuildOccurrenceBatch(s, 3, lex, noise, rng, config);
  ASSERT_GT(batch.n_neg, 0u);
  const double want = ComputeClassWeights(1, batch.n_neg, config.eta).negative;
  for (const auto& t : batch.samples) {
    if (t.label == Label::kNegative) {
      EXPECT_EQ(t.weight, want);
    }
  }
}

TEST(WriteSamplesTsvTest, Format) {
  const Lexicon lex = LexiconOf({"a", "b"});
  OccurrenceBatch batch;
  batch.samples.push_back(
      {2, 3, Label::kPositive, SampleSource::kContextPositive, 1.0});
  batch.samples.push_back(
      {2, 0, Label::kNegative, SampleSource::kNoiseNegative, 0.375});
  std::ostringstream out;
  WriteSamplesTsv(out, batch, lex);
  std::istringstream lines(out.str());
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(std::count(line.begin(), line.end(), '\t'), 4);
  EXPECT_EQ(line.substr(0, 4), "a\tb\t");
  std::getline(lines, line);
  EXPECT_NE(line.find("0.375"), std::string::npos);
}

}  // namespace
}  // namespace embseg
