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

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "embseg/corpus.h"
#include "embseg/decoder.h"
#include "embseg/lexicon.h"
#include "embseg/random.h"
#include "embseg/simcache.h"
#include "embseg/trainer.h"
#include "embseg/utf8.h"

namespace embseg {
namespace {

const char kIdeographs[] =
    "的一是不了人我在有他这中大来上国个到说们为子和你地出道也时年得就那要下"
    "以生会自着去之过家学对可她里后小么心多天而能好都然没日于起还发成事只作";

// Segmented sentences over a few hundred random one- to three-character
// words with Zipf-like frequencies.
std::vector<SegmentedSentence> SyntheticCorpus(std::size_t sentences,
                                               std::uint64_t seed) {
  const std::u32string chars = utf8::ToU32(kIdeographs);
  Rng rng(seed);
  std::vector<std::string> words;
  for (int i = 0; i < 300; ++i) {
    std::u32string w;
    const std::size_t len = 1 + UniformIndex(rng, 3);
    for (std::size_t k = 0; k < len; ++k) {
      w += chars[UniformIndex(rng, chars.size())];
    }
    words.push_back(utf8::Encode(w));
  }
  std::vector<SegmentedSentence> corpus;
  for (std::size_t s = 0; s < sentences; ++s) {
    SegmentedSentence sentence;
    const std::size_t len = 5 + UniformIndex(rng, 15);
    for (std::size_t k = 0; k < len; ++k) {
      // Squaring skews draws toward low indices.
      const double u = UniformUnit(rng);
      sentence.push_back(words[static_cast<std::size_t>(u * u * words.size())]);
    }
    corpus.push_back(std::move(sentence));
  }
  return corpus;
}

struct Model {
  std::vector<SegmentedSentence> corpus;
  std::vector<std::string> raw;
  Lexicon lexicon;
  EmbeddingTable embeddings;
  SimCache cache;
  std::size_t tokens = 0;
};

const Model& SharedModel() {
  static const Model* model = [] {
    auto* m = new Model;
    m->corpus = SyntheticCorpus(5000, 11);
    m->lexicon = BuildLexicon(m->corpus);
    TrainerConfig config;
    config.dim = 100;
    m->embeddings = Train(m->corpus, m->lexicon, config).embeddings;
    std::vector<std::vector<WordId>> ids;
    for (const auto& s : m->corpus) {
      ids.push_back(ToIds(m->lexicon, s));
      std::string line;
      for (const auto& w : s) line += w;
      m->raw.push_back(std::move(line));
      m->tokens += s.size();
    }
    m->cache = BuildSimCache(ids, m->embeddings, config.window);
    return m;
  }();
  return *model;
}

void BM_SegmentLines(benchmark::State& state) {
  const Model& m = SharedModel();
  const bool cached = state.range(0) != 0;
  const CachedSimilarity sim(cached ? &m.cache : nullptr, m.embeddings);
  const Segmenter segmenter(m.lexicon, sim, BeamParams{}, DecoderOptions{});
  for (auto _ : state) {
    for (std::size_t i = 0; i < m.raw.size(); ++i) {
      benchmark::DoNotOptimize(segmenter.SegmentLine(m.raw[i], &m.corpus[i]));
    }
  }
  state.counters["ktokens"] = benchmark::Counter(
      static_cast<double>(m.tokens) * state.iterations() / 1000.0,
      benchmark::Counter::kIsRate);
  state.counters["hit_rate"] = sim.hit_rate();
}
BENCHMARK(BM_SegmentLines)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

void BM_BeamSearchBeamSize(benchmark::State& state) {
  const Model& m = SharedModel();
  const CachedSimilarity sim(&m.cache, m.embeddings);
  const auto k = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    for (std::size_t i = 0; i < 200; ++i) {
      benchmark::DoNotOptimize(
          BeamSearch(m.raw[i], m.lexicon, sim, k, 5, DecoderOptions{}));
    }
  }
}
BENCHMARK(BM_BeamSearchBeamSize)->RangeMultiplier(2)->Range(1, 64);

void BM_SimilarityLookup(benchmark::State& state) {
  const Model& m = SharedModel();
  const bool cached = state.range(0) != 0;
  const CachedSimilarity sim(cached ? &m.cache : nullptr, m.embeddings);
  const std::vector<SimCache::Entry> entries = m.cache.SortedEntries();
  std::size_t i = 0;
  for (auto _ : state) {
    const SimCache::Entry& e = entries[i++ % entries.size()];
    benchmark::DoNotOptimize(sim(e.a, e.b));
  }
}
BENCHMARK(BM_SimilarityLookup)->Arg(1)->Arg(0);

}  // namespace
}  // namespace embseg

BENCHMARK_MAIN();
