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
#include "embseg/lexicon.h"
#include "embseg/random.h"
#include "embseg/sampler.h"
#include "embseg/trainer.h"
#include "embseg/utf8.h"

namespace embseg {
namespace {

std::vector<SegmentedSentence> SyntheticCorpus(std::size_t sentences) {
  const std::u32string chars = U"天地玄黄宇宙洪荒日月盈昃辰宿列张寒来暑往秋收冬藏";
  Rng rng(3);
  std::vector<std::string> words;
  for (int i = 0; i < 200; ++i) {
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
    for (int k = 0; k < 12; ++k) {
      sentence.push_back(words[UniformIndex(rng, words.size())]);
    }
    corpus.push_back(std::move(sentence));
  }
  return corpus;
}

void BM_TrainEpoch(benchmark::State& state) {
  const auto corpus = SyntheticCorpus(2000);
  const Lexicon lexicon = BuildLexicon(corpus);
  TrainerConfig config;
  config.epsilon = 1e-2;
  config.threads = static_cast<std::size_t>(state.range(0));
  std::uint64_t samples = 0;
  for (auto _ : state) {
    const TrainResult r = Train(corpus, lexicon, config);
    samples += r.stats.samples();
  }
  state.counters["samples/s"] = benchmark::Counter(
      static_cast<double>(samples), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_TrainEpoch)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)
    ->UseRealTime();

void BM_OccurrenceBatch(benchmark::State& state) {
  const auto corpus = SyntheticCorpus(200);
  const Lexicon lexicon = BuildLexicon(corpus);
  const NoiseSampler noise(lexicon, NoiseDistribution::kUniform);
  std::vector<std::vector<WordId>> ids;
  for (const auto& s : corpus) ids.push_back(ToIds(lexicon, s));
  Rng rng(1);
  const SamplerConfig config;
  std::size_t s = 0;
  for (auto _ : state) {
    const auto& sentence = ids[s++ % ids.size()];
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      benchmark::DoNotOptimize(
          BuildOccurrenceBatch(sentence, i, lexicon, noise, rng, config));
    }
  }
}
BENCHMARK(BM_OccurrenceBatch);

void BM_TrainStep(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  Rng rng(2);
  EmbeddingTable table = InitEmbeddings(64, dim, rng);
  WordId a = 0;
  for (auto _ : state) {
    const TrainingSample sample{a, static_cast<WordId>((a + 7) % 64),
                                Label::kPositive,
                                SampleSource::kContextPositive, 1.0};
    benchmark::DoNotOptimize(TrainStep(sample, 0.01, table, rng));
    a = (a + 1) % 64;
  }
}
BENCHMARK(BM_TrainStep)->Arg(50)->Arg(100)->Arg(300);

}  // namespace
}  // namespace embseg

BENCHMARK_MAIN();
