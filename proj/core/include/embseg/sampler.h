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

#ifndef EMBSEG_SAMPLER_H_
#define EMBSEG_SAMPLER_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "embseg/lexicon.h"
#include "embseg/random.h"

namespace embseg {

enum class Label : std::uint8_t { kPositive, kNegative };

enum class SampleSource : std::uint8_t {
  kContextPositive,
  kContextNegative,
  kInWordNegative,
  kNoiseNegative,
};

const char* ToString(Label label);
const char* ToString(SampleSource source);

// A weighted (target, other) pair. For in-word negatives `target` is the left
// piece of the split word and `other` the right piece.
struct TrainingSample {
  WordId target;
  WordId other;
  Label label;
  SampleSource source;
  double weight;
};

// Everything generated for one sampled target-word occurrence.
struct OccurrenceBatch {
  std::vector<TrainingSample> samples;
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;

  bool empty() const { return samples.empty(); }
};

using WordPair = std::pair<WordId, WordId>;

enum class NoiseDistribution { kUniform, kUnigram075 };

// How N_pos / N_neg are counted for the class weights.
enum class WeightMode {
  // Counts over the whole occurrence batch.
  kPerOccurrence,
  // N_pos = 1 regardless of how many context positives there are.
  kSinglePositive,
};

struct SamplerConfig {
  std::size_t window = 4;
  std::size_t noise_negatives = 1;
  double eta = 0.2;
  NoiseDistribution noise = NoiseDistribution::kUniform;
  WeightMode weight_mode = WeightMode::kPerOccurrence;
  bool context_negatives = true;
  bool inword_negatives = true;
};

// (sentence[i], sentence[j]) for every j != i with |j - i| <= window.
std::vector<WordPair> Positives(std::span<const WordId> sentence,
                                std::size_t i, std::size_t window);

// (sentence[i], s) for every distinct dictionary word s that is a substring
// of the characters left (or right) of position i inside the window and is
// not itself one of the window's words. Boundary markers contribute no
// characters.
std::vector<WordPair> ContextNegatives(std::span<const WordId> sentence,
                                       std::size_t i, std::size_t window,
                                       const Lexicon& lexicon);

// All (left, right) pairs of disjoint in-dictionary substrings of `word`
// with `left` ending before `right` starts. Distinct pairs only.
std::vector<WordPair> InWordNegatives(std::string_view word,
                                      const Lexicon& lexicon);

// Draws noise words from the dictionary.
class NoiseSampler {
 public:
  NoiseSampler(const Lexicon& lexicon, NoiseDistribution distribution);

  WordId Draw(Rng& rng) const;
  std::size_t vocabulary_size() const { return vocabulary_size_; }

 private:
  std::size_t vocabulary_size_;
  NoiseDistribution distribution_;
  std::vector<double> cumulative_;  // only for kUnigram075
};

// `n` pairs (w, c') with c' != w; empty if the dictionary has a single word.
std::vector<WordPair> NoiseNegatives(WordId w, std::size_t n, Rng& rng,
                                     const NoiseSampler& noise);

struct ClassWeights {
  double positive;
  double negative;  // 0 when there are no negatives
};

// Positive weight 1, negative weight (n_pos / n_neg + eta) / (1 + eta).
// Throws InvalidArgument when n_pos == 0.
ClassWeights ComputeClassWeights(std::size_t n_pos, std::size_t n_neg,
                                 double eta);

// Positives, context negatives, in-word negatives of the target word and
// noise negatives for sentence[i], with class weights applied. Negative
// pairs are deduplicated within the batch. Returns an empty batch when the
// occurrence has no positives.
OccurrenceBatch BuildOccurrenceBatch(std::span<const WordId> sentence,
                                     std::size_t i, const Lexicon& lexicon,
                                     const NoiseSampler& noise, Rng& rng,
                                     const SamplerConfig& config);

// `target<TAB>other<TAB>label<TAB>source<TAB>weight` per sample.
void WriteSamplesTsv(std::ostream& out, const OccurrenceBatch& batch,
                     const Lexicon& lexicon);

}  // namespace embseg

#endif  // EMBSEG_SAMPLER_H_
