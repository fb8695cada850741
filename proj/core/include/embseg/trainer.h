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

#ifndef EMBSEG_TRAINER_H_
#define EMBSEG_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "embseg/corpus.h"
#include "embseg/embedding.h"
#include "embseg/lexicon.h"
#include "embseg/sampler.h"

namespace embseg {

struct TrainerConfig {
  double epsilon = 1e-5;     // subsampling threshold
  double mu = 0.5;           // multi-character keep threshold
  std::size_t noise_negatives = 1;
  std::size_t dim = 100;
  double eta = 0.2;          // class-weight smoothing
  std::size_t window = 4;
  std::size_t epochs = 1;
  double lr_start = 0.025;
  double lr_end = 1e-4;
  std::uint64_t seed = 1;
  std::size_t threads = 1;

  NoiseDistribution noise = NoiseDistribution::kUniform;
  WeightMode weight_mode = WeightMode::kPerOccurrence;
  bool context_negatives = true;
  bool inword_negatives = true;
  bool multichar_keep = true;
  // One vector per word for both roles. When false, context words use a
  // separate output table that is discarded after training.
  bool tied = true;

  // Throws InvalidArgument.
  void Validate() const;

  SamplerConfig sampler() const;
  SubsampleOptions subsample() const;
};

// Cosine similarity of two embeddings.
inline double PairScore(std::span<const double> u, std::span<const double> v) {
  return Cosine(u, v);
}

// weight * log(sigmoid(+-cos)): + for positives, - for negatives.
double SampleLoss(const TrainingSample& sample, const EmbeddingTable& targets,
                  const EmbeddingTable& others);
inline double SampleLoss(const TrainingSample& sample,
                         const EmbeddingTable& table) {
  return SampleLoss(sample, table, table);
}

struct PairGradient {
  double loss;
  double cosine;
  std::vector<double> d_target;
  std::vector<double> d_other;
};

// Analytic gradient of weight * log(sigmoid(+-cos(u, v))) w.r.t. u and v.
PairGradient ComputePairGradient(std::span<const double> u,
                                 std::span<const double> v, Label label,
                                 double weight);

// One ascent step on a single sample: both rows move by lr * gradient.
// `targets` and `others` may be the same table. Returns the number of rows
// that had to be re-randomized because their norm vanished.
int TrainStep(const TrainingSample& sample, double lr, EmbeddingTable& targets,
              EmbeddingTable& others, Rng& rng);
inline int TrainStep(const TrainingSample& sample, double lr,
                     EmbeddingTable& table, Rng& rng) {
  return TrainStep(sample, lr, table, table, rng);
}

struct TrainStats {
  std::uint64_t tokens_processed = 0;
  std::uint64_t targets_sampled = 0;
  std::uint64_t positives = 0;
  std::uint64_t negatives = 0;
  std::uint64_t rerandomized_rows = 0;

  std::uint64_t samples() const { return positives + negatives; }
};

struct TrainResult {
  EmbeddingTable embeddings;
  TrainStats stats;
};

// Trains embeddings over fragment sentences for `config.epochs` passes.
// The learning rate decays linearly from lr_start to lr_end over the
// expected number of token occurrences. With threads == 1 the result is a
// deterministic function of the inputs and the seed; with more threads rows
// are updated concurrently without locks. If `sample_dump` is set every
// generated sample is written to it as TSV. Throws LookupError if a token is
// missing from the lexicon.
TrainResult Train(std::span<const SegmentedSentence> sentences,
                  const Lexicon& lexicon, const TrainerConfig& config,
                  std::ostream* sample_dump = nullptr);

}  // namespace embseg

#endif  // EMBSEG_TRAINER_H_
