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

#include "embseg/trainer.h"

#include <atomic>
#include <cmath>
#include <mutex>
#include <ostream>
#include <thread>

#include "embseg/errors.h"

namespace embseg {

void TrainerConfig::Validate() const {
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
  if (!(mu > 0.0)) throw InvalidArgument("mu must be positive");
  if (!(eta > 0.0)) throw InvalidArgument("eta must be positive");
  if (dim == 0) throw InvalidArgument("dimension must be positive");
  if (window == 0) throw InvalidArgument("window must be positive");
  if (epochs == 0) throw InvalidArgument("epochs must be at least 1");
  if (!(lr_start > 0.0) || !(lr_end > 0.0) || lr_end > lr_start) {
    throw InvalidArgument("learning rates must satisfy 0 < lr_end <= lr_start");
  }
  if (threads == 0) throw InvalidArgument("threads must be at least 1");
}

SamplerConfig TrainerConfig::sampler() const {
  SamplerConfig c;
  c.window = window;
  c.noise_negatives = noise_negatives;
  c.eta = eta;
  c.noise = noise;
  c.weight_mode = weight_mode;
  c.context_negatives = context_negatives;
  c.inword_negatives = inword_negatives;
  return c;
}

SubsampleOptions TrainerConfig::subsample() const {
  return {epsilon, mu, multichar_keep};
}

namespace {

inline double LogSigmoid(double x) {
  return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

inline double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline double Sign(Label label) { return label == Label::kPositive ? 1.0 : -1.0; }

// Norms below this make the cosine meaningless.
constexpr double kMinSquaredNorm = 1e-24;

template <bool kConcurrent>
inline double Load(const double& x) {
  if constexpr (kConcurrent) {
    return std::atomic_ref<double>(const_cast<double&>(x))
        .load(std::memory_order_relaxed);
  } else {
    return x;
  }
}

template <bool kConcurrent>
inline void Store(double& x, double value) {
  if constexpr (kConcurrent) {
    std::atomic_ref<double>(x).store(value, std::memory_order_relaxed);
  } else {
    x = value;
  }
}

template <bool kConcurrent>
double SquaredNorm(std::span<const double> u) {
  double s = 0.0;
  for (const double& x : u) {
    const double y = Load<kConcurrent>(x);
    s += y * y;
  }
  return s;
}

template <bool kConcurrent>
void Rerandomize(std::span<double> row, Rng& rng) {
  std::vector<double> fresh(row.size());
  do {
    RandomizeRow(fresh, rng);
  } while (SquaredNorm<false>(fresh) < kMinSquaredNorm);
  for (std::size_t k = 0; k < row.size(); ++k) {
    Store<kConcurrent>(row[k], fresh[k]);
  }
}

template <bool kConcurrent>
int Step(const TrainingSample& sample, double lr, EmbeddingTable& targets,
         EmbeddingTable& others, Rng& rng) {
  // cos(u, u) is constant, so a tied self-pair has zero gradient.
  if (&targets == &others && sample.target == sample.other) return 0;
  std::span<double> u = targets.Row(sample.target);
  std::span<double> v = others.Row(sample.other);
  const std::size_t d = u.size();

  int rerandomized = 0;
  double uu = SquaredNorm<kConcurrent>(u);
  double vv = SquaredNorm<kConcurrent>(v);
  if (uu < kMinSquaredNorm) {
    Rerandomize<kConcurrent>(u, rng);
    uu = SquaredNorm<kConcurrent>(u);
    ++rerandomized;
  }
  if (vv < kMinSquaredNorm) {
    Rerandomize<kConcurrent>(v, rng);
    vv = SquaredNorm<kConcurrent>(v);
    ++rerandomized;
  }
  double dot = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    dot += Load<kConcurrent>(u[k]) * Load<kConcurrent>(v[k]);
  }
  const double nu = std::sqrt(uu);
  const double nv = std::sqrt(vv);
  const double cos = dot / (nu * nv);
  const double s = Sign(sample.label);
  const double g = lr * sample.weight * s * Sigmoid(-s * cos);

  // u += g (v / (|u||v|) - cos u / |u|^2), and symmetrically for v.
  const double cross = g / (nu * nv);
  const double shrink_u = g * cos / uu;
  const double shrink_v = g * cos / vv;
  for (std::size_t k = 0; k < d; ++k) {
    const double uk = Load<kConcurrent>(u[k]);
    const double vk = Load<kConcurrent>(v[k]);
    Store<kConcurrent>(u[k], uk + cross * vk - shrink_u * uk);
    Store<kConcurrent>(v[k], vk + cross * uk - shrink_v * vk);
  }
  return rerandomized;
}

}  // namespace

double SampleLoss(const TrainingSample& sample, const EmbeddingTable& targets,
                  const EmbeddingTable& others) {
  const double cos =
      PairScore(targets.Row(sample.target), others.Row(sample.other));
  return sample.weight * LogSigmoid(Sign(sample.label) * cos);
}

PairGradient ComputePairGradient(std::span<const double> u,
                                 std::span<const double> v, Label label,
                                 double weight) {
  const double cos = Cosine(u, v);
  double uu = 0.0;
  double vv = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    uu += u[k] * u[k];
    vv += v[k] * v[k];
  }
  const double s = Sign(label);
  const double dloss_dcos = weight * s * Sigmoid(-s * cos);
  const double inv_norms = 1.0 / std::sqrt(uu * vv);
  PairGradient g{weight * LogSigmoid(s * cos), cos,
                 std::vector<double>(u.size()), std::vector<double>(v.size())};
  for (std::size_t k = 0; k < u.size(); ++k) {
    g.d_target[k] = dloss_dcos * (v[k] * inv_norms - cos * u[k] / uu);
    g.d_other[k] = dloss_dcos * (u[k] * inv_norms - cos * v[k] / vv);
  }
  return g;
}

int TrainStep(const TrainingSample& sample, double lr, EmbeddingTable& targets,
              EmbeddingTable& others, Rng& rng) {
  return Step<false>(sample, lr, targets, others, rng);
}

namespace {

struct Shared {
  const std::vector<std::vector<WordId>>* sentences;
  const Lexicon* lexicon;
  const TrainerConfig* config;
  const SubsampleTable* subsample;
  const NoiseSampler* noise;
  SamplerConfig sampler;
  EmbeddingTable* targets;
  EmbeddingTable* others;
  double total_expected;
  std::atomic<std::uint64_t>* processed;
  std::ostream* dump;
  std::mutex* dump_mutex;
};

template <bool kConcurrent>
TrainStats RunShard(const Shared& sh, std::size_t shard, std::size_t shards,
                    Rng& rng) {
  TrainStats stats;
  const TrainerConfig& cfg = *sh.config;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t s = shard; s < sh.sentences->size(); s += shards) {
      const std::vector<WordId>& sentence = (*sh.sentences)[s];
      for (std::size_t i = 0; i < sentence.size(); ++i) {
        const std::uint64_t done =
            sh.processed->fetch_add(1, std::memory_order_relaxed);
        ++stats.tokens_processed;
        if (!sh.subsample->SampleTarget(sentence[i], rng)) continue;
        ++stats.targets_sampled;
        const OccurrenceBatch batch = BuildOccurrenceBatch(
            sentence, i, *sh.lexicon, *sh.noise, rng, sh.sampler);
        if (batch.empty()) continue;
        if (sh.dump != nullptr) {
          std::lock_guard<std::mutex> lock(*sh.dump_mutex);
          WriteSamplesTsv(*sh.dump, batch, *sh.lexicon);
        }
        const double progress =
            std::min(1.0, static_cast<double>(done) / sh.total_expected);
        const double lr = cfg.lr_start - (cfg.lr_start - cfg.lr_end) * progress;
        stats.positives += batch.n_pos;
        stats.negatives += batch.n_neg;
        for (const TrainingSample& sample : batch.samples) {
          stats.rerandomized_rows +=
              Step<kConcurrent>(sample, lr, *sh.targets, *sh.others, rng);
        }
      }
    }
  }
  return stats;
}

void Merge(const TrainStats& from, TrainStats* into) {
  into->tokens_processed += from.tokens_processed;
  into->targets_sampled += from.targets_sampled;
  into->positives += from.positives;
  into->negatives += from.negatives;
  into->rerandomized_rows += from.rerandomized_rows;
}

}  // namespace

TrainResult Train(std::span<const SegmentedSentence> sentences,
                  const Lexicon& lexicon, const TrainerConfig& config,
                  std::ostream* sample_dump) {
  config.Validate();
  std::vector<std::vector<WordId>> ids;
  ids.reserve(sentences.size());
  std::uint64_t occurrences = 0;
  for (const SegmentedSentence& s : sentences) {
    ids.push_back(ToIds(lexicon, s));
    occurrences += ids.back().size();
  }

  const SubsampleTable subsample(lexicon, config.subsample());
  const NoiseSampler noise(lexicon, config.noise);
  Rng rng(config.seed);

  TrainResult result;
  result.embeddings = InitEmbeddings(lexicon.size(), config.dim, rng);
  EmbeddingTable output;
  if (!config.tied) output = InitEmbeddings(lexicon.size(), config.dim, rng);

  std::atomic<std::uint64_t> processed{0};
  std::mutex dump_mutex;
  const Shared shared{
      &ids,
      &lexicon,
      &config,
      &subsample,
      &noise,
      config.sampler(),
      &result.embeddings,
      config.tied ? &result.embeddings : &output,
      std::max(1.0, static_cast<double>(occurrences * config.epochs)),
      &processed,
      sample_dump,
      &dump_mutex,
  };

  if (config.threads == 1) {
    result.stats = RunShard<false>(shared, 0, 1, rng);
    return result;
  }

  std::vector<TrainStats> per_thread(config.threads);
  std::vector<std::thread> workers;
  workers.reserve(config.threads);
  for (std::size_t t = 0; t < config.threads; ++t) {
    workers.emplace_back([&, t] {
      Rng local(config.seed + 0x9E3779B97F4A7C15ULL * (t + 1));
      per_thread[t] = RunShard<true>(shared, t, config.threads, local);
    });
  }
  for (std::thread& w : workers) w.join();
  for (const TrainStats& s : per_thread) Merge(s, &result.stats);
  return result;
}

}  // namespace embseg
