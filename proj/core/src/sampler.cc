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
#include <cmath>
#include <ostream>
#include <string>
#include <unordered_set>

#include "embseg/errors.h"
#include "embseg/utf8.h"

namespace embseg {

const char* ToString(Label label) {
  return label == Label::kPositive ? "POSITIVE" : "NEGATIVE";
}

const char* ToString(SampleSource source) {
  switch (source) {
    case SampleSource::kContextPositive:
      return "CTX_POS";
    case SampleSource::kContextNegative:
      return "CTX_NEG";
    case SampleSource::kInWordNegative:
      return "INWORD_NEG";
    case SampleSource::kNoiseNegative:
      return "NOISE_NEG";
  }
  return "?";
}

std::vector<WordPair> Positives(std::span<const WordId> sentence,
                                std::size_t i, std::size_t window) {
  std::vector<WordPair> out;
  const std::size_t begin = i >= window ? i - window : 0;
  const std::size_t end = std::min(sentence.size(), i + window + 1);
  for (std::size_t j = begin; j < end; ++j) {
    if (j != i) out.emplace_back(sentence[i], sentence[j]);
  }
  return out;
}

namespace {

inline std::uint64_t PairKey(WordId a, WordId b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

// Emits (target, s) for each in-dictionary substring s of the characters of
// sentence[begin, end), skipping words of the window and repeats.
void SideNegatives(std::span<const WordId> sentence, std::size_t begin,
                   std::size_t end, std::span<const WordId> window_words,
                   WordId target, const Lexicon& lexicon,
                   std::unordered_set<WordId>* seen,
                   std::vector<WordPair>* out) {
  std::string text;
  for (std::size_t j = begin; j < end; ++j) {
    if (!lexicon.IsMarker(sentence[j])) text += lexicon.Word(sentence[j]);
  }
  if (text.empty()) return;
  const auto offsets = utf8::CharOffsets(text);
  if (!offsets) return;
  const std::size_t n = offsets->size() - 1;
  const std::size_t max_len = lexicon.max_word_chars();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t len = 1; len <= max_len && a + len <= n; ++len) {
      const std::size_t b = (*offsets)[a];
      const std::size_t e = (*offsets)[a + len];
      const WordId id =
          lexicon.FindOrNone(std::string_view(text).substr(b, e - b));
      if (id == kNoWord) continue;
      if (std::find(window_words.begin(), window_words.end(), id) !=
          window_words.end()) {
        continue;
      }
      if (seen->insert(id).second) out->emplace_back(target, id);
    }
  }
}

}  // namespace

std::vector<WordPair> ContextNegatives(std::span<const WordId> sentence,
                                       std::size_t i, std::size_t window,
                                       const Lexicon& lexicon) {
  std::vector<WordPair> out;
  const std::size_t begin = i >= window ? i - window : 0;
  const std::size_t end = std::min(sentence.size(), i + window + 1);
  // C: the words of the window other than position i. Ids are unique per
  // string, so id membership is string membership.
  std::vector<WordId> context;
  for (std::size_t j = begin; j < end; ++j) {
    if (j != i) context.push_back(sentence[j]);
  }
  std::unordered_set<WordId> seen;
  SideNegatives(sentence, begin, i, context, sentence[i], lexicon, &seen, &out);
  SideNegatives(sentence, i + 1, end, context, sentence[i], lexicon, &seen,
                &out);
  return out;
}

std::vector<WordPair> InWordNegatives(std::string_view word,
                                      const Lexicon& lexicon) {
  std::vector<WordPair> out;
  if (word == kBeginMarker || word == kEndMarker) return out;
  const auto offsets = utf8::CharOffsets(word);
  if (!offsets) return out;
  const std::size_t n = offsets->size() - 1;
  if (n < 2) return out;
  const std::size_t max_len = std::min(n - 1, lexicon.max_word_chars());

  // ids[a * n + len - 1] = id of word.substr(a, len) or kNoWord.
  std::vector<WordId> ids(n * n, kNoWord);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t len = 1; len <= max_len && a + len <= n; ++len) {
      const std::size_t b = (*offsets)[a];
      const std::size_t e = (*offsets)[a + len];
      ids[a * n + len - 1] = lexicon.FindOrNone(word.substr(b, e - b));
    }
  }
  std::unordered_set<std::uint64_t> seen;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t la = 1; la <= max_len && a + la < n; ++la) {
      const WordId left = ids[a * n + la - 1];
      if (left == kNoWord) continue;
      for (std::size_t c = a + la; c < n; ++c) {
        for (std::size_t lc = 1; lc <= max_len && c + lc <= n; ++lc) {
          const WordId right = ids[c * n + lc - 1];
          if (right == kNoWord) continue;
          if (seen.insert(PairKey(left, right)).second) {
            out.emplace_back(left, right);
          }
        }
      }
    }
  }
  return out;
}

NoiseSampler::NoiseSampler(const Lexicon& lexicon,
                           NoiseDistribution distribution)
    : vocabulary_size_(lexicon.size()), distribution_(distribution) {
  if (vocabulary_size_ == 0) throw InvalidArgument("empty dictionary");
  if (distribution_ == NoiseDistribution::kUnigram075) {
    cumulative_.reserve(vocabulary_size_);
    double total = 0.0;
    for (std::size_t i = 0; i < vocabulary_size_; ++i) {
      total += std::pow(
          static_cast<double>(lexicon.Count(static_cast<WordId>(i))), 0.75);
      cumulative_.push_back(total);
    }
  }
}

WordId NoiseSampler::Draw(Rng& rng) const {
  if (distribution_ == NoiseDistribution::kUniform) {
    return static_cast<WordId>(UniformIndex(rng, vocabulary_size_));
  }
  const double u = UniformUnit(rng) * cumulative_.back();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  const auto idx = std::min<std::size_t>(it - cumulative_.begin(),
                                         vocabulary_size_ - 1);
  return static_cast<WordId>(idx);
}

std::vector<WordPair> NoiseNegatives(WordId w, std::size_t n, Rng& rng,
                                     const NoiseSampler& noise) {
  std::vector<WordPair> out;
  if (noise.vocabulary_size() < 2) return out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    WordId c;
    do {
      c = noise.Draw(rng);
    } while (c == w);
    out.emplace_back(w, c);
  }
  return out;
}

ClassWeights ComputeClassWeights(std::size_t n_pos, std::size_t n_neg,
                                 double eta) {
  if (n_pos == 0) throw InvalidArgument("class weights need a positive sample");
  if (n_neg == 0) return {1.0, 0.0};
  const double ratio = static_cast<double>(n_pos) / static_cast<double>(n_neg);
  return {1.0, (ratio + eta) / (1.0 + eta)};
}

OccurrenceBatch BuildOccurrenceBatch(std::span<const WordId> sentence,
                                     std::size_t i, const Lexicon& lexicon,
                                     const NoiseSampler& noise, Rng& rng,
                                     const SamplerConfig& config) {
  OccurrenceBatch batch;
  const std::vector<WordPair> positives =
      Positives(sentence, i, config.window);
  if (positives.empty()) return batch;

  const WordId target = sentence[i];
  std::vector<std::pair<WordPair, SampleSource>> negatives;
  std::unordered_set<std::uint64_t> seen;
  auto add = [&](const std::vector<WordPair>& pairs, SampleSource source) {
    for (const WordPair& p : pairs) {
      if (seen.insert(PairKey(p.first, p.second)).second) {
        negatives.emplace_back(p, source);
      }
    }
  };
  if (config.context_negatives) {
    add(ContextNegatives(sentence, i, config.window, lexicon),
        SampleSource::kContextNegative);
  }
  if (config.inword_negatives) {
    add(InWordNegatives(lexicon.Word(target), lexicon),
        SampleSource::kInWordNegative);
  }
  add(NoiseNegatives(target, config.noise_negatives, rng, noise),
      SampleSource::kNoiseNegative);

  batch.n_pos = positives.size();
  batch.n_neg = negatives.size();
  const std::size_t counted_pos =
      config.weight_mode == WeightMode::kPerOccurrence ? batch.n_pos : 1;
  const ClassWeights weights =
      ComputeClassWeights(counted_pos, batch.n_neg, config.eta);

  batch.samples.reserve(batch.n_pos + batch.n_neg);
  for (const WordPair& p : positives) {
    batch.samples.push_back({p.first, p.second, Label::kPositive,
                             SampleSource::kContextPositive, weights.positive});
  }
  for (const auto& [p, source] : negatives) {
    batch.samples.push_back(
        {p.first, p.second, Label::kNegative, source, weights.negative});
  }
  return batch;
}

void WriteSamplesTsv(std::ostream& out, const OccurrenceBatch& batch,
                     const Lexicon& lexicon) {
  for (const TrainingSample& s : batch.samples) {
    out << lexicon.Word(s.target) << '\t' << lexicon.Word(s.other) << '\t'
        << ToString(s.label) << '\t' << ToString(s.source) << '\t' << s.weight
        << '\n';
  }
}

}  // namespace embseg
