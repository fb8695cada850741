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

#ifndef EMBSEG_SIMCACHE_H_
#define EMBSEG_SIMCACHE_H_

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "embseg/embedding.h"
#include "embseg/lexicon.h"

namespace embseg {

// Cosine similarity between two dictionary words, as seen by the decoder.
class Similarity {
 public:
  virtual ~Similarity() = default;
  virtual double operator()(WordId a, WordId b) const = 0;
};

// Exact double-precision cosine, no caching.
class DirectSimilarity : public Similarity {
 public:
  explicit DirectSimilarity(const EmbeddingTable& embeddings)
      : embeddings_(embeddings) {}
  double operator()(WordId a, WordId b) const override;

 private:
  const EmbeddingTable& embeddings_;
};

// Cosine rounded to single precision, the representation the cache stores.
float RoundedCosine(const EmbeddingTable& embeddings, WordId a, WordId b);

// Symmetric map from unordered id pairs to cosine similarity.
class SimCache {
 public:
  struct Entry {
    WordId a;  // a < b
    WordId b;
    float cosine;
  };

  static constexpr char kMagic[4] = {'W', 'C', 'S', 'C'};
  static constexpr std::uint8_t kVersion = 1;

  SimCache() = default;
  explicit SimCache(std::size_t vocabulary_size)
      : vocabulary_size_(vocabulary_size) {}

  void Insert(WordId a, WordId b, float cosine) {
    table_[Key(a, b)] = cosine;
  }
  std::optional<float> Find(WordId a, WordId b) const {
    const auto it = table_.find(Key(a, b));
    if (it == table_.end()) return std::nullopt;
    return it->second;
  }
  bool Contains(WordId a, WordId b) const {
    return table_.count(Key(a, b)) != 0;
  }

  std::size_t size() const { return table_.size(); }
  std::size_t vocabulary_size() const { return vocabulary_size_; }

  // Entries ordered by (a, b).
  std::vector<Entry> SortedEntries() const;

  // Binary format: "WCSC", version byte, V (u32), entry count (u64), then
  // (a: u32, b: u32, cos: f32) per entry; all little-endian.
  void Save(std::ostream& out) const;
  void Save(const std::string& path) const;
  // Throws FormatError on a bad header or truncated data.
  static SimCache Load(std::istream& in);
  static SimCache Load(const std::string& path);

  // `word_a<TAB>word_b<TAB>cos` per entry.
  void SaveTsv(std::ostream& out, const Lexicon& lexicon) const;

 private:
  static std::uint64_t Key(WordId a, WordId b) {
    const auto lo = static_cast<std::uint32_t>(a < b ? a : b);
    const auto hi = static_cast<std::uint32_t>(a < b ? b : a);
    return (static_cast<std::uint64_t>(lo) << 32) | hi;
  }

  std::size_t vocabulary_size_ = 0;
  std::unordered_map<std::uint64_t, float> table_;
};

enum class CooccurrenceScope {
  // Pairs at most `window` positions apart.
  kWindow,
  // All pairs within a sentence.
  kSentence,
};

// Caches the cosine of every pair of distinct words co-occurring in one of
// `sentences` (id sequences, markers included).
SimCache BuildSimCache(std::span<const std::vector<WordId>> sentences,
                       const EmbeddingTable& embeddings, std::size_t window,
                       CooccurrenceScope scope = CooccurrenceScope::kWindow);

// Serves cached cosines and computes the rest on demand. Both paths return
// the single-precision value, so results do not depend on what is cached.
// `cache` may be null, in which case every query is a miss.
class CachedSimilarity : public Similarity {
 public:
  CachedSimilarity(const SimCache* cache, const EmbeddingTable& embeddings)
      : cache_(cache), embeddings_(embeddings) {}

  // Throws LookupError for ids outside the embedding table.
  double operator()(WordId a, WordId b) const override;

  std::uint64_t hits() const { return hits_.load(); }
  std::uint64_t misses() const { return misses_.load(); }
  double hit_rate() const;
  void ResetCounters() {
    hits_ = 0;
    misses_ = 0;
  }

 private:
  const SimCache* cache_;
  const EmbeddingTable& embeddings_;
  mutable std::atomic<std::uint64_t> hits_{0};
  mutable std::atomic<std::uint64_t> misses_{0};
};

}  // namespace embseg

#endif  // EMBSEG_SIMCACHE_H_
