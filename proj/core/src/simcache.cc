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

#include "embseg/simcache.h"

#include <algorithm>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>

#include "embseg/errors.h"

namespace embseg {

double DirectSimilarity::operator()(WordId a, WordId b) const {
  return Cosine(embeddings_.Row(a), embeddings_.Row(b));
}

float RoundedCosine(const EmbeddingTable& embeddings, WordId a, WordId b) {
  return static_cast<float>(Cosine(embeddings.Row(a), embeddings.Row(b)));
}

std::vector<SimCache::Entry> SimCache::SortedEntries() const {
  std::vector<std::pair<std::uint64_t, float>> items(table_.begin(),
                                                     table_.end());
  std::sort(items.begin(), items.end());
  std::vector<Entry> out;
  out.reserve(items.size());
  for (const auto& [key, cos] : items) {
    out.push_back({static_cast<WordId>(key >> 32),
                   static_cast<WordId>(key & 0xFFFFFFFFu), cos});
  }
  return out;
}

namespace {

void PutU32(std::ostream& out, std::uint32_t x) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((x >> (8 * i)) & 0xFF);
  out.write(b, 4);
}

void PutU64(std::ostream& out, std::uint64_t x) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((x >> (8 * i)) & 0xFF);
  out.write(b, 8);
}

std::uint64_t GetLE(std::istream& in, int bytes) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), bytes)) {
    throw FormatError("similarity cache is truncated");
  }
  std::uint64_t x = 0;
  for (int i = bytes - 1; i >= 0; --i) x = (x << 8) | b[i];
  return x;
}

}  // namespace

void SimCache::Save(std::ostream& out) const {
  out.write(kMagic, 4);
  out.put(static_cast<char>(kVersion));
  PutU32(out, static_cast<std::uint32_t>(vocabulary_size_));
  PutU64(out, table_.size());
  for (const Entry& e : SortedEntries()) {
    PutU32(out, static_cast<std::uint32_t>(e.a));
    PutU32(out, static_cast<std::uint32_t>(e.b));
    PutU32(out, std::bit_cast<std::uint32_t>(e.cosine));
  }
}

void SimCache::Save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  Save(out);
  if (!out) throw IoError("write failed: " + path);
}

SimCache SimCache::Load(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || !std::equal(magic, magic + 4, kMagic)) {
    throw FormatError("not a similarity cache (bad magic)");
  }
  const auto version = static_cast<std::uint8_t>(GetLE(in, 1));
  if (version != kVersion) {
    throw FormatError("similarity cache version " + std::to_string(version) +
                      " is not supported (expected " +
                      std::to_string(kVersion) + ")");
  }
  SimCache cache(GetLE(in, 4));
  const std::uint64_t count = GetLE(in, 8);
  cache.table_.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto a = static_cast<std::uint32_t>(GetLE(in, 4));
    const auto b = static_cast<std::uint32_t>(GetLE(in, 4));
    const auto bits = static_cast<std::uint32_t>(GetLE(in, 4));
    if (a >= cache.vocabulary_size_ || b >= cache.vocabulary_size_) {
      throw FormatError("similarity cache entry refers to id beyond V");
    }
    cache.Insert(static_cast<WordId>(a), static_cast<WordId>(b),
                 std::bit_cast<float>(bits));
  }
  return cache;
}

SimCache SimCache::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return Load(in);
}

void SimCache::SaveTsv(std::ostream& out, const Lexicon& lexicon) const {
  for (const Entry& e : SortedEntries()) {
    out << lexicon.Word(e.a) << '\t' << lexicon.Word(e.b) << '\t' << e.cosine
        << '\n';
  }
}

SimCache BuildSimCache(std::span<const std::vector<WordId>> sentences,
                       const EmbeddingTable& embeddings, std::size_t window,
                       CooccurrenceScope scope) {
  SimCache cache(embeddings.rows());
  for (const std::vector<WordId>& s : sentences) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::size_t end = scope == CooccurrenceScope::kWindow
                                  ? std::min(s.size(), i + window + 1)
                                  : s.size();
      for (std::size_t j = i + 1; j < end; ++j) {
        if (s[i] == s[j] || cache.Contains(s[i], s[j])) continue;
        cache.Insert(s[i], s[j], RoundedCosine(embeddings, s[i], s[j]));
      }
    }
  }
  return cache;
}

double CachedSimilarity::operator()(WordId a, WordId b) const {
  const auto rows = static_cast<WordId>(embeddings_.rows());
  if (a < 0 || b < 0 || a >= rows || b >= rows) {
    throw LookupError("similarity query for unknown word id");
  }
  if (cache_ != nullptr) {
    if (const auto hit = cache_->Find(a, b)) {
      hits_.fetch_add(1, std::memory_order_relaxed);
      return *hit;
    }
  }
  misses_.fetch_add(1, std::memory_order_relaxed);
  return RoundedCosine(embeddings_, a, b);
}

double CachedSimilarity::hit_rate() const {
  const double total = static_cast<double>(hits() + misses());
  return total == 0.0 ? 0.0 : static_cast<double>(hits()) / total;
}

}  // namespace embseg
