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

#ifndef EMBSEG_LEXICON_H_
#define EMBSEG_LEXICON_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "embseg/corpus.h"
#include "embseg/random.h"

namespace embseg {

using WordId = std::int32_t;
inline constexpr WordId kNoWord = -1;

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const {
    return std::hash<std::string_view>{}(s);
  }
};

// The target-domain dictionary: every token type of the automatically
// segmented corpus with its count. Ids are dense and assigned in order of
// first appearance.
class Lexicon {
 public:
  Lexicon() = default;

  // Adds `count` (>= 1) occurrences of `word` and returns its id.
  WordId Add(std::string_view word, std::uint64_t count = 1);

  std::optional<WordId> Find(std::string_view word) const {
    const auto it = index_.find(word);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  // Like Find but returns kNoWord when absent.
  WordId FindOrNone(std::string_view word) const {
    const auto it = index_.find(word);
    return it == index_.end() ? kNoWord : it->second;
  }
  // Throws LookupError.
  WordId Id(std::string_view word) const;
  const std::string& Word(WordId id) const;
  std::uint64_t Count(WordId id) const;
  // count / total_tokens
  double Frequency(WordId id) const;
  // Number of characters; markers count as one.
  std::size_t CharLength(WordId id) const;

  bool Contains(WordId id) const {
    return id >= 0 && static_cast<std::size_t>(id) < words_.size();
  }
  bool IsMarker(WordId id) const {
    return id == begin_marker_ || id == end_marker_;
  }
  WordId begin_marker() const { return begin_marker_; }
  WordId end_marker() const { return end_marker_; }

  std::size_t size() const { return words_.size(); }
  std::uint64_t total_tokens() const { return total_tokens_; }
  // Longest non-marker word, in characters.
  std::size_t max_word_chars() const { return max_word_chars_; }

  // `word<TAB>count` per line in id order.
  void Save(std::ostream& out) const;
  void Save(const std::string& path) const;
  // Throws FormatError on malformed input.
  static Lexicon Load(std::istream& in);
  static Lexicon Load(const std::string& path);

 private:
  std::vector<std::string> words_;
  std::vector<std::uint64_t> counts_;
  std::vector<std::uint32_t> char_lengths_;
  std::unordered_map<std::string, WordId, StringHash, std::equal_to<>> index_;
  std::uint64_t total_tokens_ = 0;
  std::size_t max_word_chars_ = 0;
  WordId begin_marker_ = kNoWord;
  WordId end_marker_ = kNoWord;
};

// Builds the dictionary from fragment sentences. With `add_markers`, every
// sentence is wrapped in ⟨BOS⟩/⟨EOS⟩ first, so the markers are counted once
// per sentence. Throws InvalidArgument on an empty corpus.
Lexicon BuildLexicon(std::span<const SegmentedSentence> sentences,
                     bool add_markers = true);

// Maps a fragment sentence to ids, wrapping it in markers when the lexicon
// has them. Throws LookupError on unknown tokens.
std::vector<WordId> ToIds(const Lexicon& lexicon,
                          const SegmentedSentence& sentence);

// min(1, sqrt(epsilon / frequency)).
double SubsampleProb(double frequency, double epsilon);
// Throws LookupError for words outside the lexicon.
double SubsampleProb(const Lexicon& lexicon, std::string_view word,
                     double epsilon);

// Multi-character keep rule: p_word < mu / N * sum(p_substrings), N being
// the number of substrings. False when there are no substrings.
bool MultiCharKeepRule(double p_word, std::span<const double> p_substrings,
                       double mu);

// Distinct in-dictionary contiguous proper substrings of `word`, in order of
// (start, length). Empty for single-character words and markers.
std::vector<WordId> InDictionarySubstrings(const Lexicon& lexicon,
                                           std::string_view word);

bool MultiCharKeep(const Lexicon& lexicon, std::string_view word,
                   double epsilon, double mu);

struct SubsampleOptions {
  double epsilon = 1e-5;
  double mu = 0.5;
  bool multichar_keep = true;
};

// Per-word subsampling probability and keep override, precomputed.
class SubsampleTable {
 public:
  SubsampleTable(const Lexicon& lexicon, const SubsampleOptions& options);

  double p_sub(WordId id) const { return p_sub_[id]; }
  bool keep_override(WordId id) const { return keep_[id] != 0; }

  // Whether this occurrence of `id` is used as a target word.
  bool SampleTarget(WordId id, Rng& rng) const {
    if (keep_[id] || p_sub_[id] >= 1.0) return true;
    return UniformUnit(rng) < p_sub_[id];
  }

 private:
  std::vector<double> p_sub_;
  std::vector<std::uint8_t> keep_;
};

}  // namespace embseg

#endif  // EMBSEG_LEXICON_H_
