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

#ifndef EMBSEG_DECODER_H_
#define EMBSEG_DECODER_H_

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "embseg/corpus.h"
#include "embseg/lexicon.h"
#include "embseg/simcache.h"

namespace embseg {

struct BeamParams {
  std::size_t beam_size = 10;
  std::size_t max_word_len = 5;
  std::size_t beam_step = 10;
  std::size_t word_len_step = 1;
  // Growth rounds allowed after the first attempt. When unset, parameters
  // grow until max_word_len reaches the fragment length, then three more
  // rounds are tried.
  std::optional<std::size_t> retry_cap;

  // Throws InvalidArgument.
  void Validate() const;
};

struct DecoderOptions {
  std::size_t window = 4;
  // Recompute every hypothesis score from scratch and record the largest
  // deviation from the incremental score in SearchStats.
  bool verify_incremental = false;
};

struct SearchStats {
  std::uint64_t hypotheses = 0;
  std::uint64_t verified = 0;
  double max_incremental_error = 0.0;
};

// Mean cosine between `word` and its first min(window, recent.size())
// predecessors (`recent` is most recent first); 0 when there are none. This
// is the log of the word's conditional probability.
double WordLogProb(WordId word, std::span<const WordId> recent,
                   std::size_t window, const Similarity& sim);

// Running mean over segmented words: the mean over `words_before - 1`
// scored words, extended by `new_terms`.
double UpdateMeanLogProb(double mean, std::size_t words_before,
                         std::span<const double> new_terms);

// A partial segmentation of a fragment prefix: segmented words (a chain in
// the search arena rooted at ⟨BOS⟩) followed by an unsegmented buffer.
struct Hypothesis {
  std::int32_t last;        // arena node of the last segmented word
  std::uint32_t buf_begin;  // first buffered character
  std::uint32_t buf_len;
  std::uint32_t words;      // segmented words, ⟨BOS⟩ included
  double logp;              // mean log probability of the segmented words

  // Characters consumed so far.
  std::size_t consumed() const { return buf_begin + buf_len; }
};

// Hypothesis expansion over one fragment. Owns the arena the hypotheses
// point into, so hypotheses are only meaningful for the search that made
// them.
class FragmentSearch {
 public:
  // Throws InvalidArgument if the lexicon lacks boundary markers or the
  // fragment is empty or not valid UTF-8.
  FragmentSearch(std::string_view fragment, const Lexicon& lexicon,
                 const Similarity& sim, std::size_t window);

  std::size_t length() const { return length_; }

  // Drops every hypothesis made so far.
  void Reset();

  // Nothing consumed; only ⟨BOS⟩ segmented.
  Hypothesis Initial() const { return {0, 0, 0, 1, 0.0}; }

  // Successors of `h` on reading its next character: the character appended
  // to the buffer (if the buffer stays within `max_word_len`), and the buffer
  // flushed as a word followed by a new buffer holding the character (if the
  // buffer is a dictionary word).
  void Extend(const Hypothesis& h, std::size_t max_word_len,
              std::vector<Hypothesis>* out);

  // Flushes the buffer and appends ⟨EOS⟩. nullopt if the buffer is not a
  // dictionary word. Requires h.consumed() == length().
  std::optional<Hypothesis> Finish(const Hypothesis& h);

  // Segmented words after ⟨BOS⟩ (⟨EOS⟩ included once finished).
  std::vector<WordId> Words(const Hypothesis& h) const;
  // Dictionary id of the buffer, or kNoWord.
  WordId BufferWord(const Hypothesis& h) const;
  std::string BufferText(const Hypothesis& h) const;

  // Mean log probability recomputed over the whole segmentation.
  double Recompute(const Hypothesis& h) const;

  // Beam order: higher score, then fewer words, then longer earlier words.
  bool Ranks(const Hypothesis& a, const Hypothesis& b) const;
  // Final choice: like Ranks but scores within 1e-9 count as tied.
  bool Better(const Hypothesis& a, const Hypothesis& b) const;

  // Whether any tiling of the fragment by dictionary words exists.
  bool HasAnySegmentation() const;

 private:
  struct Node {
    WordId word;
    std::int32_t parent;
    std::uint32_t length;  // characters; 1 for markers
  };

  WordId SpanWord(std::size_t begin, std::size_t len) const;
  void Recent(std::int32_t node, std::vector<WordId>* out) const;
  std::int32_t Push(WordId word, std::int32_t parent, std::uint32_t length);
  // Log probability of `word` following the chain ending at `parent`.
  double Term(WordId word, std::int32_t parent);
  // Word lengths, buffer last.
  std::vector<std::uint32_t> Lengths(const Hypothesis& h) const;
  int CompareShape(const Hypothesis& a, const Hypothesis& b) const;

  std::string fragment_;
  std::vector<std::size_t> offsets_;
  std::size_t length_;
  std::size_t lookup_len_;
  std::vector<WordId> span_words_;
  const Lexicon& lexicon_;
  const Similarity& sim_;
  std::size_t window_;
  WordId end_marker_;
  std::vector<Node> arena_;
  std::vector<WordId> scratch_;
};

struct SearchResult {
  std::vector<WordId> words;  // markers stripped
  double score;
};

// Beam search over one fragment keeping the `beam_size` best hypotheses
// after each character. nullopt when no complete hypothesis survives.
// Throws InvalidArgument for an empty fragment.
std::optional<SearchResult> BeamSearch(std::string_view fragment,
                                       const Lexicon& lexicon,
                                       const Similarity& sim,
                                       std::size_t beam_size,
                                       std::size_t max_word_len,
                                       const DecoderOptions& options,
                                       SearchStats* stats = nullptr);

struct FragmentResult {
  SegmentedSentence tokens;
  bool fallback = false;
  std::size_t growth_rounds = 0;
  std::optional<double> score;
};

// Segments raw lines: fragments are decoded with growing beam parameters
// until a complete hypothesis is found, falling back to the baseline
// segmentation (or single characters) when the retry budget runs out.
class Segmenter {
 public:
  Segmenter(const Lexicon& lexicon, const Similarity& sim, BeamParams params,
            DecoderOptions options);

  FragmentResult SegmentFragment(std::string_view fragment,
                                 const SegmentedSentence* baseline) const;

  // `baseline_line` holds the baseline tokens of the whole line. Throws
  // StructuralError when they do not match the line.
  std::string SegmentLine(std::string_view line,
                          const SegmentedSentence* baseline_line) const;

  std::uint64_t fragments() const { return fragments_.load(); }
  std::uint64_t fallbacks() const { return fallbacks_.load(); }
  std::uint64_t growth_rounds() const { return growth_rounds_.load(); }

 private:
  const Lexicon& lexicon_;
  const Similarity& sim_;
  BeamParams params_;
  DecoderOptions options_;
  mutable std::atomic<std::uint64_t> fragments_{0};
  mutable std::atomic<std::uint64_t> fallbacks_{0};
  mutable std::atomic<std::uint64_t> growth_rounds_{0};
};

}  // namespace embseg

#endif  // EMBSEG_DECODER_H_
