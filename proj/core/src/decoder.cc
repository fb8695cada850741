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

#include "embseg/decoder.h"

#include <algorithm>
#include <cmath>

#include "embseg/errors.h"
#include "embseg/utf8.h"

namespace embseg {

void BeamParams::Validate() const {
  if (beam_size == 0) throw InvalidArgument("beam size must be at least 1");
  if (max_word_len == 0) {
    throw InvalidArgument("maximum word length must be at least 1");
  }
}

double WordLogProb(WordId word, std::span<const WordId> recent,
                   std::size_t window, const Similarity& sim) {
  const std::size_t n = std::min(window, recent.size());
  if (n == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) sum += sim(word, recent[j]);
  return sum / static_cast<double>(n);
}

double UpdateMeanLogProb(double mean, std::size_t words_before,
                         std::span<const double> new_terms) {
  if (new_terms.empty()) return mean;
  double sum = static_cast<double>(words_before - 1) * mean;
  for (const double t : new_terms) sum += t;
  return sum / static_cast<double>(words_before - 1 + new_terms.size());
}

FragmentSearch::FragmentSearch(std::string_view fragment,
                               const Lexicon& lexicon, const Similarity& sim,
                               std::size_t window)
    : fragment_(fragment), lexicon_(lexicon), sim_(sim), window_(window) {
  if (lexicon.begin_marker() == kNoWord || lexicon.end_marker() == kNoWord) {
    throw InvalidArgument("decoding needs boundary markers in the dictionary");
  }
  if (fragment.empty()) throw InvalidArgument("cannot decode an empty fragment");
  auto offsets = utf8::CharOffsets(fragment);
  if (!offsets) throw InvalidArgument("fragment is not valid UTF-8");
  offsets_ = std::move(*offsets);
  length_ = offsets_.size() - 1;
  end_marker_ = lexicon.end_marker();
  lookup_len_ = std::min(length_, lexicon.max_word_chars());
  span_words_.assign(length_ * std::max<std::size_t>(lookup_len_, 1), kNoWord);
  for (std::size_t b = 0; b < length_; ++b) {
    for (std::size_t len = 1; len <= lookup_len_ && b + len <= length_; ++len) {
      span_words_[b * lookup_len_ + len - 1] = lexicon.FindOrNone(
          std::string_view(fragment_).substr(
              offsets_[b], offsets_[b + len] - offsets_[b]));
    }
  }
  Reset();
}

void FragmentSearch::Reset() {
  arena_.clear();
  arena_.push_back({lexicon_.begin_marker(), -1, 1});
}

WordId FragmentSearch::SpanWord(std::size_t begin, std::size_t len) const {
  if (len == 0 || len > lookup_len_ || begin + len > length_) return kNoWord;
  return span_words_[begin * lookup_len_ + len - 1];
}

WordId FragmentSearch::BufferWord(const Hypothesis& h) const {
  return SpanWord(h.buf_begin, h.buf_len);
}

std::string FragmentSearch::BufferText(const Hypothesis& h) const {
  return fragment_.substr(offsets_[h.buf_begin],
                          offsets_[h.buf_begin + h.buf_len] -
                              offsets_[h.buf_begin]);
}

void FragmentSearch::Recent(std::int32_t node, std::vector<WordId>* out) const {
  out->clear();
  while (node >= 0 && out->size() < window_) {
    out->push_back(arena_[node].word);
    node = arena_[node].parent;
  }
}

std::int32_t FragmentSearch::Push(WordId word, std::int32_t parent,
                                  std::uint32_t length) {
  arena_.push_back({word, parent, length});
  return static_cast<std::int32_t>(arena_.size() - 1);
}

double FragmentSearch::Term(WordId word, std::int32_t parent) {
  Recent(parent, &scratch_);
  return WordLogProb(word, scratch_, window_, sim_);
}

void FragmentSearch::Extend(const Hypothesis& h, std::size_t max_word_len,
                            std::vector<Hypothesis>* out) {
  const auto t = static_cast<std::uint32_t>(h.consumed());
  if (h.buf_len + 1 <= max_word_len) {
    out->push_back({h.last, h.buf_begin, h.buf_len + 1, h.words, h.logp});
  }
  if (h.buf_len == 0) return;
  const WordId word = BufferWord(h);
  if (word == kNoWord) return;
  const double term = Term(word, h.last);
  const std::int32_t node = Push(word, h.last, h.buf_len);
  out->push_back({node, t, 1, h.words + 1,
                  UpdateMeanLogProb(h.logp, h.words, {&term, 1})});
}

std::optional<Hypothesis> FragmentSearch::Finish(const Hypothesis& h) {
  const WordId word = BufferWord(h);
  if (word == kNoWord) return std::nullopt;
  double terms[2];
  terms[0] = Term(word, h.last);
  const std::int32_t node = Push(word, h.last, h.buf_len);
  terms[1] = Term(end_marker_, node);
  const std::int32_t eos = Push(end_marker_, node, 1);
  return Hypothesis{eos, static_cast<std::uint32_t>(length_), 0, h.words + 2,
                    UpdateMeanLogProb(h.logp, h.words, terms)};
}

std::vector<WordId> FragmentSearch::Words(const Hypothesis& h) const {
  std::vector<WordId> words;
  for (std::int32_t n = h.last; n > 0; n = arena_[n].parent) {
    words.push_back(arena_[n].word);
  }
  std::reverse(words.begin(), words.end());
  return words;
}

double FragmentSearch::Recompute(const Hypothesis& h) const {
  std::vector<WordId> words{lexicon_.begin_marker()};
  const std::vector<WordId> rest = Words(h);
  words.insert(words.end(), rest.begin(), rest.end());
  if (words.size() < 2) return 0.0;
  double sum = 0.0;
  std::vector<WordId> recent;
  for (std::size_t i = 1; i < words.size(); ++i) {
    recent.clear();
    for (std::size_t j = 1; j <= std::min(window_, i); ++j) {
      recent.push_back(words[i - j]);
    }
    sum += WordLogProb(words[i], recent, window_, sim_);
  }
  return sum / static_cast<double>(words.size() - 1);
}

std::vector<std::uint32_t> FragmentSearch::Lengths(const Hypothesis& h) const {
  std::vector<std::uint32_t> lengths;
  for (std::int32_t n = h.last; n > 0; n = arena_[n].parent) {
    lengths.push_back(arena_[n].length);
  }
  std::reverse(lengths.begin(), lengths.end());
  if (h.buf_len > 0) lengths.push_back(h.buf_len);
  return lengths;
}

int FragmentSearch::CompareShape(const Hypothesis& a,
                                 const Hypothesis& b) const {
  if (a.words != b.words) return a.words < b.words ? -1 : 1;
  const std::vector<std::uint32_t> la = Lengths(a);
  const std::vector<std::uint32_t> lb = Lengths(b);
  const std::size_t n = std::min(la.size(), lb.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (la[i] != lb[i]) return la[i] > lb[i] ? -1 : 1;
  }
  if (la.size() != lb.size()) return la.size() < lb.size() ? -1 : 1;
  return 0;
}

bool FragmentSearch::Ranks(const Hypothesis& a, const Hypothesis& b) const {
  if (a.logp != b.logp) return a.logp > b.logp;
  return CompareShape(a, b) < 0;
}

bool FragmentSearch::Better(const Hypothesis& a, const Hypothesis& b) const {
  constexpr double kTie = 1e-9;
  if (std::abs(a.logp - b.logp) > kTie) return a.logp > b.logp;
  return CompareShape(a, b) < 0;
}

bool FragmentSearch::HasAnySegmentation() const {
  std::vector<bool> reach(length_ + 1, false);
  reach[0] = true;
  for (std::size_t i = 0; i < length_; ++i) {
    if (!reach[i]) continue;
    for (std::size_t len = 1; len <= lookup_len_ && i + len <= length_; ++len) {
      if (SpanWord(i, len) != kNoWord) reach[i + len] = true;
    }
  }
  return reach[length_];
}

namespace {

void Verify(const FragmentSearch& search, const Hypothesis& h,
            SearchStats* stats) {
  const double err = std::abs(search.Recompute(h) - h.logp);
  stats->max_incremental_error = std::max(stats->max_incremental_error, err);
  ++stats->verified;
}

std::optional<SearchResult> RunBeam(FragmentSearch& search,
                                    std::size_t beam_size,
                                    std::size_t max_word_len,
                                    const DecoderOptions& options,
                                    SearchStats* stats) {
  search.Reset();
  std::vector<Hypothesis> beam{search.Initial()};
  std::vector<Hypothesis> next;
  const auto ranks = [&search](const Hypothesis& a, const Hypothesis& b) {
    return search.Ranks(a, b);
  };
  for (std::size_t t = 0; t < search.length(); ++t) {
    next.clear();
    for (const Hypothesis& h : beam) search.Extend(h, max_word_len, &next);
    if (stats != nullptr) {
      stats->hypotheses += next.size();
      if (options.verify_incremental) {
        for (const Hypothesis& h : next) Verify(search, h, stats);
      }
    }
    if (next.empty()) return std::nullopt;
    if (next.size() > beam_size) {
      std::partial_sort(next.begin(), next.begin() + beam_size, next.end(),
                        ranks);
      next.resize(beam_size);
    }
    beam.swap(next);
  }

  std::optional<Hypothesis> best;
  for (const Hypothesis& h : beam) {
    const std::optional<Hypothesis> done = search.Finish(h);
    if (!done) continue;
    if (stats != nullptr) {
      ++stats->hypotheses;
      if (options.verify_incremental) Verify(search, *done, stats);
    }
    if (!best || search.Better(*done, *best)) best = done;
  }
  if (!best) return std::nullopt;
  SearchResult result{search.Words(*best), best->logp};
  result.words.pop_back();  // ⟨EOS⟩
  return result;
}

}  // namespace

std::optional<SearchResult> BeamSearch(std::string_view fragment,
                                       const Lexicon& lexicon,
                                       const Similarity& sim,
                                       std::size_t beam_size,
                                       std::size_t max_word_len,
                                       const DecoderOptions& options,
                                       SearchStats* stats) {
  if (beam_size == 0 || max_word_len == 0) {
    throw InvalidArgument("beam size and maximum word length must be positive");
  }
  FragmentSearch search(fragment, lexicon, sim, options.window);
  return RunBeam(search, beam_size, max_word_len, options, stats);
}

Segmenter::Segmenter(const Lexicon& lexicon, const Similarity& sim,
                     BeamParams params, DecoderOptions options)
    : lexicon_(lexicon), sim_(sim), params_(params), options_(options) {
  params_.Validate();
  if (options_.window == 0) throw InvalidArgument("window must be positive");
}

FragmentResult Segmenter::SegmentFragment(
    std::string_view fragment, const SegmentedSentence* baseline) const {
  fragments_.fetch_add(1, std::memory_order_relaxed);
  FragmentResult result;
  FragmentSearch search(fragment, lexicon_, sim_, options_.window);

  // No parameters can succeed without a dictionary tiling.
  if (search.HasAnySegmentation()) {
    std::size_t beam = params_.beam_size;
    std::size_t max_len = params_.max_word_len;
    std::size_t extra = 0;
    for (;;) {
      if (auto found = RunBeam(search, beam, max_len, options_, nullptr)) {
        for (const WordId w : found->words) {
          result.tokens.push_back(lexicon_.Word(w));
        }
        result.score = found->score;
        growth_rounds_.fetch_add(result.growth_rounds,
                                 std::memory_order_relaxed);
        return result;
      }
      if (params_.retry_cap) {
        if (result.growth_rounds >= *params_.retry_cap) break;
      } else if (max_len >= search.length()) {
        if (extra == 3) break;
        ++extra;
      }
      beam += params_.beam_step;
      max_len += params_.word_len_step;
      ++result.growth_rounds;
    }
  }

  fallbacks_.fetch_add(1, std::memory_order_relaxed);
  growth_rounds_.fetch_add(result.growth_rounds, std::memory_order_relaxed);
  result.fallback = true;
  if (baseline != nullptr) {
    result.tokens = *baseline;
  } else {
    for (const utf8::Char& c : utf8::Decode(fragment)) {
      result.tokens.emplace_back(fragment.substr(c.offset, c.length));
    }
  }
  return result;
}

std::string Segmenter::SegmentLine(
    std::string_view line, const SegmentedSentence* baseline_line) const {
  const FragmentedLine pieces = SplitFragments(line);
  std::vector<SegmentedSentence> baseline;
  if (baseline_line != nullptr) baseline = AlignBaseline(*baseline_line, pieces);
  std::vector<SegmentedSentence> segmented;
  std::size_t index = 0;
  for (const Piece& p : pieces) {
    if (p.kind != PieceKind::kFragment) continue;
    segmented.push_back(
        SegmentFragment(p.text, baseline_line ? &baseline[index] : nullptr)
            .tokens);
    ++index;
  }
  return Reassemble(segmented, pieces);
}

}  // namespace embseg
