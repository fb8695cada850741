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

#include "embseg/lexicon.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "embseg/errors.h"
#include "embseg/utf8.h"

namespace embseg {

WordId Lexicon::Add(std::string_view word, std::uint64_t count) {
  if (count == 0) throw InvalidArgument("lexicon counts must be positive");
  auto it = index_.find(word);
  WordId id;
  if (it == index_.end()) {
    id = static_cast<WordId>(words_.size());
    words_.emplace_back(word);
    counts_.push_back(0);
    index_.emplace(words_.back(), id);
    if (word == kBeginMarker) {
      begin_marker_ = id;
      char_lengths_.push_back(1);
    } else if (word == kEndMarker) {
      end_marker_ = id;
      char_lengths_.push_back(1);
    } else {
      const std::size_t n = utf8::Length(word);
      char_lengths_.push_back(static_cast<std::uint32_t>(n));
      max_word_chars_ = std::max(max_word_chars_, n);
    }
  } else {
    id = it->second;
  }
  counts_[id] += count;
  total_tokens_ += count;
  return id;
}

WordId Lexicon::Id(std::string_view word) const {
  const auto it = index_.find(word);
  if (it == index_.end()) {
    throw LookupError("word not in dictionary: " + std::string(word));
  }
  return it->second;
}

const std::string& Lexicon::Word(WordId id) const {
  if (!Contains(id)) throw LookupError("word id out of range: " +
                                       std::to_string(id));
  return words_[id];
}

std::uint64_t Lexicon::Count(WordId id) const {
  if (!Contains(id)) throw LookupError("word id out of range: " +
                                       std::to_string(id));
  return counts_[id];
}

double Lexicon::Frequency(WordId id) const {
  return static_cast<double>(Count(id)) / static_cast<double>(total_tokens_);
}

std::size_t Lexicon::CharLength(WordId id) const {
  if (!Contains(id)) throw LookupError("word id out of range: " +
                                       std::to_string(id));
  return char_lengths_[id];
}

void Lexicon::Save(std::ostream& out) const {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    out << words_[i] << '\t' << counts_[i] << '\n';
  }
}

void Lexicon::Save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  Save(out);
  if (!out) throw IoError("write failed: " + path);
}

Lexicon Lexicon::Load(std::istream& in) {
  Lexicon lexicon;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string where = "dictionary line " + std::to_string(line_no);
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw FormatError(where + ": expected word<TAB>count");
    }
    const std::string_view word(line.data(), tab);
    const std::string_view digits(line.data() + tab + 1,
                                  line.size() - tab - 1);
    std::uint64_t count = 0;
    const auto [ptr, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), count);
    if (ec != std::errc() || ptr != digits.data() + digits.size() ||
        count == 0) {
      throw FormatError(where + ": bad count");
    }
    if (utf8::FindInvalid(word)) throw FormatError(where + ": invalid UTF-8");
    if (lexicon.Find(word)) throw FormatError(where + ": duplicate word");
    lexicon.Add(word, count);
  }
  if (lexicon.size() == 0) throw FormatError("empty dictionary");
  return lexicon;
}

Lexicon Lexicon::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return Load(in);
}

Lexicon BuildLexicon(std::span<const SegmentedSentence> sentences,
                     bool add_markers) {
  if (sentences.empty()) throw InvalidArgument("cannot build a lexicon "
                                               "from an empty corpus");
  Lexicon lexicon;
  for (const SegmentedSentence& s : sentences) {
    if (add_markers) {
      for (const std::string& t : AddBoundaryMarkers(s)) lexicon.Add(t);
    } else {
      for (const std::string& t : s) lexicon.Add(t);
    }
  }
  if (lexicon.size() == 0) throw InvalidArgument("corpus has no tokens");
  return lexicon;
}

std::vector<WordId> ToIds(const Lexicon& lexicon,
                          const SegmentedSentence& sentence) {
  std::vector<WordId> ids;
  ids.reserve(sentence.size() + 2);
  const bool markers = lexicon.begin_marker() != kNoWord &&
                       lexicon.end_marker() != kNoWord;
  if (markers) ids.push_back(lexicon.begin_marker());
  for (const std::string& t : sentence) ids.push_back(lexicon.Id(EscapeToken(t)));
  if (markers) ids.push_back(lexicon.end_marker());
  return ids;
}

double SubsampleProb(double frequency, double epsilon) {
  return std::min(1.0, std::sqrt(epsilon / frequency));
}

double SubsampleProb(const Lexicon& lexicon, std::string_view word,
                     double epsilon) {
  return SubsampleProb(lexicon.Frequency(lexicon.Id(word)), epsilon);
}

bool MultiCharKeepRule(double p_word, std::span<const double> p_substrings,
                       double mu) {
  if (p_substrings.empty()) return false;
  double sum = 0.0;
  for (const double p : p_substrings) sum += p;
  return p_word < mu / static_cast<double>(p_substrings.size()) * sum;
}

std::vector<WordId> InDictionarySubstrings(const Lexicon& lexicon,
                                           std::string_view word) {
  std::vector<WordId> out;
  if (word == kBeginMarker || word == kEndMarker) return out;
  const auto offsets = utf8::CharOffsets(word);
  if (!offsets) return out;
  const std::size_t n = offsets->size() - 1;
  if (n < 2) return out;
  // Proper substrings only, and nothing longer than the longest entry.
  const std::size_t max_len = std::min(n - 1, lexicon.max_word_chars());
  std::unordered_set<WordId> seen;
  for (std::size_t begin = 0; begin < n; ++begin) {
    for (std::size_t len = 1; len <= max_len && begin + len <= n; ++len) {
      const std::size_t b = (*offsets)[begin];
      const std::size_t e = (*offsets)[begin + len];
      const WordId id = lexicon.FindOrNone(word.substr(b, e - b));
      if (id != kNoWord && seen.insert(id).second) out.push_back(id);
    }
  }
  return out;
}

bool MultiCharKeep(const Lexicon& lexicon, std::string_view word,
                   double epsilon, double mu) {
  const WordId id = lexicon.Id(word);
  if (lexicon.IsMarker(id) || lexicon.CharLength(id) < 2) return false;
  std::vector<double> p_subs;
  for (const WordId s : InDictionarySubstrings(lexicon, word)) {
    p_subs.push_back(SubsampleProb(lexicon.Frequency(s), epsilon));
  }
  return MultiCharKeepRule(SubsampleProb(lexicon.Frequency(id), epsilon),
                           p_subs, mu);
}

SubsampleTable::SubsampleTable(const Lexicon& lexicon,
                               const SubsampleOptions& options) {
  if (!(options.epsilon > 0.0) || !(options.mu > 0.0)) {
    throw InvalidArgument("subsampling thresholds must be positive");
  }
  const std::size_t v = lexicon.size();
  p_sub_.resize(v);
  keep_.assign(v, 0);
  for (std::size_t i = 0; i < v; ++i) {
    p_sub_[i] = SubsampleProb(lexicon.Frequency(static_cast<WordId>(i)),
                              options.epsilon);
  }
  if (!options.multichar_keep) return;
  for (std::size_t i = 0; i < v; ++i) {
    const auto id = static_cast<WordId>(i);
    if (lexicon.IsMarker(id) || lexicon.CharLength(id) < 2) continue;
    std::vector<double> p_subs;
    for (const WordId s : InDictionarySubstrings(lexicon, lexicon.Word(id))) {
      p_subs.push_back(p_sub_[s]);
    }
    keep_[i] = MultiCharKeepRule(p_sub_[i], p_subs, options.mu) ? 1 : 0;
  }
}

}  // namespace embseg
