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

#include "embseg/corpus.h"

#include <fstream>
#include <istream>
#include <string>

#include "embseg/errors.h"
#include "embseg/utf8.h"

namespace embseg {

bool IsFragmentChar(char32_t cp) {
  if (cp >= 0x4E00 && cp <= 0x9FFF) return true;  // CJK Unified Ideographs
  if (cp >= 0x3400 && cp <= 0x4DBF) return true;  // Extension A
  if ((cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z')) return true;
  if (cp >= '0' && cp <= '9') return true;
  if (cp >= 0xFF10 && cp <= 0xFF19) return true;  // fullwidth digits
  return false;
}

bool IsSpaceChar(char32_t cp) {
  return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\v' ||
         cp == '\f' || cp == 0x3000;
}

FragmentedLine SplitFragments(std::string_view line) {
  FragmentedLine pieces;
  for (const utf8::Char& c : utf8::Decode(line)) {
    const PieceKind kind = c.valid && IsFragmentChar(c.code_point)
                               ? PieceKind::kFragment
                               : PieceKind::kDelimiter;
    if (pieces.empty() || pieces.back().kind != kind) {
      pieces.push_back({kind, std::string()});
    }
    pieces.back().text.append(line.substr(c.offset, c.length));
  }
  return pieces;
}

std::vector<std::string> FragmentTexts(const FragmentedLine& line) {
  std::vector<std::string> out;
  for (const Piece& p : line) {
    if (p.kind == PieceKind::kFragment) out.push_back(p.text);
  }
  return out;
}

std::string Reassemble(std::span<const SegmentedSentence> fragments,
                       const FragmentedLine& original) {
  std::size_t expected = 0;
  for (const Piece& p : original) {
    if (p.kind == PieceKind::kFragment) ++expected;
  }
  if (expected != fragments.size()) {
    throw StructuralError("reassemble: " + std::to_string(fragments.size()) +
                          " segmented fragments for " +
                          std::to_string(expected) + " fragment pieces");
  }

  std::string out;
  auto emit = [&out](std::string_view token) {
    if (token.empty()) return;
    if (!out.empty()) out.push_back(' ');
    out.append(token);
  };

  std::size_t next = 0;
  for (const Piece& p : original) {
    if (p.kind == PieceKind::kFragment) {
      for (const std::string& token : fragments[next]) emit(token);
      ++next;
      continue;
    }
    std::string run;
    for (const utf8::Char& c : utf8::Decode(p.text)) {
      if (c.valid && IsSpaceChar(c.code_point)) {
        emit(run);
        run.clear();
      } else {
        run.append(p.text, c.offset, c.length);
      }
    }
    emit(run);
  }
  return out;
}

std::vector<SegmentedSentence> SplitIntoFragments(
    const SegmentedSentence& line_tokens) {
  std::vector<SegmentedSentence> out;
  SegmentedSentence current;
  std::string token;
  auto end_token = [&] {
    if (!token.empty()) current.push_back(std::move(token));
    token.clear();
  };
  auto end_fragment = [&] {
    end_token();
    if (!current.empty()) out.push_back(std::move(current));
    current.clear();
  };
  for (const std::string& t : line_tokens) {
    for (const utf8::Char& c : utf8::Decode(t)) {
      if (c.valid && IsFragmentChar(c.code_point)) {
        token.append(t, c.offset, c.length);
      } else {
        end_fragment();
      }
    }
    end_token();
  }
  end_fragment();
  return out;
}

std::vector<SegmentedSentence> AlignBaseline(
    const SegmentedSentence& baseline_tokens, const FragmentedLine& raw) {
  // Fragment characters of the baseline with a flag marking word starts.
  std::string stream;
  std::vector<std::size_t> char_offsets;
  std::vector<bool> starts_word;
  for (const std::string& t : baseline_tokens) {
    bool at_start = true;
    for (const utf8::Char& c : utf8::Decode(t)) {
      if (c.valid && IsFragmentChar(c.code_point)) {
        char_offsets.push_back(stream.size());
        starts_word.push_back(at_start);
        stream.append(t, c.offset, c.length);
        at_start = false;
      } else {
        at_start = true;
      }
    }
  }
  char_offsets.push_back(stream.size());

  std::vector<SegmentedSentence> out;
  std::size_t pos = 0;  // character index into `stream`
  for (const Piece& p : raw) {
    if (p.kind != PieceKind::kFragment) continue;
    const std::size_t n = utf8::Length(p.text);
    if (pos + n > starts_word.size() ||
        stream.compare(char_offsets[pos], char_offsets[pos + n] -
                                              char_offsets[pos],
                       p.text) != 0) {
      throw StructuralError("baseline tokens do not match fragment \"" +
                            p.text + "\"");
    }
    SegmentedSentence words;
    std::size_t word_begin = pos;
    for (std::size_t i = pos + 1; i <= pos + n; ++i) {
      if (i == pos + n || starts_word[i]) {
        words.push_back(stream.substr(char_offsets[word_begin],
                                      char_offsets[i] -
                                          char_offsets[word_begin]));
        word_begin = i;
      }
    }
    out.push_back(std::move(words));
    pos += n;
  }
  if (pos != starts_word.size()) {
    throw StructuralError("baseline has characters beyond the raw line");
  }
  return out;
}

namespace {

bool SpellsMarker(std::string_view token) {
  while (!token.empty() && token.front() == '\\') token.remove_prefix(1);
  return token == kBeginMarker || token == kEndMarker;
}

}  // namespace

std::string EscapeToken(std::string_view token) {
  if (SpellsMarker(token)) return "\\" + std::string(token);
  return std::string(token);
}

std::string UnescapeToken(std::string_view token) {
  if (!token.empty() && token.front() == '\\' && SpellsMarker(token)) {
    return std::string(token.substr(1));
  }
  return std::string(token);
}

SegmentedSentence AddBoundaryMarkers(const SegmentedSentence& tokens) {
  SegmentedSentence out;
  out.reserve(tokens.size() + 2);
  out.emplace_back(kBeginMarker);
  for (const std::string& t : tokens) out.push_back(EscapeToken(t));
  out.emplace_back(kEndMarker);
  return out;
}

SegmentedSentence Tokenize(std::string_view line) {
  SegmentedSentence tokens;
  std::string current;
  for (const utf8::Char& c : utf8::Decode(line)) {
    if (c.valid && IsSpaceChar(c.code_point)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      current.append(line.substr(c.offset, c.length));
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

bool SegmentedCorpusReader::Next(SegmentedSentence* sentence) {
  while (std::getline(in_, line_)) {
    ++line_number_;
    if (const auto bad = utf8::FindInvalid(line_)) {
      throw DecodeError("invalid UTF-8 at line " +
                            std::to_string(line_number_) + ", byte " +
                            std::to_string(*bad),
                        line_number_);
    }
    *sentence = Tokenize(line_);
    if (!sentence->empty()) return true;
  }
  return false;
}

std::vector<SegmentedSentence> ReadSegmentedCorpus(std::istream& in) {
  std::vector<SegmentedSentence> out;
  SegmentedCorpusReader reader(in);
  SegmentedSentence s;
  while (reader.Next(&s)) out.push_back(std::move(s));
  return out;
}

std::vector<SegmentedSentence> ReadSegmentedCorpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return ReadSegmentedCorpus(in);
}

std::vector<std::string> ReadLines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

}  // namespace embseg
