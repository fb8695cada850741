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

#ifndef EMBSEG_CORPUS_H_
#define EMBSEG_CORPUS_H_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace embseg {

// Ordered word strings. Used both for one decodable fragment (no delimiter
// characters inside any token) and for a whole line as read from a
// segmented corpus file.
using SegmentedSentence = std::vector<std::string>;

enum class PieceKind { kFragment, kDelimiter };

struct Piece {
  PieceKind kind;
  std::string text;

  bool operator==(const Piece&) const = default;
};

// A raw line cut into maximal runs of fragment and delimiter characters.
// Concatenating the piece texts reproduces the line byte for byte.
using FragmentedLine = std::vector<Piece>;

// Reserved sentence boundary tokens. They cannot occur in corpus text
// because U+27E8/U+27E9 are delimiter characters.
inline constexpr std::string_view kBeginMarker = "⟨BOS⟩";
inline constexpr std::string_view kEndMarker = "⟨EOS⟩";

// True for CJK Unified Ideographs (incl. Extension A), ASCII letters, ASCII
// digits and fullwidth digits. Everything else is a delimiter.
bool IsFragmentChar(char32_t cp);

// Whitespace that separates tokens in corpus files.
bool IsSpaceChar(char32_t cp);

// Invalid UTF-8 bytes are kept verbatim and classified as delimiters.
FragmentedLine SplitFragments(std::string_view line);

// Texts of the kFragment pieces, in order.
std::vector<std::string> FragmentTexts(const FragmentedLine& line);

// Joins segmented fragments and the delimiter pieces of `original` with
// single spaces. Whitespace inside delimiter pieces only acts as a separator
// and is not copied. Throws StructuralError when the number of fragments
// does not match.
std::string Reassemble(std::span<const SegmentedSentence> fragments,
                       const FragmentedLine& original);

// Splits the tokens of one corpus line into fragments: delimiter characters
// are dropped and end the current fragment.
std::vector<SegmentedSentence> SplitIntoFragments(
    const SegmentedSentence& line_tokens);

// Distributes the word boundaries of a baseline segmentation over the
// fragments of the corresponding raw line. The result has one entry per
// kFragment piece of `raw`. Throws StructuralError when the fragment
// characters of the two sides differ.
std::vector<SegmentedSentence> AlignBaseline(
    const SegmentedSentence& baseline_tokens, const FragmentedLine& raw);

// ⟨BOS⟩ + tokens + ⟨EOS⟩. Tokens that spell a marker (optionally preceded by
// backslashes) get one more leading backslash, so UnescapeToken inverts the
// mapping.
SegmentedSentence AddBoundaryMarkers(const SegmentedSentence& tokens);
std::string EscapeToken(std::string_view token);
std::string UnescapeToken(std::string_view token);

// Streams one whitespace-tokenized line at a time, skipping blank lines.
class SegmentedCorpusReader {
 public:
  explicit SegmentedCorpusReader(std::istream& in) : in_(in) {}

  // Throws DecodeError (with the 1-based line number) on invalid UTF-8.
  bool Next(SegmentedSentence* sentence);

  std::size_t line_number() const { return line_number_; }

 private:
  std::istream& in_;
  std::size_t line_number_ = 0;
  std::string line_;
};

std::vector<SegmentedSentence> ReadSegmentedCorpus(std::istream& in);

// Throws IoError if the file cannot be opened.
std::vector<SegmentedSentence> ReadSegmentedCorpus(const std::string& path);

// Splits on runs of whitespace.
SegmentedSentence Tokenize(std::string_view line);

// Reads raw lines (without the trailing newline / carriage return).
std::vector<std::string> ReadLines(const std::string& path);

}  // namespace embseg

#endif  // EMBSEG_CORPUS_H_
