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

#ifndef EMBSEG_UTF8_H_
#define EMBSEG_UTF8_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace embseg::utf8 {

// One decoded character together with its byte range in the source text.
// Bytes that do not form valid UTF-8 are reported one at a time with
// `valid == false` and `code_point` set to the raw byte value.
struct Char {
  char32_t code_point;
  std::size_t offset;
  std::size_t length;
  bool valid;
};

// Decodes `text` leniently; the byte ranges of the result always tile the
// input exactly.
std::vector<Char> Decode(std::string_view text);

// Byte offsets of character starts plus a final `text.size()` sentinel, so
// character i spans [offsets[i], offsets[i + 1]). Returns nullopt on invalid
// UTF-8.
std::optional<std::vector<std::size_t>> CharOffsets(std::string_view text);

// Returns the byte offset of the first invalid sequence, or nullopt.
std::optional<std::size_t> FindInvalid(std::string_view text);

// Number of characters in valid UTF-8 text.
std::size_t Length(std::string_view text);

void Append(char32_t code_point, std::string* out);
std::string Encode(std::u32string_view text);
std::u32string ToU32(std::string_view text);

}  // namespace embseg::utf8

#endif  // EMBSEG_UTF8_H_
