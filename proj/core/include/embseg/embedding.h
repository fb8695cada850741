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

#ifndef EMBSEG_EMBEDDING_H_
#define EMBSEG_EMBEDDING_H_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "embseg/lexicon.h"
#include "embseg/random.h"

namespace embseg {

// Row-major rows x dim matrix, one row per dictionary id.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(std::size_t rows, std::size_t dim)
      : rows_(rows), dim_(dim), data_(rows * dim, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t dim() const { return dim_; }

  std::span<double> Row(WordId id) {
    return {data_.data() + static_cast<std::size_t>(id) * dim_, dim_};
  }
  std::span<const double> Row(WordId id) const {
    return {data_.data() + static_cast<std::size_t>(id) * dim_, dim_};
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  bool operator==(const EmbeddingTable&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

// Entries i.i.d. uniform in [-0.5/dim, 0.5/dim].
EmbeddingTable InitEmbeddings(std::size_t rows, std::size_t dim, Rng& rng);

// Fills one row the same way InitEmbeddings does.
void RandomizeRow(std::span<double> row, Rng& rng);

// u.v / (|u| |v|). Throws DomainError if either vector is zero.
double Cosine(std::span<const double> u, std::span<const double> v);

// Text format: "V d" header, then `word v_1 ... v_d` per row in id order.
// Values use the shortest representation that round-trips.
void SaveEmbeddings(std::ostream& out, const EmbeddingTable& table,
                    const Lexicon& lexicon);
void SaveEmbeddings(const std::string& path, const EmbeddingTable& table,
                    const Lexicon& lexicon);

struct LoadedEmbeddings {
  std::vector<std::string> words;
  EmbeddingTable table;
};

// Throws FormatError on malformed input or non-finite values.
LoadedEmbeddings LoadEmbeddings(std::istream& in);
LoadedEmbeddings LoadEmbeddings(const std::string& path);

// Loads embeddings and checks that their words match `lexicon` row by row.
EmbeddingTable LoadEmbeddingsFor(const std::string& path,
                                 const Lexicon& lexicon);

}  // namespace embseg

#endif  // EMBSEG_EMBEDDING_H_
