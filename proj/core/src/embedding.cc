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

#include "embseg/embedding.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "embseg/errors.h"

namespace embseg {

void RandomizeRow(std::span<double> row, Rng& rng) {
  const double scale = 1.0 / static_cast<double>(row.size());
  for (double& x : row) x = (UniformUnit(rng) - 0.5) * scale;
}

EmbeddingTable InitEmbeddings(std::size_t rows, std::size_t dim, Rng& rng) {
  if (rows == 0 || dim == 0) {
    throw InvalidArgument("embedding table needs at least one row and column");
  }
  EmbeddingTable table(rows, dim);
  for (std::size_t r = 0; r < rows; ++r) {
    auto row = table.Row(static_cast<WordId>(r));
    // A zero row has probability 2^-53d; redraw rather than assume.
    do {
      RandomizeRow(row, rng);
    } while (std::all_of(row.begin(), row.end(),
                         [](double x) { return x == 0.0; }));
  }
  return table;
}

double Cosine(std::span<const double> u, std::span<const double> v) {
  double dot = 0.0;
  double uu = 0.0;
  double vv = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    dot += u[k] * v[k];
    uu += u[k] * u[k];
    vv += v[k] * v[k];
  }
  if (uu == 0.0 || vv == 0.0) throw DomainError("cosine of a zero vector");
  return dot / std::sqrt(uu * vv);
}

void SaveEmbeddings(std::ostream& out, const EmbeddingTable& table,
                    const Lexicon& lexicon) {
  if (table.rows() != lexicon.size()) {
    throw InvalidArgument("embedding rows do not match the dictionary");
  }
  out << table.rows() << ' ' << table.dim() << '\n';
  char buf[64];
  std::string line;
  for (std::size_t r = 0; r < table.rows(); ++r) {
    line = lexicon.Word(static_cast<WordId>(r));
    for (const double x : table.Row(static_cast<WordId>(r))) {
      const auto res = std::to_chars(buf, buf + sizeof(buf), x);
      line.push_back(' ');
      line.append(buf, res.ptr);
    }
    line.push_back('\n');
    out << line;
  }
}

void SaveEmbeddings(const std::string& path, const EmbeddingTable& table,
                    const Lexicon& lexicon) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  SaveEmbeddings(out, table, lexicon);
  if (!out) throw IoError("write failed: " + path);
}

LoadedEmbeddings LoadEmbeddings(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("embedding file is empty");
  std::istringstream header(line);
  std::size_t rows = 0;
  std::size_t dim = 0;
  if (!(header >> rows >> dim) || rows == 0 || dim == 0) {
    throw FormatError("embedding header must be \"V d\"");
  }
  LoadedEmbeddings result;
  result.words.reserve(rows);
  result.table = EmbeddingTable(rows, dim);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!std::getline(in, line)) {
      throw FormatError("embedding file has " + std::to_string(r) +
                        " rows, header says " + std::to_string(rows));
    }
    const std::string where = "embedding row " + std::to_string(r);
    const char* p = line.data();
    const char* end = line.data() + line.size();
    const char* word_end = std::find(p, end, ' ');
    if (word_end == p) throw FormatError(where + ": missing word");
    result.words.emplace_back(p, word_end);
    p = word_end;
    auto row = result.table.Row(static_cast<WordId>(r));
    for (std::size_t k = 0; k < dim; ++k) {
      if (p == end || *p != ' ') throw FormatError(where + ": too few values");
      ++p;
      double x;
      const auto res = std::from_chars(p, end, x);
      if (res.ec != std::errc() || !std::isfinite(x)) {
        throw FormatError(where + ": bad value");
      }
      row[k] = x;
      p = res.ptr;
    }
    if (p != end && !(p + 1 == end && *p == '\r')) {
      throw FormatError(where + ": too many values");
    }
  }
  return result;
}

LoadedEmbeddings LoadEmbeddings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return LoadEmbeddings(in);
}

EmbeddingTable LoadEmbeddingsFor(const std::string& path,
                                 const Lexicon& lexicon) {
  LoadedEmbeddings loaded = LoadEmbeddings(path);
  if (loaded.words.size() != lexicon.size()) {
    throw FormatError("embeddings have " + std::to_string(loaded.words.size()) +
                      " rows but the dictionary has " +
                      std::to_string(lexicon.size()) + " words");
  }
  for (std::size_t r = 0; r < loaded.words.size(); ++r) {
    if (loaded.words[r] != lexicon.Word(static_cast<WordId>(r))) {
      throw FormatError("embedding row " + std::to_string(r) + " is \"" +
                        loaded.words[r] + "\", dictionary has \"" +
                        lexicon.Word(static_cast<WordId>(r)) + "\"");
    }
  }
  return std::move(loaded.table);
}

}  // namespace embseg
