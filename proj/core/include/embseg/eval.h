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

#ifndef EMBSEG_EVAL_H_
#define EMBSEG_EVAL_H_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "embseg/corpus.h"

namespace embseg {

// Half-open character interval of one word.
using Span = std::pair<std::size_t, std::size_t>;

// Spans tiling the sentence, one per token, in order.
std::vector<Span> WordSpans(const SegmentedSentence& tokens);

struct EvalReport {
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  std::size_t n_gold = 0;
  std::size_t n_pred = 0;
  std::size_t n_correct = 0;
};

// Word-level precision/recall/F over aligned corpora. Throws AlignmentError
// when sentence counts differ or a line's characters do not match.
EvalReport Score(std::span<const SegmentedSentence> gold,
                 std::span<const SegmentedSentence> pred);

struct WordImprovementRow {
  std::string word;
  std::size_t gold_count = 0;
  double precision_baseline = 0.0;
  double precision_web = 0.0;
  double delta = 0.0;
};

// For each gold word type occurring at least `min_count` times: the fraction
// of its gold occurrences whose exact span each system reproduces. Sorted by
// delta (descending), ties by word.
std::vector<WordImprovementRow> WordImprovementReport(
    std::span<const SegmentedSentence> gold,
    std::span<const SegmentedSentence> baseline,
    std::span<const SegmentedSentence> web, std::size_t min_count = 10);

// TSV with a commented header line describing the columns.
void WriteImprovementTsv(std::ostream& out,
                         std::span<const WordImprovementRow> rows);

}  // namespace embseg

#endif  // EMBSEG_EVAL_H_
