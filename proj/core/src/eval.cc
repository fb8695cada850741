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

#include "embseg/eval.h"

#include <algorithm>
#include <map>
#include <ostream>
#include <set>

#include "embseg/errors.h"
#include "embseg/utf8.h"

namespace embseg {

std::vector<Span> WordSpans(const SegmentedSentence& tokens) {
  std::vector<Span> spans;
  spans.reserve(tokens.size());
  std::size_t pos = 0;
  for (const std::string& t : tokens) {
    const std::size_t n = utf8::Length(t);
    spans.emplace_back(pos, pos + n);
    pos += n;
  }
  return spans;
}

namespace {

std::string Joined(const SegmentedSentence& tokens) {
  std::string s;
  for (const std::string& t : tokens) s += t;
  return s;
}

void CheckAligned(std::span<const SegmentedSentence> gold,
                  std::span<const SegmentedSentence> pred, const char* what) {
  if (gold.size() != pred.size()) {
    throw AlignmentError(std::string(what) + " has " +
                             std::to_string(pred.size()) +
                             " sentences, gold has " +
                             std::to_string(gold.size()),
                         std::min(gold.size(), pred.size()) + 1);
  }
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (Joined(gold[i]) != Joined(pred[i])) {
      throw AlignmentError(std::string(what) + " line " +
                               std::to_string(i + 1) +
                               " differs from gold in its characters",
                           i + 1);
    }
  }
}

}  // namespace

EvalReport Score(std::span<const SegmentedSentence> gold,
                 std::span<const SegmentedSentence> pred) {
  CheckAligned(gold, pred, "prediction");
  EvalReport r;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const std::vector<Span> g = WordSpans(gold[i]);
    const std::vector<Span> p = WordSpans(pred[i]);
    r.n_gold += g.size();
    r.n_pred += p.size();
    // Both lists are sorted and duplicate-free.
    std::vector<Span> common;
    std::set_intersection(g.begin(), g.end(), p.begin(), p.end(),
                          std::back_inserter(common));
    r.n_correct += common.size();
  }
  if (r.n_pred > 0) r.precision = static_cast<double>(r.n_correct) / r.n_pred;
  if (r.n_gold > 0) r.recall = static_cast<double>(r.n_correct) / r.n_gold;
  if (r.precision + r.recall > 0.0) {
    r.f_measure = 2.0 * r.precision * r.recall / (r.precision + r.recall);
  }
  return r;
}

std::vector<WordImprovementRow> WordImprovementReport(
    std::span<const SegmentedSentence> gold,
    std::span<const SegmentedSentence> baseline,
    std::span<const SegmentedSentence> web, std::size_t min_count) {
  CheckAligned(gold, baseline, "baseline");
  CheckAligned(gold, web, "web");
  struct Tally {
    std::size_t gold = 0;
    std::size_t baseline = 0;
    std::size_t web = 0;
  };
  std::map<std::string, Tally> tallies;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const std::vector<Span> g = WordSpans(gold[i]);
    const std::vector<Span> b = WordSpans(baseline[i]);
    const std::vector<Span> w = WordSpans(web[i]);
    for (std::size_t k = 0; k < g.size(); ++k) {
      Tally& t = tallies[gold[i][k]];
      ++t.gold;
      if (std::binary_search(b.begin(), b.end(), g[k])) ++t.baseline;
      if (std::binary_search(w.begin(), w.end(), g[k])) ++t.web;
    }
  }
  std::vector<WordImprovementRow> rows;
  for (const auto& [word, t] : tallies) {
    if (t.gold < min_count) continue;
    WordImprovementRow row;
    row.word = word;
    row.gold_count = t.gold;
    row.precision_baseline = static_cast<double>(t.baseline) / t.gold;
    row.precision_web = static_cast<double>(t.web) / t.gold;
    row.delta = row.precision_web - row.precision_baseline;
    rows.push_back(std::move(row));
  }
  // `tallies` iterates in word order, so a stable sort breaks ties by word.
  std::stable_sort(rows.begin(), rows.end(),
                   [](const WordImprovementRow& a, const WordImprovementRow& b) {
                     return a.delta > b.delta;
                   });
  return rows;
}

void WriteImprovementTsv(std::ostream& out,
                         std::span<const WordImprovementRow> rows) {
  out << "# precision_* = fraction of the word's gold occurrences segmented "
         "exactly by that system\n";
  out << "word\tgold_count\tprecision_baseline\tprecision_web\tdelta\n";
  for (const WordImprovementRow& r : rows) {
    out << r.word << '\t' << r.gold_count << '\t' << r.precision_baseline
        << '\t' << r.precision_web << '\t' << r.delta << '\n';
  }
}

}  // namespace embseg
