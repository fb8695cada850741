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

#include "cli.h"

#include <chrono>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "embseg/corpus.h"
#include "embseg/embedding.h"
#include "embseg/errors.h"
#include "embseg/eval.h"
#include "embseg/lexicon.h"
#include "json.hpp"

namespace embseg::cli {
namespace {

using Clock = std::chrono::steady_clock;

double MillisSince(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

// Maps library exceptions to exit codes.
template <typename Fn>
int Guard(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const AlignmentError& e) {
    err << "error: " << e.what() << '\n';
    return kMismatch;
  } catch (const StructuralError& e) {
    err << "error: " << e.what() << '\n';
    return kMismatch;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInvalid;
  }
}

std::vector<SegmentedSentence> ReadFragments(const std::string& path) {
  std::vector<SegmentedSentence> fragments;
  for (const SegmentedSentence& line : ReadSegmentedCorpus(path)) {
    for (SegmentedSentence& f : SplitIntoFragments(line)) {
      fragments.push_back(std::move(f));
    }
  }
  return fragments;
}

std::ofstream OpenOut(const std::string& path,
                      std::ios::openmode mode = std::ios::out) {
  std::ofstream f(path, mode);
  if (!f) throw IoError("cannot write " + path);
  return f;
}

}  // namespace

int RunTrain(const TrainOptions& options, std::ostream& out,
             std::ostream& err) {
  return Guard(err, [&] {
    const auto start = Clock::now();
    TrainerConfig config = options.trainer;
    config.seed = options.seed ? *options.seed : std::random_device{}();
    config.Validate();

    const std::vector<SegmentedSentence> fragments =
        ReadFragments(options.corpus);
    if (fragments.empty()) {
      throw InvalidArgument("corpus " + options.corpus +
                            " has no decodable fragments");
    }
    const Lexicon lexicon = BuildLexicon(fragments);

    std::ofstream dump;
    if (!options.dump_samples.empty()) dump = OpenOut(options.dump_samples);
    const TrainResult trained =
        Train(fragments, lexicon, config,
              options.dump_samples.empty() ? nullptr : &dump);
    if (trained.stats.rerandomized_rows > 0) {
      err << "warning: " << trained.stats.rerandomized_rows
          << " embedding rows collapsed to zero and were re-randomized\n";
    }

    std::vector<std::vector<WordId>> ids;
    ids.reserve(fragments.size());
    for (const SegmentedSentence& f : fragments) ids.push_back(ToIds(lexicon, f));
    const SimCache cache = BuildSimCache(ids, trained.embeddings, config.window,
                                         options.cache_scope);

    lexicon.Save(options.dict);
    SaveEmbeddings(options.emb, trained.embeddings, lexicon);
    cache.Save(options.cache);

    nlohmann::ordered_json summary = {
        {"command", "train"},
        {"vocab", lexicon.size()},
        {"dim", config.dim},
        {"sentences", fragments.size()},
        {"tokens", lexicon.total_tokens()},
        {"targets", trained.stats.targets_sampled},
        {"samples", trained.stats.samples()},
        {"positives", trained.stats.positives},
        {"negatives", trained.stats.negatives},
        {"cache_pairs", cache.size()},
        {"seed", config.seed},
        {"threads", config.threads},
        {"wall_ms", MillisSince(start)},
    };
    out << summary.dump() << '\n';
    return static_cast<int>(kOk);
  });
}

int RunSegment(const SegmentOptions& options, std::ostream& out,
               std::ostream& err) {
  return Guard(err, [&] {
    const auto start = Clock::now();
    if (options.threads == 0) throw InvalidArgument("threads must be >= 1");
    const Lexicon lexicon = Lexicon::Load(options.dict);
    const EmbeddingTable embeddings = LoadEmbeddingsFor(options.emb, lexicon);

    std::optional<SimCache> cache;
    if (options.use_cache && !options.cache.empty()) {
      cache = SimCache::Load(options.cache);
      if (cache->vocabulary_size() != lexicon.size()) {
        throw FormatError("similarity cache was built for " +
                          std::to_string(cache->vocabulary_size()) +
                          " words, dictionary has " +
                          std::to_string(lexicon.size()));
      }
    }
    const CachedSimilarity sim(cache ? &*cache : nullptr, embeddings);
    const Segmenter segmenter(lexicon, sim, options.beam, options.decoder);

    const std::vector<std::string> lines = ReadLines(options.input);
    std::vector<SegmentedSentence> baseline;
    if (!options.baseline.empty()) {
      const std::vector<std::string> raw = ReadLines(options.baseline);
      if (raw.size() != lines.size()) {
        throw AlignmentError("baseline has " + std::to_string(raw.size()) +
                                 " lines, input has " +
                                 std::to_string(lines.size()),
                             std::min(raw.size(), lines.size()) + 1);
      }
      baseline.reserve(raw.size());
      for (const std::string& l : raw) baseline.push_back(Tokenize(l));
    }

    std::vector<std::string> output(lines.size());
    std::vector<std::string> errors(options.threads);
    const auto work = [&](std::size_t shard) {
      try {
        for (std::size_t i = shard; i < lines.size(); i += options.threads) {
          output[i] = segmenter.SegmentLine(
              lines[i], baseline.empty() ? nullptr : &baseline[i]);
        }
      } catch (const StructuralError& e) {
        errors[shard] = e.what();
      }
    };
    if (options.threads == 1) {
      work(0);
    } else {
      std::vector<std::thread> workers;
      for (std::size_t t = 0; t < options.threads; ++t) {
        workers.emplace_back(work, t);
      }
      for (std::thread& w : workers) w.join();
    }
    for (const std::string& e : errors) {
      if (!e.empty()) throw StructuralError(e);
    }

    std::ofstream file;
    if (!options.out.empty()) file = OpenOut(options.out);
    std::ostream& dest = options.out.empty() ? out : file;
    std::size_t tokens = 0;
    for (const std::string& l : output) {
      dest << l << '\n';
      tokens += Tokenize(l).size();
    }
    if (!dest) throw IoError("write failed");

    const double ms = MillisSince(start);
    nlohmann::ordered_json summary = {
        {"command", "segment"},
        {"lines", lines.size()},
        {"tokens", tokens},
        {"fragments", segmenter.fragments()},
        {"fallbacks", segmenter.fallbacks()},
        {"growth_rounds", segmenter.growth_rounds()},
        {"cache_hits", sim.hits()},
        {"cache_misses", sim.misses()},
        {"cache_hit_rate", sim.hit_rate()},
        {"wall_ms", ms},
    };
    err << summary.dump() << '\n';
    return static_cast<int>(kOk);
  });
}

int RunEval(const EvalOptions& options, std::ostream& out, std::ostream& err) {
  return Guard(err, [&] {
    const auto gold = ReadSegmentedCorpus(options.gold);
    const auto pred = ReadSegmentedCorpus(options.pred);
    const EvalReport r = Score(gold, pred);
    out << "# P\tR\tF\tn_gold\tn_pred\tn_correct\n";
    out << std::fixed;
    out.precision(6);
    out << r.precision << '\t' << r.recall << '\t' << r.f_measure << '\t'
        << r.n_gold << '\t' << r.n_pred << '\t' << r.n_correct << '\n';
    out.unsetf(std::ios::floatfield);
    return static_cast<int>(kOk);
  });
}

int RunReport(const ReportOptions& options, std::ostream& out,
              std::ostream& err) {
  return Guard(err, [&] {
    const auto gold = ReadSegmentedCorpus(options.gold);
    const auto baseline = ReadSegmentedCorpus(options.baseline);
    const auto web = ReadSegmentedCorpus(options.web);
    const auto rows =
        WordImprovementReport(gold, baseline, web, options.min_count);
    std::ofstream file;
    if (!options.out.empty()) file = OpenOut(options.out);
    WriteImprovementTsv(options.out.empty() ? out : file, rows);
    return static_cast<int>(kOk);
  });
}

int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err) {
  CLI::App app{"Embedding-based re-segmentation of baseline-segmented "
               "Chinese text"};
  app.require_subcommand(1);

  TrainOptions train;
  std::uint64_t seed = 0;
  bool sentence_scope = false;
  auto* train_cmd = app.add_subcommand(
      "train", "Build dictionary, embeddings and similarity cache");
  train_cmd->add_option("--corpus", train.corpus,
                        "Baseline-segmented corpus (one sentence per line)")
      ->required();
  train_cmd->add_option("--dict", train.dict, "Output dictionary")->required();
  train_cmd->add_option("--emb", train.emb, "Output embeddings")->required();
  train_cmd->add_option("--cache", train.cache, "Output similarity cache")
      ->required();
  train_cmd->add_option("--dim", train.trainer.dim, "Embedding dimension")
      ->capture_default_str();
  train_cmd->add_option("--window", train.trainer.window, "Context window")
      ->capture_default_str();
  train_cmd->add_option("--epsilon", train.trainer.epsilon,
                        "Subsampling threshold")
      ->capture_default_str();
  train_cmd->add_option("--mu", train.trainer.mu,
                        "Multi-character keep threshold")
      ->capture_default_str();
  train_cmd->add_option("--eta", train.trainer.eta,
                        "Class weight smoothing factor")
      ->capture_default_str();
  train_cmd->add_option("--neg", train.trainer.noise_negatives,
                        "Noise negatives per target word")
      ->capture_default_str();
  train_cmd->add_option("--epochs", train.trainer.epochs, "Training epochs")
      ->capture_default_str();
  train_cmd->add_option("--lr", train.trainer.lr_start, "Initial learning rate")
      ->capture_default_str();
  auto* seed_opt = train_cmd->add_option("--seed", seed, "Random seed");
  train_cmd->add_option("--threads", train.trainer.threads, "Worker threads")
      ->capture_default_str();
  train_cmd->add_option("--dump-samples", train.dump_samples,
                        "Write every training sample as TSV");
  train_cmd->add_flag("--cache-sentence-pairs", sentence_scope,
                      "Cache all word pairs of a sentence, not just the "
                      "window");

  SegmentOptions segment;
  bool no_cache = false;
  auto* segment_cmd = app.add_subcommand("segment", "Re-segment raw text");
  segment_cmd->add_option("--input", segment.input, "Raw text")->required();
  segment_cmd->add_option("--baseline", segment.baseline,
                          "Baseline segmentation of the input");
  segment_cmd->add_option("--dict", segment.dict, "Dictionary")->required();
  segment_cmd->add_option("--emb", segment.emb, "Embeddings")->required();
  segment_cmd->add_option("--cache", segment.cache, "Similarity cache");
  segment_cmd->add_flag("--no-cache", no_cache,
                        "Compute every similarity on demand");
  segment_cmd->add_option("--out", segment.out, "Output (default stdout)");
  segment_cmd->add_option("--beam", segment.beam.beam_size, "Initial beam size")
      ->capture_default_str();
  segment_cmd->add_option("--max-word-len", segment.beam.max_word_len,
                          "Initial maximum word length")
      ->capture_default_str();
  segment_cmd->add_option("--window", segment.decoder.window, "Context window")
      ->capture_default_str();
  segment_cmd->add_option("--threads", segment.threads, "Worker threads")
      ->capture_default_str();

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Word precision/recall/F");
  eval_cmd->add_option("--gold", eval.gold, "Gold segmentation")->required();
  eval_cmd->add_option("--input,--pred", eval.pred, "Predicted segmentation")
      ->required();

  ReportOptions report;
  auto* report_cmd =
      app.add_subcommand("report", "Per-word segmentation improvement");
  report_cmd->add_option("--gold", report.gold, "Gold segmentation")
      ->required();
  report_cmd->add_option("--baseline", report.baseline,
                         "Baseline segmentation")
      ->required();
  report_cmd->add_option("--input,--pred", report.web,
                         "Re-segmented output")
      ->required();
  report_cmd->add_option("--min-count", report.min_count,
                         "Minimum gold occurrences")
      ->capture_default_str();
  report_cmd->add_option("--out", report.out, "Output (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? static_cast<int>(kOk) : static_cast<int>(kUsage);
  }

  if (*train_cmd) {
    if (*seed_opt) train.seed = seed;
    if (sentence_scope) train.cache_scope = CooccurrenceScope::kSentence;
    return RunTrain(train, out, err);
  }
  if (*segment_cmd) {
    segment.use_cache = !no_cache;
    return RunSegment(segment, out, err);
  }
  if (*eval_cmd) return RunEval(eval, out, err);
  return RunReport(report, out, err);
}

}  // namespace embseg::cli
