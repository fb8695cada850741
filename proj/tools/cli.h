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

#ifndef EMBSEG_TOOLS_CLI_H_
#define EMBSEG_TOOLS_CLI_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "embseg/decoder.h"
#include "embseg/simcache.h"
#include "embseg/trainer.h"

namespace embseg::cli {

// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kIo = 2,
  kInvalid = 3,    // bad artifacts, configuration or dictionary lookups
  kMismatch = 4,   // alignment and structural errors between inputs
};

struct TrainOptions {
  std::string corpus;
  std::string dict;
  std::string emb;
  std::string cache;
  std::string dump_samples;  // optional TSV of every training sample
  TrainerConfig trainer;
  std::optional<std::uint64_t> seed;  // unset: time-seeded
  CooccurrenceScope cache_scope = CooccurrenceScope::kWindow;
};

struct SegmentOptions {
  std::string input;
  std::string baseline;  // optional
  std::string dict;
  std::string emb;
  std::string cache;     // optional
  std::string out;       // empty: stdout
  bool use_cache = true;
  BeamParams beam;
  DecoderOptions decoder;
  std::size_t threads = 1;
};

struct EvalOptions {
  std::string gold;
  std::string pred;
};

struct ReportOptions {
  std::string gold;
  std::string baseline;
  std::string web;
  std::string out;  // empty: stdout
  std::size_t min_count = 10;
};

// Each command writes its artifacts, prints results to `out` and
// diagnostics to `err`, and returns an ExitCode.
int RunTrain(const TrainOptions& options, std::ostream& out, std::ostream& err);
int RunSegment(const SegmentOptions& options, std::ostream& out,
               std::ostream& err);
int RunEval(const EvalOptions& options, std::ostream& out, std::ostream& err);
int RunReport(const ReportOptions& options, std::ostream& out,
              std::ostream& err);

// Parses the command line and dispatches to a subcommand.
int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err);

}  // namespace embseg::cli

#endif  // EMBSEG_TOOLS_CLI_H_
