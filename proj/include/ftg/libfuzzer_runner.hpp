// Copyright 2026 The FTG Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FTG_LIBFUZZER_RUNNER_HPP_
#define FTG_LIBFUZZER_RUNNER_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ftg/campaign.hpp"

namespace ftg {

struct LibFuzzerOptions {
  // Directory holding one executable per target, named by target_id.
  std::filesystem::path bin_dir;
  std::vector<std::string> extra_args;
  // Relaunches after a crash within one slot.
  int max_restarts = 1000;
  // Added to the slot duration before the process group is killed.
  std::uint64_t grace_seconds = 30;
  std::uint64_t replay_timeout_seconds = 60;
  // Replays only decide crashed or not; the run log already has the
  // symbolized report. Off appends symbolize=0 to ASAN_OPTIONS.
  bool symbolize_replays = false;
};

// Runs libFuzzer-linked binaries. Per run, inside request.work_dir:
//   corpus/        fresh corpus, grown by the fuzzer
//   crashes/       crash-*, leak-*, timeout-*, oom-* artifacts
//   logs/run-<k>.log   output of the k-th launch
class LibFuzzerRunner : public FuzzerRunner {
 public:
  explicit LibFuzzerRunner(LibFuzzerOptions options);

  RunOutcome Run(const RunRequest& request) override;
  ReplayResult Replay(const std::string& target_id, const std::string& input_path,
                      const Environment& env) override;

  std::filesystem::path BinaryFor(const std::string& target_id) const;

 private:
  LibFuzzerOptions options_;
};

// Text from the first sanitizer or libFuzzer "ERROR:" header to the end.
// Empty when no header is present.
std::string ExtractSanitizerLog(const std::string& output);

// stat::number_of_executed_units from -print_final_stats, else the
// largest "#N" progress counter, else 0.
std::uint64_t ExtractExecutions(const std::string& output);

}  // namespace ftg

#endif  // FTG_LIBFUZZER_RUNNER_HPP_
