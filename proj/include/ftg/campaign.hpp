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

#ifndef FTG_CAMPAIGN_HPP_
#define FTG_CAMPAIGN_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ftg/error.hpp"

namespace ftg {

using Environment = std::map<std::string, std::string>;

// Sanitizer options every campaign passes to its runners.
inline constexpr std::string_view kDedupTokenOption = "dedup_token_length=3";
inline constexpr std::string_view kSymbolizerOption = "external_symbolizer_path=";

// {"ASAN_OPTIONS": "dedup_token_length=3[:external_symbolizer_path=<path>]"}
// plus `extra_asan_options` appended in order, joined with ':'.
Environment SanitizerEnvironment(std::string_view symbolizer_path = "",
                                 const std::vector<std::string>& extra_asan_options = {});

// llvm-symbolizer on PATH, else addr2line on PATH, else empty.
std::string FindSymbolizer();

struct CampaignConfig {
  std::uint64_t total_time = 0;  // seconds, split across targets
  std::vector<std::string> targets;
  std::filesystem::path artifact_dir;
  std::string runner = "libfuzzer";
  Environment env_settings;
  int repeat_count = 1;
  // Slots executed concurrently; 1 runs the schedule sequentially.
  int workers = 1;

  // Throws Error(kInvalidConfig).
  void Validate() const;
};

struct ScheduleSlot {
  std::string target_id;
  std::uint64_t duration = 0;  // seconds
  friend bool operator==(const ScheduleSlot&, const ScheduleSlot&) = default;
};

// One slot per target: floor(T/n) seconds each, with the T mod n leftover
// seconds handed out one apiece to the first targets. Durations sum to T.
// Throws Error(kInvalidConfig) when T < n, since a slot would be empty.
std::vector<ScheduleSlot> ScheduleRoundRobin(const CampaignConfig& cfg);

struct RunRequest {
  std::string target_id;
  std::uint64_t duration = 0;
  Environment env;
  int repetition = 0;
  // Private to this (repetition, target): artifact_dir/<rep>/<target_id>.
  std::filesystem::path work_dir;
};

struct RunOutcome {
  std::string target_id;
  int repetition = 0;
  std::vector<std::string> crash_input_paths;
  std::vector<std::string> sanitizer_logs;  // parallel to crash_input_paths
  std::uint64_t executions = 0;
  double wall_time = 0;  // seconds
};

struct ReplayResult {
  bool crashed = false;
  std::string log;
};

// Executes fuzz targets. Implementations must tolerate concurrent Run calls
// for distinct work_dirs, and Replay must not modify campaign state.
class FuzzerRunner {
 public:
  virtual ~FuzzerRunner() = default;

  // Throws Error(kRunnerUnavailable) if the target cannot be started and
  // Error(kDiskFull) if artifacts cannot be written.
  virtual RunOutcome Run(const RunRequest& request) = 0;

  virtual ReplayResult Replay(const std::string& target_id, const std::string& input_path,
                              const Environment& env) = 0;
};

struct RunFailure {
  int repetition = 0;
  std::string target_id;
  ErrorCode code = ErrorCode::kRunnerUnavailable;
  std::string message;
};

struct CampaignResult {
  std::vector<RunOutcome> outcomes;  // repetition-major, schedule order
  std::vector<RunFailure> failures;
  bool aborted = false;  // disk full; outcomes hold what finished
  std::string abort_reason;
};

std::filesystem::path WorkDir(const std::filesystem::path& artifact_dir, int repetition,
                              const std::string& target_id);

// Runs the round-robin schedule repeat_count times. A failing target is
// recorded in `failures` and the campaign moves on.
CampaignResult RunCampaign(const CampaignConfig& cfg, FuzzerRunner& runner);

enum class Verdict { kReproduced, kNotReproduced };

std::string_view VerdictName(Verdict verdict);

using VerdictMap = std::map<std::string, Verdict>;

// Replays every crash input once against the target that produced it.
// Inputs whose target has become unavailable are marked NOT_REPRODUCED.
VerdictMap ReplayVerify(const std::vector<RunOutcome>& outcomes, FuzzerRunner& runner,
                        const Environment& env);

// ---------------------------------------------------------------------------
// On-disk index ("ftg-artifacts v1"), written next to the per-target
// directories:
//
//   <artifact_dir>/ARTIFACTS       "ftg-artifacts v1"
//   <artifact_dir>/outcomes.tsv    rep, target, executions, wall_time, crashes
//   <artifact_dir>/crashes.tsv     rep, target, input path, sanitizer log path
//   <artifact_dir>/failures.tsv    rep, target, error code, message
//   <artifact_dir>/replay.tsv      input path, REPRODUCED|NOT_REPRODUCED
//   <artifact_dir>/<rep>/<target>/sanitizer-<k>.log   raw log for crash k

inline constexpr std::string_view kArtifactsHeader = "ftg-artifacts v1";

void WriteCampaignIndex(const std::filesystem::path& artifact_dir, const CampaignResult& result,
                        const VerdictMap& verdicts);

struct CampaignIndex {
  CampaignResult result;
  VerdictMap verdicts;
};

CampaignIndex ReadCampaignIndex(const std::filesystem::path& artifact_dir);

}  // namespace ftg

#endif  // FTG_CAMPAIGN_HPP_
