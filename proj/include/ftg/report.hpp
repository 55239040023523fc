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

#ifndef FTG_REPORT_HPP_
#define FTG_REPORT_HPP_

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ftg/campaign.hpp"

namespace ftg {

enum class BugKind { kCrash, kLeak };

std::string_view BugKindName(BugKind kind);

struct SanitizerReport {
  BugKind kind = BugKind::kCrash;
  std::string dedup_token;  // frames joined by "--"
  std::string raw_log;
  std::string target_id;
  std::string input_path;
  int repetition = 0;
};

inline constexpr std::string_view kDedupTokenPrefix = "DEDUP_TOKEN: ";

// LEAK when a LeakSanitizer header is present, CRASH for AddressSanitizer,
// libFuzzer, MemorySanitizer and UBSan headers. The token is the rest of
// the first line starting with "DEDUP_TOKEN: ".
// Throws Error(kUnrecognizedLog) without a known header and
// Error(kNoTokenFound) without a token line.
SanitizerReport ParseSanitizerOutput(std::string_view raw, std::string target_id,
                                     std::string input_path, int repetition = 0);

struct BugRecord {
  std::string dedup_token;
  BugKind kind = BugKind::kCrash;
  std::string first_target;  // first_seen
  int repetition = 0;
  bool reproduced = false;
  friend bool operator==(const BugRecord&, const BugRecord&) = default;
};

// Keeps reports whose input is REPRODUCED in `verdicts` (absent counts as
// not reproduced), then one record per (repetition, token) in first-seen
// order. Kind comes from the first report of the group.
std::vector<BugRecord> Dedup(const std::vector<SanitizerReport>& reports,
                             const VerdictMap& verdicts);

// Counts for one repetition. Fractional so synthetic averages can be fed in.
struct RepetitionTally {
  int repetition = 0;
  int target_count = 0;
  double distinct_bug_inputs = 0;
  double unique_crashes = 0;
  double unique_leaks = 0;
};

// distinct_bug_inputs counts every crashing input before replay.
RepetitionTally TallyRepetition(int repetition, int target_count,
                                const std::set<std::string>& crashing_inputs,
                                const std::vector<BugRecord>& records);

struct ResultsRow {
  std::string method_label;
  int target_count = 0;
  double distinct_bug_inputs = 0;
  double unique_crashes = 0;
  double unique_leaks = 0;
  double total_bugs = 0;
  double bugs_per_target = 0;  // unrounded; rendered with 2 decimals
};

// Means over repetitions. Throws Error(kInvalidConfig) on an empty list,
// a non-positive target count, or target counts that differ.
ResultsRow Summarize(const std::vector<RepetitionTally>& repetitions, std::string method_label);

// Fixed-point rendering used by both table forms.
std::string FormatMean(double value);            // 1 decimal
std::string FormatBugsPerTarget(double value);   // 2 decimals

std::string RenderResultsTable(const std::vector<ResultsRow>& rows);
// Tab-separated, header line first.
std::string RenderResultsDelimited(const std::vector<ResultsRow>& rows);

// Everything the report stage derives from one campaign.
struct CampaignReport {
  std::vector<SanitizerReport> reports;
  std::vector<BugRecord> bugs;
  std::vector<RepetitionTally> tallies;
  ResultsRow row;
  // Inputs whose logs could not be parsed, with the reason.
  std::vector<std::pair<std::string, std::string>> unparsed;
};

// Parses every crash log, dedups per repetition and summarizes.
// Repetitions are those appearing in outcomes or failures.
CampaignReport BuildReport(const CampaignResult& result, const VerdictMap& verdicts,
                           int target_count, std::string method_label);

std::string RenderBugList(const std::vector<BugRecord>& bugs);

}  // namespace ftg

#endif  // FTG_REPORT_HPP_
