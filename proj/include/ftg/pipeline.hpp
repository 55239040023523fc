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

#ifndef FTG_PIPELINE_HPP_
#define FTG_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ftg/campaign.hpp"
#include "ftg/codegen.hpp"
#include "ftg/report.hpp"

namespace ftg {

// Process exit statuses. Each failure mode has its own value.
enum ExitStatus : int {
  kExitOk = 0,
  kExitUsage = 1,            // bad flags, bad ABI file, bad campaign config
  kExitParseFailure = 2,     // a source file could not be parsed
  kExitDirectiveFailure = 3, // a directive failed validation or planning
  kExitZeroTargets = 4,      // nothing to generate
  kExitIo = 5,               // files could not be read or written, disk full
  kExitCampaignFailed = 6,   // every campaign run failed
};

enum class Mode { kAnnotated, kAuto, kBoth };

std::string_view ModeName(Mode mode);
// Accepts annotated, auto, both (any case). Throws Error(kInvalidConfig).
Mode ParseMode(std::string_view text);

inline constexpr std::string_view kManifestFileName = "ftg-manifest.txt";

struct ToolConfig {
  // Files, or directories scanned (non-recursively) for *.c and *.h.
  std::vector<std::filesystem::path> source_paths;
  std::string abi_name_or_file = "lp64";
  Mode mode = Mode::kAnnotated;
  std::filesystem::path output_dir = "fuzz";
  // Overrides the per-source default (sibling header, else the source).
  std::vector<std::string> include_lines;
  bool aligned_array_copy = true;
  bool emit_size_guard = true;
};

struct GenerateResult {
  int status = kExitOk;
  std::vector<GeneratedTarget> targets;
  std::vector<std::filesystem::path> written;
};

// Source files named by `paths`, sorted and de-duplicated.
std::vector<std::filesystem::path> CollectSources(const std::vector<std::filesystem::path>& paths);

GenerateResult CmdGenerate(const ToolConfig& cfg, std::ostream& out, std::ostream& err);

// Prints one line per function: name, ELIGIBLE or SKIPPED, reason.
int CmdDiscover(const ToolConfig& cfg, bool table, std::ostream& out, std::ostream& err);

struct CampaignOptions {
  std::filesystem::path manifest;  // targets come from here...
  std::vector<std::string> targets;  // ...unless listed explicitly
  std::filesystem::path artifact_dir = "ftg-artifacts";
  std::uint64_t total_time = 0;
  int repeat_count = 1;
  int workers = 1;
  std::string runner = "libfuzzer";
  std::string method_label = "Annotated";
  // Empty: search PATH.
  std::string symbolizer;
  // Extra ASAN_OPTIONS entries, appended after the required ones.
  std::vector<std::string> extra_asan_options;
};

// Builds the campaign configuration: targets, schedule inputs and the
// sanitizer environment. Throws Error(kInvalidConfig / kMalformedManifest /
// kIo).
CampaignConfig MakeCampaignConfig(const CampaignOptions& opts);

// Runs the campaign, replays every crash, writes the artifact index and
// the results files (results.txt, results.tsv, bugs.tsv) into the
// artifact directory, and prints the table.
int CmdCampaign(const CampaignOptions& opts, FuzzerRunner& runner, std::ostream& out,
                std::ostream& err);

// Rebuilds the results from an existing artifact directory.
int CmdReport(const std::filesystem::path& artifact_dir, const std::string& method_label,
              bool machine, std::ostream& out, std::ostream& err);

}  // namespace ftg

#endif  // FTG_PIPELINE_HPP_
