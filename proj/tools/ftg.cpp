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

// ftg: generate libFuzzer targets from annotated C sources, run
// round-robin campaigns over them and summarize what they found.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ftg/libfuzzer_runner.hpp"
#include "ftg/pipeline.hpp"

namespace {

constexpr const char* kExitCodes =
    "Exit status:\n"
    "  0  success\n"
    "  1  usage or configuration error\n"
    "  2  a source file failed to parse\n"
    "  3  a directive failed validation\n"
    "  4  no fuzz targets\n"
    "  5  I/O error or disk full\n"
    "  6  every campaign run failed\n"
    "\n"
    "Campaign runs receive ASAN_OPTIONS=dedup_token_length=3 and, when a\n"
    "symbolizer is found, external_symbolizer_path=<path>, joined with ':'.\n"
    "Options already present in ASAN_OPTIONS are appended after these.\n";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fuzz target generator for C libraries"};
  app.footer(kExitCodes);
  app.require_subcommand(1);

  ftg::ToolConfig tool;
  std::string mode = "annotated";
  bool no_aligned_copy = false;
  bool no_size_guard = false;
  bool table = false;

  auto add_source_flags = [&](CLI::App* cmd) {
    cmd->add_option("sources", tool.source_paths, "C sources, headers or directories")->required();
    cmd->add_option("--abi", tool.abi_name_or_file, "lp64, ilp32 or an ABI description file")
        ->capture_default_str();
    cmd->add_option("--mode", mode, "annotated, auto or both")->capture_default_str();
  };

  CLI::App* generate = app.add_subcommand("generate", "Emit harnesses and a manifest");
  add_source_flags(generate);
  generate->add_option("--out", tool.output_dir, "Output directory")->capture_default_str();
  generate->add_option("--include", tool.include_lines,
                       "Header to include in every harness (repeatable)");
  generate->add_flag("--no-aligned-copy", no_aligned_copy,
                     "Point array parameters into the input buffer instead of copying");
  generate->add_flag("--no-size-guard", no_size_guard, "Omit the minimum-size check");

  CLI::App* discover = app.add_subcommand("discover", "List functions eligible for automatic targets");
  add_source_flags(discover);
  discover->add_flag("--table", table, "Print counts per skip reason");

  ftg::CampaignOptions camp;
  std::filesystem::path bin_dir;
  int max_restarts = 1000;
  std::vector<std::string> fuzzer_args;
  CLI::App* campaign = app.add_subcommand("campaign", "Run a round-robin fuzzing campaign");
  campaign->add_option("--manifest", camp.manifest, "Manifest listing the targets");
  campaign->add_option("--target", camp.targets, "Target id (repeatable; overrides the manifest)");
  campaign->add_option("--time", camp.total_time, "Total seconds per repetition, split across targets")
      ->required();
  campaign->add_option("--repeat", camp.repeat_count, "Repetitions")->capture_default_str();
  campaign->add_option("--runner", camp.runner, "Runner (libfuzzer)")->capture_default_str();
  campaign->add_option("--artifact-dir", camp.artifact_dir, "Where runs and results go")
      ->capture_default_str();
  campaign->add_option("--bin-dir", bin_dir, "Directory of built targets (default: manifest dir)");
  campaign->add_option("--workers", camp.workers, "Slots run concurrently")->capture_default_str();
  campaign->add_option("--symbolizer", camp.symbolizer, "Symbolizer path (default: search PATH)");
  campaign->add_option("--asan-option", camp.extra_asan_options, "Extra ASAN_OPTIONS entry");
  campaign->add_option("--fuzzer-arg", fuzzer_args, "Extra argument for each fuzzer launch");
  campaign->add_option("--max-restarts", max_restarts, "Relaunches per slot after a crash")
      ->capture_default_str();
  campaign->add_option("--label", camp.method_label, "Method label for the results row")
      ->capture_default_str();

  std::filesystem::path report_dir = "ftg-artifacts";
  std::string report_label = "Annotated";
  bool machine = false;
  CLI::App* report = app.add_subcommand("report", "Summarize an artifact directory");
  report->add_option("--artifact-dir", report_dir, "Artifact directory")->capture_default_str();
  report->add_option("--label", report_label, "Method label")->capture_default_str();
  report->add_flag("--machine", machine, "Tab-separated output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? ftg::kExitOk : ftg::kExitUsage;
  }

  try {
    if (generate->parsed() || discover->parsed()) tool.mode = ftg::ParseMode(mode);
  } catch (const ftg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ftg::kExitUsage;
  }
  tool.aligned_array_copy = !no_aligned_copy;
  tool.emit_size_guard = !no_size_guard;

  if (generate->parsed()) return ftg::CmdGenerate(tool, std::cout, std::cerr).status;
  if (discover->parsed()) return ftg::CmdDiscover(tool, table, std::cout, std::cerr);
  if (campaign->parsed()) {
    if (camp.runner != "libfuzzer") {
      std::cerr << "error: unknown runner '" << camp.runner << "'\n";
      return ftg::kExitUsage;
    }
    ftg::LibFuzzerOptions lf;
    lf.bin_dir = !bin_dir.empty() ? bin_dir
                 : !camp.manifest.empty() ? camp.manifest.parent_path()
                                          : std::filesystem::path(".");
    lf.extra_args = fuzzer_args;
    lf.max_restarts = max_restarts;
    ftg::LibFuzzerRunner runner(lf);
    return ftg::CmdCampaign(camp, runner, std::cout, std::cerr);
  }
  return ftg::CmdReport(report_dir, report_label, machine, std::cout, std::cerr);
}
