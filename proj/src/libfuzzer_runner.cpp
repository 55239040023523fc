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

#include "ftg/libfuzzer_runner.hpp"

#include <stdlib.h>

#include <chrono>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>
#include <system_error>

#include "ftg/error.hpp"
#include "ftg/process.hpp"

namespace ftg {

namespace fs = std::filesystem;

namespace {

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::set<std::string> ListArtifacts(const fs::path& dir) {
  std::set<std::string> names;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file()) names.insert(entry.path().string());
  }
  return names;
}

void MakeDir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec == std::errc::no_space_on_device) {
    throw Error(ErrorCode::kDiskFull, "cannot create " + dir.string());
  }
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());
}

}  // namespace

std::string ExtractSanitizerLog(const std::string& output) {
  std::size_t pos = 0;
  while (pos < output.size()) {
    std::size_t eol = output.find('\n', pos);
    if (eol == std::string::npos) eol = output.size();
    std::string_view line(output.data() + pos, eol - pos);
    if (line.find("ERROR: AddressSanitizer") != std::string_view::npos ||
        line.find("ERROR: LeakSanitizer") != std::string_view::npos ||
        line.find("ERROR: MemorySanitizer") != std::string_view::npos ||
        line.find("ERROR: libFuzzer") != std::string_view::npos ||
        line.find("runtime error:") != std::string_view::npos) {
      return output.substr(pos);
    }
    pos = eol + 1;
  }
  return {};
}

std::uint64_t ExtractExecutions(const std::string& output) {
  static const std::regex stat(R"(stat::number_of_executed_units:\s*(\d+))");
  std::smatch m;
  if (std::regex_search(output, m, stat)) return std::stoull(m[1]);
  static const std::regex progress(R"((?:^|\n)#(\d+)\s)");
  std::uint64_t best = 0;
  for (auto it = std::sregex_iterator(output.begin(), output.end(), progress);
       it != std::sregex_iterator(); ++it) {
    best = std::max<std::uint64_t>(best, std::stoull((*it)[1]));
  }
  return best;
}

LibFuzzerRunner::LibFuzzerRunner(LibFuzzerOptions options) : options_(std::move(options)) {}

fs::path LibFuzzerRunner::BinaryFor(const std::string& target_id) const {
  return options_.bin_dir / target_id;
}

RunOutcome LibFuzzerRunner::Run(const RunRequest& request) {
  fs::path binary = fs::absolute(BinaryFor(request.target_id));
  if (!IsExecutable(binary)) {
    throw Error(ErrorCode::kRunnerUnavailable, "no executable for " + request.target_id + " at " +
                                                   binary.string());
  }
  fs::path work = fs::absolute(request.work_dir);
  fs::path corpus = work / "corpus";
  fs::path crashes = work / "crashes";
  fs::path logs = work / "logs";
  MakeDir(corpus);
  MakeDir(crashes);
  MakeDir(logs);

  RunOutcome outcome;
  outcome.target_id = request.target_id;
  outcome.repetition = request.repetition;
  std::set<std::string> seen = ListArtifacts(crashes);

  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const auto deadline = start + std::chrono::seconds(request.duration);
  for (int launch = 0; launch <= options_.max_restarts; ++launch) {
    auto now = Clock::now();
    if (now >= deadline) break;
    auto remaining = std::chrono::duration_cast<std::chrono::seconds>(deadline - now).count();
    if (remaining < 1) break;

    ProcessOptions proc;
    proc.argv = {binary.string(), "-max_total_time=" + std::to_string(remaining),
                 "-artifact_prefix=" + crashes.string() + "/", "-print_final_stats=1"};
    for (const auto& arg : options_.extra_args) proc.argv.push_back(arg);
    proc.argv.push_back(corpus.string());
    proc.env = request.env;
    proc.working_dir = work;
    proc.output_file = logs / ("run-" + std::to_string(launch) + ".log");
    proc.timeout = std::chrono::seconds(remaining + options_.grace_seconds);
    ProcessResult result = RunProcess(proc);

    std::string output = Slurp(proc.output_file);
    outcome.executions += ExtractExecutions(output);

    std::set<std::string> now_present = ListArtifacts(crashes);
    std::vector<std::string> fresh;
    for (const auto& name : now_present) {
      if (!seen.count(name)) fresh.push_back(name);
    }
    seen = std::move(now_present);
    std::string log = ExtractSanitizerLog(output);
    for (const auto& path : fresh) {
      outcome.crash_input_paths.push_back(path);
      outcome.sanitizer_logs.push_back(log);
    }
    bool clean_exit = !result.signaled && !result.timed_out && result.exit_code == 0;
    // Rediscovering a known input writes no new file but is still a find.
    // Anything else that fails without a report would fail again.
    if (clean_exit || result.timed_out || (fresh.empty() && log.empty())) break;
  }
  outcome.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
  return outcome;
}

ReplayResult LibFuzzerRunner::Replay(const std::string& target_id, const std::string& input_path,
                                     const Environment& env) {
  fs::path binary = fs::absolute(BinaryFor(target_id));
  if (!IsExecutable(binary)) {
    throw Error(ErrorCode::kRunnerUnavailable, "no executable for " + target_id);
  }
  // libFuzzer writes a crash file even when replaying; keep it out of the
  // campaign directories.
  std::string templ = (fs::temp_directory_path() / "ftg-replay-XXXXXX").string();
  if (!::mkdtemp(templ.data())) throw Error(ErrorCode::kIo, "cannot create replay directory");
  fs::path scratch = templ;

  ProcessOptions proc;
  proc.argv = {binary.string(), "-artifact_prefix=" + scratch.string() + "/",
               fs::absolute(input_path).string()};
  proc.env = env;
  if (!options_.symbolize_replays) {
    std::string& asan = proc.env["ASAN_OPTIONS"];
    if (asan.empty()) {
      const char* inherited = ::getenv("ASAN_OPTIONS");
      if (inherited) asan = inherited;
    }
    asan += asan.empty() ? "symbolize=0" : ":symbolize=0";
  }
  proc.working_dir = scratch;
  proc.output_file = scratch / "replay.log";
  proc.timeout = std::chrono::seconds(options_.replay_timeout_seconds);
  ReplayResult replay;
  try {
    ProcessResult result = RunProcess(proc);
    replay.log = Slurp(proc.output_file);
    replay.crashed = result.signaled || result.timed_out || result.exit_code != 0;
  } catch (...) {
    std::error_code ec;
    fs::remove_all(scratch, ec);
    throw;
  }
  std::error_code ec;
  fs::remove_all(scratch, ec);
  return replay;
}

}  // namespace ftg
