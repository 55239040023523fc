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

#include "ftg/campaign.hpp"

#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <system_error>
#include <thread>

namespace ftg {

namespace fs = std::filesystem;

Environment SanitizerEnvironment(std::string_view symbolizer_path,
                                 const std::vector<std::string>& extra_asan_options) {
  std::string options(kDedupTokenOption);
  if (!symbolizer_path.empty()) {
    options += ':';
    options += kSymbolizerOption;
    options += symbolizer_path;
  }
  for (const auto& extra : extra_asan_options) {
    if (!extra.empty()) options += ':' + extra;
  }
  return {{"ASAN_OPTIONS", options}};
}

std::string FindSymbolizer() {
  const char* path_env = std::getenv("PATH");
  if (!path_env) return {};
  std::string path = path_env;
  for (const char* tool : {"llvm-symbolizer", "addr2line"}) {
    std::size_t start = 0;
    while (start <= path.size()) {
      std::size_t end = path.find(':', start);
      if (end == std::string::npos) end = path.size();
      fs::path candidate = fs::path(path.substr(start, end - start)) / tool;
      if (end > start && ::access(candidate.c_str(), X_OK) == 0) return candidate.string();
      start = end + 1;
    }
  }
  return {};
}

void CampaignConfig::Validate() const {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::kInvalidConfig, why); };
  if (total_time == 0) fail("total time must be positive");
  if (targets.empty()) fail("campaign has no targets");
  if (repeat_count < 1) fail("repeat count must be at least 1");
  if (workers < 1) fail("worker count must be at least 1");
  std::map<std::string, int> seen;
  for (const auto& t : targets) {
    if (t.empty() || t.find('/') != std::string::npos || t == "." || t == "..") {
      fail("bad target id '" + t + "'");
    }
    if (seen[t]++) fail("target '" + t + "' listed twice");
  }
  auto asan = env_settings.find("ASAN_OPTIONS");
  bool has_dedup = false;
  if (asan != env_settings.end()) {
    std::string_view opts = asan->second;
    std::size_t start = 0;
    while (start <= opts.size()) {
      std::size_t end = opts.find(':', start);
      if (end == std::string_view::npos) end = opts.size();
      if (opts.substr(start, end - start).rfind("dedup_token_length=", 0) == 0) has_dedup = true;
      start = end + 1;
    }
  }
  if (!has_dedup) fail("ASAN_OPTIONS must set dedup_token_length");
}

std::vector<ScheduleSlot> ScheduleRoundRobin(const CampaignConfig& cfg) {
  cfg.Validate();
  const std::uint64_t n = cfg.targets.size();
  if (cfg.total_time < n) {
    throw Error(ErrorCode::kInvalidConfig,
                "total time " + std::to_string(cfg.total_time) + " s is shorter than one second per target (" +
                    std::to_string(n) + " targets)");
  }
  const std::uint64_t base = cfg.total_time / n;
  const std::uint64_t extra = cfg.total_time % n;
  std::vector<ScheduleSlot> slots;
  slots.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    slots.push_back({cfg.targets[i], base + (i < extra ? 1 : 0)});
  }
  return slots;
}

fs::path WorkDir(const fs::path& artifact_dir, int repetition, const std::string& target_id) {
  return artifact_dir / std::to_string(repetition) / target_id;
}

CampaignResult RunCampaign(const CampaignConfig& cfg, FuzzerRunner& runner) {
  std::vector<ScheduleSlot> schedule = ScheduleRoundRobin(cfg);

  struct Job {
    int repetition;
    const ScheduleSlot* slot;
  };
  std::vector<Job> jobs;
  for (int rep = 0; rep < cfg.repeat_count; ++rep) {
    for (const auto& slot : schedule) jobs.push_back({rep, &slot});
  }

  struct JobResult {
    std::optional<RunOutcome> outcome;
    std::optional<RunFailure> failure;
  };
  std::vector<JobResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  std::mutex abort_mu;
  std::string abort_reason;

  auto worker = [&] {
    while (!abort.load()) {
      std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      const Job& job = jobs[i];
      RunRequest request;
      request.target_id = job.slot->target_id;
      request.duration = job.slot->duration;
      request.env = cfg.env_settings;
      request.repetition = job.repetition;
      request.work_dir = WorkDir(cfg.artifact_dir, job.repetition, job.slot->target_id);
      try {
        std::error_code ec;
        fs::create_directories(request.work_dir, ec);
        if (ec == std::errc::no_space_on_device) {
          throw Error(ErrorCode::kDiskFull, "cannot create " + request.work_dir.string());
        }
        if (ec) {
          throw Error(ErrorCode::kIo, "cannot create " + request.work_dir.string() + ": " +
                                          ec.message());
        }
        RunOutcome outcome = runner.Run(request);
        outcome.target_id = request.target_id;
        outcome.repetition = job.repetition;
        results[i].outcome = std::move(outcome);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kDiskFull) {
          std::lock_guard<std::mutex> lock(abort_mu);
          if (!abort.exchange(true)) abort_reason = e.what();
          return;
        }
        results[i].failure = RunFailure{job.repetition, job.slot->target_id, e.code(), e.what()};
      } catch (const std::exception& e) {
        results[i].failure =
            RunFailure{job.repetition, job.slot->target_id, ErrorCode::kIo, e.what()};
      }
    }
  };

  int workers = std::min<int>(cfg.workers, static_cast<int>(jobs.size()));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  CampaignResult result;
  for (auto& r : results) {
    if (r.outcome) result.outcomes.push_back(std::move(*r.outcome));
    if (r.failure) result.failures.push_back(std::move(*r.failure));
  }
  result.aborted = abort.load();
  result.abort_reason = abort_reason;
  return result;
}

std::string_view VerdictName(Verdict verdict) {
  return verdict == Verdict::kReproduced ? "REPRODUCED" : "NOT_REPRODUCED";
}

VerdictMap ReplayVerify(const std::vector<RunOutcome>& outcomes, FuzzerRunner& runner,
                        const Environment& env) {
  VerdictMap verdicts;
  for (const auto& outcome : outcomes) {
    for (const auto& input : outcome.crash_input_paths) {
      if (verdicts.count(input)) continue;
      Verdict verdict = Verdict::kNotReproduced;
      try {
        if (runner.Replay(outcome.target_id, input, env).crashed) verdict = Verdict::kReproduced;
      } catch (const Error&) {
        verdict = Verdict::kNotReproduced;
      }
      verdicts[input] = verdict;
    }
  }
  return verdicts;
}

// ---------------------------------------------------------------------------
// Index files

namespace {

std::vector<std::string> SplitTabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t end = line.find('\t', start);
    out.push_back(line.substr(start, end == std::string::npos ? std::string::npos : end - start));
    if (end == std::string::npos) return out;
    start = end + 1;
  }
}

void WriteFile(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.flush();
  if (!out) {
    if (errno == ENOSPC) throw Error(ErrorCode::kDiskFull, "disk full writing " + path.string());
    throw Error(ErrorCode::kIo, "cannot write " + path.string());
  }
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::vector<std::string>> ReadTsv(const fs::path& path) {
  std::vector<std::vector<std::string>> rows;
  if (!fs::exists(path)) return rows;
  std::istringstream in(ReadFile(path));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    rows.push_back(SplitTabs(line));
  }
  return rows;
}

template <typename T>
T ParseNumber(const std::string& s, const fs::path& file) {
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kIo, file.string() + ": bad number '" + s + "'");
  }
  return value;
}

}  // namespace

void WriteCampaignIndex(const fs::path& artifact_dir, const CampaignResult& result,
                        const VerdictMap& verdicts) {
  fs::create_directories(artifact_dir);
  WriteFile(artifact_dir / "ARTIFACTS", std::string(kArtifactsHeader) + "\n");

  std::ostringstream outcomes, crashes, failures, replay;
  outcomes << "# repetition\ttarget\texecutions\twall_time\tcrashes\n";
  crashes << "# repetition\ttarget\tinput\tsanitizer_log\n";
  failures << "# repetition\ttarget\terror\tmessage\n";
  replay << "# input\tverdict\n";
  for (const auto& o : result.outcomes) {
    std::ostringstream wall;
    wall.precision(3);
    wall << std::fixed << o.wall_time;
    outcomes << o.repetition << '\t' << o.target_id << '\t' << o.executions << '\t' << wall.str()
             << '\t' << o.crash_input_paths.size() << '\n';
    fs::path dir = WorkDir(artifact_dir, o.repetition, o.target_id);
    fs::create_directories(dir);
    for (std::size_t k = 0; k < o.crash_input_paths.size(); ++k) {
      fs::path log = dir / ("sanitizer-" + std::to_string(k) + ".log");
      WriteFile(log, k < o.sanitizer_logs.size() ? o.sanitizer_logs[k] : "");
      crashes << o.repetition << '\t' << o.target_id << '\t' << o.crash_input_paths[k] << '\t'
              << log.string() << '\n';
    }
  }
  for (const auto& f : result.failures) {
    std::string message = f.message;
    for (char& c : message) {
      if (c == '\t' || c == '\n') c = ' ';
    }
    failures << f.repetition << '\t' << f.target_id << '\t' << ErrorCodeName(f.code) << '\t'
             << message << '\n';
  }
  for (const auto& [input, verdict] : verdicts) {
    replay << input << '\t' << VerdictName(verdict) << '\n';
  }
  WriteFile(artifact_dir / "outcomes.tsv", outcomes.str());
  WriteFile(artifact_dir / "crashes.tsv", crashes.str());
  WriteFile(artifact_dir / "failures.tsv", failures.str());
  WriteFile(artifact_dir / "replay.tsv", replay.str());
}

CampaignIndex ReadCampaignIndex(const fs::path& artifact_dir) {
  fs::path marker = artifact_dir / "ARTIFACTS";
  if (!fs::exists(marker)) {
    throw Error(ErrorCode::kIo, artifact_dir.string() + " is not an ftg artifact directory");
  }
  std::string header = ReadFile(marker);
  while (!header.empty() && (header.back() == '\n' || header.back() == '\r')) header.pop_back();
  if (header != kArtifactsHeader) {
    throw Error(ErrorCode::kIo, marker.string() + ": unsupported format '" + header + "'");
  }

  CampaignIndex index;
  std::map<std::pair<int, std::string>, std::size_t> slot_of;
  fs::path outcomes_path = artifact_dir / "outcomes.tsv";
  for (const auto& row : ReadTsv(outcomes_path)) {
    if (row.size() != 5) throw Error(ErrorCode::kIo, outcomes_path.string() + ": bad row");
    RunOutcome o;
    o.repetition = ParseNumber<int>(row[0], outcomes_path);
    o.target_id = row[1];
    o.executions = ParseNumber<std::uint64_t>(row[2], outcomes_path);
    o.wall_time = std::strtod(row[3].c_str(), nullptr);
    slot_of[{o.repetition, o.target_id}] = index.result.outcomes.size();
    index.result.outcomes.push_back(std::move(o));
  }
  fs::path crashes_path = artifact_dir / "crashes.tsv";
  for (const auto& row : ReadTsv(crashes_path)) {
    if (row.size() != 4) throw Error(ErrorCode::kIo, crashes_path.string() + ": bad row");
    auto it = slot_of.find({ParseNumber<int>(row[0], crashes_path), row[1]});
    if (it == slot_of.end()) {
      throw Error(ErrorCode::kIo, crashes_path.string() + ": crash for unknown run " + row[1]);
    }
    RunOutcome& o = index.result.outcomes[it->second];
    o.crash_input_paths.push_back(row[2]);
    o.sanitizer_logs.push_back(fs::exists(row[3]) ? ReadFile(row[3]) : "");
  }
  fs::path failures_path = artifact_dir / "failures.tsv";
  for (const auto& row : ReadTsv(failures_path)) {
    if (row.size() != 4) throw Error(ErrorCode::kIo, failures_path.string() + ": bad row");
    RunFailure f;
    f.repetition = ParseNumber<int>(row[0], failures_path);
    f.target_id = row[1];
    f.code = ParseErrorCode(row[2]).value_or(ErrorCode::kRunnerUnavailable);
    f.message = row[3];
    index.result.failures.push_back(std::move(f));
  }
  fs::path replay_path = artifact_dir / "replay.tsv";
  for (const auto& row : ReadTsv(replay_path)) {
    if (row.size() != 2) throw Error(ErrorCode::kIo, replay_path.string() + ": bad row");
    index.verdicts[row[0]] =
        row[1] == "REPRODUCED" ? Verdict::kReproduced : Verdict::kNotReproduced;
  }
  return index;
}

}  // namespace ftg
