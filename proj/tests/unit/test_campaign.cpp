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

#include <algorithm>
#include <fstream>
#include <mutex>
#include <random>
#include <set>

#include "doctest.h"
#include "ftg/campaign.hpp"
#include "test_support.hpp"

using namespace ftg;
namespace t = ftg::testing;
namespace fs = std::filesystem;

namespace {

// Writes `crashes[target]` fake crash files per run. Targets in `missing`
// behave like an absent binary; `flaky` inputs crash only when first run.
class MockRunner : public FuzzerRunner {
 public:
  std::map<std::string, int> crashes;
  std::set<std::string> missing;
  std::set<std::string> disk_full;
  bool flaky = false;

  RunOutcome Run(const RunRequest& request) override {
    {
      std::lock_guard<std::mutex> lock(mu_);
      requests.push_back(request);
    }
    if (missing.count(request.target_id)) {
      throw Error(ErrorCode::kRunnerUnavailable, "no binary for " + request.target_id);
    }
    if (disk_full.count(request.target_id)) {
      throw Error(ErrorCode::kDiskFull, "no space left on device");
    }
    RunOutcome out;
    out.executions = request.duration * 100;
    out.wall_time = static_cast<double>(request.duration);
    fs::create_directories(request.work_dir / "crashes");
    int n = crashes.count(request.target_id) ? crashes.at(request.target_id) : 0;
    for (int k = 0; k < n; ++k) {
      fs::path input = request.work_dir / "crashes" / ("crash-" + std::to_string(k));
      t::WriteFile(input, "input " + std::to_string(k));
      out.crash_input_paths.push_back(input.string());
      out.sanitizer_logs.push_back("==1==ERROR: AddressSanitizer: heap-buffer-overflow\n"
                                   "DEDUP_TOKEN: " + request.target_id + "--main\n");
    }
    return out;
  }

  ReplayResult Replay(const std::string& target_id, const std::string& input_path,
                      const Environment&) override {
    std::lock_guard<std::mutex> lock(mu_);
    ++replays;
    if (missing.count(target_id)) throw Error(ErrorCode::kRunnerUnavailable, "gone");
    // A flaky input has already crashed once, during the run.
    return {!flaky && fs::exists(input_path), "log"};
  }

  std::vector<RunRequest> requests;
  int replays = 0;

 private:
  std::mutex mu_;
};

CampaignConfig Config(std::uint64_t total, std::vector<std::string> targets,
                      const fs::path& dir = "/tmp/ftg-unused") {
  CampaignConfig cfg;
  cfg.total_time = total;
  cfg.targets = std::move(targets);
  cfg.artifact_dir = dir;
  cfg.env_settings = SanitizerEnvironment();
  return cfg;
}

std::vector<std::string> Ids(int n) {
  std::vector<std::string> ids;
  for (int i = 0; i < n; ++i) ids.push_back("t" + std::to_string(i));
  return ids;
}

std::vector<std::uint64_t> Durations(const std::vector<ScheduleSlot>& slots) {
  std::vector<std::uint64_t> out;
  for (const auto& s : slots) out.push_back(s.duration);
  return out;
}

}  // namespace

TEST_CASE("schedule: ten hours over 66 targets") {
  auto slots = ScheduleRoundRobin(Config(36000, Ids(66)));
  REQUIRE(slots.size() == 66);
  std::uint64_t sum = 0;
  for (int i = 0; i < 66; ++i) {
    CHECK(slots[i].target_id == "t" + std::to_string(i));
    CHECK(slots[i].duration == (i < 30 ? 546u : 545u));
    sum += slots[i].duration;
  }
  CHECK(sum == 36000);
}

TEST_CASE("schedule: small examples") {
  CHECK(Durations(ScheduleRoundRobin(Config(36000, Ids(1)))) == std::vector<std::uint64_t>{36000});
  CHECK(Durations(ScheduleRoundRobin(Config(10, Ids(3)))) == std::vector<std::uint64_t>{4, 3, 3});
  CHECK(Durations(ScheduleRoundRobin(Config(3, Ids(3)))) == std::vector<std::uint64_t>{1, 1, 1});
  CHECK_THROWS_AS(ScheduleRoundRobin(Config(2, Ids(3))), Error);
}

TEST_CASE("schedule: conservation and fairness") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 1000; ++i) {
    int n = 1 + static_cast<int>(rng() % 200);
    std::uint64_t total = n + rng() % 100000;
    auto slots = ScheduleRoundRobin(Config(total, Ids(n)));
    REQUIRE(slots.size() == static_cast<std::size_t>(n));
    std::uint64_t sum = 0, lo = UINT64_MAX, hi = 0;
    for (const auto& s : slots) {
      sum += s.duration;
      lo = std::min(lo, s.duration);
      hi = std::max(hi, s.duration);
    }
    CHECK(sum == total);
    CHECK(lo > 0);
    CHECK(hi - lo <= 1);
    // Longer slots come first.
    CHECK(std::is_sorted(slots.begin(), slots.end(),
                         [](const auto& a, const auto& b) { return a.duration > b.duration; }));
  }
}

TEST_CASE("config validation") {
  CHECK_NOTHROW(Config(10, Ids(2)).Validate());
  auto expect_invalid = [](CampaignConfig cfg) {
    try {
      cfg.Validate();
      FAIL("accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kInvalidConfig);
    }
  };
  expect_invalid(Config(0, Ids(2)));
  expect_invalid(Config(10, {}));
  expect_invalid(Config(10, {"a", "a"}));
  expect_invalid(Config(10, {"a/b"}));
  CampaignConfig c = Config(10, Ids(2));
  c.repeat_count = 0;
  expect_invalid(c);
  c = Config(10, Ids(2));
  c.workers = 0;
  expect_invalid(c);
  c = Config(10, Ids(2));
  c.env_settings.clear();
  expect_invalid(c);
}

TEST_CASE("sanitizer environment") {
  CHECK(SanitizerEnvironment().at("ASAN_OPTIONS") == "dedup_token_length=3");
  CHECK(SanitizerEnvironment("/usr/bin/addr2line", {"detect_leaks=1", "abort_on_error=0"})
            .at("ASAN_OPTIONS") ==
        "dedup_token_length=3:external_symbolizer_path=/usr/bin/addr2line:detect_leaks=1:"
        "abort_on_error=0");
}

TEST_CASE("run: crashes pass through, repetitions tag outcomes") {
  t::TempDir dir;
  MockRunner runner;
  runner.crashes["A"] = 2;
  CampaignConfig cfg = Config(20, {"A", "B"}, dir.path());
  CampaignResult r = RunCampaign(cfg, runner);
  REQUIRE(r.outcomes.size() == 2);
  CHECK(r.failures.empty());
  CHECK(r.outcomes[0].target_id == "A");
  CHECK(r.outcomes[0].crash_input_paths.size() == 2);
  CHECK(r.outcomes[0].sanitizer_logs.size() == 2);
  CHECK(r.outcomes[1].crash_input_paths.empty());
  CHECK(runner.requests[0].duration == 10);
  CHECK(runner.requests[0].work_dir == dir.path() / "0" / "A");
  CHECK(runner.requests[0].env.at("ASAN_OPTIONS").find("dedup_token_length=3") != std::string::npos);

  cfg.repeat_count = 5;
  cfg.artifact_dir = dir / "five";
  r = RunCampaign(cfg, runner);
  REQUIRE(r.outcomes.size() == 10);
  for (int i = 0; i < 10; ++i) {
    CHECK(r.outcomes[i].repetition == i / 2);
    CHECK(r.outcomes[i].target_id == (i % 2 ? "B" : "A"));
  }
}

TEST_CASE("run: a missing binary is recorded and the campaign continues") {
  t::TempDir dir;
  MockRunner runner;
  runner.missing = {"B"};
  CampaignResult r = RunCampaign(Config(30, {"A", "B", "C"}, dir.path()), runner);
  CHECK(r.outcomes.size() == 2);
  REQUIRE(r.failures.size() == 1);
  CHECK(r.failures[0].target_id == "B");
  CHECK(r.failures[0].code == ErrorCode::kRunnerUnavailable);
  CHECK_FALSE(r.aborted);
}

TEST_CASE("run: disk full aborts with partial results") {
  t::TempDir dir;
  MockRunner runner;
  runner.disk_full = {"B"};
  CampaignConfig cfg = Config(30, {"A", "B", "C"}, dir.path());
  cfg.repeat_count = 3;
  CampaignResult r = RunCampaign(cfg, runner);
  CHECK(r.aborted);
  CHECK(r.abort_reason.find("no space") != std::string::npos);
  REQUIRE(r.outcomes.size() == 1);
  CHECK(r.outcomes[0].target_id == "A");
  CHECK(runner.requests.size() == 2);
}

TEST_CASE("run: artifact directories never collide") {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 50; ++round) {
    std::set<std::string> ids;
    int n = 1 + static_cast<int>(rng() % 12);
    while (static_cast<int>(ids.size()) < n) {
      std::string id;
      int len = 1 + static_cast<int>(rng() % 6);
      for (int i = 0; i < len; ++i) id += "ab_1."[rng() % 5];
      if (id != "." && id != "..") ids.insert(id);
    }
    std::set<fs::path> dirs;
    int reps = 1 + static_cast<int>(rng() % 12);
    for (int rep = 0; rep < reps; ++rep) {
      for (const auto& id : ids) dirs.insert(WorkDir("/a", rep, id).lexically_normal());
    }
    CHECK(dirs.size() == ids.size() * reps);
  }
}

TEST_CASE("run: worker pool matches sequential execution") {
  t::TempDir dir;
  MockRunner seq_runner, pool_runner;
  for (int i = 0; i < 7; ++i) seq_runner.crashes["t" + std::to_string(i)] = i % 3;
  pool_runner.crashes = seq_runner.crashes;
  pool_runner.missing = seq_runner.missing = {"t4"};
  CampaignConfig cfg = Config(70, Ids(7), dir / "seq");
  cfg.repeat_count = 3;
  CampaignResult seq = RunCampaign(cfg, seq_runner);
  cfg.workers = 4;
  cfg.artifact_dir = dir / "pool";
  CampaignResult pool = RunCampaign(cfg, pool_runner);
  REQUIRE(seq.outcomes.size() == pool.outcomes.size());
  for (std::size_t i = 0; i < seq.outcomes.size(); ++i) {
    CHECK(seq.outcomes[i].target_id == pool.outcomes[i].target_id);
    CHECK(seq.outcomes[i].repetition == pool.outcomes[i].repetition);
    CHECK(seq.outcomes[i].crash_input_paths.size() == pool.outcomes[i].crash_input_paths.size());
    CHECK(seq.outcomes[i].executions == pool.outcomes[i].executions);
  }
  REQUIRE(seq.failures.size() == 3);
  REQUIRE(pool.failures.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(seq.failures[i].repetition == pool.failures[i].repetition);
}

TEST_CASE("replay verdicts") {
  t::TempDir dir;
  MockRunner runner;
  runner.crashes["A"] = 2;
  CampaignResult r = RunCampaign(Config(10, {"A"}, dir.path()), runner);
  VerdictMap v = ReplayVerify(r.outcomes, runner, {});
  REQUIRE(v.size() == 2);
  for (const auto& [input, verdict] : v) CHECK(verdict == Verdict::kReproduced);
  CHECK(runner.replays == 2);

  runner.flaky = true;
  v = ReplayVerify(r.outcomes, runner, {});
  for (const auto& [input, verdict] : v) CHECK(verdict == Verdict::kNotReproduced);

  runner.flaky = false;
  runner.missing = {"A"};
  v = ReplayVerify(r.outcomes, runner, {});
  for (const auto& [input, verdict] : v) CHECK(verdict == Verdict::kNotReproduced);

  CHECK(ReplayVerify({}, runner, {}).empty());
  CHECK(VerdictName(Verdict::kReproduced) == "REPRODUCED");
  CHECK(VerdictName(Verdict::kNotReproduced) == "NOT_REPRODUCED");
}

TEST_CASE("index round trip") {
  t::TempDir dir;
  MockRunner runner;
  runner.crashes = {{"A", 2}, {"C", 1}};
  runner.missing = {"B"};
  CampaignConfig cfg = Config(30, {"A", "B", "C"}, dir.path());
  cfg.repeat_count = 2;
  CampaignResult r = RunCampaign(cfg, runner);
  r.failures[0].message = "tab\there\nand newline";
  VerdictMap v = ReplayVerify(r.outcomes, runner, {});
  v.begin()->second = Verdict::kNotReproduced;
  WriteCampaignIndex(dir.path(), r, v);
  CHECK(t::ReadFile(dir / "ARTIFACTS") == "ftg-artifacts v1\n");

  CampaignIndex back = ReadCampaignIndex(dir.path());
  CHECK(back.verdicts == v);
  REQUIRE(back.result.outcomes.size() == r.outcomes.size());
  for (std::size_t i = 0; i < r.outcomes.size(); ++i) {
    const RunOutcome& a = r.outcomes[i];
    const RunOutcome& b = back.result.outcomes[i];
    CHECK(a.target_id == b.target_id);
    CHECK(a.repetition == b.repetition);
    CHECK(a.executions == b.executions);
    CHECK(a.wall_time == doctest::Approx(b.wall_time).epsilon(1e-3));
    CHECK(a.crash_input_paths == b.crash_input_paths);
    CHECK(a.sanitizer_logs == b.sanitizer_logs);
  }
  REQUIRE(back.result.failures.size() == 2);
  CHECK(back.result.failures[0].code == ErrorCode::kRunnerUnavailable);
  CHECK(back.result.failures[0].target_id == "B");
  CHECK(back.result.failures[1].repetition == 1);

  CHECK_THROWS_AS(ReadCampaignIndex(dir / "nowhere"), Error);
  t::WriteFile(dir / "ARTIFACTS", "something else\n");
  CHECK_THROWS_AS(ReadCampaignIndex(dir.path()), Error);
}

TEST_CASE("symbolizer lookup") {
  std::string found = FindSymbolizer();
  if (!found.empty()) {
    CHECK(fs::path(found).is_absolute());
    std::string name = fs::path(found).filename().string();
    CHECK((name.find("llvm-symbolizer") == 0 || name == "addr2line"));
  }
}
