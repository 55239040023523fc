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

#ifndef FTG_PROCESS_HPP_
#define FTG_PROCESS_HPP_

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ftg {

struct ProcessOptions {
  std::vector<std::string> argv;  // argv[0] is the executable path
  // Merged over the current environment; these win.
  std::map<std::string, std::string> env;
  std::filesystem::path working_dir;  // empty: inherit
  // stdout and stderr both go here; empty discards them.
  std::filesystem::path output_file;
  std::optional<std::chrono::milliseconds> timeout;
};

struct ProcessResult {
  int exit_code = -1;  // valid when !signaled
  bool signaled = false;
  int signal = 0;
  bool timed_out = false;
  double wall_time = 0;  // seconds
};

// Runs argv in its own process group. On timeout the whole group receives
// SIGKILL. Throws Error(kRunnerUnavailable) if the child cannot exec and
// Error(kIo) if the output file cannot be opened.
ProcessResult RunProcess(const ProcessOptions& options);

bool IsExecutable(const std::filesystem::path& path);

}  // namespace ftg

#endif  // FTG_PROCESS_HPP_
