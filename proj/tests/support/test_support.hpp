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

// Helpers shared by the unit and acceptance suites.

#ifndef FTG_TESTS_SUPPORT_TEST_SUPPORT_HPP_
#define FTG_TESTS_SUPPORT_TEST_SUPPORT_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "ftg/abi.hpp"
#include "ftg/codegen.hpp"
#include "ftg/c_model.hpp"
#include "ftg/directives.hpp"
#include "ftg/layout.hpp"

namespace ftg::testing {

std::filesystem::path DataDir();
std::filesystem::path GoldenDir();

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, const std::string& text);

struct CommandResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr
};

CommandResult RunShell(const std::string& command);
std::string ShellQuote(const std::string& s);

// C compiler used by oracle tests; empty if none was found at configure time.
std::string CCompiler();
// clang with libFuzzer support, or empty.
std::string FuzzCompiler();

// Compiles and links `sources` into `output`. Returns the compiler output;
// exit_code 0 on success.
CommandResult CompileC(const std::vector<std::filesystem::path>& sources,
                       const std::filesystem::path& output, const std::string& flags,
                       const std::vector<std::filesystem::path>& include_dirs = {});

// ---------------------------------------------------------------------------
// Random APIs

struct RandomApiOptions {
  int function_count = 10;
  int max_params = 6;
  int max_fields = 6;
  double struct_param_chance = 0.3;
  double array_chance = 0.35;
  double output_chance = 0.2;
  double value_chance = 0.15;
};

struct RandomApi {
  std::string header;  // self-contained C header
  std::vector<std::string> functions;
  std::vector<std::string> records;
};

// Annotated declarations drawn from the basic types, structs of basic
// types, one optional Array pair, Output pointers and fixed Values.
RandomApi GenerateRandomApi(std::mt19937_64& rng, const RandomApiOptions& options,
                            const std::string& prefix = "r");

// Basic type spellings the generator draws from, all valid in C with
// <stdint.h> and <stddef.h>.
const std::vector<std::string>& RandomBasicTypes();

// ---------------------------------------------------------------------------
// Recording stubs
//
// A stub file defines every function of `model` that the harness may call
// (the target and any cleanup function found in the model). The target
// prints one line per call:
//   call <function>
//   arg <param> <hex bytes>      SERIALIZED and OUTPUT pointee bytes
//   array <param> <count> <hex>  ARRAY_DATA, count taken from the length
//   fixed <param>                FIXED parameters
// and cleanup functions print "cleanup <function>". The driver reads one
// input file, calls LLVMFuzzerTestOneInput once and prints "calls <n>".
std::string EmitRecordingStub(const SourceModel& model, const AbiModel& abi,
                              const AnnotatedFunction& f);
std::string StubDriverSource();

struct StubTrace {
  int calls = 0;
  std::vector<std::string> lines;  // everything except the calls line
};

StubTrace ParseStubTrace(const std::string& output);

std::string Hex(const std::uint8_t* data, std::size_t size);

// ---------------------------------------------------------------------------
// Harness cases: one annotated function taken through bind, plan and
// generate, ready to compile.

struct HarnessCase {
  std::string label;
  std::filesystem::path header;
  SourceModel model;
  AnnotatedFunction fn;
  LayoutPlan plan;
  GeneratedTarget target;
};

HarnessCase MakeCase(const std::filesystem::path& header, const std::string& function,
                     const CodegenOptions& options = {}, const AbiModel& abi = Lp64());

// Every annotated function in the test corpus (basic examples,
// directive examples, seeded library).
std::vector<HarnessCase> CorpusCases();

// Shape checks: one entry point with libFuzzer's prototype,
// one call to the target outside comments, one memcpy per slot in slot
// order, a size guard when min_input_size > 0. Returns problems found.
std::vector<std::string> StructuralProblems(const HarnessCase& c);

// Compiles the harness against its header with `flags`.
CommandResult CompileHarness(const HarnessCase& c, const std::filesystem::path& dir,
                             const std::string& flags);

// Links harness + recording stub + driver into dir/<target_id>-stub.
CommandResult BuildStubbed(const HarnessCase& c, const std::filesystem::path& dir,
                           std::filesystem::path* exe);

StubTrace RunStubbed(const std::filesystem::path& exe, const std::vector<std::uint8_t>& input,
                     const std::filesystem::path& scratch);

// ---------------------------------------------------------------------------
// Compiler probe: sizes, alignments and field offsets as the C compiler
// sees them.

struct ProbedLayout {
  std::uint64_t size = 0;
  std::uint64_t alignment = 0;
  std::vector<std::uint64_t> offsets;  // records only
};

struct ProbeResult {
  bool ok = false;
  std::string log;
  // Keyed by C spelling: "int", "struct Foo".
  std::map<std::string, ProbedLayout> layouts;
};

// Builds and runs a program that includes `header` and prints the layout of
// every complete record in `model` plus every basic type. `flags` is passed
// to the compiler (e.g. "-m32").
ProbeResult ProbeLayouts(const SourceModel& model, const std::filesystem::path& header,
                         const std::string& flags = "");

}  // namespace ftg::testing

#endif  // FTG_TESTS_SUPPORT_TEST_SUPPORT_HPP_
