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

#ifndef FTG_CODEGEN_HPP_
#define FTG_CODEGEN_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ftg/abi.hpp"
#include "ftg/c_model.hpp"
#include "ftg/directives.hpp"
#include "ftg/layout.hpp"

namespace ftg {

inline constexpr std::string_view kEntryPoint = "LLVMFuzzerTestOneInput";

struct CodegenOptions {
  // Header paths ("foo.h", "<foo.h>") or complete "#include ..." lines.
  std::vector<std::string> include_lines;
  // Copy the array tail into storage aligned for the element type instead of
  // pointing into the fuzzer's buffer.
  bool aligned_array_copy = true;
  // Return early when the input is shorter than min_input_size.
  bool emit_size_guard = true;
  // Disambiguates several targets for one function; becomes part of the id.
  int ordinal = 0;
};

struct GeneratedTarget {
  std::string target_id;
  std::string file_name;
  std::string source_text;
  std::uint64_t min_input_size = 0;
  std::string function_name;
  Origin origin = Origin::kAnnotated;
  // Parameter names by position, for the manifest's slot table.
  std::vector<std::string> param_names;
};

std::string TargetId(const std::string& function_name, int ordinal);

// Emits one libFuzzer harness. Throws Error(kEmitFailure) if `plan` does not
// describe `f`.
GeneratedTarget GenerateTarget(const SourceModel& model, const AbiModel& abi,
                               const AnnotatedFunction& f, const LayoutPlan& plan,
                               const CodegenOptions& opts);

// ---------------------------------------------------------------------------
// Manifest ("ftg-manifest v1"): a line-oriented description of every
// generated target so that build systems and corpus authors need not parse
// the harness sources.
//
//   ftg-manifest v1
//   targets <count>
//   target <target_id>
//     source <file name>
//     function <name>
//     origin ANNOTATED|AUTO
//     min_input_size <bytes>
//     fixed_size <bytes>
//     slot <param> <offset> <length> <C type...>
//     array <data param> <length param> <element size> <C type...>
//   end
//
// Records are sorted by target_id. Lines starting with '#' are comments.

inline constexpr std::string_view kManifestHeader = "ftg-manifest v1";

struct ManifestSlot {
  std::string param;
  std::uint64_t offset = 0;
  std::uint64_t length = 0;
  std::string type;
  friend bool operator==(const ManifestSlot&, const ManifestSlot&) = default;
};

struct ManifestArray {
  std::string data_param;
  std::string len_param;
  std::uint64_t element_size = 0;
  std::string element_type;
  friend bool operator==(const ManifestArray&, const ManifestArray&) = default;
};

struct ManifestEntry {
  std::string target_id;
  std::string source;
  std::string function;
  Origin origin = Origin::kAnnotated;
  std::uint64_t min_input_size = 0;
  std::uint64_t fixed_size = 0;
  std::vector<ManifestSlot> slots;
  std::optional<ManifestArray> array;
  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

ManifestEntry MakeManifestEntry(const GeneratedTarget& target, const LayoutPlan& plan);

// `targets` and `plans` are parallel lists.
std::string GenerateManifest(const std::vector<GeneratedTarget>& targets,
                             const std::vector<LayoutPlan>& plans);

std::string RenderManifest(std::vector<ManifestEntry> entries);

// Throws Error(kMalformedManifest).
std::vector<ManifestEntry> ParseManifest(std::string_view text);

}  // namespace ftg

#endif  // FTG_CODEGEN_HPP_
