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

#ifndef FTG_DISCOVERY_HPP_
#define FTG_DISCOVERY_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "ftg/c_model.hpp"
#include "ftg/directives.hpp"

namespace ftg {

enum class SkipReason {
  kAnnotated,            // has an @fuzztest block; handled by the annotated pipeline
  kNoParams,
  kVariadic,
  kUnserializableParam,  // pointer, void or non-basic struct parameter
  kUnresolvedType,       // parameter type not defined in the parsed sources
};

std::string_view SkipReasonName(SkipReason reason);

struct SkippedFunction {
  std::string function_name;
  SkipReason reason;
  std::string detail;
};

struct DiscoveryReport {
  std::vector<AnnotatedFunction> eligible;  // origin AUTO, all SERIALIZED, no cleanup
  std::vector<SkippedFunction> skipped;
};

// Selects every function whose parameters all serialize without directives.
// Both lists keep source declaration order.
DiscoveryReport Discover(const SourceModel& model);

// Aligned human-readable table.
std::string RenderDiscoveryTable(const DiscoveryReport& report);

// One line per function: "<name>\t<ELIGIBLE|SKIPPED>\t<reason or ->".
std::string RenderDiscoveryListing(const SourceModel& model, const DiscoveryReport& report);

}  // namespace ftg

#endif  // FTG_DISCOVERY_HPP_
