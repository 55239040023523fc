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

#ifndef FTG_DIRECTIVES_HPP_
#define FTG_DIRECTIVES_HPP_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ftg/c_model.hpp"

namespace ftg {

// Special name usable inside Cleanup arguments and conditions.
inline constexpr std::string_view kFuzzerReturnValue = "fuzzer_return_value";

struct FuzzTestDirective {
  friend bool operator==(const FuzzTestDirective&, const FuzzTestDirective&) = default;
};

struct ArrayDirective {
  std::string ptr_param;
  std::string len_param;
  friend bool operator==(const ArrayDirective&, const ArrayDirective&) = default;
};

struct ValueDirective {
  std::string param;
  std::string value_text;
  friend bool operator==(const ValueDirective&, const ValueDirective&) = default;
};

struct OutputDirective {
  std::string param;
  friend bool operator==(const OutputDirective&, const OutputDirective&) = default;
};

struct CleanupDirective {
  std::string condition_text;  // empty: always run
  std::string function_name;
  std::vector<std::string> arg_texts;
  friend bool operator==(const CleanupDirective&, const CleanupDirective&) = default;
};

using Directive = std::variant<FuzzTestDirective, ArrayDirective, ValueDirective,
                               OutputDirective, CleanupDirective>;

std::string DescribeDirective(const Directive& d);

// Parses the @fuzztest grammar out of a raw comment block. Returns an empty
// list when the block has no @fuzztest token. Throws
// Error(kMalformedDirective) with a "line L, column C" position relative to
// the block.
std::vector<Directive> ExtractDirectives(std::string_view comment_block);

bool HasFuzzTestDirective(std::string_view comment_block);

enum class RoleKind { kSerialized, kArrayData, kArrayLen, kFixed, kOutput };

struct ParamRole {
  RoleKind kind = RoleKind::kSerialized;
  std::string value_text;  // kFixed only
  friend bool operator==(const ParamRole&, const ParamRole&) = default;
};

std::string_view RoleKindName(RoleKind kind);

enum class Origin { kAnnotated, kAuto };

std::string_view OriginName(Origin origin);

struct AnnotatedFunction {
  FunctionSignature signature;
  std::map<int, ParamRole> roles;  // keyed by parameter position
  std::optional<CleanupDirective> cleanup;
  Origin origin = Origin::kAnnotated;

  const ParamRole& RoleOf(int position) const { return roles.at(position); }
};

// Binds directives to parameters and validates the result. Every parameter
// defaults to SERIALIZED. Throws ftg::Error on the first violation; never
// returns a partially bound function.
AnnotatedFunction Bind(const SourceModel& model, const FunctionSignature& signature,
                       const std::vector<Directive>& directives);

// True if `text` mentions `identifier` as a whole C identifier.
bool MentionsIdentifier(std::string_view text, std::string_view identifier);

// Replaces whole-identifier occurrences of `from` with `to`.
std::string ReplaceIdentifier(std::string_view text, std::string_view from, std::string_view to);

}  // namespace ftg

#endif  // FTG_DIRECTIVES_HPP_
