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

#ifndef FTG_ERROR_HPP_
#define FTG_ERROR_HPP_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ftg {

// Every failure the library reports through exceptions carries one of these.
enum class ErrorCode {
  // c_model
  kUnbalancedDelimiters,
  kDuplicateDefinition,
  kUnresolvedName,
  kAliasCycle,
  // abi
  kUnsupportedType,
  kInvalidAbi,
  // directives
  kMalformedDirective,
  kUnknownParam,
  kMultipleArrays,
  kConflictingRoles,
  kNonPointerArrayData,
  kNonIntegerArrayLen,
  kUnserializableParam,
  kInvalidOutputParam,
  kVoidReturnCleanup,
  kMissingFuzzTest,
  // layout / codegen
  kZeroSizeElement,
  kEmitFailure,
  kMalformedManifest,
  // campaign / report
  kInvalidConfig,
  kRunnerUnavailable,
  kDiskFull,
  kNoTokenFound,
  kUnrecognizedLog,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

// Inverse of ErrorCodeName.
std::optional<ErrorCode> ParseErrorCode(std::string_view name);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ftg

#endif  // FTG_ERROR_HPP_
