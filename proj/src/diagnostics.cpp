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

#include "ftg/diagnostics.hpp"

#include <algorithm>

#include "ftg/error.hpp"

namespace ftg {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnbalancedDelimiters: return "UnbalancedDelimiters";
    case ErrorCode::kDuplicateDefinition: return "DuplicateDefinition";
    case ErrorCode::kUnresolvedName: return "UnresolvedName";
    case ErrorCode::kAliasCycle: return "AliasCycle";
    case ErrorCode::kUnsupportedType: return "UnsupportedType";
    case ErrorCode::kInvalidAbi: return "InvalidAbi";
    case ErrorCode::kMalformedDirective: return "MalformedDirective";
    case ErrorCode::kUnknownParam: return "UnknownParam";
    case ErrorCode::kMultipleArrays: return "MultipleArrays";
    case ErrorCode::kConflictingRoles: return "ConflictingRoles";
    case ErrorCode::kNonPointerArrayData: return "NonPointerArrayData";
    case ErrorCode::kNonIntegerArrayLen: return "NonIntegerArrayLen";
    case ErrorCode::kUnserializableParam: return "UnserializableParam";
    case ErrorCode::kInvalidOutputParam: return "InvalidOutputParam";
    case ErrorCode::kVoidReturnCleanup: return "VoidReturnCleanup";
    case ErrorCode::kMissingFuzzTest: return "MissingFuzzTest";
    case ErrorCode::kZeroSizeElement: return "ZeroSizeElement";
    case ErrorCode::kEmitFailure: return "EmitFailure";
    case ErrorCode::kMalformedManifest: return "MalformedManifest";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kRunnerUnavailable: return "RunnerUnavailable";
    case ErrorCode::kDiskFull: return "DiskFull";
    case ErrorCode::kNoTokenFound: return "NoTokenFound";
    case ErrorCode::kUnrecognizedLog: return "UnrecognizedLog";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

std::optional<ErrorCode> ParseErrorCode(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(ErrorCode::kIo); ++i) {
    auto code = static_cast<ErrorCode>(i);
    if (ErrorCodeName(code) == name) return code;
  }
  return std::nullopt;
}

std::string FormatDiagnostic(const Diagnostic& diag) {
  std::string_view level = "note";
  if (diag.level == DiagLevel::kWarning) level = "warning";
  if (diag.level == DiagLevel::kError) level = "error";
  std::string out = diag.file;
  out += ':';
  out += std::to_string(diag.line);
  out += ": ";
  out += level;
  out += ": ";
  out += diag.message;
  return out;
}

void Diagnostics::Note(std::string file, int line, std::string message) {
  Add({std::move(file), line, DiagLevel::kNote, std::move(message)});
}

void Diagnostics::Warning(std::string file, int line, std::string message) {
  Add({std::move(file), line, DiagLevel::kWarning, std::move(message)});
}

void Diagnostics::Error(std::string file, int line, std::string message) {
  Add({std::move(file), line, DiagLevel::kError, std::move(message)});
}

bool Diagnostics::has_errors() const {
  return std::any_of(items_.begin(), items_.end(), [](const Diagnostic& d) {
    return d.level == DiagLevel::kError;
  });
}

void Diagnostics::Append(const Diagnostics& other) {
  items_.insert(items_.end(), other.items_.begin(), other.items_.end());
}

void Diagnostics::Print(std::ostream& out) const {
  for (const auto& d : items_) out << FormatDiagnostic(d) << '\n';
}

}  // namespace ftg
