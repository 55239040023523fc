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

#ifndef FTG_DIAGNOSTICS_HPP_
#define FTG_DIAGNOSTICS_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace ftg {

enum class DiagLevel { kNote, kWarning, kError };

struct Diagnostic {
  std::string file;
  int line = 0;
  DiagLevel level = DiagLevel::kWarning;
  std::string message;
};

// Renders `file:line: level: message`.
std::string FormatDiagnostic(const Diagnostic& diag);

class Diagnostics {
 public:
  void Add(Diagnostic diag) { items_.push_back(std::move(diag)); }
  void Note(std::string file, int line, std::string message);
  void Warning(std::string file, int line, std::string message);
  void Error(std::string file, int line, std::string message);

  const std::vector<Diagnostic>& items() const { return items_; }
  bool has_errors() const;
  void Append(const Diagnostics& other);
  void Print(std::ostream& out) const;

 private:
  std::vector<Diagnostic> items_;
};

}  // namespace ftg

#endif  // FTG_DIAGNOSTICS_HPP_
