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

#ifndef FTG_ABI_HPP_
#define FTG_ABI_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ftg/c_model.hpp"

namespace ftg {

struct SizeAlign {
  std::uint64_t size = 0;
  std::uint64_t alignment = 1;
  friend bool operator==(const SizeAlign&, const SizeAlign&) = default;
};

// Sizes and alignments of the object-language basic types. Every basic type
// name except void must be present.
struct AbiModel {
  std::string name;
  std::map<std::string, SizeAlign> basic;
  SizeAlign pointer;

  // Throws Error(kInvalidAbi) if a table entry is missing, not a power of
  // two, or its size is not a multiple of its alignment.
  void Validate() const;
};

// x86-64 System V natural alignment.
AbiModel Lp64();
// 32-bit natural alignment (i386 System V rules, but with 8-byte alignment
// for long long and double as on most 32-bit ARM targets).
AbiModel Ilp32();

// Parses a `type = size,alignment` config. Lines may be blank or start with
// '#'. The special key `name` sets the ABI name, `pointer` the pointer
// entry. Unlisted types inherit from LP64.
AbiModel ParseAbiConfig(std::string_view text);

// Accepts "lp64", "ilp32" or a path to a config file.
AbiModel LoadAbi(std::string_view name_or_path);

struct FieldLayout {
  std::string name;
  std::uint64_t offset = 0;
  std::uint64_t size = 0;
};

struct RecordLayout {
  std::string record_name;
  std::vector<FieldLayout> fields;
  std::uint64_t total_size = 0;
  std::uint64_t alignment = 1;
};

// Natural-alignment layout. Throws Error(kUnsupportedType) unless the record
// classifies STRUCT_OF_BASIC.
RecordLayout ComputeRecordLayout(const SourceModel& model, const AbiModel& abi,
                                 const RecordDef& record);

SizeAlign SizeAlignOf(const SourceModel& model, const AbiModel& abi, const TypeRef& type);

// Throws Error(kUnsupportedType) for UNSUPPORTED classes.
std::uint64_t SizeOf(const SourceModel& model, const AbiModel& abi, const TypeRef& type);

}  // namespace ftg

#endif  // FTG_ABI_HPP_
