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

#include "ftg/abi.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "ftg/error.hpp"

namespace ftg {
namespace {

bool IsPowerOfTwo(std::uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

std::string Trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::uint64_t AlignUp(std::uint64_t value, std::uint64_t alignment) {
  return (value + alignment - 1) / alignment * alignment;
}

}  // namespace

void AbiModel::Validate() const {
  auto check = [&](const std::string& type, const SizeAlign& entry) {
    if (!IsPowerOfTwo(entry.size) || !IsPowerOfTwo(entry.alignment) ||
        entry.size % entry.alignment != 0) {
      throw Error(ErrorCode::kInvalidAbi, "abi '" + name + "': bad entry for '" + type + "' (" +
                                              std::to_string(entry.size) + "," +
                                              std::to_string(entry.alignment) + ")");
    }
  };
  for (const auto& type : BasicTypeNames()) {
    if (type == "void") continue;
    auto it = basic.find(type);
    if (it == basic.end()) {
      throw Error(ErrorCode::kInvalidAbi, "abi '" + name + "': missing entry for '" + type + "'");
    }
    check(type, it->second);
  }
  for (const auto& [type, entry] : basic) {
    if (!IsBasicTypeName(type) || type == "void") {
      throw Error(ErrorCode::kInvalidAbi, "abi '" + name + "': unknown type '" + type + "'");
    }
    check(type, entry);
  }
  check("pointer", pointer);
}

AbiModel Lp64() {
  AbiModel abi;
  abi.name = "lp64";
  abi.basic = {
      {"_Bool", {1, 1}},          {"char", {1, 1}},
      {"signed char", {1, 1}},    {"unsigned char", {1, 1}},
      {"short", {2, 2}},          {"unsigned short", {2, 2}},
      {"int", {4, 4}},            {"unsigned int", {4, 4}},
      {"long", {8, 8}},           {"unsigned long", {8, 8}},
      {"long long", {8, 8}},      {"unsigned long long", {8, 8}},
      {"float", {4, 4}},          {"double", {8, 8}},
  };
  abi.pointer = {8, 8};
  return abi;
}

AbiModel Ilp32() {
  AbiModel abi = Lp64();
  abi.name = "ilp32";
  abi.basic["long"] = {4, 4};
  abi.basic["unsigned long"] = {4, 4};
  abi.pointer = {4, 4};
  return abi;
}

AbiModel ParseAbiConfig(std::string_view text) {
  AbiModel abi = Lp64();
  abi.name = "custom";
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = Trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto fail = [&](const std::string& why) {
      throw Error(ErrorCode::kInvalidAbi,
                  "abi config line " + std::to_string(line_no) + ": " + why);
    };
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail("expected 'type = size,alignment'");
    std::string key = Trim(std::string_view(line).substr(0, eq));
    std::string value = Trim(std::string_view(line).substr(eq + 1));
    // Collapse internal runs of whitespace so "unsigned   long" matches.
    std::string normalized;
    for (char c : key) {
      if (std::isspace(static_cast<unsigned char>(c))) {
        if (!normalized.empty() && normalized.back() != ' ') normalized += ' ';
      } else {
        normalized += c;
      }
    }
    key = normalized;
    if (key == "name") {
      abi.name = value;
      continue;
    }
    std::size_t comma = value.find(',');
    if (comma == std::string::npos) fail("expected 'size,alignment'");
    SizeAlign entry;
    std::string size_text = Trim(std::string_view(value).substr(0, comma));
    std::string align_text = Trim(std::string_view(value).substr(comma + 1));
    auto parse = [&](const std::string& s, std::uint64_t& out) {
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
      if (ec != std::errc() || ptr != s.data() + s.size()) fail("bad number '" + s + "'");
    };
    parse(size_text, entry.size);
    parse(align_text, entry.alignment);
    if (key == "pointer") {
      abi.pointer = entry;
    } else if (IsBasicTypeName(key) && key != "void") {
      abi.basic[key] = entry;
    } else {
      fail("unknown type '" + key + "'");
    }
  }
  abi.Validate();
  return abi;
}

AbiModel LoadAbi(std::string_view name_or_path) {
  if (name_or_path.empty() || name_or_path == "lp64") return Lp64();
  if (name_or_path == "ilp32") return Ilp32();
  std::ifstream in{std::string(name_or_path)};
  if (!in) {
    throw Error(ErrorCode::kInvalidAbi,
                "unknown abi '" + std::string(name_or_path) + "' (not a builtin, not a readable file)");
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseAbiConfig(buffer.str());
}

SizeAlign SizeAlignOf(const SourceModel& model, const AbiModel& abi, const TypeRef& type) {
  TypeClass cls = ClassifyType(model, type);
  if (cls == TypeClass::kUnsupported) {
    throw Error(ErrorCode::kUnsupportedType,
                "type '" + Spell(type) + "' has no serializable size");
  }
  if (cls == TypeClass::kPointer) return abi.pointer;
  TypeRef resolved = ResolveShallow(model, type);
  if (cls == TypeClass::kBasic) {
    auto it = abi.basic.find(resolved.name());
    if (it == abi.basic.end()) {
      throw Error(ErrorCode::kInvalidAbi,
                  "abi '" + abi.name + "' has no entry for '" + resolved.name() + "'");
    }
    return it->second;
  }
  RecordLayout layout = ComputeRecordLayout(model, abi, *model.FindRecord(resolved.name()));
  return {layout.total_size, layout.alignment};
}

std::uint64_t SizeOf(const SourceModel& model, const AbiModel& abi, const TypeRef& type) {
  return SizeAlignOf(model, abi, type).size;
}

RecordLayout ComputeRecordLayout(const SourceModel& model, const AbiModel& abi,
                                 const RecordDef& record) {
  if (ClassifyType(model, TypeRef::Record(record.name)) != TypeClass::kStructOfBasic) {
    throw Error(ErrorCode::kUnsupportedType,
                "struct '" + record.name + "' does not contain only basic types");
  }
  RecordLayout layout;
  layout.record_name = record.name;
  std::uint64_t offset = 0;
  for (const auto& field : record.fields) {
    SizeAlign entry = SizeAlignOf(model, abi, field.type);
    offset = AlignUp(offset, entry.alignment);
    layout.fields.push_back({field.name, offset, entry.size});
    offset += entry.size;
    layout.alignment = std::max(layout.alignment, entry.alignment);
  }
  layout.total_size = AlignUp(offset, layout.alignment);
  return layout;
}

}  // namespace ftg
