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

#include "ftg/codegen.hpp"

#include <cctype>
#include <filesystem>
#include <set>
#include <sstream>

#include "ftg/error.hpp"

namespace ftg {
namespace {

[[noreturn]] void EmitFail(const AnnotatedFunction& f, const std::string& why) {
  throw Error(ErrorCode::kEmitFailure, f.signature.name + ": " + why);
}

// Hands out identifiers for harness locals that cannot collide with
// parameter names or with names used by directive text.
class NamePool {
 public:
  void Reserve(const std::string& name) { taken_.insert(name); }

  void ReserveIdentifiersIn(std::string_view text) {
    std::size_t i = 0;
    while (i < text.size()) {
      char c = text[i];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t j = i;
        while (j < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) {
          ++j;
        }
        taken_.insert(std::string(text.substr(i, j - i)));
        i = j;
      } else {
        ++i;
      }
    }
  }

  std::string Take(const std::string& base) {
    std::string name = base;
    for (int n = 1; taken_.count(name); ++n) name = base + "_" + std::to_string(n);
    taken_.insert(name);
    return name;
  }

 private:
  std::set<std::string> taken_;
};

std::string IncludeLine(const std::string& line) {
  if (line.rfind("#include", 0) == 0) return line;
  if (!line.empty() && (line[0] == '<' || line[0] == '"')) return "#include " + line;
  return "#include \"" + line + "\"";
}

// "char *" + "ret" -> "char *ret"; "int" + "x" -> "int x".
std::string DeclareSpelled(const std::string& spelling, const std::string& name) {
  if (!spelling.empty() && spelling.back() == '*') return spelling + name;
  return spelling + " " + name;
}

void CheckPlanMatches(const AnnotatedFunction& f, const LayoutPlan& plan) {
  std::size_t slot = 0;
  std::uint64_t offset = 0;
  int data_pos = -1, len_pos = -1;
  for (const auto& p : f.signature.params) {
    auto role = f.roles.find(p.position);
    if (role == f.roles.end()) EmitFail(f, "parameter '" + p.name + "' has no role");
    switch (role->second.kind) {
      case RoleKind::kSerialized:
        if (slot >= plan.slots.size() || plan.slots[slot].param_position != p.position ||
            plan.slots[slot].offset != offset) {
          EmitFail(f, "layout plan does not match parameter '" + p.name + "'");
        }
        offset += plan.slots[slot].length;
        ++slot;
        break;
      case RoleKind::kArrayData:
        data_pos = p.position;
        break;
      case RoleKind::kArrayLen:
        len_pos = p.position;
        break;
      default:
        break;
    }
  }
  if (slot != plan.slots.size() || offset != plan.fixed_size ||
      plan.min_input_size != plan.fixed_size) {
    EmitFail(f, "layout plan slot table is inconsistent");
  }
  bool has_pair = data_pos >= 0 && len_pos >= 0;
  if (has_pair != plan.array.has_value() ||
      (plan.array && (plan.array->data_param_position != data_pos ||
                      plan.array->len_param_position != len_pos))) {
    EmitFail(f, "layout plan array region does not match the Array directive");
  }
}

}  // namespace

std::string TargetId(const std::string& function_name, int ordinal) {
  if (ordinal == 0) return function_name;
  return function_name + "_" + std::to_string(ordinal);
}

GeneratedTarget GenerateTarget(const SourceModel& model, const AbiModel& abi,
                               const AnnotatedFunction& f, const LayoutPlan& plan,
                               const CodegenOptions& opts) {
  CheckPlanMatches(f, plan);
  const FunctionSignature& sig = f.signature;

  GeneratedTarget target;
  target.function_name = sig.name;
  target.target_id = TargetId(sig.name, opts.ordinal);
  target.file_name =
      target.target_id + "_fuzz.c";
  target.min_input_size = plan.min_input_size;
  target.origin = f.origin;
  for (const auto& p : sig.params) target.param_names.push_back(p.name);

  NamePool names;
  names.Reserve(sig.name);
  names.Reserve(std::string(kEntryPoint));
  for (const auto& p : sig.params) names.Reserve(p.name);
  for (const auto& [pos, role] : f.roles) names.ReserveIdentifiersIn(role.value_text);
  if (f.cleanup) {
    names.ReserveIdentifiersIn(f.cleanup->condition_text);
    names.ReserveIdentifiersIn(f.cleanup->function_name);
    for (const auto& a : f.cleanup->arg_texts) names.ReserveIdentifiersIn(a);
  }
  const std::string data = names.Take("data");
  const std::string size = names.Take("size");

  bool captures_return = false;
  if (f.cleanup) {
    captures_return = MentionsIdentifier(f.cleanup->condition_text, kFuzzerReturnValue);
    for (const auto& a : f.cleanup->arg_texts) {
      captures_return |= MentionsIdentifier(a, kFuzzerReturnValue);
    }
  }

  std::ostringstream out;
  out << "// Fuzz target " << target.target_id << " for " << sig.name << "() from "
      << std::filesystem::path(sig.location.file).filename().string() << ":"
      << sig.location.line << ".\n";
  out << "// Generated by ftg (" << OriginName(f.origin) << ", abi " << abi.name
      << "); do not edit.\n";
  out << "//\n// Input layout: " << plan.fixed_size << " fixed byte(s)";
  if (plan.array) {
    out << ", then " << Spell(plan.array->element_type) << " elements ("
        << plan.array->element_size << " byte(s) each) to the end of input";
  }
  out << ".\n";
  for (const auto& slot : plan.slots) {
    const Param& p = sig.params[slot.param_position];
    out << "//   [" << slot.offset << ", " << slot.offset + slot.length << ") " << p.name << ": "
        << Spell(slot.target_type) << "\n";
  }
  if (plan.array) {
    out << "//   [" << plan.fixed_size << ", end) "
        << sig.params[plan.array->data_param_position].name << ", length passed as "
        << sig.params[plan.array->len_param_position].name << "\n";
  }
  out << "\n#include <stddef.h>\n#include <stdint.h>\n#include <stdlib.h>\n#include <string.h>\n";
  if (!opts.include_lines.empty()) {
    out << "\n";
    for (const auto& line : opts.include_lines) out << IncludeLine(line) << "\n";
  }

  // Tie the planned sizes to the compiler's view of each type.
  std::set<std::string> asserted;
  auto assert_size = [&](const TypeRef& type, std::uint64_t bytes) {
    std::string spelled = Spell(type);
    if (!asserted.insert(spelled).second) return;
    if (asserted.size() == 1) out << "\n";
    out << "_Static_assert(sizeof(" << spelled << ") == " << bytes << ", \"ftg: " << spelled
        << " is not " << bytes << " byte(s) on this target (abi " << abi.name << ")\");\n";
  };
  for (const auto& slot : plan.slots) assert_size(slot.target_type, slot.length);
  if (plan.array) assert_size(plan.array->element_type, plan.array->element_size);

  out << "\nint " << kEntryPoint << "(const uint8_t *" << data << ", size_t " << size << ") {\n";
  bool guarded = opts.emit_size_guard && plan.min_input_size > 0;
  if (guarded) {
    out << "  if (" << size << " < " << plan.min_input_size << ") {\n    return 0;\n  }\n";
  }
  bool uses_data = !plan.slots.empty() || plan.array.has_value();
  bool uses_size = guarded || plan.array.has_value();
  if (!uses_data) out << "  (void)" << data << ";\n";
  if (!uses_size) out << "  (void)" << size << ";\n";

  std::string pos;
  if (uses_data) {
    pos = names.Take("pos");
    out << "  const uint8_t *" << pos << " = " << data << ";\n";
  }

  // Fixed slots, in declaration order.
  for (std::size_t i = 0; i < plan.slots.size(); ++i) {
    const FieldSlot& slot = plan.slots[i];
    const Param& p = sig.params[slot.param_position];
    bool is_record = ClassifyType(model, p.type) == TypeClass::kStructOfBasic;
    if (is_record) {
      out << "  " << Declare(p.type, p.name) << ";\n";
      out << "  memset(&" << p.name << ", 0, sizeof(" << p.name << "));\n";
    } else {
      out << "  " << Declare(p.type, p.name) << " = 0;\n";
    }
    out << "  memcpy(&" << p.name << ", " << pos << ", sizeof(" << p.name << "));\n";
    if (i + 1 < plan.slots.size() || plan.array) {
      out << "  " << pos << " += sizeof(" << p.name << ");\n";
    }
  }

  // Output storage.
  for (const auto& p : sig.params) {
    if (f.RoleOf(p.position).kind != RoleKind::kOutput) continue;
    TypeRef pointer = ResolveShallow(model, p.type);
    const TypeRef& pointee = pointer.pointee();
    std::string storage = names.Take(p.name + "_storage");
    out << "  " << Declare(pointee, storage) << ";\n";
    out << "  memset(&" << storage << ", 0, sizeof(" << storage << "));\n";
    out << "  " << Declare(TypeRef::Pointer(pointee), p.name) << " = &" << storage << ";\n";
  }

  // Trailing array.
  std::string array_name;
  if (plan.array) {
    const Param& data_param = sig.params[plan.array->data_param_position];
    const Param& len_param = sig.params[plan.array->len_param_position];
    array_name = data_param.name;
    std::string elem = Spell(plan.array->element_type);
    TypeRef elem_ptr = TypeRef::Pointer(plan.array->element_type);
    std::string count = names.Take("count");
    if (guarded || plan.fixed_size == 0) {
      out << "  size_t " << count << " = ";
      if (plan.fixed_size == 0) {
        out << size;
      } else {
        out << "(" << size << " - " << plan.fixed_size << ")";
      }
      out << " / sizeof(" << elem << ");\n";
    } else {
      out << "  size_t " << count << " = (" << size << " > " << plan.fixed_size << " ? " << size
          << " - " << plan.fixed_size << " : 0) / sizeof(" << elem << ");\n";
    }
    if (opts.aligned_array_copy) {
      out << "  " << Declare(elem_ptr, data_param.name) << " = (" << Spell(elem_ptr) << ")malloc("
          << count << " * sizeof(" << elem << "));\n";
      out << "  if (" << data_param.name << " == NULL && " << count << " > 0) {\n"
          << "    return 0;\n  }\n";
      out << "  if (" << count << " > 0) {\n";
      out << "    memcpy(" << data_param.name << ", " << pos << ", " << count << " * sizeof("
          << elem << "));\n  }\n";
    } else {
      out << "  " << Declare(elem_ptr, data_param.name) << " = (" << Spell(elem_ptr) << ")" << pos
          << ";\n";
    }
    out << "  " << Declare(len_param.type, len_param.name) << " = (" << Spell(len_param.type)
        << ")" << count << ";\n";
  }

  // The call.
  std::string call = sig.name + "(";
  for (std::size_t i = 0; i < sig.params.size(); ++i) {
    const Param& p = sig.params[i];
    if (i) call += ", ";
    const ParamRole& role = f.RoleOf(p.position);
    call += role.kind == RoleKind::kFixed ? role.value_text : p.name;
  }
  call += ")";
  std::string ret;
  if (captures_return) {
    ret = names.Take("ret");
    out << "  " << DeclareSpelled(sig.return_spelling, ret) << " = " << call << ";\n";
  } else {
    out << "  " << call << ";\n";
  }

  if (f.cleanup) {
    auto substitute = [&](const std::string& text) {
      return captures_return ? ReplaceIdentifier(text, kFuzzerReturnValue, ret) : text;
    };
    std::string cleanup_call = f.cleanup->function_name + "(";
    for (std::size_t i = 0; i < f.cleanup->arg_texts.size(); ++i) {
      if (i) cleanup_call += ", ";
      cleanup_call += substitute(f.cleanup->arg_texts[i]);
    }
    cleanup_call += ");";
    if (f.cleanup->condition_text.empty()) {
      out << "  " << cleanup_call << "\n";
    } else {
      out << "  if (" << substitute(f.cleanup->condition_text) << ") {\n    " << cleanup_call
          << "\n  }\n";
    }
  }
  if (plan.array && opts.aligned_array_copy) out << "  free(" << array_name << ");\n";
  out << "  return 0;\n}\n";

  target.source_text = out.str();
  return target;
}

}  // namespace ftg
