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

#include "ftg/layout.hpp"

#include "ftg/error.hpp"

namespace ftg {

std::uint64_t LayoutPlan::ElementCount(std::uint64_t input_size) const {
  if (!array || input_size < fixed_size) return 0;
  return (input_size - fixed_size) / array->element_size;
}

LayoutPlan PlanLayout(const SourceModel& model, const AbiModel& abi, const AnnotatedFunction& f) {
  LayoutPlan plan;
  std::optional<int> data_pos;
  std::optional<int> len_pos;
  for (const auto& p : f.signature.params) {
    auto role = f.roles.find(p.position);
    if (role == f.roles.end()) {
      throw Error(ErrorCode::kEmitFailure,
                  f.signature.name + ": parameter '" + p.name + "' has no role");
    }
    switch (role->second.kind) {
      case RoleKind::kSerialized: {
        TypeClass cls = ClassifyType(model, p.type);
        if (cls != TypeClass::kBasic && cls != TypeClass::kStructOfBasic) {
          throw Error(ErrorCode::kUnsupportedType,
                      f.signature.name + ": parameter '" + p.name + "' of type '" +
                          Spell(p.type) + "' cannot be serialized");
        }
        std::uint64_t length = SizeOf(model, abi, p.type);
        plan.slots.push_back({p.position, plan.fixed_size, length, p.type});
        plan.fixed_size += length;
        break;
      }
      case RoleKind::kArrayData:
        data_pos = p.position;
        break;
      case RoleKind::kArrayLen:
        len_pos = p.position;
        break;
      case RoleKind::kFixed:
      case RoleKind::kOutput:
        break;
    }
  }
  if (data_pos.has_value() != len_pos.has_value()) {
    throw Error(ErrorCode::kEmitFailure, f.signature.name + ": incomplete Array pair");
  }
  if (data_pos) {
    const Param& data = f.signature.params[*data_pos];
    TypeRef pointer = ResolveShallow(model, data.type);
    if (!pointer.is_pointer()) {
      throw Error(ErrorCode::kUnsupportedType,
                  f.signature.name + ": array parameter '" + data.name + "' is not a pointer");
    }
    const TypeRef& element = pointer.pointee();
    TypeRef resolved = ResolveShallow(model, element);
    if (resolved.kind() == TypeKind::kBasic && resolved.name() == "void") {
      throw Error(ErrorCode::kZeroSizeElement,
                  f.signature.name + ": array '" + data.name + "' has void elements");
    }
    if (ClassifyType(model, element) != TypeClass::kBasic) {
      throw Error(ErrorCode::kUnsupportedType,
                  f.signature.name + ": array '" + data.name + "' elements of type '" +
                      Spell(element) + "' are not a basic type");
    }
    std::uint64_t element_size = SizeOf(model, abi, element);
    if (element_size == 0) {
      throw Error(ErrorCode::kZeroSizeElement,
                  f.signature.name + ": array '" + data.name + "' has zero-size elements");
    }
    plan.array = ArrayRegion{*data_pos, *len_pos, element, element_size};
  }
  plan.min_input_size = plan.fixed_size;
  return plan;
}

}  // namespace ftg
