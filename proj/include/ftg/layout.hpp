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

#ifndef FTG_LAYOUT_HPP_
#define FTG_LAYOUT_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "ftg/abi.hpp"
#include "ftg/c_model.hpp"
#include "ftg/directives.hpp"

namespace ftg {

// A SERIALIZED parameter's bytes within the fuzzer input.
struct FieldSlot {
  int param_position = 0;
  std::uint64_t offset = 0;
  std::uint64_t length = 0;
  TypeRef target_type = TypeRef::Basic("int");
};

// The trailing variable-length region fed to an Array pair. Its element
// count is computed from the bytes left after the fixed slots.
struct ArrayRegion {
  int data_param_position = 0;
  int len_param_position = 0;
  TypeRef element_type = TypeRef::Basic("char");
  std::uint64_t element_size = 1;
};

// Byte-exact mapping of one input buffer onto a function's parameters.
// Slots are packed back to back from offset 0 in declaration order; the
// array region, if any, starts at fixed_size and runs to the end of input.
struct LayoutPlan {
  std::vector<FieldSlot> slots;
  std::uint64_t fixed_size = 0;
  std::optional<ArrayRegion> array;
  std::uint64_t min_input_size = 0;

  // floor((input_size - fixed_size) / element_size); 0 without an array or
  // when the input is shorter than fixed_size.
  std::uint64_t ElementCount(std::uint64_t input_size) const;
};

LayoutPlan PlanLayout(const SourceModel& model, const AbiModel& abi, const AnnotatedFunction& f);

}  // namespace ftg

#endif  // FTG_LAYOUT_HPP_
