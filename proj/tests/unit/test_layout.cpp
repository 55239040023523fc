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

#include <random>

#include "doctest.h"
#include "ftg/error.hpp"
#include "ftg/layout.hpp"
#include "test_support.hpp"

using namespace ftg;
namespace t = ftg::testing;

namespace {

struct Planned {
  SourceModel model;
  AnnotatedFunction fn;
  LayoutPlan plan;
};

Planned PlanFor(const std::string& text, const std::string& name, const AbiModel& abi = Lp64()) {
  Planned p;
  p.model = ParseTranslationUnit(text, "t.h").model;
  const FunctionSignature* sig = p.model.FindFunction(name);
  REQUIRE(sig);
  p.fn = Bind(p.model, *sig, ExtractDirectives(sig->comment_block));
  p.plan = PlanLayout(p.model, abi, p.fn);
  return p;
}

void CheckInvariants(const Planned& p, const AbiModel& abi) {
  const LayoutPlan& plan = p.plan;
  std::uint64_t cursor = 0;
  std::size_t serialized = 0;
  for (const auto& param : p.fn.signature.params) {
    if (p.fn.RoleOf(param.position).kind == RoleKind::kSerialized) ++serialized;
  }
  REQUIRE(plan.slots.size() == serialized);
  int last_position = -1;
  for (const auto& slot : plan.slots) {
    CHECK(slot.offset == cursor);  // packed, no gaps, no overlap
    CHECK(slot.length == SizeOf(p.model, abi, slot.target_type));
    CHECK(slot.length > 0);
    CHECK(slot.param_position > last_position);  // declaration order
    CHECK(p.fn.RoleOf(slot.param_position).kind == RoleKind::kSerialized);
    last_position = slot.param_position;
    cursor += slot.length;
  }
  CHECK(plan.fixed_size == cursor);
  CHECK(plan.min_input_size == plan.fixed_size);
  if (plan.array) {
    const std::uint64_t e = plan.array->element_size;
    REQUIRE(e > 0);
    CHECK(p.fn.RoleOf(plan.array->data_param_position).kind == RoleKind::kArrayData);
    CHECK(p.fn.RoleOf(plan.array->len_param_position).kind == RoleKind::kArrayLen);
    for (std::uint64_t extra = 0; extra < 4 * e + 3; ++extra) {
      std::uint64_t s = plan.fixed_size + extra;
      std::uint64_t n = plan.ElementCount(s);
      CHECK(n * e <= s - plan.fixed_size);
      CHECK(s - plan.fixed_size < (n + 1) * e);
    }
  } else {
    CHECK(plan.ElementCount(plan.fixed_size + 100) == 0);
  }
  CHECK(plan.ElementCount(0) == 0);
}

}  // namespace

TEST_CASE("func1(int, char, struct Foo) packs to 17 bytes") {
  Planned p = PlanFor(t::ReadFile(t::DataDir() / "foo_packed.h"), "func1");
  REQUIRE(p.plan.slots.size() == 3);
  CHECK(p.plan.slots[0].offset == 0);
  CHECK(p.plan.slots[0].length == 4);
  CHECK(p.plan.slots[1].offset == 4);
  CHECK(p.plan.slots[1].length == 1);
  CHECK(p.plan.slots[2].offset == 5);
  CHECK(p.plan.slots[2].length == 12);
  CHECK(p.plan.fixed_size == 17);
  CHECK(p.plan.min_input_size == 17);
  CHECK_FALSE(p.plan.array);
}

TEST_CASE("func1(int, int, struct Foo) packs to 20 bytes") {
  Planned p = PlanFor(t::ReadFile(t::DataDir() / "foo_unterminated.c"), "func1");
  CHECK(p.plan.slots[1].length == 4);
  CHECK(p.plan.fixed_size == 20);
}

TEST_CASE("func2 array region") {
  Planned p = PlanFor(t::ReadFile(t::DataDir() / "foo_packed.h"), "func2");
  CHECK(p.plan.slots.empty());
  CHECK(p.plan.fixed_size == 0);
  CHECK(p.plan.min_input_size == 0);
  REQUIRE(p.plan.array);
  CHECK(p.plan.array->element_size == 4);
  CHECK(p.plan.ElementCount(12) == 3);
  CHECK(p.plan.ElementCount(15) == 3);
  CHECK(p.plan.ElementCount(3) == 0);
}

TEST_CASE("FIXED consumes no bytes") {
  Planned p = PlanFor("//@fuzztest Value(a, 7)\nvoid g(int a, int b);", "g");
  REQUIRE(p.plan.slots.size() == 1);
  CHECK(p.plan.slots[0].param_position == 1);
  CHECK(p.plan.slots[0].offset == 0);
  CHECK(p.plan.fixed_size == 4);
}

TEST_CASE("array after fixed slots starts at fixed_size") {
  Planned p = PlanFor("//@fuzztest Array(buf, n)\nint h(short tag, double *buf, size_t n, char c);",
                      "h");
  CHECK(p.plan.fixed_size == 3);
  REQUIRE(p.plan.array);
  CHECK(p.plan.array->element_size == 8);
  CHECK(p.plan.ElementCount(3 + 16 + 7) == 2);
  CHECK(p.plan.ElementCount(2) == 0);
}

TEST_CASE("ILP32 changes slot lengths") {
  Planned p = PlanFor("//@fuzztest\nvoid k(long a, unsigned long b, int c);", "k", Ilp32());
  CHECK(p.plan.fixed_size == 12);
  Planned q = PlanFor("//@fuzztest\nvoid k(long a, unsigned long b, int c);", "k", Lp64());
  CHECK(q.plan.fixed_size == 20);
}

TEST_CASE("void array elements are rejected") {
  try {
    PlanFor("//@fuzztest Array(p, n)\nvoid v(void *p, int n);", "v");
    FAIL("expected ZeroSizeElement");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kZeroSizeElement);
  }
}

TEST_CASE("property: tiling, accounting and length accuracy over random signatures") {
  std::mt19937_64 rng(1234);
  for (const AbiModel& abi : {Lp64(), Ilp32()}) {
    t::RandomApiOptions opts;
    opts.function_count = 300;
    t::RandomApi api = t::GenerateRandomApi(rng, opts, "l");
    SourceModel model = ParseTranslationUnit(api.header, "r.h").model;
    for (const auto& name : api.functions) {
      Planned p;
      p.model = model;
      const FunctionSignature* sig = model.FindFunction(name);
      REQUIRE(sig);
      p.fn = Bind(model, *sig, ExtractDirectives(sig->comment_block));
      p.plan = PlanLayout(model, abi, p.fn);
      CheckInvariants(p, abi);
    }
  }
}

TEST_CASE("property: turning a SERIALIZED param FIXED or OUTPUT never grows fixed_size") {
  std::mt19937_64 rng(42);
  t::RandomApiOptions opts;
  opts.function_count = 150;
  opts.array_chance = 0.2;
  opts.output_chance = 0;
  opts.value_chance = 0;
  t::RandomApi api = t::GenerateRandomApi(rng, opts, "m");
  SourceModel model = ParseTranslationUnit(api.header, "r.h").model;
  for (const auto& name : api.functions) {
    const FunctionSignature* sig = model.FindFunction(name);
    AnnotatedFunction f = Bind(model, *sig, ExtractDirectives(sig->comment_block));
    std::uint64_t before = PlanLayout(model, Lp64(), f).fixed_size;
    for (auto& [pos, role] : f.roles) {
      if (role.kind != RoleKind::kSerialized) continue;
      std::uint64_t len = SizeOf(model, Lp64(), sig->params[pos].type);
      role = {RoleKind::kFixed, "0"};
      std::uint64_t after = PlanLayout(model, Lp64(), f).fixed_size;
      CHECK(after == before - len);
      before = after;
    }
  }
}
