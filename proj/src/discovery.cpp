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

#include "ftg/discovery.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "ftg/error.hpp"

namespace ftg {

std::string_view SkipReasonName(SkipReason reason) {
  switch (reason) {
    case SkipReason::kAnnotated: return "ANNOTATED";
    case SkipReason::kNoParams: return "NO_PARAMS";
    case SkipReason::kVariadic: return "VARIADIC";
    case SkipReason::kUnserializableParam: return "UNSERIALIZABLE_PARAM";
    case SkipReason::kUnresolvedType: return "UNRESOLVED_TYPE";
  }
  return "UNSERIALIZABLE_PARAM";
}

DiscoveryReport Discover(const SourceModel& model) {
  DiscoveryReport report;
  for (const auto& f : model.functions) {
    auto skip = [&](SkipReason reason, std::string detail = "") {
      report.skipped.push_back({f.name, reason, std::move(detail)});
    };
    if (HasFuzzTestDirective(f.comment_block)) {
      skip(SkipReason::kAnnotated);
      continue;
    }
    if (f.variadic) {
      skip(SkipReason::kVariadic);
      continue;
    }
    if (f.params.empty()) {
      skip(SkipReason::kNoParams);
      continue;
    }
    bool ok = true;
    for (const auto& p : f.params) {
      TypeClass cls;
      try {
        cls = ClassifyType(model, p.type);
      } catch (const Error& e) {
        skip(SkipReason::kUnresolvedType, p.name + ": " + e.what());
        ok = false;
        break;
      }
      if (cls != TypeClass::kBasic && cls != TypeClass::kStructOfBasic) {
        skip(SkipReason::kUnserializableParam,
             p.name + ": " + Spell(p.type) + " is " + std::string(TypeClassName(cls)));
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    AnnotatedFunction auto_fn;
    auto_fn.signature = f;
    auto_fn.origin = Origin::kAuto;
    for (const auto& p : f.params) auto_fn.roles[p.position] = {RoleKind::kSerialized, ""};
    report.eligible.push_back(std::move(auto_fn));
  }
  return report;
}

std::string RenderDiscoveryTable(const DiscoveryReport& report) {
  struct Row {
    std::string name, verdict, reason;
  };
  std::vector<Row> rows;
  for (const auto& f : report.eligible) rows.push_back({f.signature.name, "eligible", ""});
  for (const auto& s : report.skipped) {
    std::string reason(SkipReasonName(s.reason));
    if (!s.detail.empty()) reason += " (" + s.detail + ")";
    rows.push_back({s.function_name, "skipped", reason});
  }
  std::size_t w = 8;
  for (const auto& r : rows) w = std::max(w, r.name.size());
  std::ostringstream out;
  out << std::string("function") << std::string(w - 8 + 2, ' ') << "verdict   reason\n";
  for (const auto& r : rows) {
    out << r.name << std::string(w - r.name.size() + 2, ' ') << r.verdict
        << std::string(10 - r.verdict.size(), ' ') << r.reason << "\n";
  }
  out << report.eligible.size() << " eligible, " << report.skipped.size() << " skipped\n";
  return out.str();
}

std::string RenderDiscoveryListing(const SourceModel& model, const DiscoveryReport& report) {
  std::map<std::string, std::string> verdicts;
  for (const auto& f : report.eligible) verdicts[f.signature.name] = "ELIGIBLE\t-";
  for (const auto& s : report.skipped) {
    verdicts[s.function_name] = "SKIPPED\t" + std::string(SkipReasonName(s.reason));
  }
  std::ostringstream out;
  for (const auto& f : model.functions) {
    auto it = verdicts.find(f.name);
    if (it != verdicts.end()) out << f.name << "\t" << it->second << "\n";
  }
  return out.str();
}

}  // namespace ftg
