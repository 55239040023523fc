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

#include <algorithm>
#include <charconv>
#include <sstream>

#include "ftg/codegen.hpp"
#include "ftg/error.hpp"

namespace ftg {

ManifestEntry MakeManifestEntry(const GeneratedTarget& target, const LayoutPlan& plan) {
  ManifestEntry entry;
  entry.target_id = target.target_id;
  entry.source = target.file_name;
  entry.function = target.function_name;
  entry.origin = target.origin;
  entry.min_input_size = plan.min_input_size;
  entry.fixed_size = plan.fixed_size;
  auto name_of = [&](int position) {
    if (position < 0 || static_cast<std::size_t>(position) >= target.param_names.size()) {
      throw Error(ErrorCode::kEmitFailure,
                  target.target_id + ": plan references unknown parameter " +
                      std::to_string(position));
    }
    return target.param_names[position];
  };
  for (const auto& slot : plan.slots) {
    entry.slots.push_back({name_of(slot.param_position), slot.offset, slot.length,
                           Spell(slot.target_type)});
  }
  if (plan.array) {
    entry.array = ManifestArray{name_of(plan.array->data_param_position),
                                name_of(plan.array->len_param_position),
                                plan.array->element_size, Spell(plan.array->element_type)};
  }
  return entry;
}

std::string GenerateManifest(const std::vector<GeneratedTarget>& targets,
                             const std::vector<LayoutPlan>& plans) {
  if (targets.size() != plans.size()) {
    throw Error(ErrorCode::kEmitFailure, "manifest: targets and plans differ in length");
  }
  std::vector<ManifestEntry> entries;
  entries.reserve(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    entries.push_back(MakeManifestEntry(targets[i], plans[i]));
  }
  return RenderManifest(std::move(entries));
}

std::string RenderManifest(std::vector<ManifestEntry> entries) {
  std::stable_sort(entries.begin(), entries.end(),
                   [](const ManifestEntry& a, const ManifestEntry& b) {
                     return a.target_id < b.target_id;
                   });
  std::ostringstream out;
  out << kManifestHeader << "\n";
  out << "targets " << entries.size() << "\n";
  for (const auto& e : entries) {
    out << "target " << e.target_id << "\n";
    out << "  source " << e.source << "\n";
    out << "  function " << e.function << "\n";
    out << "  origin " << OriginName(e.origin) << "\n";
    out << "  min_input_size " << e.min_input_size << "\n";
    out << "  fixed_size " << e.fixed_size << "\n";
    for (const auto& s : e.slots) {
      out << "  slot " << s.param << " " << s.offset << " " << s.length << " " << s.type << "\n";
    }
    if (e.array) {
      out << "  array " << e.array->data_param << " " << e.array->len_param << " "
          << e.array->element_size << " " << e.array->element_type << "\n";
    }
    out << "end\n";
  }
  return out.str();
}

namespace {

std::vector<std::string> SplitWords(const std::string& line, std::size_t max_words,
                                    std::string& rest) {
  std::vector<std::string> words;
  std::size_t i = 0;
  while (words.size() < max_words) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    words.push_back(line.substr(i, j - i));
    i = j;
  }
  while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
  rest = line.substr(i);
  while (!rest.empty() && (rest.back() == ' ' || rest.back() == '\r')) rest.pop_back();
  return words;
}

}  // namespace

std::vector<ManifestEntry> ParseManifest(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::kMalformedManifest,
                "manifest line " + std::to_string(line_no) + ": " + why);
  };
  auto number = [&](const std::string& s) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) fail("bad number '" + s + "'");
    return v;
  };

  bool saw_header = false;
  std::optional<std::uint64_t> declared_count;
  std::vector<ManifestEntry> entries;
  std::optional<ManifestEntry> current;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string rest;
    std::vector<std::string> head = SplitWords(line, 1, rest);
    if (head.empty() || head[0][0] == '#') continue;
    if (!saw_header) {
      if (line != kManifestHeader) fail("expected '" + std::string(kManifestHeader) + "'");
      saw_header = true;
      continue;
    }
    const std::string& key = head[0];
    if (key == "targets") {
      declared_count = number(rest);
    } else if (key == "target") {
      if (current) fail("'target' inside an open record");
      if (rest.empty()) fail("missing target id");
      current = ManifestEntry{};
      current->target_id = rest;
    } else if (key == "end") {
      if (!current) fail("'end' without 'target'");
      entries.push_back(std::move(*current));
      current.reset();
    } else {
      if (!current) fail("'" + key + "' outside a target record");
      if (key == "source") {
        current->source = rest;
      } else if (key == "function") {
        current->function = rest;
      } else if (key == "origin") {
        if (rest == "ANNOTATED") {
          current->origin = Origin::kAnnotated;
        } else if (rest == "AUTO") {
          current->origin = Origin::kAuto;
        } else {
          fail("bad origin '" + rest + "'");
        }
      } else if (key == "min_input_size") {
        current->min_input_size = number(rest);
      } else if (key == "fixed_size") {
        current->fixed_size = number(rest);
      } else if (key == "slot") {
        std::string type;
        auto w = SplitWords(rest, 3, type);
        if (w.size() != 3 || type.empty()) fail("slot needs: param offset length type");
        current->slots.push_back({w[0], number(w[1]), number(w[2]), type});
      } else if (key == "array") {
        std::string type;
        auto w = SplitWords(rest, 3, type);
        if (w.size() != 3 || type.empty()) fail("array needs: data len element_size type");
        current->array = ManifestArray{w[0], w[1], number(w[2]), type};
      } else {
        fail("unknown key '" + key + "'");
      }
    }
  }
  if (!saw_header) fail("empty manifest");
  if (current) fail("record '" + current->target_id + "' is not closed");
  if (declared_count && *declared_count != entries.size()) {
    fail("declared " + std::to_string(*declared_count) + " targets, found " +
         std::to_string(entries.size()));
  }
  return entries;
}

}  // namespace ftg
