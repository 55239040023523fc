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

#include "ftg/report.hpp"

#include <cstdio>
#include <map>
#include <sstream>

#include "ftg/error.hpp"

namespace ftg {

std::string_view BugKindName(BugKind kind) { return kind == BugKind::kLeak ? "LEAK" : "CRASH"; }

SanitizerReport ParseSanitizerOutput(std::string_view raw, std::string target_id,
                                     std::string input_path, int repetition) {
  SanitizerReport report;
  report.target_id = std::move(target_id);
  report.input_path = std::move(input_path);
  report.repetition = repetition;

  auto has = [&](std::string_view needle) { return raw.find(needle) != std::string_view::npos; };
  if (has("ERROR: LeakSanitizer:")) {
    report.kind = BugKind::kLeak;
  } else if (has("ERROR: AddressSanitizer:") || has("ERROR: libFuzzer:") ||
             has("WARNING: MemorySanitizer:") || has("ERROR: MemorySanitizer:") ||
             has("runtime error:")) {
    report.kind = BugKind::kCrash;
  } else {
    throw Error(ErrorCode::kUnrecognizedLog, "no sanitizer header in log for " + report.input_path);
  }

  std::size_t pos = 0;
  while (pos < raw.size()) {
    std::size_t eol = raw.find('\n', pos);
    if (eol == std::string_view::npos) eol = raw.size();
    std::string_view line = raw.substr(pos, eol - pos);
    std::size_t lead = line.find_first_not_of(" \t");
    if (lead != std::string_view::npos && line.substr(lead).starts_with(kDedupTokenPrefix)) {
      std::string_view token = line.substr(lead + kDedupTokenPrefix.size());
      while (!token.empty() && (token.back() == '\r' || token.back() == ' ')) token.remove_suffix(1);
      if (!token.empty()) {
        report.dedup_token = std::string(token);
        report.raw_log = std::string(raw);
        return report;
      }
    }
    pos = eol + 1;
  }
  throw Error(ErrorCode::kNoTokenFound,
              "no DEDUP_TOKEN line for " + report.input_path + " (is a symbolizer configured?)");
}

std::vector<BugRecord> Dedup(const std::vector<SanitizerReport>& reports,
                             const VerdictMap& verdicts) {
  std::vector<BugRecord> records;
  std::set<std::pair<int, std::string>> seen;
  for (const auto& r : reports) {
    auto v = verdicts.find(r.input_path);
    if (v == verdicts.end() || v->second != Verdict::kReproduced) continue;
    if (!seen.insert({r.repetition, r.dedup_token}).second) continue;
    records.push_back({r.dedup_token, r.kind, r.target_id, r.repetition, true});
  }
  return records;
}

RepetitionTally TallyRepetition(int repetition, int target_count,
                                const std::set<std::string>& crashing_inputs,
                                const std::vector<BugRecord>& records) {
  RepetitionTally tally;
  tally.repetition = repetition;
  tally.target_count = target_count;
  tally.distinct_bug_inputs = static_cast<double>(crashing_inputs.size());
  for (const auto& b : records) {
    if (b.repetition != repetition) continue;
    (b.kind == BugKind::kLeak ? tally.unique_leaks : tally.unique_crashes) += 1;
  }
  return tally;
}

ResultsRow Summarize(const std::vector<RepetitionTally>& repetitions, std::string method_label) {
  if (repetitions.empty()) throw Error(ErrorCode::kInvalidConfig, "no repetitions to summarize");
  ResultsRow row;
  row.method_label = std::move(method_label);
  row.target_count = repetitions.front().target_count;
  if (row.target_count <= 0) throw Error(ErrorCode::kInvalidConfig, "target count must be positive");
  double inputs = 0, crashes = 0, leaks = 0;
  for (const auto& r : repetitions) {
    if (r.target_count != row.target_count) {
      throw Error(ErrorCode::kInvalidConfig, "repetitions disagree on target count");
    }
    inputs += r.distinct_bug_inputs;
    crashes += r.unique_crashes;
    leaks += r.unique_leaks;
  }
  const double k = static_cast<double>(repetitions.size());
  row.distinct_bug_inputs = inputs / k;
  row.unique_crashes = crashes / k;
  row.unique_leaks = leaks / k;
  row.total_bugs = (crashes + leaks) / k;
  row.bugs_per_target = row.total_bugs / row.target_count;
  return row;
}

namespace {

std::string Fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  std::string s = buf;
  if (s == "-0.0" || s == "-0.00") s.erase(0, 1);
  return s;
}

std::vector<std::string> Cells(const ResultsRow& r) {
  return {r.method_label,
          std::to_string(r.target_count),
          FormatMean(r.distinct_bug_inputs),
          FormatMean(r.unique_crashes),
          FormatMean(r.unique_leaks),
          FormatMean(r.total_bugs),
          FormatBugsPerTarget(r.bugs_per_target)};
}

const std::vector<std::string>& Headers() {
  static const std::vector<std::string> h = {"Method",       "Targets",     "Distinct Bug Inputs",
                                             "Unique Crashes", "Unique Leaks", "Total Bugs",
                                             "Bugs/Target"};
  return h;
}

}  // namespace

std::string FormatMean(double value) { return Fixed(value, 1); }
std::string FormatBugsPerTarget(double value) { return Fixed(value, 2); }

std::string RenderResultsTable(const std::vector<ResultsRow>& rows) {
  std::vector<std::vector<std::string>> grid = {Headers()};
  for (const auto& r : rows) grid.push_back(Cells(r));
  std::vector<std::size_t> width(Headers().size(), 0);
  for (const auto& line : grid) {
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
  }
  std::ostringstream out;
  auto emit = [&](const std::vector<std::string>& line) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      if (c) out << "  ";
      std::string pad(width[c] - line[c].size(), ' ');
      // Label left-aligned, numbers right-aligned.
      out << (c == 0 ? line[c] + pad : pad + line[c]);
    }
    out << '\n';
  };
  emit(grid[0]);
  std::size_t total = 0;
  for (auto w : width) total += w;
  out << std::string(total + 2 * (width.size() - 1), '-') << '\n';
  for (std::size_t i = 1; i < grid.size(); ++i) emit(grid[i]);
  return out.str();
}

std::string RenderResultsDelimited(const std::vector<ResultsRow>& rows) {
  std::ostringstream out;
  out << "method\ttargets\tdistinct_bug_inputs\tunique_crashes\tunique_leaks\ttotal_bugs\t"
         "bugs_per_target\n";
  for (const auto& r : rows) {
    auto cells = Cells(r);
    for (std::size_t c = 0; c < cells.size(); ++c) out << (c ? "\t" : "") << cells[c];
    out << '\n';
  }
  return out.str();
}

CampaignReport BuildReport(const CampaignResult& result, const VerdictMap& verdicts,
                           int target_count, std::string method_label) {
  CampaignReport report;
  std::map<int, std::set<std::string>> inputs_by_rep;
  for (const auto& f : result.failures) inputs_by_rep[f.repetition];
  for (const auto& o : result.outcomes) {
    auto& inputs = inputs_by_rep[o.repetition];
    for (std::size_t k = 0; k < o.crash_input_paths.size(); ++k) {
      const std::string& input = o.crash_input_paths[k];
      inputs.insert(input);
      const std::string log = k < o.sanitizer_logs.size() ? o.sanitizer_logs[k] : "";
      try {
        report.reports.push_back(ParseSanitizerOutput(log, o.target_id, input, o.repetition));
      } catch (const Error& e) {
        report.unparsed.push_back({input, e.what()});
      }
    }
  }
  report.bugs = Dedup(report.reports, verdicts);
  for (const auto& [rep, inputs] : inputs_by_rep) {
    report.tallies.push_back(TallyRepetition(rep, target_count, inputs, report.bugs));
  }
  if (!report.tallies.empty()) report.row = Summarize(report.tallies, std::move(method_label));
  return report;
}

std::string RenderBugList(const std::vector<BugRecord>& bugs) {
  std::ostringstream out;
  out << "repetition\tkind\ttarget\tdedup_token\n";
  for (const auto& b : bugs) {
    out << b.repetition << '\t' << BugKindName(b.kind) << '\t' << b.first_target << '\t'
        << b.dedup_token << '\n';
  }
  return out.str();
}

}  // namespace ftg
