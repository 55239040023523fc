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

#include "ftg/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "ftg/abi.hpp"
#include "ftg/c_model.hpp"
#include "ftg/directives.hpp"
#include "ftg/discovery.hpp"
#include "ftg/error.hpp"
#include "ftg/layout.hpp"

namespace ftg {

namespace fs = std::filesystem;

std::string_view ModeName(Mode mode) {
  switch (mode) {
    case Mode::kAnnotated: return "ANNOTATED";
    case Mode::kAuto: return "AUTO";
    case Mode::kBoth: return "BOTH";
  }
  return "ANNOTATED";
}

Mode ParseMode(std::string_view text) {
  std::string lower;
  for (char c : text) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "annotated") return Mode::kAnnotated;
  if (lower == "auto") return Mode::kAuto;
  if (lower == "both") return Mode::kBoth;
  throw Error(ErrorCode::kInvalidConfig, "unknown mode '" + std::string(text) + "'");
}

namespace {

std::string ReadText(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteText(const fs::path& path, const std::string& text) {
  // Leave identical files alone so timestamps stay put across reruns.
  std::error_code ec;
  if (fs::exists(path, ec)) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    if (in && buffer.str() == text) return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

bool IsSourceFile(const fs::path& p) { return p.extension() == ".c" || p.extension() == ".h"; }

// Default include for functions declared in `source`.
std::string DefaultInclude(const fs::path& source) {
  fs::path header = source;
  header.replace_extension(".h");
  std::error_code ec;
  if (fs::exists(header, ec)) return header.filename().string();
  return source.filename().string();
}

struct Loaded {
  SourceModel model;
  bool parse_failed = false;
  bool read_failed = false;
};

Loaded LoadSources(const std::vector<fs::path>& files, std::ostream& err) {
  Loaded loaded;
  Diagnostics merge_diags;
  for (const auto& file : files) {
    std::string text;
    try {
      text = ReadText(file);
    } catch (const Error& e) {
      err << file.string() << ": error: " << e.what() << "\n";
      loaded.read_failed = true;
      continue;
    }
    try {
      ParseResult parsed = ParseTranslationUnit(text, file.string());
      parsed.diagnostics.Print(err);
      if (parsed.diagnostics.has_errors()) loaded.parse_failed = true;
      loaded.model.Merge(parsed.model, merge_diags);
    } catch (const Error& e) {
      err << file.string() << ": error: " << ErrorCodeName(e.code()) << ": " << e.what() << "\n";
      loaded.parse_failed = true;
    }
  }
  merge_diags.Print(err);
  return loaded;
}

}  // namespace

std::vector<fs::path> CollectSources(const std::vector<fs::path>& paths) {
  std::set<fs::path> files;
  for (const auto& p : paths) {
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
      for (const auto& entry : fs::directory_iterator(p, ec)) {
        if (entry.is_regular_file() && IsSourceFile(entry.path())) files.insert(entry.path());
      }
    } else {
      files.insert(p);
    }
  }
  return {files.begin(), files.end()};
}

GenerateResult CmdGenerate(const ToolConfig& cfg, std::ostream& out, std::ostream& err) {
  GenerateResult result;
  if (cfg.source_paths.empty()) {
    err << "error: no source paths given\n";
    result.status = kExitUsage;
    return result;
  }
  AbiModel abi;
  try {
    abi = LoadAbi(cfg.abi_name_or_file);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    result.status = e.code() == ErrorCode::kIo ? kExitIo : kExitUsage;
    return result;
  }

  std::vector<fs::path> files = CollectSources(cfg.source_paths);
  Loaded loaded = LoadSources(files, err);
  const SourceModel& model = loaded.model;

  bool directive_failed = false;
  std::vector<AnnotatedFunction> chosen;
  std::set<std::string> taken;
  if (cfg.mode != Mode::kAuto) {
    for (const auto& f : model.functions) {
      if (!HasFuzzTestDirective(f.comment_block)) continue;
      try {
        chosen.push_back(Bind(model, f, ExtractDirectives(f.comment_block)));
        taken.insert(f.name);
      } catch (const Error& e) {
        err << f.location.file << ":" << f.location.line << ": error: " << f.name << ": "
            << ErrorCodeName(e.code()) << ": " << e.what() << "\n";
        directive_failed = true;
        taken.insert(f.name);
      }
    }
  }
  if (cfg.mode != Mode::kAnnotated) {
    DiscoveryReport report = Discover(model);
    for (auto& f : report.eligible) {
      if (taken.count(f.signature.name)) continue;
      taken.insert(f.signature.name);
      chosen.push_back(std::move(f));
    }
  }
  std::sort(chosen.begin(), chosen.end(), [](const auto& a, const auto& b) {
    return a.signature.name < b.signature.name;
  });

  std::vector<LayoutPlan> plans;
  for (const auto& f : chosen) {
    try {
      LayoutPlan plan = PlanLayout(model, abi, f);
      CodegenOptions opts;
      opts.include_lines = cfg.include_lines;
      if (opts.include_lines.empty() && !f.signature.location.file.empty()) {
        opts.include_lines.push_back(DefaultInclude(f.signature.location.file));
      }
      opts.aligned_array_copy = cfg.aligned_array_copy;
      opts.emit_size_guard = cfg.emit_size_guard;
      result.targets.push_back(GenerateTarget(model, abi, f, plan, opts));
      plans.push_back(std::move(plan));
    } catch (const Error& e) {
      err << f.signature.location.file << ":" << f.signature.location.line
          << ": error: " << f.signature.name << ": " << ErrorCodeName(e.code()) << ": "
          << e.what() << "\n";
      directive_failed = true;
    }
  }

  if (!result.targets.empty()) {
    try {
      std::error_code ec;
      fs::create_directories(cfg.output_dir, ec);
      if (ec) throw Error(ErrorCode::kIo, "cannot create " + cfg.output_dir.string());
      for (const auto& t : result.targets) {
        fs::path path = cfg.output_dir / t.file_name;
        WriteText(path, t.source_text);
        result.written.push_back(path);
      }
      fs::path manifest = cfg.output_dir / kManifestFileName;
      WriteText(manifest, GenerateManifest(result.targets, plans));
      result.written.push_back(manifest);
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      result.status = kExitIo;
      return result;
    }
    for (const auto& t : result.targets) {
      out << t.target_id << "\t" << OriginName(t.origin) << "\t" << t.file_name
          << "\tmin_input_size=" << t.min_input_size << "\n";
    }
  }

  if (loaded.read_failed) {
    result.status = kExitIo;
  } else if (loaded.parse_failed) {
    result.status = kExitParseFailure;
  } else if (directive_failed) {
    result.status = kExitDirectiveFailure;
  } else if (result.targets.empty()) {
    err << "error: no fuzz targets generated (mode " << ModeName(cfg.mode) << ")\n";
    result.status = kExitZeroTargets;
  }
  return result;
}

int CmdDiscover(const ToolConfig& cfg, bool table, std::ostream& out, std::ostream& err) {
  std::vector<fs::path> files = CollectSources(cfg.source_paths);
  if (files.empty()) {
    err << "error: no source files\n";
    return kExitZeroTargets;
  }
  Loaded loaded = LoadSources(files, err);
  DiscoveryReport report = Discover(loaded.model);
  out << (table ? RenderDiscoveryTable(report) : RenderDiscoveryListing(loaded.model, report));
  if (loaded.read_failed) return kExitIo;
  if (loaded.parse_failed) return kExitParseFailure;
  return kExitOk;
}

CampaignConfig MakeCampaignConfig(const CampaignOptions& opts) {
  CampaignConfig cfg;
  cfg.total_time = opts.total_time;
  cfg.artifact_dir = opts.artifact_dir;
  cfg.runner = opts.runner;
  cfg.repeat_count = opts.repeat_count;
  cfg.workers = opts.workers;
  cfg.targets = opts.targets;
  if (cfg.targets.empty()) {
    if (opts.manifest.empty()) throw Error(ErrorCode::kInvalidConfig, "no manifest or targets given");
    for (const auto& e : ParseManifest(ReadText(opts.manifest))) cfg.targets.push_back(e.target_id);
  }

  std::vector<std::string> extra = opts.extra_asan_options;
  // Pass through whatever the caller already set, minus what we own.
  if (const char* inherited = std::getenv("ASAN_OPTIONS")) {
    std::string_view s = inherited;
    std::size_t start = 0;
    while (start <= s.size()) {
      std::size_t end = s.find(':', start);
      if (end == std::string_view::npos) end = s.size();
      std::string opt(s.substr(start, end - start));
      if (!opt.empty() && opt.rfind("dedup_token_length=", 0) != 0 &&
          opt.rfind(kSymbolizerOption, 0) != 0) {
        extra.push_back(opt);
      }
      start = end + 1;
    }
  }
  std::string symbolizer = opts.symbolizer.empty() ? FindSymbolizer() : opts.symbolizer;
  cfg.env_settings = SanitizerEnvironment(symbolizer, extra);
  cfg.Validate();
  return cfg;
}

namespace {

void WriteResults(const fs::path& dir, const CampaignReport& report) {
  WriteText(dir / "results.txt", RenderResultsTable({report.row}));
  WriteText(dir / "results.tsv", RenderResultsDelimited({report.row}));
  WriteText(dir / "bugs.tsv", RenderBugList(report.bugs));
}

void PrintReport(const CampaignReport& report, bool machine, std::ostream& out,
                 std::ostream& err) {
  for (const auto& [input, why] : report.unparsed) err << "warning: " << input << ": " << why << "\n";
  out << (machine ? RenderResultsDelimited({report.row}) : RenderResultsTable({report.row}));
}

}  // namespace

int CmdCampaign(const CampaignOptions& opts, FuzzerRunner& runner, std::ostream& out,
                std::ostream& err) {
  CampaignConfig cfg;
  try {
    cfg = MakeCampaignConfig(opts);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::kIo ? kExitIo : kExitUsage;
  }
  if (cfg.env_settings.at("ASAN_OPTIONS").find(kSymbolizerOption) == std::string::npos) {
    err << "warning: no symbolizer found; sanitizer logs will lack DEDUP_TOKEN lines\n";
  }

  CampaignResult result;
  try {
    ScheduleRoundRobin(cfg);
    result = RunCampaign(cfg, runner);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  for (const auto& f : result.failures) {
    err << "error: repetition " << f.repetition << ", " << f.target_id << ": "
        << ErrorCodeName(f.code) << ": " << f.message << "\n";
  }
  VerdictMap verdicts = ReplayVerify(result.outcomes, runner, cfg.env_settings);

  try {
    WriteCampaignIndex(cfg.artifact_dir, result, verdicts);
    if (!result.outcomes.empty()) {
      CampaignReport report = BuildReport(result, verdicts, static_cast<int>(cfg.targets.size()),
                                          opts.method_label);
      WriteResults(cfg.artifact_dir, report);
      PrintReport(report, false, out, err);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
  if (result.aborted) {
    err << "error: campaign aborted: " << result.abort_reason << "\n";
    return kExitIo;
  }
  if (result.outcomes.empty()) return kExitCampaignFailed;
  return kExitOk;
}

int CmdReport(const fs::path& artifact_dir, const std::string& method_label, bool machine,
              std::ostream& out, std::ostream& err) {
  try {
    CampaignIndex index = ReadCampaignIndex(artifact_dir);
    std::set<std::string> targets;
    for (const auto& o : index.result.outcomes) targets.insert(o.target_id);
    for (const auto& f : index.result.failures) targets.insert(f.target_id);
    if (targets.empty()) {
      err << "error: " << artifact_dir.string() << " records no runs\n";
      return kExitCampaignFailed;
    }
    CampaignReport report = BuildReport(index.result, index.verdicts,
                                        static_cast<int>(targets.size()), method_label);
    PrintReport(report, machine, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace ftg
