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

#include "test_support.hpp"

#include <stdio.h>
#include <stdlib.h>
#include <sys/wait.h>

#include <array>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ftg/error.hpp"

#ifndef FTG_TEST_DATA_DIR
#error "FTG_TEST_DATA_DIR must be defined"
#endif
#ifndef FTG_TEST_CC
#define FTG_TEST_CC ""
#endif
#ifndef FTG_TEST_CLANG
#define FTG_TEST_CLANG ""
#endif

namespace ftg::testing {

namespace fs = std::filesystem;

fs::path DataDir() { return fs::path(FTG_TEST_DATA_DIR) / "data"; }
fs::path GoldenDir() { return fs::path(FTG_TEST_DATA_DIR) / "golden"; }

TempDir::TempDir() {
  std::string templ = (fs::temp_directory_path() / "ftg-test-XXXXXX").string();
  if (!::mkdtemp(templ.data())) throw std::runtime_error("mkdtemp failed");
  path_ = templ;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

CommandResult RunShell(const std::string& command) {
  CommandResult result;
  std::string full = command + " 2>&1";
  FILE* pipe = ::popen(full.c_str(), "r");
  if (!pipe) return result;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) result.output.append(buf.data(), n);
  int status = ::pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
  return result;
}

std::string ShellQuote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

std::string CCompiler() { return FTG_TEST_CC; }
std::string FuzzCompiler() { return FTG_TEST_CLANG; }

CommandResult CompileC(const std::vector<fs::path>& sources, const fs::path& output,
                       const std::string& flags, const std::vector<fs::path>& include_dirs) {
  std::string cmd = ShellQuote(CCompiler()) + " " + flags;
  for (const auto& dir : include_dirs) cmd += " -I" + ShellQuote(dir.string());
  for (const auto& src : sources) cmd += " " + ShellQuote(src.string());
  cmd += " -o " + ShellQuote(output.string());
  return RunShell(cmd);
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& RandomBasicTypes() {
  static const std::vector<std::string> types = {
      "char",     "signed char", "unsigned char", "short",     "unsigned short",
      "int",      "unsigned int", "long",         "unsigned long", "long long",
      "unsigned long long", "float", "double",    "_Bool",     "int8_t",
      "uint8_t",  "int16_t",     "uint16_t",      "int32_t",   "uint32_t",
      "int64_t",  "uint64_t",    "size_t"};
  return types;
}

namespace {

const std::vector<std::string>& LengthTypes() {
  static const std::vector<std::string> types = {"int",  "unsigned int", "long",    "unsigned long",
                                                 "size_t", "long long",  "int32_t", "uint64_t"};
  return types;
}

template <typename T>
const T& Pick(std::mt19937_64& rng, const std::vector<T>& v) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

bool Chance(std::mt19937_64& rng, double p) {
  return std::uniform_real_distribution<double>(0, 1)(rng) < p;
}

int Between(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

}  // namespace

RandomApi GenerateRandomApi(std::mt19937_64& rng, const RandomApiOptions& options,
                            const std::string& prefix) {
  RandomApi api;
  std::ostringstream records, functions;
  int record_count = std::max(1, options.function_count / 2);
  for (int r = 0; r < record_count; ++r) {
    std::string name = prefix + "s" + std::to_string(r);
    api.records.push_back(name);
    records << "struct " << name << " {\n";
    int fields = Between(rng, 1, options.max_fields);
    for (int i = 0; i < fields; ++i) records << "  " << Pick(rng, RandomBasicTypes()) << " f" << i << ";\n";
    records << "};\n\n";
  }

  for (int fn = 0; fn < options.function_count; ++fn) {
    std::string name = prefix + "f" + std::to_string(fn);
    api.functions.push_back(name);
    std::vector<std::string> params;
    std::vector<std::string> directives;
    int count = Between(rng, 1, options.max_params);
    bool has_array = false;
    for (int i = 0; i < count; ++i) {
      std::string p = "p" + std::to_string(i);
      if (!has_array && Chance(rng, options.array_chance)) {
        has_array = true;
        std::string len = "n" + std::to_string(i);
        params.push_back(Pick(rng, RandomBasicTypes()) + " *" + p);
        params.push_back(Pick(rng, LengthTypes()) + " " + len);
        directives.push_back("Array(" + p + ", " + len + ")");
      } else if (Chance(rng, options.output_chance)) {
        std::string pointee = Chance(rng, 0.5) ? "struct " + Pick(rng, api.records)
                                               : Pick(rng, RandomBasicTypes());
        params.push_back(pointee + " *" + p);
        directives.push_back("Output(" + p + ")");
      } else if (Chance(rng, options.value_chance)) {
        params.push_back("int " + p);
        directives.push_back("Value(" + p + ", " + std::to_string(Between(rng, -5, 99)) + ")");
      } else if (Chance(rng, options.struct_param_chance)) {
        params.push_back("struct " + Pick(rng, api.records) + " " + p);
      } else {
        params.push_back(Pick(rng, RandomBasicTypes()) + " " + p);
      }
    }
    functions << "//@fuzztest";
    for (const auto& d : directives) functions << " " << d;
    functions << "\n" << (Chance(rng, 0.5) ? "int " : "void ") << name << "(";
    for (std::size_t i = 0; i < params.size(); ++i) functions << (i ? ", " : "") << params[i];
    functions << ");\n\n";
  }

  std::string guard = "FTG_RANDOM_" + prefix + "_H";
  api.header = "#ifndef " + guard + "\n#define " + guard + "\n\n#include <stddef.h>\n#include <stdint.h>\n\n" +
               records.str() + functions.str() + "#endif\n";
  return api;
}

// ---------------------------------------------------------------------------

namespace {

bool Resolvable(const SourceModel& model, const TypeRef& type) {
  try {
    ResolveType(model, type);
    return true;
  } catch (const Error&) {
    return false;
  }
}

// Types the stub cannot spell (enums the parser skips) become int-sized.
std::string StubDeclare(const SourceModel& model, const TypeRef& type, const std::string& name) {
  if (Resolvable(model, type)) return Declare(type, name);
  return type.is_pointer() ? "void *" + name : "int " + name;
}

std::string StubReturnType(const SourceModel& model, const FunctionSignature& sig) {
  if (!Resolvable(model, sig.return_type)) return sig.return_type.is_pointer() ? "void *" : "int";
  return Spell(sig.return_type);
}

bool IsVoid(const SourceModel& model, const TypeRef& type) {
  if (!Resolvable(model, type)) return false;
  TypeRef r = ResolveType(model, type);
  return r.kind() == TypeKind::kBasic && r.name() == "void";
}

void EmitDefinition(std::ostringstream& out, const SourceModel& model, const FunctionSignature& sig,
                    const AnnotatedFunction* target) {
  std::string ret = StubReturnType(model, sig);
  bool void_ret = IsVoid(model, sig.return_type);
  out << ret << (ret.back() == '*' ? "" : " ") << sig.name << "(";
  if (sig.params.empty()) out << "void";
  for (std::size_t i = 0; i < sig.params.size(); ++i) {
    out << (i ? ", " : "") << StubDeclare(model, sig.params[i].type, sig.params[i].name);
  }
  out << ") {\n";
  if (target) {
    out << "  ++ftg_stub_calls;\n  printf(\"call " << sig.name << "\\n\");\n";
    std::string len_name;
    for (const auto& p : sig.params) {
      if (target->RoleOf(p.position).kind == RoleKind::kArrayLen) len_name = p.name;
    }
    for (const auto& p : sig.params) {
      const ParamRole& role = target->RoleOf(p.position);
      switch (role.kind) {
        case RoleKind::kSerialized:
          out << "  ftg_hex(\"arg\", \"" << p.name << "\", &" << p.name << ", sizeof(" << p.name
              << "));\n";
          break;
        case RoleKind::kOutput:
          out << "  if (" << p.name << ") ftg_hex(\"arg\", \"" << p.name << "\", " << p.name
              << ", sizeof(*" << p.name << "));\n";
          break;
        case RoleKind::kArrayData:
          out << "  printf(\"array " << p.name << " %llu \", (unsigned long long)" << len_name
              << ");\n  ftg_hex_raw(" << p.name << ", (size_t)" << len_name << " * sizeof(*"
              << p.name << "));\n";
          break;
        case RoleKind::kArrayLen:
          break;
        case RoleKind::kFixed:
          out << "  printf(\"fixed " << p.name << "\\n\");\n";
          break;
      }
    }
  } else {
    out << "  printf(\"cleanup " << sig.name << "\\n\");\n";
    for (const auto& p : sig.params) out << "  (void)" << p.name << ";\n";
  }
  if (!void_ret) {
    out << "  " << StubDeclare(model, sig.return_type, "ftg_ret") << ";\n"
        << "  memset(&ftg_ret, 0, sizeof(ftg_ret));\n  return ftg_ret;\n";
  }
  out << "}\n\n";
}

}  // namespace

std::string EmitRecordingStub(const SourceModel& model, const AbiModel& abi,
                              const AnnotatedFunction& f) {
  (void)abi;
  std::ostringstream out;
  out << "#include <stddef.h>\n#include <stdint.h>\n#include <stdio.h>\n#include <string.h>\n\n";
  for (const auto& [name, rec] : model.records) {
    if (rec.opaque_reason) continue;
    out << "struct " << name << " {\n";
    for (const auto& field : rec.fields) out << "  " << Declare(field.type, field.name) << ";\n";
    out << "};\n";
  }
  // Aliases in dependency order.
  std::set<std::string> done;
  bool progress = true;
  while (progress) {
    progress = false;
    for (const auto& [name, type] : model.aliases) {
      if (done.count(name) || BuiltinAlias(name)) continue;
      TypeRef base = type;
      while (base.is_pointer()) base = base.pointee();
      if (base.kind() == TypeKind::kAlias && !done.count(base.name()) && !BuiltinAlias(base.name())) {
        continue;
      }
      out << "typedef " << Declare(type, name) << ";\n";
      done.insert(name);
      progress = true;
    }
  }
  out << "\nint ftg_stub_calls = 0;\n\n"
      << "static void ftg_hex_raw(const void *p, size_t n) {\n"
      << "  const unsigned char *b = (const unsigned char *)p;\n"
      << "  for (size_t i = 0; i < n; ++i) printf(\"%02x\", b[i]);\n"
      << "  printf(\"\\n\");\n}\n\n"
      << "static void ftg_hex(const char *kind, const char *name, const void *p, size_t n) {\n"
      << "  printf(\"%s %s \", kind, name);\n  ftg_hex_raw(p, n);\n}\n\n";
  EmitDefinition(out, model, f.signature, &f);
  if (f.cleanup) {
    const FunctionSignature* cleanup = model.FindFunction(f.cleanup->function_name);
    if (cleanup && cleanup->name != f.signature.name) EmitDefinition(out, model, *cleanup, nullptr);
  }
  return out.str();
}

std::string StubDriverSource() {
  return R"(#include <stdint.h>
#include <stdio.h>
#include <stdlib.h>

int LLVMFuzzerTestOneInput(const uint8_t *data, size_t size);
extern int ftg_stub_calls;

int main(int argc, char **argv) {
  if (argc != 2) return 2;
  FILE *f = fopen(argv[1], "rb");
  if (!f) return 2;
  fseek(f, 0, SEEK_END);
  long n = ftell(f);
  fseek(f, 0, SEEK_SET);
  uint8_t *buf = (uint8_t *)malloc(n > 0 ? (size_t)n : 1);
  if (!buf || (n > 0 && fread(buf, 1, (size_t)n, f) != (size_t)n)) return 2;
  fclose(f);
  LLVMFuzzerTestOneInput(buf, (size_t)n);
  free(buf);
  printf("calls %d\n", ftg_stub_calls);
  return 0;
}
)";
}

StubTrace ParseStubTrace(const std::string& output) {
  StubTrace trace;
  std::istringstream in(output);
  std::string line;
  bool saw_calls = false;
  while (std::getline(in, line)) {
    if (line.rfind("calls ", 0) == 0) {
      trace.calls = std::stoi(line.substr(6));
      saw_calls = true;
    } else {
      trace.lines.push_back(line);
    }
  }
  if (!saw_calls) trace.calls = -1;
  return trace;
}

std::string Hex(const std::uint8_t* data, std::size_t size) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  for (std::size_t i = 0; i < size; ++i) {
    out += digits[data[i] >> 4];
    out += digits[data[i] & 15];
  }
  return out;
}

HarnessCase MakeCase(const fs::path& header, const std::string& function,
                     const CodegenOptions& options, const AbiModel& abi) {
  HarnessCase c;
  c.label = header.filename().string() + ":" + function;
  c.header = header;
  ParseResult parsed = ParseTranslationUnit(ReadFile(header), header.filename().string());
  c.model = std::move(parsed.model);
  const FunctionSignature* sig = c.model.FindFunction(function);
  if (!sig) throw std::runtime_error("no function " + function + " in " + header.string());
  c.fn = Bind(c.model, *sig, ExtractDirectives(sig->comment_block));
  c.plan = PlanLayout(c.model, abi, c.fn);
  CodegenOptions opts = options;
  if (opts.include_lines.empty()) opts.include_lines.push_back(header.filename().string());
  c.target = GenerateTarget(c.model, abi, c.fn, c.plan, opts);
  return c;
}

std::vector<HarnessCase> CorpusCases() {
  const fs::path d = DataDir();
  std::vector<HarnessCase> cases;
  for (const char* f : {"func1", "func2"}) cases.push_back(MakeCase(d / "foo_packed.h", f));
  cases.push_back(MakeCase(d / "directive_examples" / "array.h", "foo"));
  cases.push_back(MakeCase(d / "directive_examples" / "value.h", "foo"));
  cases.push_back(MakeCase(d / "directive_examples" / "cleanup.h", "allocate_some_memory"));
  cases.push_back(MakeCase(d / "directive_examples" / "cleanup.h", "maybe_allocate_memory_to_output"));
  for (const char* f :
       {"checksum_frame", "decode_header", "widget_create", "format_label", "parse_pair"}) {
    cases.push_back(MakeCase(d / "seeded" / "seeded.h", f));
  }
  return cases;
}

namespace {

std::size_t CountCalls(const std::string& code, const std::string& name) {
  std::size_t count = 0;
  std::size_t pos = 0;
  while ((pos = code.find(name + "(", pos)) != std::string::npos) {
    bool boundary = pos == 0 || !(std::isalnum(static_cast<unsigned char>(code[pos - 1])) ||
                                  code[pos - 1] == '_');
    if (boundary) ++count;
    pos += name.size();
  }
  return count;
}

}  // namespace

std::vector<std::string> StructuralProblems(const HarnessCase& c) {
  std::vector<std::string> problems;
  // Drop comment lines; the header comment names the function too.
  std::string code;
  std::istringstream in(c.target.source_text);
  std::string line;
  while (std::getline(in, line)) {
    std::size_t lead = line.find_first_not_of(' ');
    if (lead != std::string::npos && line.compare(lead, 2, "//") == 0) continue;
    code += line + "\n";
  }
  const std::string entry = "int LLVMFuzzerTestOneInput(const uint8_t *data, size_t size) {";
  if (CountCalls(code, "LLVMFuzzerTestOneInput") != 1 || code.find(entry) == std::string::npos) {
    problems.push_back("entry point missing or repeated");
  }
  const std::string& fn = c.fn.signature.name;
  if (CountCalls(code, fn) != 1) {
    problems.push_back(fn + " called " + std::to_string(CountCalls(code, fn)) + " times");
  }
  std::size_t cursor = 0;
  for (const auto& slot : c.plan.slots) {
    const std::string& p = c.fn.signature.params[slot.param_position].name;
    // The cursor may be renamed to dodge a parameter called pos.
    std::string head = "memcpy(&" + p + ", pos";
    std::string tail = ", sizeof(" + p + "));";
    std::size_t at = code.find(head, cursor);
    std::size_t end = at == std::string::npos ? at : code.find(tail, at);
    if (at == std::string::npos || end == std::string::npos || code.find('\n', at) < end) {
      problems.push_back("no in-order copy for slot " + p);
    } else {
      cursor = end + tail.size();
    }
  }
  std::size_t copies = 0;
  for (std::size_t at = code.find("memcpy(&"); at != std::string::npos; at = code.find("memcpy(&", at + 1)) {
    ++copies;
  }
  if (copies != c.plan.slots.size()) problems.push_back("unexpected memcpy count");
  if (c.plan.min_input_size > 0 &&
      code.find("if (size < " + std::to_string(c.plan.min_input_size) + ")") == std::string::npos) {
    problems.push_back("size guard missing");
  }
  if (code.find("return 0;\n}") == std::string::npos) problems.push_back("no final return 0");
  return problems;
}

CommandResult CompileHarness(const HarnessCase& c, const fs::path& dir, const std::string& flags) {
  fs::path src = dir / c.target.file_name;
  WriteFile(src, c.target.source_text);
  return CompileC({src}, dir / (c.target.target_id + ".o"), "-c " + flags,
                  {c.header.parent_path()});
}

CommandResult BuildStubbed(const HarnessCase& c, const fs::path& dir, fs::path* exe) {
  fs::create_directories(dir);
  fs::path harness = dir / c.target.file_name;
  fs::path stub = dir / (c.target.target_id + "_stub.c");
  fs::path driver = dir / "stub_driver.c";
  WriteFile(harness, c.target.source_text);
  WriteFile(stub, EmitRecordingStub(c.model, Lp64(), c.fn));
  WriteFile(driver, StubDriverSource());
  *exe = dir / (c.target.target_id + "-stub");
  return CompileC({harness, stub, driver}, *exe, "-w -O0", {c.header.parent_path()});
}

StubTrace RunStubbed(const fs::path& exe, const std::vector<std::uint8_t>& input,
                     const fs::path& scratch) {
  fs::path in = scratch / "input.bin";
  WriteFile(in, std::string(input.begin(), input.end()));
  CommandResult r = RunShell(ShellQuote(exe.string()) + " " + ShellQuote(in.string()));
  StubTrace trace = ParseStubTrace(r.output);
  if (r.exit_code != 0) trace.calls = -1;
  return trace;
}

ProbeResult ProbeLayouts(const SourceModel& model, const fs::path& header,
                         const std::string& flags) {
  ProbeResult result;
  TempDir dir;
  std::ostringstream src;
  src << "#include <stddef.h>\n#include <stdint.h>\n#include <stdio.h>\n#include \""
      << header.string() << "\"\n\n"
      << "#define BASIC(T) printf(\"%s|%zu|%zu\\n\", #T, sizeof(T), _Alignof(T))\n"
      << "int main(void) {\n";
  for (const auto& name : BasicTypeNames()) {
    if (name == "void") continue;
    src << "  BASIC(" << name << ");\n";
  }
  for (const auto& name : RandomBasicTypes()) {
    if (!IsBasicTypeName(name)) src << "  BASIC(" << name << ");\n";
  }
  for (const auto& [name, rec] : model.records) {
    if (rec.opaque_reason) continue;
    src << "  printf(\"struct " << name << "|%zu|%zu\", sizeof(struct " << name
        << "), _Alignof(struct " << name << "));\n";
    for (const auto& field : rec.fields) {
      src << "  printf(\"|%zu\", offsetof(struct " << name << ", " << field.name << "));\n";
    }
    src << "  printf(\"\\n\");\n";
  }
  src << "  return 0;\n}\n";
  WriteFile(dir / "probe.c", src.str());
  CommandResult build = CompileC({dir / "probe.c"}, dir / "probe", flags);
  if (build.exit_code != 0) {
    result.log = build.output;
    return result;
  }
  CommandResult run = RunShell(ShellQuote((dir / "probe").string()));
  if (run.exit_code != 0) {
    result.log = run.output;
    return result;
  }
  std::istringstream in(run.output);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
      std::size_t bar = line.find('|', start);
      parts.push_back(line.substr(start, bar == std::string::npos ? std::string::npos : bar - start));
      if (bar == std::string::npos) break;
      start = bar + 1;
    }
    if (parts.size() < 3) continue;
    ProbedLayout layout;
    layout.size = std::stoull(parts[1]);
    layout.alignment = std::stoull(parts[2]);
    for (std::size_t i = 3; i < parts.size(); ++i) layout.offsets.push_back(std::stoull(parts[i]));
    result.layouts[parts[0]] = layout;
  }
  result.ok = true;
  return result;
}

}  // namespace ftg::testing
