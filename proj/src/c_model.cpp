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

#include "ftg/c_model.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <sstream>

#include "ftg/error.hpp"
#include "lexer.hpp"

namespace ftg {

// ---------------------------------------------------------------------------
// TypeRef

TypeRef TypeRef::Basic(std::string name) { return {TypeKind::kBasic, std::move(name), nullptr}; }
TypeRef TypeRef::Record(std::string name) { return {TypeKind::kRecord, std::move(name), nullptr}; }
TypeRef TypeRef::Alias(std::string name) { return {TypeKind::kAlias, std::move(name), nullptr}; }
TypeRef TypeRef::Pointer(TypeRef pointee) {
  return {TypeKind::kPointer, "", std::make_shared<const TypeRef>(std::move(pointee))};
}

bool operator==(const TypeRef& a, const TypeRef& b) {
  if (a.kind_ != b.kind_) return false;
  if (a.kind_ == TypeKind::kPointer) return *a.pointee_ == *b.pointee_;
  return a.name_ == b.name_;
}

std::string Spell(const TypeRef& type) {
  switch (type.kind()) {
    case TypeKind::kBasic:
    case TypeKind::kAlias:
      return type.name();
    case TypeKind::kRecord:
      return "struct " + type.name();
    case TypeKind::kPointer: {
      std::string inner = Spell(type.pointee());
      return inner.back() == '*' ? inner + "*" : inner + " *";
    }
  }
  return {};
}

std::string Declare(const TypeRef& type, std::string_view name) {
  std::string spelled = Spell(type);
  if (spelled.back() != '*') spelled += ' ';
  spelled += name;
  return spelled;
}

std::string Describe(const TypeRef& type) {
  switch (type.kind()) {
    case TypeKind::kBasic: return "basic(" + type.name() + ")";
    case TypeKind::kRecord: return "record(" + type.name() + ")";
    case TypeKind::kAlias: return "alias(" + type.name() + ")";
    case TypeKind::kPointer: return "pointer(" + Describe(type.pointee()) + ")";
  }
  return {};
}

const std::vector<std::string>& BasicTypeNames() {
  static const std::vector<std::string> kNames = {
      "void",          "_Bool",         "char",     "signed char",
      "unsigned char", "short",         "unsigned short",
      "int",           "unsigned int",  "long",     "unsigned long",
      "long long",     "unsigned long long",        "float",
      "double"};
  return kNames;
}

bool IsBasicTypeName(std::string_view name) {
  const auto& names = BasicTypeNames();
  return std::find(names.begin(), names.end(), name) != names.end();
}

bool IsIntegerBasicType(std::string_view name) {
  return IsBasicTypeName(name) && name != "void" && name != "float" && name != "double";
}

std::optional<TypeRef> BuiltinAlias(std::string_view name) {
  // LP64 glibc spellings; the 64-bit types use long long so that their size
  // does not depend on the ABI's `long`.
  static const std::map<std::string, std::string, std::less<>> kTable = {
      {"int8_t", "signed char"},   {"uint8_t", "unsigned char"},
      {"int16_t", "short"},        {"uint16_t", "unsigned short"},
      {"int32_t", "int"},          {"uint32_t", "unsigned int"},
      {"int64_t", "long long"},    {"uint64_t", "unsigned long long"},
      {"size_t", "unsigned long"}, {"ssize_t", "long"},
      {"ptrdiff_t", "long"},       {"intptr_t", "long"},
      {"uintptr_t", "unsigned long"},
  };
  auto it = kTable.find(name);
  if (it == kTable.end()) return std::nullopt;
  return TypeRef::Basic(it->second);
}

// ---------------------------------------------------------------------------
// SourceModel

const Param* FunctionSignature::FindParam(std::string_view param_name) const {
  for (const auto& p : params) {
    if (p.name == param_name) return &p;
  }
  return nullptr;
}

const RecordDef* SourceModel::FindRecord(std::string_view name) const {
  auto it = records.find(std::string(name));
  return it == records.end() ? nullptr : &it->second;
}

const TypeRef* SourceModel::FindAlias(std::string_view name) const {
  auto it = aliases.find(std::string(name));
  return it == aliases.end() ? nullptr : &it->second;
}

const FunctionSignature* SourceModel::FindFunction(std::string_view name) const {
  for (const auto& f : functions) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

namespace {

void CollectNames(const SourceModel& model, const TypeRef& type,
                  std::set<std::string>& missing, std::set<std::string>& seen) {
  switch (type.kind()) {
    case TypeKind::kBasic:
      return;
    case TypeKind::kPointer:
      CollectNames(model, type.pointee(), missing, seen);
      return;
    case TypeKind::kRecord:
      if (!model.FindRecord(type.name())) missing.insert(type.name());
      return;
    case TypeKind::kAlias: {
      if (!seen.insert(type.name()).second) return;
      if (const TypeRef* target = model.FindAlias(type.name())) {
        CollectNames(model, *target, missing, seen);
      } else if (!BuiltinAlias(type.name())) {
        missing.insert(type.name());
      }
      return;
    }
  }
}

bool HasFuzzTestToken(const FunctionSignature& f) {
  return f.comment_block.find("@fuzztest") != std::string::npos;
}

bool EquivalentRecords(const RecordDef& a, const RecordDef& b) {
  if (a.name != b.name || a.fields != b.fields) return false;
  if (a.opaque_reason.has_value() != b.opaque_reason.has_value()) return false;
  return !a.opaque_reason || a.raw_text == b.raw_text;
}

bool SameSignature(const FunctionSignature& a, const FunctionSignature& b) {
  if (a.name != b.name || !(a.return_type == b.return_type) || a.variadic != b.variadic ||
      a.params.size() != b.params.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.params.size(); ++i) {
    if (!(a.params[i].type == b.params[i].type)) return false;
  }
  return true;
}

// Adds `candidate` to `functions`, collapsing with an existing entry of the
// same name: an @fuzztest-bearing entry wins, then one with a body.
void AddFunction(std::vector<FunctionSignature>& functions, FunctionSignature candidate,
                 Diagnostics& diags) {
  auto it = std::find_if(functions.begin(), functions.end(),
                         [&](const FunctionSignature& f) { return f.name == candidate.name; });
  if (it == functions.end()) {
    functions.push_back(std::move(candidate));
    return;
  }
  if (!SameSignature(*it, candidate)) {
    diags.Warning(candidate.location.file, candidate.location.line,
                  "conflicting declarations of function '" + candidate.name +
                      "'; keeping the one at " + it->location.file + ":" +
                      std::to_string(it->location.line));
    return;
  }
  bool existing_annotated = HasFuzzTestToken(*it);
  bool candidate_annotated = HasFuzzTestToken(candidate);
  if (existing_annotated && candidate_annotated) {
    diags.Warning(candidate.location.file, candidate.location.line,
                  "function '" + candidate.name + "' is annotated more than once; keeping " +
                      it->location.file + ":" + std::to_string(it->location.line));
    return;
  }
  bool replace = (candidate_annotated && !existing_annotated) ||
                 (candidate_annotated == existing_annotated && candidate.has_body && !it->has_body);
  if (replace) {
    // Keep declaration order stable: the entry stays where it was first seen.
    *it = std::move(candidate);
  }
}

}  // namespace

std::set<std::string> SourceModel::UnresolvedNames() const {
  std::set<std::string> missing;
  for (const auto& f : functions) {
    std::set<std::string> seen;
    CollectNames(*this, f.return_type, missing, seen);
    for (const auto& p : f.params) CollectNames(*this, p.type, missing, seen);
  }
  return missing;
}

void SourceModel::Merge(const SourceModel& other, Diagnostics& diags) {
  for (const auto& [name, rec] : other.records) {
    auto it = records.find(name);
    if (it == records.end()) {
      records.emplace(name, rec);
    } else if (!EquivalentRecords(it->second, rec)) {
      diags.Error(rec.location.file, rec.location.line,
                  "duplicate definition of struct '" + name + "' (first defined at " +
                      it->second.location.file + ":" +
                      std::to_string(it->second.location.line) + "); later definition rejected");
    }
  }
  for (const auto& [name, type] : other.aliases) {
    auto it = aliases.find(name);
    if (it == aliases.end()) {
      aliases.emplace(name, type);
    } else if (!(it->second == type)) {
      diags.Error("", 0, "conflicting typedef '" + name + "'; later definition rejected");
    }
  }
  for (const auto& f : other.functions) AddFunction(functions, f, diags);
}

// ---------------------------------------------------------------------------
// Parser

namespace {

using internal::Comment;
using internal::Token;
using internal::TokenKind;

struct SkipConstruct {
  std::string reason;
  int line;
};

bool OneOf(std::string_view s, std::initializer_list<std::string_view> options) {
  return std::find(options.begin(), options.end(), s) != options.end();
}

bool IsStorageWord(std::string_view s) {
  return OneOf(s, {"static", "extern", "inline", "__inline", "__inline__", "register", "auto",
                   "_Noreturn", "_Thread_local", "__extension__"});
}

bool IsQualifier(std::string_view s) {
  return OneOf(s, {"const", "volatile", "restrict", "__restrict", "__restrict__", "__const",
                   "__volatile__"});
}

bool IsAttributeWord(std::string_view s) {
  return OneOf(s, {"__attribute__", "__attribute", "__declspec", "__asm__", "__asm", "asm"});
}

bool IsBasicWord(std::string_view s) {
  return OneOf(s, {"void", "char", "short", "int", "long", "float", "double", "signed",
                   "unsigned", "_Bool", "bool", "_Complex", "__signed__", "__int128"});
}

bool IsReservedWord(std::string_view s) {
  return IsStorageWord(s) || IsQualifier(s) || IsAttributeWord(s) || IsBasicWord(s) ||
         OneOf(s, {"struct", "union", "enum", "typedef", "return", "if", "else", "for",
                   "while", "do", "switch", "case", "default", "break", "continue", "goto",
                   "sizeof"});
}

// Maps a multiset of basic type words to its canonical name.
std::optional<std::string> CanonicalBasic(const std::vector<std::string>& words) {
  int n_void = 0, n_char = 0, n_short = 0, n_int = 0, n_long = 0, n_float = 0,
      n_double = 0, n_signed = 0, n_unsigned = 0, n_bool = 0, n_other = 0;
  for (const auto& w : words) {
    if (w == "void") ++n_void;
    else if (w == "char") ++n_char;
    else if (w == "short") ++n_short;
    else if (w == "int") ++n_int;
    else if (w == "long") ++n_long;
    else if (w == "float") ++n_float;
    else if (w == "double") ++n_double;
    else if (w == "signed" || w == "__signed__") ++n_signed;
    else if (w == "unsigned") ++n_unsigned;
    else if (w == "_Bool" || w == "bool") ++n_bool;
    else ++n_other;
  }
  if (n_other > 0 || n_int > 1 || (n_signed && n_unsigned) || n_signed > 1 || n_unsigned > 1) {
    return std::nullopt;
  }
  int sign_words = n_signed + n_unsigned;
  int total = static_cast<int>(words.size());
  if (n_void) return total == 1 ? std::optional<std::string>("void") : std::nullopt;
  if (n_bool) return total == 1 ? std::optional<std::string>("_Bool") : std::nullopt;
  if (n_float) return total == 1 ? std::optional<std::string>("float") : std::nullopt;
  if (n_double) return total == 1 ? std::optional<std::string>("double") : std::nullopt;
  if (n_char) {
    if (n_char != 1 || total != 1 + sign_words) return std::nullopt;
    if (n_unsigned) return "unsigned char";
    if (n_signed) return "signed char";
    return "char";
  }
  std::string prefix = n_unsigned ? "unsigned " : "";
  if (total != n_short + n_long + n_int + sign_words) return std::nullopt;
  if (n_short) {
    if (n_short != 1 || n_long) return std::nullopt;
    return prefix + "short";
  }
  if (n_long == 1) return prefix + "long";
  if (n_long == 2) return prefix + "long long";
  if (n_long > 2) return std::nullopt;
  return prefix + "int";
}

TypeRef WrapPointers(TypeRef base, int depth) {
  for (int i = 0; i < depth; ++i) base = TypeRef::Pointer(std::move(base));
  return base;
}

struct Specifiers {
  std::optional<TypeRef> base;
  std::string spelling;
  std::optional<std::string> unsupported;
  bool tag_definition = false;  // struct/union/enum with a body
  int body_close_line = 0;
};

struct ParsedParam {
  std::string name;
  std::optional<TypeRef> type;
  std::optional<std::string> unsupported;
};

struct Declarator {
  std::string name;
  int line = 0;
  int pointer_depth = 0;
  std::string pointer_spelling;
  int array_dims = 0;
  bool is_function = false;
  std::vector<ParsedParam> params;
  bool variadic = false;
  std::optional<std::string> unsupported;
};

class Parser {
 public:
  Parser(std::string_view source, std::string_view file)
      : source_(source), file_(file), lex_(internal::Lex(source)) {}

  ParseResult Run() {
    CheckBalance();
    ClassifyLines();
    while (Peek().kind != TokenKind::kEnd) {
      std::size_t start = pos_;
      try {
        ParseTopLevel();
      } catch (const SkipConstruct& skip) {
        result_.diagnostics.Warning(std::string(file_), skip.line,
                                    "skipping unsupported construct: " + skip.reason);
        Recover(start);
      }
    }
    RejectAliasCycles();
    return std::move(result_);
  }

 private:
  // -- token access ---------------------------------------------------------

  const Token& Peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, lex_.tokens.size() - 1);
    return lex_.tokens[i];
  }
  const Token& Next() {
    const Token& t = lex_.tokens[pos_];
    if (pos_ + 1 < lex_.tokens.size()) ++pos_;
    return t;
  }
  bool PeekIs(std::string_view text, std::size_t ahead = 0) const {
    const Token& t = Peek(ahead);
    return t.kind != TokenKind::kEnd && t.kind != TokenKind::kString &&
           t.kind != TokenKind::kChar && t.text == text;
  }
  void Expect(std::string_view text) {
    if (!PeekIs(text)) {
      throw SkipConstruct{"expected '" + std::string(text) + "' before '" + Peek().text + "'",
                          Peek().line};
    }
    Next();
  }

  // Skips from an opening bracket to just past its partner.
  void SkipBalanced() {
    int depth = 0;
    do {
      const Token& t = Next();
      if (t.kind == TokenKind::kPunct) {
        if (t.text == "(" || t.text == "[" || t.text == "{") ++depth;
        if (t.text == ")" || t.text == "]" || t.text == "}") --depth;
      }
      if (t.kind == TokenKind::kEnd) return;
    } while (depth > 0);
  }

  void SkipAttributes() {
    while (Peek().kind == TokenKind::kIdentifier && IsAttributeWord(Peek().text)) {
      Next();
      if (PeekIs("(")) SkipBalanced();
    }
  }

  // -- whole-file passes ----------------------------------------------------

  void CheckBalance() const {
    std::vector<const Token*> stack;
    for (const Token& t : lex_.tokens) {
      if (t.kind != TokenKind::kPunct) continue;
      if (t.text == "(" || t.text == "[" || t.text == "{") {
        stack.push_back(&t);
      } else if (t.text == ")" || t.text == "]" || t.text == "}") {
        char want = t.text == ")" ? '(' : t.text == "]" ? '[' : '{';
        if (stack.empty() || stack.back()->text[0] != want) {
          throw Error(ErrorCode::kUnbalancedDelimiters,
                      std::string(file_) + ":" + std::to_string(t.line) + ": unmatched '" +
                          t.text + "'");
        }
        stack.pop_back();
      }
    }
    if (!stack.empty()) {
      throw Error(ErrorCode::kUnbalancedDelimiters,
                  std::string(file_) + ":" + std::to_string(stack.back()->line) +
                      ": unclosed '" + stack.back()->text + "'");
    }
  }

  enum class LineKind : unsigned char { kBlank, kComment, kCode };

  void ClassifyLines() {
    int last_line = lex_.tokens.back().line + 1;
    for (const Comment& c : lex_.comments) last_line = std::max(last_line, c.end_line + 1);
    lines_.assign(static_cast<std::size_t>(last_line) + 1, LineKind::kBlank);
    for (const Comment& c : lex_.comments) {
      LineKind kind = c.starts_line && c.ends_line ? LineKind::kComment : LineKind::kCode;
      for (int l = c.start_line; l <= c.end_line; ++l) {
        if (lines_[l] != LineKind::kCode) lines_[l] = kind;
      }
    }
    for (const Token& t : lex_.tokens) {
      if (t.kind != TokenKind::kEnd) lines_[t.line] = LineKind::kCode;
    }
  }

  // The maximal run of comment-only lines ending directly above `line`.
  std::pair<std::string, int> CommentBlockAbove(int line) const {
    int first = line;
    while (first - 1 >= 1 && lines_[first - 1] == LineKind::kComment) --first;
    if (first == line) return {"", 0};
    std::string text;
    for (const Comment& c : lex_.comments) {
      if (c.start_line >= first && c.end_line < line) {
        if (!text.empty()) text += '\n';
        text += c.text;
      }
    }
    return {text, first};
  }

  void RejectAliasCycles() {
    auto& aliases = result_.model.aliases;
    std::set<std::string> doomed;
    for (const auto& [name, target] : aliases) {
      std::set<std::string> seen{name};
      const TypeRef* cur = &target;
      while (true) {
        while (cur->kind() == TypeKind::kPointer) cur = &cur->pointee();
        if (cur->kind() != TypeKind::kAlias) break;
        if (!seen.insert(cur->name()).second) {
          doomed.insert(name);
          break;
        }
        auto it = aliases.find(cur->name());
        if (it == aliases.end()) break;
        cur = &it->second;
      }
    }
    for (const auto& name : doomed) {
      result_.diagnostics.Error(std::string(file_), alias_lines_[name],
                                "typedef '" + name + "' is part of an alias cycle; rejected");
      aliases.erase(name);
    }
  }

  // Error recovery: drop everything up to the end of the construct that
  // started at token `start`.
  void Recover(std::size_t start) {
    pos_ = start;
    int depth = 0;
    while (Peek().kind != TokenKind::kEnd) {
      const Token& t = Peek();
      if (t.kind == TokenKind::kPunct) {
        if (t.text == "(" || t.text == "[") ++depth;
        if (t.text == ")" || t.text == "]") --depth;
        if (t.text == "{" && depth == 0) {
          bool function_body = pos_ > start && lex_.tokens[pos_ - 1].text == ")";
          SkipBalanced();
          if (function_body) return;
          continue;
        }
        if (t.text == ";" && depth == 0) {
          Next();
          return;
        }
        if (t.text == "}" && depth == 0) {
          // Stray close of an extern "C" block; let the top level see it.
          if (pos_ == start) Next();
          return;
        }
      }
      Next();
    }
  }

  // -- declarations ---------------------------------------------------------

  void ParseTopLevel() {
    const Token& t = Peek();
    if (PeekIs(";")) {
      Next();
      return;
    }
    if (PeekIs("}") && linkage_depth_ > 0) {
      Next();
      --linkage_depth_;
      return;
    }
    if (PeekIs("extern") && Peek(1).kind == TokenKind::kString) {
      Next();
      Next();
      if (PeekIs("{")) {
        Next();
        ++linkage_depth_;
      }
      return;
    }
    if (t.kind == TokenKind::kIdentifier && t.text == "typedef") {
      ParseTypedef();
      return;
    }
    if (t.kind != TokenKind::kIdentifier) {
      throw SkipConstruct{"unexpected '" + t.text + "' at file scope", t.line};
    }
    ParseDeclaration();
  }

  void ParseTypedef() {
    int line = Next().line;
    Specifiers spec = ParseSpecifiers();
    while (true) {
      Declarator d = ParseDeclarator(/*allow_abstract=*/false);
      std::optional<std::string> problem = spec.unsupported;
      if (!problem) problem = d.unsupported;
      if (!problem && d.is_function) problem = "function type";
      if (!problem && d.array_dims > 0) problem = "array type";
      if (problem) {
        result_.diagnostics.Warning(std::string(file_), d.line ? d.line : line,
                                    "skipping typedef '" + d.name + "': " + *problem);
      } else {
        TypeRef type = WrapPointers(*spec.base, d.pointer_depth);
        auto& aliases = result_.model.aliases;
        auto it = aliases.find(d.name);
        if (it == aliases.end()) {
          aliases.emplace(d.name, type);
          alias_lines_[d.name] = d.line;
        } else if (!(it->second == type)) {
          result_.diagnostics.Error(std::string(file_), d.line,
                                    "duplicate definition of typedef '" + d.name +
                                        "'; later definition rejected");
        }
      }
      if (PeekIs(",")) {
        Next();
        continue;
      }
      Expect(";");
      return;
    }
  }

  void ParseDeclaration() {
    const Token& first = Peek();
    int start_line = first.line;
    Specifiers spec = ParseSpecifiers();
    if (PeekIs(";")) {
      Next();
      if (spec.unsupported && spec.tag_definition) {
        result_.diagnostics.Note(std::string(file_), start_line,
                                 "skipping definition: " + *spec.unsupported);
      }
      return;
    }
    if (spec.tag_definition && Peek().line > spec.body_close_line) {
      result_.diagnostics.Warning(std::string(file_), spec.body_close_line,
                                  "missing ';' after type definition");
      return;
    }
    while (true) {
      Declarator d = ParseDeclarator(/*allow_abstract=*/false);
      if (d.is_function) {
        bool has_body = PeekIs("{");
        if (has_body) SkipBalanced();
        AddParsedFunction(spec, d, start_line, has_body);
        if (has_body) return;
      } else {
        result_.diagnostics.Note(std::string(file_), d.line,
                                 "skipping variable declaration '" + d.name + "'");
        if (PeekIs("=")) SkipInitializer();
      }
      if (PeekIs(",")) {
        Next();
        continue;
      }
      Expect(";");
      return;
    }
  }

  void SkipInitializer() {
    int depth = 0;
    while (Peek().kind != TokenKind::kEnd) {
      if (Peek().kind == TokenKind::kPunct) {
        const std::string& s = Peek().text;
        if (s == "(" || s == "[" || s == "{") ++depth;
        if (s == ")" || s == "]" || s == "}") --depth;
        if (depth == 0 && (s == "," || s == ";")) return;
      }
      Next();
    }
  }

  void AddParsedFunction(const Specifiers& spec, const Declarator& d, int start_line,
                         bool has_body) {
    auto skip = [&](const std::string& why) {
      result_.diagnostics.Warning(std::string(file_), d.line,
                                  "skipping function '" + d.name + "': " + why);
    };
    if (spec.unsupported) return skip("unsupported return type (" + *spec.unsupported + ")");
    if (d.unsupported) return skip(*d.unsupported);
    if (d.array_dims > 0) return skip("unsupported declarator");

    FunctionSignature sig;
    sig.name = d.name;
    sig.return_type = WrapPointers(*spec.base, d.pointer_depth);
    sig.return_spelling = spec.spelling + d.pointer_spelling;
    sig.variadic = d.variadic;
    sig.has_body = has_body;
    sig.location = {std::string(file_), start_line};
    std::set<std::string> names;
    for (std::size_t i = 0; i < d.params.size(); ++i) {
      const ParsedParam& p = d.params[i];
      if (p.unsupported) {
        return skip("parameter " + std::to_string(i) +
                    (p.name.empty() ? "" : " '" + p.name + "'") + " has unsupported type (" +
                    *p.unsupported + ")");
      }
      if (!p.name.empty() && !names.insert(p.name).second) {
        result_.diagnostics.Error(std::string(file_), d.line,
                                  "function '" + d.name + "' repeats parameter name '" +
                                      p.name + "'; skipped");
        return;
      }
    }
    for (std::size_t i = 0; i < d.params.size(); ++i) {
      const ParsedParam& p = d.params[i];
      std::string name = p.name;
      if (name.empty()) {
        // Unnamed parameters get a synthetic name that directives can use.
        int suffix = static_cast<int>(i);
        do {
          name = "param_" + std::to_string(suffix++);
        } while (names.count(name));
        names.insert(name);
      }
      sig.params.push_back({name, *p.type, static_cast<int>(i)});
    }
    auto [block, block_line] = CommentBlockAbove(start_line);
    sig.comment_block = std::move(block);
    sig.comment_line = block_line;
    AddFunction(result_.model.functions, std::move(sig), result_.diagnostics);
  }

  Specifiers ParseSpecifiers() {
    Specifiers s;
    std::vector<std::string> words;
    bool have_type = false;
    auto add_spelling = [&](const std::string& word) {
      if (!s.spelling.empty()) s.spelling += ' ';
      s.spelling += word;
    };
    while (Peek().kind == TokenKind::kIdentifier) {
      // A definition whose ';' is missing ends at its closing brace.
      if (s.tag_definition && Peek().line > s.body_close_line) break;
      const std::string text = Peek().text;
      if (IsStorageWord(text)) {
        Next();
      } else if (IsQualifier(text)) {
        add_spelling(text);
        Next();
      } else if (text == "_Atomic") {
        Next();
        s.unsupported = "_Atomic";
        if (PeekIs("(")) SkipBalanced();
      } else if (IsAttributeWord(text)) {
        SkipAttributes();
      } else if (IsBasicWord(text)) {
        if (have_type) throw SkipConstruct{"conflicting type specifiers", Peek().line};
        words.push_back(text);
        add_spelling(text);
        Next();
      } else if (text == "struct" || text == "union" || text == "enum") {
        if (have_type || !words.empty()) {
          throw SkipConstruct{"conflicting type specifiers", Peek().line};
        }
        have_type = true;
        ParseTagged(s, add_spelling);
      } else if (!have_type && words.empty() && !IsReservedWord(text)) {
        have_type = true;
        s.base = TypeRef::Alias(text);
        add_spelling(text);
        Next();
      } else {
        break;
      }
    }
    if (!words.empty()) {
      std::optional<std::string> canonical = CanonicalBasic(words);
      if (canonical) {
        s.base = TypeRef::Basic(*canonical);
      } else if (!s.unsupported) {
        std::string joined;
        for (const auto& w : words) joined += (joined.empty() ? "" : " ") + w;
        s.unsupported = "type '" + joined + "'";
      }
    }
    if (!s.base && !s.unsupported) {
      throw SkipConstruct{"missing type specifier before '" + Peek().text + "'", Peek().line};
    }
    return s;
  }

  template <typename AddSpelling>
  void ParseTagged(Specifiers& s, AddSpelling&& add_spelling) {
    const Token& kw = Next();
    std::string keyword = kw.text;
    std::size_t start_offset = kw.offset;
    int start_line = kw.line;
    std::string tag;
    SkipAttributes();
    if (Peek().kind == TokenKind::kIdentifier) tag = Next().text;
    SkipAttributes();
    add_spelling(keyword + (tag.empty() ? "" : " " + tag));
    bool has_body = PeekIs("{");
    if (keyword != "struct") {
      s.unsupported = keyword + (tag.empty() ? "" : " " + tag);
      if (has_body) {
        SkipBalanced();
        s.tag_definition = true;
        s.body_close_line = lex_.tokens[pos_ - 1].line;
      }
      return;
    }
    if (!has_body) {
      if (tag.empty()) throw SkipConstruct{"struct without tag or body", start_line};
      s.base = TypeRef::Record(tag);
      return;
    }
    s.tag_definition = true;
    if (tag.empty()) {
      SkipBalanced();
      s.body_close_line = lex_.tokens[pos_ - 1].line;
      s.unsupported = "anonymous struct";
      return;
    }
    ParseRecordBody(tag, start_offset, start_line);
    s.body_close_line = lex_.tokens[pos_ - 1].line;
    s.base = TypeRef::Record(tag);
  }

  void ParseRecordBody(const std::string& tag, std::size_t start_offset, int start_line) {
    RecordDef rec;
    rec.name = tag;
    rec.location = {std::string(file_), start_line};
    auto make_opaque = [&](std::string why) {
      if (!rec.opaque_reason) rec.opaque_reason = std::move(why);
    };
    bool duplicate_field = false;
    Next();  // '{'
    while (!PeekIs("}") && Peek().kind != TokenKind::kEnd) {
      std::size_t field_start = pos_;
      try {
        Specifiers spec = ParseSpecifiers();
        if (PeekIs(";")) {
          Next();
          make_opaque("anonymous member");
          continue;
        }
        while (true) {
          Declarator d = ParseDeclarator(/*allow_abstract=*/true);
          if (PeekIs(":")) {
            make_opaque("bitfield '" + d.name + "'");
            Next();
            SkipInitializer();
          } else if (spec.unsupported) {
            make_opaque("member '" + d.name + "' has " + *spec.unsupported);
          } else if (d.unsupported || d.is_function) {
            make_opaque("member '" + d.name + "' has unsupported declarator");
          } else if (d.array_dims > 0) {
            make_opaque("array member '" + d.name + "'");
          } else if (d.name.empty()) {
            make_opaque("unnamed member");
          } else {
            for (const auto& f : rec.fields) duplicate_field |= f.name == d.name;
            rec.fields.push_back({d.name, WrapPointers(*spec.base, d.pointer_depth)});
          }
          if (PeekIs(",")) {
            Next();
            continue;
          }
          break;
        }
        Expect(";");
      } catch (const SkipConstruct& skip) {
        make_opaque(skip.reason);
        pos_ = field_start;
        while (!PeekIs(";") && !PeekIs("}") && Peek().kind != TokenKind::kEnd) {
          if (PeekIs("(") || PeekIs("[") || PeekIs("{")) {
            SkipBalanced();
          } else {
            Next();
          }
        }
        if (PeekIs(";")) Next();
      }
    }
    const Token& close = Next();  // '}'
    rec.raw_text = std::string(source_.substr(start_offset, close.end - start_offset));

    if (duplicate_field) {
      result_.diagnostics.Error(std::string(file_), start_line,
                                "struct '" + tag + "' repeats a field name; rejected");
      return;
    }
    if (rec.fields.empty() && !rec.opaque_reason) {
      result_.diagnostics.Error(std::string(file_), start_line,
                                "struct '" + tag + "' has no fields; rejected");
      return;
    }
    if (rec.opaque_reason) {
      result_.diagnostics.Note(std::string(file_), start_line,
                               "struct '" + tag + "' is opaque: " + *rec.opaque_reason);
    }
    auto& records = result_.model.records;
    auto it = records.find(tag);
    if (it != records.end()) {
      result_.diagnostics.Error(std::string(file_), start_line,
                                "duplicate definition of struct '" + tag +
                                    "' (first defined at line " +
                                    std::to_string(it->second.location.line) +
                                    "); later definition rejected");
      return;
    }
    records.emplace(tag, std::move(rec));
  }

  Declarator ParseDeclarator(bool allow_abstract) {
    Declarator d;
    d.line = Peek().line;
    while (PeekIs("*")) {
      Next();
      ++d.pointer_depth;
      d.pointer_spelling += " *";
      while (Peek().kind == TokenKind::kIdentifier &&
             (IsQualifier(Peek().text) || IsAttributeWord(Peek().text))) {
        if (IsQualifier(Peek().text)) {
          d.pointer_spelling += " " + Next().text;
        } else {
          SkipAttributes();
        }
      }
    }
    SkipAttributes();
    if (PeekIs("(")) {
      d.unsupported = "function pointer or parenthesized declarator";
      // Grab the declared name if it is the usual (*name)(...) shape.
      std::size_t probe = pos_ + 1;
      while (probe < lex_.tokens.size() && lex_.tokens[probe].text == "*") ++probe;
      if (probe < lex_.tokens.size() && lex_.tokens[probe].kind == TokenKind::kIdentifier) {
        d.name = lex_.tokens[probe].text;
      }
      SkipBalanced();
      while (PeekIs("(") || PeekIs("[")) SkipBalanced();
      SkipAttributes();
      return d;
    }
    if (Peek().kind == TokenKind::kIdentifier && !IsReservedWord(Peek().text)) {
      d.line = Peek().line;
      d.name = Next().text;
    } else if (!allow_abstract) {
      throw SkipConstruct{"expected a declarator name before '" + Peek().text + "'", Peek().line};
    }
    while (PeekIs("[")) {
      SkipBalanced();
      ++d.array_dims;
    }
    if (PeekIs("(")) {
      d.is_function = true;
      ParseParamList(d);
      if (PeekIs("(") || PeekIs("[")) {
        d.unsupported = "function returning function or array";
        while (PeekIs("(") || PeekIs("[")) SkipBalanced();
      }
    }
    SkipAttributes();
    return d;
  }

  void ParseParamList(Declarator& d) {
    Next();  // '('
    if (PeekIs(")")) {
      Next();
      return;
    }
    if (PeekIs("void") && PeekIs(")", 1)) {
      Next();
      Next();
      return;
    }
    while (true) {
      if (PeekIs("...")) {
        Next();
        d.variadic = true;
        Expect(")");
        return;
      }
      ParsedParam p;
      std::size_t param_start = pos_;
      try {
        Specifiers spec = ParseSpecifiers();
        Declarator pd = ParseDeclarator(/*allow_abstract=*/true);
        p.name = pd.name;
        if (spec.unsupported) {
          p.unsupported = *spec.unsupported;
        } else if (pd.unsupported) {
          p.unsupported = *pd.unsupported;
        } else if (pd.is_function) {
          p.unsupported = "function parameter";
        } else if (pd.array_dims > 1) {
          p.unsupported = "multi-dimensional array parameter";
        } else {
          int depth = pd.pointer_depth + pd.array_dims;
          if (depth == 0 && spec.base->kind() == TypeKind::kBasic && spec.base->name() == "void") {
            p.unsupported = "void parameter";
          } else {
            p.type = WrapPointers(*spec.base, depth);
          }
        }
      } catch (const SkipConstruct& skip) {
        p.unsupported = skip.reason;
        pos_ = param_start;
        while (!PeekIs(",") && !PeekIs(")") && Peek().kind != TokenKind::kEnd) {
          if (PeekIs("(") || PeekIs("[")) {
            SkipBalanced();
          } else {
            Next();
          }
        }
      }
      d.params.push_back(std::move(p));
      if (PeekIs(",")) {
        Next();
        continue;
      }
      Expect(")");
      return;
    }
  }

  std::string_view source_;
  std::string_view file_;
  internal::LexResult lex_;
  std::size_t pos_ = 0;
  int linkage_depth_ = 0;
  std::vector<LineKind> lines_;
  std::map<std::string, int> alias_lines_;
  ParseResult result_;
};

}  // namespace

ParseResult ParseTranslationUnit(std::string_view source_text, std::string_view file_name) {
  return Parser(source_text, file_name).Run();
}

// ---------------------------------------------------------------------------
// Resolution and classification

namespace {

constexpr int kMaxAliasDepth = 64;

TypeRef ResolveImpl(const SourceModel& model, const TypeRef& type, int depth) {
  if (depth > kMaxAliasDepth) {
    throw Error(ErrorCode::kAliasCycle, "alias chain too deep at '" + type.name() + "'");
  }
  switch (type.kind()) {
    case TypeKind::kBasic:
      return type;
    case TypeKind::kRecord:
      if (!model.FindRecord(type.name())) {
        throw Error(ErrorCode::kUnresolvedName, "unknown struct '" + type.name() + "'");
      }
      return type;
    case TypeKind::kPointer:
      return TypeRef::Pointer(ResolveImpl(model, type.pointee(), depth + 1));
    case TypeKind::kAlias:
      if (const TypeRef* target = model.FindAlias(type.name())) {
        return ResolveImpl(model, *target, depth + 1);
      }
      if (auto builtin = BuiltinAlias(type.name())) return *builtin;
      throw Error(ErrorCode::kUnresolvedName, "unknown type name '" + type.name() + "'");
  }
  return type;
}

}  // namespace

TypeRef ResolveType(const SourceModel& model, const TypeRef& type) {
  return ResolveImpl(model, type, 0);
}

TypeRef ResolveShallow(const SourceModel& model, const TypeRef& type) {
  TypeRef cur = type;
  for (int depth = 0; cur.kind() == TypeKind::kAlias; ++depth) {
    if (depth > kMaxAliasDepth) {
      throw Error(ErrorCode::kAliasCycle, "alias chain too deep at '" + type.name() + "'");
    }
    if (const TypeRef* target = model.FindAlias(cur.name())) {
      cur = *target;
    } else if (auto builtin = BuiltinAlias(cur.name())) {
      cur = *builtin;
    } else {
      throw Error(ErrorCode::kUnresolvedName, "unknown type name '" + cur.name() + "'");
    }
  }
  return cur;
}

std::string_view TypeClassName(TypeClass cls) {
  switch (cls) {
    case TypeClass::kBasic: return "BASIC";
    case TypeClass::kStructOfBasic: return "STRUCT_OF_BASIC";
    case TypeClass::kPointer: return "POINTER";
    case TypeClass::kUnsupported: return "UNSUPPORTED";
  }
  return "UNSUPPORTED";
}

TypeClass ClassifyType(const SourceModel& model, const TypeRef& type) {
  TypeRef resolved = ResolveShallow(model, type);
  switch (resolved.kind()) {
    case TypeKind::kBasic:
      return resolved.name() == "void" ? TypeClass::kUnsupported : TypeClass::kBasic;
    case TypeKind::kPointer:
      return TypeClass::kPointer;
    case TypeKind::kAlias:
      return TypeClass::kUnsupported;
    case TypeKind::kRecord: {
      const RecordDef* rec = model.FindRecord(resolved.name());
      if (!rec) throw Error(ErrorCode::kUnresolvedName, "unknown struct '" + resolved.name() + "'");
      if (rec->opaque_reason) return TypeClass::kUnsupported;
      for (const auto& field : rec->fields) {
        try {
          TypeRef f = ResolveShallow(model, field.type);
          if (f.kind() != TypeKind::kBasic || f.name() == "void") return TypeClass::kUnsupported;
        } catch (const Error&) {
          return TypeClass::kUnsupported;
        }
      }
      return TypeClass::kStructOfBasic;
    }
  }
  return TypeClass::kUnsupported;
}

// ---------------------------------------------------------------------------
// Printing

std::string PrintDeclarations(const SourceModel& model) {
  std::ostringstream out;
  for (const auto& [name, rec] : model.records) {
    if (rec.opaque_reason) {
      out << rec.raw_text << ";\n\n";
      continue;
    }
    out << "struct " << name << " {\n";
    for (const auto& field : rec.fields) out << "  " << Declare(field.type, field.name) << ";\n";
    out << "};\n\n";
  }
  for (const auto& [name, type] : model.aliases) {
    out << "typedef " << Declare(type, name) << ";\n";
  }
  if (!model.aliases.empty()) out << '\n';
  for (const auto& f : model.functions) {
    if (!f.comment_block.empty()) out << f.comment_block << '\n';
    out << f.return_spelling;
    if (f.return_spelling.back() != '*') out << ' ';
    out << f.name << '(';
    for (std::size_t i = 0; i < f.params.size(); ++i) {
      if (i) out << ", ";
      out << Declare(f.params[i].type, f.params[i].name);
    }
    if (f.variadic) out << (f.params.empty() ? "..." : ", ...");
    if (f.params.empty() && !f.variadic) out << "void";
    out << ");\n\n";
  }
  return out.str();
}

bool EquivalentModels(const SourceModel& a, const SourceModel& b) {
  if (a.records.size() != b.records.size() || a.aliases != b.aliases ||
      a.functions.size() != b.functions.size()) {
    return false;
  }
  for (const auto& [name, rec] : a.records) {
    const RecordDef* other = b.FindRecord(name);
    if (!other || !EquivalentRecords(rec, *other)) return false;
  }
  for (std::size_t i = 0; i < a.functions.size(); ++i) {
    const auto& x = a.functions[i];
    const auto& y = b.functions[i];
    if (!SameSignature(x, y) || x.return_spelling != y.return_spelling ||
        x.comment_block != y.comment_block) {
      return false;
    }
    for (std::size_t p = 0; p < x.params.size(); ++p) {
      if (x.params[p].name != y.params[p].name || x.params[p].position != y.params[p].position) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace ftg
