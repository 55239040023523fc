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

#include "ftg/directives.hpp"

#include <cctype>

#include "ftg/error.hpp"

namespace ftg {
namespace {

constexpr std::string_view kFuzzTestToken = "@fuzztest";

bool IsIdentChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

bool IsIdentifier(std::string_view s) {
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s) {
    if (!IsIdentChar(c)) return false;
  }
  return true;
}

std::string Trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// One comment line with its markers removed. `column` is the 1-based column
// of content[0] in the raw line.
struct StrippedLine {
  std::string content;
  int column = 1;
  bool boundary = false;  // blank source line: separates unrelated blocks
};

std::vector<StrippedLine> StripCommentMarkers(std::string_view block) {
  std::vector<StrippedLine> out;
  bool in_block = false;
  std::size_t start = 0;
  while (start <= block.size()) {
    std::size_t end = block.find('\n', start);
    if (end == std::string_view::npos) end = block.size();
    std::string_view raw = block.substr(start, end - start);
    std::size_t b = 0;
    while (b < raw.size() && std::isspace(static_cast<unsigned char>(raw[b]))) ++b;
    std::size_t e = raw.size();
    if (!in_block && b == e) {
      out.push_back({"", 1, true});
    } else {
      if (!in_block && raw.substr(b, 2) == "//") {
        b += 2;
        while (b < e && raw[b] == '/') ++b;
      } else {
        if (!in_block && raw.substr(b, 2) == "/*") {
          b += 2;
          while (b < e && (raw[b] == '*' || raw[b] == '!')) ++b;
          in_block = true;
        } else if (in_block && b < e && raw[b] == '*' && raw.substr(b, 2) != "*/") {
          ++b;
        }
        if (in_block) {
          std::size_t close = raw.find("*/", b);
          if (close != std::string_view::npos) {
            e = close;
            in_block = false;
          }
        }
      }
      out.push_back({std::string(raw.substr(b, e - b)), static_cast<int>(b) + 1, false});
    }
    if (end == block.size()) break;
    start = end + 1;
  }
  return out;
}

// Position of a @fuzztest token in `s`, or npos.
std::size_t FindFuzzTestToken(std::string_view s) {
  std::size_t at = 0;
  while ((at = s.find(kFuzzTestToken, at)) != std::string_view::npos) {
    std::size_t after = at + kFuzzTestToken.size();
    if (after >= s.size() || !IsIdentChar(s[after])) return at;
    at = after;
  }
  return std::string_view::npos;
}

class DirectiveScanner {
 public:
  DirectiveScanner(std::vector<StrippedLine> lines, std::size_t line, std::size_t col)
      : lines_(std::move(lines)), line_(line), col_(col) {}

  std::vector<Directive> Run() {
    std::vector<Directive> out{FuzzTestDirective{}};
    bool have_cleanup = false;
    while (SkipSpace()) {
      std::size_t name_line = line_, name_col = col_;
      std::string name;
      while (!AtLineEnd() && IsIdentChar(Cur())) {
        name += Cur();
        ++col_;
      }
      if (name.empty()) Fail(name_line, name_col, std::string("unexpected '") + Cur() + "'");
      if (name != "Array" && name != "Value" && name != "Output" && name != "Cleanup") {
        Fail(name_line, name_col, "unknown directive '" + name + "'");
      }
      SkipSpace();
      if (AtEnd() || Cur() != '(') Fail(line_, col_, "expected '(' after " + name);
      std::vector<std::string> args = ReadArgs(name_line, name_col);
      auto arity = [&](std::size_t n) {
        if (args.size() != n) {
          Fail(name_line, name_col,
               name + " takes " + std::to_string(n) + " argument(s), got " +
                   std::to_string(args.size()));
        }
      };
      auto ident = [&](std::size_t i, const char* what) {
        if (!IsIdentifier(args[i])) {
          Fail(name_line, name_col,
               name + ": " + what + " must be an identifier, got '" + args[i] + "'");
        }
      };
      if (name == "Array") {
        arity(2);
        ident(0, "array pointer");
        ident(1, "array length");
        out.push_back(ArrayDirective{args[0], args[1]});
      } else if (name == "Value") {
        arity(2);
        ident(0, "parameter");
        if (args[1].empty()) Fail(name_line, name_col, "Value: empty value");
        out.push_back(ValueDirective{args[0], args[1]});
      } else if (name == "Output") {
        arity(1);
        ident(0, "parameter");
        out.push_back(OutputDirective{args[0]});
      } else {
        if (have_cleanup) Fail(name_line, name_col, "at most one Cleanup per function");
        if (args.size() < 2) {
          Fail(name_line, name_col, "Cleanup takes (condition, function [, params])");
        }
        ident(1, "clean-up function");
        for (std::size_t i = 2; i < args.size(); ++i) {
          if (args[i].empty()) Fail(name_line, name_col, "Cleanup: empty parameter");
        }
        have_cleanup = true;
        out.push_back(CleanupDirective{args[0], args[1],
                                       std::vector<std::string>(args.begin() + 2, args.end())});
      }
    }
    return out;
  }

 private:
  bool AtEnd() const { return line_ >= lines_.size() || lines_[line_].boundary; }
  bool AtLineEnd() const { return AtEnd() || col_ >= lines_[line_].content.size(); }
  char Cur() const { return lines_[line_].content[col_]; }

  // Advances over whitespace and line breaks; false at end of block.
  bool SkipSpace() {
    while (!AtEnd()) {
      if (AtLineEnd()) {
        ++line_;
        col_ = 0;
        continue;
      }
      if (!std::isspace(static_cast<unsigned char>(Cur()))) return true;
      ++col_;
    }
    return false;
  }

  [[noreturn]] void Fail(std::size_t line, std::size_t col, const std::string& why) const {
    int column = 1;
    if (line < lines_.size()) column = lines_[line].column + static_cast<int>(col);
    throw Error(ErrorCode::kMalformedDirective, "line " + std::to_string(line + 1) +
                                                    ", column " + std::to_string(column) + ": " +
                                                    why);
  }

  // Reads "(a, b(c, d), e)" starting at '('; splits on top-level commas.
  std::vector<std::string> ReadArgs(std::size_t name_line, std::size_t name_col) {
    std::vector<std::string> args;
    std::string current;
    int depth = 0;
    char quote = 0;
    ++col_;  // '('
    while (true) {
      if (AtEnd()) Fail(name_line, name_col, "unbalanced parentheses");
      if (AtLineEnd()) {
        ++line_;
        col_ = 0;
        current += ' ';
        continue;
      }
      char c = Cur();
      ++col_;
      if (quote) {
        current += c;
        if (c == '\\' && !AtLineEnd()) {
          current += Cur();
          ++col_;
        } else if (c == quote) {
          quote = 0;
        }
        continue;
      }
      if (c == '"' || c == '\'') {
        quote = c;
        current += c;
      } else if (c == '(' || c == '[' || c == '{') {
        ++depth;
        current += c;
      } else if (c == ')' && depth == 0) {
        args.push_back(Trim(current));
        return args;
      } else if (c == ')' || c == ']' || c == '}') {
        if (--depth < 0) Fail(name_line, name_col, "unbalanced parentheses");
        current += c;
      } else if (c == ',' && depth == 0) {
        args.push_back(Trim(current));
        current.clear();
      } else {
        current += c;
      }
    }
  }

  std::vector<StrippedLine> lines_;
  std::size_t line_;
  std::size_t col_;
};

[[noreturn]] void BindFail(ErrorCode code, const FunctionSignature& sig, const std::string& why) {
  throw Error(code, sig.location.file + ":" + std::to_string(sig.location.line) + ": " +
                        sig.name + ": " + why);
}

}  // namespace

bool HasFuzzTestDirective(std::string_view comment_block) {
  for (const auto& line : StripCommentMarkers(comment_block)) {
    if (FindFuzzTestToken(line.content) != std::string_view::npos) return true;
  }
  return false;
}

std::vector<Directive> ExtractDirectives(std::string_view comment_block) {
  std::vector<StrippedLine> lines = StripCommentMarkers(comment_block);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::size_t at = FindFuzzTestToken(lines[i].content);
    if (at == std::string_view::npos) continue;
    return DirectiveScanner(std::move(lines), i, at + kFuzzTestToken.size()).Run();
  }
  return {};
}

std::string DescribeDirective(const Directive& d) {
  struct Visitor {
    std::string operator()(const FuzzTestDirective&) const { return "FuzzTest"; }
    std::string operator()(const ArrayDirective& a) const {
      return "Array(" + a.ptr_param + ", " + a.len_param + ")";
    }
    std::string operator()(const ValueDirective& v) const {
      return "Value(" + v.param + ", " + v.value_text + ")";
    }
    std::string operator()(const OutputDirective& o) const { return "Output(" + o.param + ")"; }
    std::string operator()(const CleanupDirective& c) const {
      std::string s = "Cleanup(" + c.condition_text + ", " + c.function_name;
      for (const auto& a : c.arg_texts) s += ", " + a;
      return s + ")";
    }
  };
  return std::visit(Visitor{}, d);
}

std::string_view RoleKindName(RoleKind kind) {
  switch (kind) {
    case RoleKind::kSerialized: return "SERIALIZED";
    case RoleKind::kArrayData: return "ARRAY_DATA";
    case RoleKind::kArrayLen: return "ARRAY_LEN";
    case RoleKind::kFixed: return "FIXED";
    case RoleKind::kOutput: return "OUTPUT";
  }
  return "SERIALIZED";
}

std::string_view OriginName(Origin origin) {
  return origin == Origin::kAnnotated ? "ANNOTATED" : "AUTO";
}

AnnotatedFunction Bind(const SourceModel& model, const FunctionSignature& signature,
                       const std::vector<Directive>& directives) {
  bool has_fuzztest = false;
  for (const auto& d : directives) has_fuzztest |= std::holds_alternative<FuzzTestDirective>(d);
  if (!has_fuzztest) BindFail(ErrorCode::kMissingFuzzTest, signature, "no @fuzztest directive");

  AnnotatedFunction out;
  out.signature = signature;
  out.origin = Origin::kAnnotated;
  std::map<int, std::string> claimed;  // position -> directive that claimed it

  auto param_of = [&](const std::string& name, const Directive& d) -> const Param& {
    const Param* p = signature.FindParam(name);
    if (!p) {
      BindFail(ErrorCode::kUnknownParam, signature,
               DescribeDirective(d) + " names unknown parameter '" + name + "'");
    }
    return *p;
  };
  auto claim = [&](const Param& p, ParamRole role, const Directive& d) {
    auto [it, inserted] = claimed.emplace(p.position, DescribeDirective(d));
    if (!inserted) {
      BindFail(ErrorCode::kConflictingRoles, signature,
               "parameter '" + p.name + "' is named by both " + it->second + " and " +
                   DescribeDirective(d));
    }
    out.roles[p.position] = std::move(role);
  };

  bool seen_array = false;
  for (const auto& d : directives) {
    if (const auto* array = std::get_if<ArrayDirective>(&d)) {
      if (seen_array) {
        BindFail(ErrorCode::kMultipleArrays, signature, "only one Array per fuzz target");
      }
      seen_array = true;
      const Param& data = param_of(array->ptr_param, d);
      const Param& len = param_of(array->len_param, d);
      if (ClassifyType(model, data.type) != TypeClass::kPointer) {
        BindFail(ErrorCode::kNonPointerArrayData, signature,
                 "array parameter '" + data.name + "' has non-pointer type '" +
                     Spell(data.type) + "'");
      }
      TypeRef len_type = ResolveShallow(model, len.type);
      if (len_type.kind() != TypeKind::kBasic || !IsIntegerBasicType(len_type.name())) {
        BindFail(ErrorCode::kNonIntegerArrayLen, signature,
                 "array length '" + len.name + "' has non-integer type '" + Spell(len.type) +
                     "'");
      }
      claim(data, {RoleKind::kArrayData, ""}, d);
      claim(len, {RoleKind::kArrayLen, ""}, d);
    } else if (const auto* value = std::get_if<ValueDirective>(&d)) {
      claim(param_of(value->param, d), {RoleKind::kFixed, value->value_text}, d);
    } else if (const auto* output = std::get_if<OutputDirective>(&d)) {
      const Param& p = param_of(output->param, d);
      TypeRef resolved = ResolveShallow(model, p.type);
      if (!resolved.is_pointer()) {
        BindFail(ErrorCode::kInvalidOutputParam, signature,
                 "Output parameter '" + p.name + "' is not a pointer");
      }
      bool void_pointee = false;
      try {
        TypeRef pointee = ResolveShallow(model, resolved.pointee());
        void_pointee = pointee.kind() == TypeKind::kBasic && pointee.name() == "void";
      } catch (const Error&) {
        // Unknown pointee names are left for the C compiler to check.
      }
      if (void_pointee) {
        BindFail(ErrorCode::kInvalidOutputParam, signature,
                 "Output parameter '" + p.name + "' points to void; no storage type");
      }
      claim(p, {RoleKind::kOutput, ""}, d);
    } else if (const auto* cleanup = std::get_if<CleanupDirective>(&d)) {
      if (out.cleanup) {
        throw Error(ErrorCode::kMalformedDirective, signature.name + ": more than one Cleanup");
      }
      out.cleanup = *cleanup;
    }
  }

  for (const auto& p : signature.params) {
    if (out.roles.count(p.position)) continue;
    TypeClass cls = TypeClass::kUnsupported;
    std::string detail;
    try {
      cls = ClassifyType(model, p.type);
    } catch (const Error& e) {
      detail = std::string(" (") + e.what() + ")";
    }
    if (cls != TypeClass::kBasic && cls != TypeClass::kStructOfBasic) {
      BindFail(ErrorCode::kUnserializableParam, signature,
               "parameter '" + p.name + "' of type '" + Spell(p.type) + "' classifies " +
                   std::string(TypeClassName(cls)) + detail +
                   " and no directive covers it");
    }
    out.roles[p.position] = {RoleKind::kSerialized, ""};
  }

  if (out.cleanup) {
    bool uses_return = MentionsIdentifier(out.cleanup->condition_text, kFuzzerReturnValue);
    for (const auto& a : out.cleanup->arg_texts) {
      uses_return |= MentionsIdentifier(a, kFuzzerReturnValue);
    }
    bool returns_void = false;
    try {
      TypeRef ret = ResolveShallow(model, signature.return_type);
      returns_void = ret.kind() == TypeKind::kBasic && ret.name() == "void";
    } catch (const Error&) {
    }
    if (uses_return && returns_void) {
      BindFail(ErrorCode::kVoidReturnCleanup, signature,
               "Cleanup uses fuzzer_return_value but the function returns void");
    }
  }
  return out;
}

namespace {

// Calls `fn(begin, end)` for each identifier outside string/char literals.
template <typename Fn>
void ForEachIdentifier(std::string_view text, Fn&& fn) {
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '"' || c == '\'') {
      std::size_t j = i + 1;
      while (j < text.size() && text[j] != c) j += text[j] == '\\' ? 2 : 1;
      i = j + 1;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && IsIdentChar(text[j])) ++j;
      fn(i, j);
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < text.size() && (IsIdentChar(text[i]) || text[i] == '.')) ++i;
    } else {
      ++i;
    }
  }
}

}  // namespace

bool MentionsIdentifier(std::string_view text, std::string_view identifier) {
  bool found = false;
  ForEachIdentifier(text, [&](std::size_t b, std::size_t e) {
    found |= text.substr(b, e - b) == identifier;
  });
  return found;
}

std::string ReplaceIdentifier(std::string_view text, std::string_view from, std::string_view to) {
  std::string out;
  std::size_t copied = 0;
  ForEachIdentifier(text, [&](std::size_t b, std::size_t e) {
    if (text.substr(b, e - b) != from) return;
    out.append(text.substr(copied, b - copied));
    out.append(to);
    copied = e;
  });
  out.append(text.substr(std::min(copied, text.size())));
  return out;
}

}  // namespace ftg
