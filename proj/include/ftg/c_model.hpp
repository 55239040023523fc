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

#ifndef FTG_C_MODEL_HPP_
#define FTG_C_MODEL_HPP_

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ftg/diagnostics.hpp"

namespace ftg {

enum class TypeKind { kBasic, kRecord, kAlias, kPointer };

// A reference to an object-language type as written in the source. Alias
// and record kinds are names looked up in a SourceModel; pointers own their
// pointee. Immutable value type.
class TypeRef {
 public:
  static TypeRef Basic(std::string name);
  static TypeRef Record(std::string name);
  static TypeRef Alias(std::string name);
  static TypeRef Pointer(TypeRef pointee);

  TypeKind kind() const { return kind_; }
  // Empty for pointers.
  const std::string& name() const { return name_; }
  // Only valid for pointers.
  const TypeRef& pointee() const { return *pointee_; }

  bool is_pointer() const { return kind_ == TypeKind::kPointer; }

  friend bool operator==(const TypeRef& a, const TypeRef& b);

 private:
  TypeRef(TypeKind kind, std::string name, std::shared_ptr<const TypeRef> pointee)
      : kind_(kind), name_(std::move(name)), pointee_(std::move(pointee)) {}

  TypeKind kind_;
  std::string name_;
  std::shared_ptr<const TypeRef> pointee_;
};

// C spelling of a type: "int", "struct Foo", "char *", "size_t **".
std::string Spell(const TypeRef& type);
// C declaration of `name` with `type`: "int a", "struct Foo f", "char *p".
std::string Declare(const TypeRef& type, std::string_view name);
// Debug form used in diagnostics and manifests, e.g. "pointer(basic(int))".
std::string Describe(const TypeRef& type);

// Canonical basic type names accepted by the parser.
const std::vector<std::string>& BasicTypeNames();
bool IsBasicTypeName(std::string_view name);
bool IsIntegerBasicType(std::string_view name);

// Fixed-width aliases known without reading headers (int8_t ... uint64_t,
// size_t and friends). Returns nullopt for other names.
std::optional<TypeRef> BuiltinAlias(std::string_view name);

struct SourceLocation {
  std::string file;
  int line = 0;
};

struct RecordField {
  std::string name;
  TypeRef type;
  friend bool operator==(const RecordField&, const RecordField&) = default;
};

struct RecordDef {
  std::string name;
  std::vector<RecordField> fields;
  // Set when the body uses constructs outside the accepted subset (bitfields,
  // array members, unions...). Such records classify UNSUPPORTED and `raw_text`
  // holds the original definition.
  std::optional<std::string> opaque_reason;
  std::string raw_text;
  SourceLocation location;
};

struct Param {
  std::string name;
  TypeRef type;
  int position = 0;
};

struct FunctionSignature {
  std::string name;
  TypeRef return_type = TypeRef::Basic("void");
  // Return type as declared, qualifiers included ("const char *").
  std::string return_spelling = "void";
  std::vector<Param> params;
  bool variadic = false;
  bool has_body = false;
  // Raw text of the comment lines directly above the declaration, joined
  // with '\n'. Empty when there are none.
  std::string comment_block;
  int comment_line = 0;  // first line of comment_block, 0 when empty
  SourceLocation location;

  const Param* FindParam(std::string_view param_name) const;
};

class SourceModel {
 public:
  std::map<std::string, RecordDef> records;
  std::map<std::string, TypeRef> aliases;
  std::vector<FunctionSignature> functions;

  const RecordDef* FindRecord(std::string_view name) const;
  const TypeRef* FindAlias(std::string_view name) const;
  const FunctionSignature* FindFunction(std::string_view name) const;

  // Names referenced from function signatures that neither the model nor
  // the builtin alias table defines.
  std::set<std::string> UnresolvedNames() const;

  // Folds `other` into this model. Duplicate records and aliases keep the
  // first definition; functions sharing a name collapse to one entry,
  // preferring one that carries an @fuzztest block, then one with a body.
  void Merge(const SourceModel& other, Diagnostics& diags);
};

struct ParseResult {
  SourceModel model;
  Diagnostics diagnostics;
};

// Parses the accepted C subset. Constructs outside it are skipped with a
// diagnostic. Throws Error(kUnbalancedDelimiters) when braces, brackets or
// parentheses do not match.
ParseResult ParseTranslationUnit(std::string_view source_text, std::string_view file_name);

// Removes every alias layer, recursing through pointers. Throws
// Error(kUnresolvedName) for unknown alias or record names.
TypeRef ResolveType(const SourceModel& model, const TypeRef& type);

// Removes alias layers at the top level only; a pointer's pointee is left
// as written.
TypeRef ResolveShallow(const SourceModel& model, const TypeRef& type);

enum class TypeClass { kBasic, kStructOfBasic, kPointer, kUnsupported };

std::string_view TypeClassName(TypeClass cls);

TypeClass ClassifyType(const SourceModel& model, const TypeRef& type);

// Renders records, aliases and function declarations (with their comment
// blocks) as C text that parses back into an equivalent model.
std::string PrintDeclarations(const SourceModel& model);

// Structural equality ignoring source locations and body presence.
bool EquivalentModels(const SourceModel& a, const SourceModel& b);

}  // namespace ftg

#endif  // FTG_C_MODEL_HPP_
