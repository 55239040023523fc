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

#ifndef FTG_SRC_LEXER_HPP_
#define FTG_SRC_LEXER_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ftg::internal {

enum class TokenKind { kIdentifier, kNumber, kString, kChar, kPunct, kEnd };

struct Token {
  TokenKind kind = TokenKind::kEnd;
  std::string text;
  int line = 0;
  int column = 0;
  std::size_t offset = 0;  // byte offset of the first character
  std::size_t end = 0;     // one past the last character
};

struct Comment {
  int start_line = 0;
  int end_line = 0;
  std::string text;         // from the opening marker, trailing whitespace removed
  bool line_comment = true;
  bool starts_line = false;  // only whitespace precedes it on start_line
  bool ends_line = false;    // only whitespace follows it on end_line
};

struct LexResult {
  std::vector<Token> tokens;  // always terminated by a kEnd token
  std::vector<Comment> comments;
};

// Tokenizes C-like text. Preprocessor lines (first non-blank character '#',
// with backslash continuations) are dropped. Never throws; unterminated
// literals and comments run to the end of the input.
LexResult Lex(std::string_view text);

}  // namespace ftg::internal

#endif  // FTG_SRC_LEXER_HPP_
