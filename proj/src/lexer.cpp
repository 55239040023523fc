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

#include "lexer.hpp"

#include <cctype>

namespace ftg::internal {
namespace {

bool IsIdentStart(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool IsIdentChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

std::string RightTrim(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  return s;
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  LexResult Run() {
    LexResult out;
    bool line_has_content = false;  // any token or comment seen on this line
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\n') {
        Advance();
        line_has_content = false;
        continue;
      }
      if (c == '\r' || c == ' ' || c == '\t' || c == '\f' || c == '\v') {
        Advance();
        continue;
      }
      if (c == '#' && !line_has_content) {
        SkipPreprocessorLine();
        continue;
      }
      if (c == '/' && Peek(1) == '/') {
        Comment comment;
        comment.start_line = line_;
        comment.line_comment = true;
        comment.starts_line = !line_has_content;
        std::size_t begin = pos_;
        while (pos_ < text_.size() && text_[pos_] != '\n') Advance();
        comment.end_line = line_;
        comment.text = RightTrim(std::string(text_.substr(begin, pos_ - begin)));
        comment.ends_line = true;
        out.comments.push_back(std::move(comment));
        line_has_content = true;
        continue;
      }
      if (c == '/' && Peek(1) == '*') {
        Comment comment;
        comment.start_line = line_;
        comment.line_comment = false;
        comment.starts_line = !line_has_content;
        std::size_t begin = pos_;
        Advance();
        Advance();
        while (pos_ < text_.size() && !(text_[pos_] == '*' && Peek(1) == '/')) Advance();
        if (pos_ < text_.size()) {
          Advance();
          Advance();
        }
        comment.end_line = line_;
        comment.text = RightTrim(std::string(text_.substr(begin, pos_ - begin)));
        comment.ends_line = RestOfLineBlank();
        out.comments.push_back(std::move(comment));
        line_has_content = true;
        continue;
      }

      Token tok;
      tok.line = line_;
      tok.column = column_;
      tok.offset = pos_;
      if (IsIdentStart(c)) {
        tok.kind = TokenKind::kIdentifier;
        while (pos_ < text_.size() && IsIdentChar(text_[pos_])) Advance();
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '.' && std::isdigit(static_cast<unsigned char>(Peek(1))))) {
        tok.kind = TokenKind::kNumber;
        while (pos_ < text_.size()) {
          char d = text_[pos_];
          if (IsIdentChar(d) || d == '.') {
            Advance();
          } else if ((d == '+' || d == '-') && pos_ > 0 &&
                     (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E' ||
                      text_[pos_ - 1] == 'p' || text_[pos_ - 1] == 'P')) {
            Advance();
          } else {
            break;
          }
        }
      } else if (c == '"' || c == '\'') {
        tok.kind = c == '"' ? TokenKind::kString : TokenKind::kChar;
        SkipQuoted(c);
      } else {
        tok.kind = TokenKind::kPunct;
        LexPunct();
      }
      tok.end = pos_;
      tok.text = std::string(text_.substr(tok.offset, tok.end - tok.offset));
      out.tokens.push_back(std::move(tok));
      line_has_content = true;
    }
    Token end;
    end.kind = TokenKind::kEnd;
    end.line = line_;
    end.column = column_;
    end.offset = end.end = text_.size();
    out.tokens.push_back(end);
    return out;
  }

 private:
  char Peek(std::size_t ahead) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  void Advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  bool RestOfLineBlank() const {
    for (std::size_t i = pos_; i < text_.size() && text_[i] != '\n'; ++i) {
      if (!std::isspace(static_cast<unsigned char>(text_[i]))) return false;
    }
    return true;
  }

  void SkipPreprocessorLine() {
    while (pos_ < text_.size()) {
      if (text_[pos_] == '\\' && Peek(1) == '\n') {
        Advance();
        Advance();
        continue;
      }
      if (text_[pos_] == '\\' && Peek(1) == '\r' && Peek(2) == '\n') {
        Advance();
        Advance();
        Advance();
        continue;
      }
      if (text_[pos_] == '\n') return;
      Advance();
    }
  }

  void SkipQuoted(char quote) {
    Advance();
    while (pos_ < text_.size() && text_[pos_] != quote && text_[pos_] != '\n') {
      if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) Advance();
      Advance();
    }
    if (pos_ < text_.size() && text_[pos_] == quote) Advance();
  }

  void LexPunct() {
    static constexpr std::string_view kThree[] = {"...", "<<=", ">>="};
    static constexpr std::string_view kTwo[] = {
        "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||",
        "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "##", "::"};
    std::string_view rest = text_.substr(pos_);
    for (auto op : kThree) {
      if (rest.substr(0, 3) == op) {
        for (int i = 0; i < 3; ++i) Advance();
        return;
      }
    }
    for (auto op : kTwo) {
      if (rest.substr(0, 2) == op) {
        Advance();
        Advance();
        return;
      }
    }
    Advance();
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

}  // namespace

LexResult Lex(std::string_view text) { return Lexer(text).Run(); }

}  // namespace ftg::internal
