#pragma once

#include "gex/error.hpp"

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace gex::dsl {

enum class Tok { Ident, Number, LParen, RParen, Comma, Semi, Colon, Assign, Plus, Minus, Star, Slash, Caret, End };

inline const char* describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::Colon: return "':'";
    case Tok::Assign: return "'='";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Caret: return "'^'";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceSpan span;
};

/// Splits source text into tokens. `#` starts a comment running to end of line.
/// Lines and columns are 1-based; columns count bytes.
inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto is_ident_char = [](char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'; };

  while (i < src.size()) {
    char ch = src[i];
    if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') {
      advance(1);
      continue;
    }
    if (ch == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.span.line = line;
    t.span.column = col;
    std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t j = i;
      while (j < src.size() && is_ident_char(src[j])) ++j;
      t.kind = Tok::Ident;
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(ch)) ||
               (ch == '.' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j < src.size() && src[j] == '.') {
        ++j;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      }
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
          while (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) ++k;
          j = k;
        }
      }
      if (j < src.size() && is_ident_char(src[j])) {
        throw ScriptError(ErrorKind::SyntaxError, "malformed number", {line, col, line, col + int(j - i)});
      }
      t.kind = Tok::Number;
      advance(j - i);
    } else {
      switch (ch) {
        case '(': t.kind = Tok::LParen; break;
        case ')': t.kind = Tok::RParen; break;
        case ',': t.kind = Tok::Comma; break;
        case ';': t.kind = Tok::Semi; break;
        case ':': t.kind = Tok::Colon; break;
        case '=': t.kind = Tok::Assign; break;
        case '+': t.kind = Tok::Plus; break;
        case '-': t.kind = Tok::Minus; break;
        case '*': t.kind = Tok::Star; break;
        case '/': t.kind = Tok::Slash; break;
        case '^': t.kind = Tok::Caret; break;
        default:
          throw ScriptError(ErrorKind::SyntaxError, std::string("unexpected character '") + ch + "'",
                            {line, col, line, col + 1});
      }
      advance(1);
    }
    t.text = std::string(src.substr(start, i - start));
    t.span.end_line = line;
    t.span.end_column = col;
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Tok::End;
  end.span = {line, col, line, col};
  out.push_back(end);
  return out;
}

}  // namespace gex::dsl
