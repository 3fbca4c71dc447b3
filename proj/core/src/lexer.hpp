#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "lola/diagnostic.hpp"

namespace lola::detail {

enum class Tok {
  Ident, Int, Float, String,
  LParen, RParen, LBracket, RBracket, Comma, Colon, Assign, Dot, At,
  Plus, Minus, Star, Slash, Percent,
  EqEq, NotEq, Lt, Le, Gt, Ge, AndAnd, OrOr, Bang,
  Error,  // already reported by the lexer
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;  // identifier/number text, unescaped string contents
  Span span;
};

/// Splits source text into tokens. Lexical errors (P001 for stray
/// characters, P002 for unterminated strings) are appended to `diagnostics`
/// and leave a Tok::Error token in the stream.
std::vector<Token> tokenize(std::string_view source, std::vector<Diagnostic>& diagnostics);

const char* describe(Tok kind);

}  // namespace lola::detail
