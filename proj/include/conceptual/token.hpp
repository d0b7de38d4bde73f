#pragma once

#include <cstdint>
#include <string>

#include "conceptual/source_location.hpp"

namespace conceptual::lex {

enum class TokenKind {
  // Operators and punctuation.
  Plus, Minus, Amp, Colon, Dot, Comma, Tilde, Caret, Star, Slash, Percent,
  Card, LPar, RPar, LBrack, RBrack, LBrace, RBrace, Pipe,
  Lt, Gt, Lte, Gte, Eq, Land, Lor, Arrow, Empty,
  // Keywords.
  When, In, Not, Set, One, Lone, Some, Const, Str, Int, Can, Until, Then, No,
  Concept, Purpose, State, Actions, Op, App, Include, Sync,
  // Parameterized tokens.
  Ident, Act, IntLit, StrLit,
  Eof,
};

const char* token_kind_name(TokenKind k);

struct Token {
  TokenKind kind = TokenKind::Eof;
  std::string text;      // identifier name (Ident/Act) or decoded string (StrLit)
  int64_t int_value = 0; // IntLit payload
  std::string lexeme;    // raw source slice
  SourceLocation loc;

  std::string describe() const;
};

}  // namespace conceptual::lex
