#pragma once

#include <deque>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "conceptual/token.hpp"

namespace conceptual::lex {

/// Thrown on unrecognized input; carries the violating string in the message.
struct LexError : std::runtime_error {
  LexError(const std::string& message, SourceLocation location)
      : std::runtime_error(message), loc(std::move(location)) {}
  SourceLocation loc;
};

/// Stream lexer with longest-match disambiguation and a FIFO token cache.
/// Synthesized tokens pushed onto the cache are served before fresh lexing;
/// the action-head rule uses this to re-inject the parenthesis it consumed.
class Lexer {
 public:
  Lexer(std::string_view source, std::string file_path);

  /// Cached token if any, otherwise the longest-match token at the current
  /// position. Separators and comments are skipped. Returns Eof repeatedly at
  /// end of input.
  Token next();

  /// Inject a token ahead of fresh lexing (FIFO order).
  void push_token(Token t) { cache_.push_back(std::move(t)); }

  /// End position of the most recently returned token; used by the parser to
  /// approximate syntax-error locations.
  SourceLocation last_token_end() const;

  const std::string& file() const { return file_; }

 private:
  Token lex_raw();
  void skip_separators();
  void skip_line_comment();
  void skip_block_comment();
  Token lex_ident_or_keyword();
  Token lex_int();
  Token lex_string();

  bool at_end() const { return pos_ >= src_.size(); }
  char cur() const { return src_[pos_]; }
  char peek_char(size_t ahead = 1) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }
  void advance();

  Token make(TokenKind kind, size_t start_pos, uint32_t start_line, uint32_t start_col);

  std::string_view src_;
  std::string file_;
  size_t pos_ = 0;
  uint32_t line_ = 1;
  uint32_t col_ = 1;
  std::deque<Token> cache_;
  SourceLocation last_end_;
};

/// Tokenize an entire input; the result always ends with Eof.
std::vector<Token> tokenize(std::string_view source, const std::string& file_path);

}  // namespace conceptual::lex
