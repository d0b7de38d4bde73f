#include "conceptual/lexer.hpp"

#include <cctype>
#include <limits>
#include <unordered_map>
#include <vector>

namespace conceptual::lex {

const char* token_kind_name(TokenKind k) {
  switch (k) {
    case TokenKind::Plus: return "PLUS";
    case TokenKind::Minus: return "MINUS";
    case TokenKind::Amp: return "AMP";
    case TokenKind::Colon: return "COLON";
    case TokenKind::Dot: return "DOT";
    case TokenKind::Comma: return "COMMA";
    case TokenKind::Tilde: return "TILDE";
    case TokenKind::Caret: return "CARET";
    case TokenKind::Star: return "STAR";
    case TokenKind::Slash: return "SLASH";
    case TokenKind::Percent: return "PERCENT";
    case TokenKind::Card: return "CARD";
    case TokenKind::LPar: return "LPAR";
    case TokenKind::RPar: return "RPAR";
    case TokenKind::LBrack: return "LBRACK";
    case TokenKind::RBrack: return "RBRACK";
    case TokenKind::LBrace: return "LBRACE";
    case TokenKind::RBrace: return "RBRACE";
    case TokenKind::Pipe: return "PIPE";
    case TokenKind::Lt: return "LT";
    case TokenKind::Gt: return "GT";
    case TokenKind::Lte: return "LTE";
    case TokenKind::Gte: return "GTE";
    case TokenKind::Eq: return "EQ";
    case TokenKind::Land: return "LAND";
    case TokenKind::Lor: return "LOR";
    case TokenKind::Arrow: return "ARROW";
    case TokenKind::Empty: return "EMPTY";
    case TokenKind::When: return "WHEN";
    case TokenKind::In: return "IN";
    case TokenKind::Not: return "NOT";
    case TokenKind::Set: return "SET";
    case TokenKind::One: return "ONE";
    case TokenKind::Lone: return "LONE";
    case TokenKind::Some: return "SOME";
    case TokenKind::Const: return "CONST";
    case TokenKind::Str: return "STR";
    case TokenKind::Int: return "INT";
    case TokenKind::Can: return "CAN";
    case TokenKind::Until: return "UNTIL";
    case TokenKind::Then: return "THEN";
    case TokenKind::No: return "NO";
    case TokenKind::Concept: return "CONCEPT";
    case TokenKind::Purpose: return "PURPOSE";
    case TokenKind::State: return "STATE";
    case TokenKind::Actions: return "ACTIONS";
    case TokenKind::Op: return "OP";
    case TokenKind::App: return "APP";
    case TokenKind::Include: return "INCLUDE";
    case TokenKind::Sync: return "SYNC";
    case TokenKind::Ident: return "IDENT";
    case TokenKind::Act: return "ACT";
    case TokenKind::IntLit: return "INT_LIT";
    case TokenKind::StrLit: return "STR_LIT";
    case TokenKind::Eof: return "EOF";
  }
  return "?";
}

std::string Token::describe() const {
  std::string out = token_kind_name(kind);
  switch (kind) {
    case TokenKind::Ident:
    case TokenKind::Act:
      out += "(" + text + ")";
      break;
    case TokenKind::StrLit:
      out += "(\"" + text + "\")";
      break;
    case TokenKind::IntLit:
      out += "(" + std::to_string(int_value) + ")";
      break;
    default:
      break;
  }
  return out;
}

namespace {

const std::unordered_map<std::string_view, TokenKind>& keyword_table() {
  static const std::unordered_map<std::string_view, TokenKind> table = {
      {"is", TokenKind::Eq},
      {"and", TokenKind::Land},
      {"or", TokenKind::Lor},
      {"none", TokenKind::Empty},
      {"empty", TokenKind::Empty},
      {"when", TokenKind::When},
      {"in", TokenKind::In},
      {"not", TokenKind::Not},
      {"set", TokenKind::Set},
      {"one", TokenKind::One},
      {"lone", TokenKind::Lone},
      {"some", TokenKind::Some},
      {"const", TokenKind::Const},
      {"string", TokenKind::Str},
      {"int", TokenKind::Int},
      {"can", TokenKind::Can},
      {"until", TokenKind::Until},
      {"then", TokenKind::Then},
      {"no", TokenKind::No},
      {"concept", TokenKind::Concept},
      {"purpose", TokenKind::Purpose},
      {"state", TokenKind::State},
      {"actions", TokenKind::Actions},
      {"principle", TokenKind::Op},
      {"app", TokenKind::App},
      {"include", TokenKind::Include},
      {"sync", TokenKind::Sync},
  };
  return table;
}

bool is_ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool is_ident_continue(char c) {
  return is_ident_start(c) || (c >= '0' && c <= '9') || c == '_';
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

Lexer::Lexer(std::string_view source, std::string file_path)
    : src_(source), file_(std::move(file_path)) {
  last_end_ = SourceLocation::point(file_, 1, 1);
}

void Lexer::advance() {
  char c = src_[pos_];
  ++pos_;
  if (c == '\n') {
    ++line_;
    col_ = 1;
  } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
    // Count characters, not bytes: UTF-8 continuation bytes do not move the column.
    ++col_;
  }
}

Token Lexer::make(TokenKind kind, size_t start_pos, uint32_t start_line, uint32_t start_col) {
  Token t;
  t.kind = kind;
  t.lexeme = std::string(src_.substr(start_pos, pos_ - start_pos));
  t.loc = SourceLocation{file_, start_line, start_col, line_, col_};
  return t;
}

SourceLocation Lexer::last_token_end() const { return last_end_; }

Token Lexer::next() {
  Token t;
  if (!cache_.empty()) {
    t = cache_.front();
    cache_.pop_front();
  } else {
    t = lex_raw();
  }
  last_end_ = SourceLocation::point(file_, t.loc.end_line, t.loc.end_col);
  return t;
}

void Lexer::skip_separators() {
  for (;;) {
    if (at_end()) return;
    char c = cur();
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance();
      continue;
    }
    if (c == '/' && peek_char() == '/') {
      skip_line_comment();
      continue;
    }
    if (c == '/' && peek_char() == '*') {
      skip_block_comment();
      continue;
    }
    return;
  }
}

void Lexer::skip_line_comment() {
  while (!at_end() && cur() != '\n') advance();
}

void Lexer::skip_block_comment() {
  SourceLocation start = SourceLocation::point(file_, line_, col_);
  advance();  // '/'
  advance();  // '*'
  int depth = 1;
  while (depth > 0) {
    if (at_end())
      throw LexError("unterminated block comment", start);
    if (cur() == '/' && peek_char() == '*') {
      advance();
      advance();
      ++depth;
    } else if (cur() == '*' && peek_char() == '/') {
      advance();
      advance();
      --depth;
    } else {
      advance();
    }
  }
}

Token Lexer::lex_ident_or_keyword() {
  size_t start_pos = pos_;
  uint32_t start_line = line_, start_col = col_;
  while (!at_end() && is_ident_continue(cur())) advance();
  std::string_view word = src_.substr(start_pos, pos_ - start_pos);

  auto it = keyword_table().find(word);
  if (it != keyword_table().end())
    return make(it->second, start_pos, start_line, start_col);

  // An identifier immediately followed by '(' is an action head. The
  // parenthesis is consumed here and re-injected through the cache so the
  // parser still sees it.
  if (!at_end() && cur() == '(') {
    Token act = make(TokenKind::Act, start_pos, start_line, start_col);
    act.text = std::string(word);

    size_t par_pos = pos_;
    uint32_t par_line = line_, par_col = col_;
    advance();
    cache_.push_back(make(TokenKind::LPar, par_pos, par_line, par_col));
    return act;
  }

  Token t = make(TokenKind::Ident, start_pos, start_line, start_col);
  t.text = std::string(word);
  return t;
}

Token Lexer::lex_int() {
  size_t start_pos = pos_;
  uint32_t start_line = line_, start_col = col_;
  while (!at_end() && is_digit(cur())) advance();
  std::string_view digits = src_.substr(start_pos, pos_ - start_pos);

  constexpr uint64_t kMax = static_cast<uint64_t>(std::numeric_limits<int64_t>::max());
  uint64_t value = 0;
  for (char c : digits) {
    uint64_t digit = static_cast<uint64_t>(c - '0');
    if (value > (kMax - digit) / 10)
      throw LexError("integer literal does not fit in 64 bits: " + std::string(digits),
                     SourceLocation{file_, start_line, start_col, line_, col_});
    value = value * 10 + digit;
  }

  Token t = make(TokenKind::IntLit, start_pos, start_line, start_col);
  t.int_value = static_cast<int64_t>(value);
  return t;
}

Token Lexer::lex_string() {
  size_t start_pos = pos_;
  uint32_t start_line = line_, start_col = col_;
  advance();  // opening quote
  std::string value;
  for (;;) {
    if (at_end() || cur() == '\n')
      throw LexError("unterminated string literal",
                     SourceLocation{file_, start_line, start_col, line_, col_});
    char c = cur();
    if (c == '"') {
      advance();
      break;
    }
    if (c == '\\') {
      advance();
      if (at_end())
        throw LexError("unterminated string literal",
                       SourceLocation{file_, start_line, start_col, line_, col_});
      char esc = cur();
      switch (esc) {
        case 'n': value += '\n'; break;
        case 't': value += '\t'; break;
        case '\\': value += '\\'; break;
        case '"': value += '"'; break;
        default:
          throw LexError(std::string("invalid escape sequence: \\") + esc,
                         SourceLocation::point(file_, line_, col_));
      }
      advance();
      continue;
    }
    value += c;
    advance();
  }
  Token t = make(TokenKind::StrLit, start_pos, start_line, start_col);
  t.text = std::move(value);
  return t;
}

Token Lexer::lex_raw() {
  skip_separators();

  size_t start_pos = pos_;
  uint32_t start_line = line_, start_col = col_;

  if (at_end()) return make(TokenKind::Eof, start_pos, start_line, start_col);

  char c = cur();
  if (is_ident_start(c)) return lex_ident_or_keyword();
  if (is_digit(c)) return lex_int();
  if (c == '"') return lex_string();

  auto two = [&](TokenKind kind) {
    advance();
    advance();
    return make(kind, start_pos, start_line, start_col);
  };
  auto one = [&](TokenKind kind) {
    advance();
    return make(kind, start_pos, start_line, start_col);
  };

  switch (c) {
    case '<': return peek_char() == '=' ? two(TokenKind::Lte) : one(TokenKind::Lt);
    case '>': return peek_char() == '=' ? two(TokenKind::Gte) : one(TokenKind::Gt);
    case '&': return peek_char() == '&' ? two(TokenKind::Land) : one(TokenKind::Amp);
    case '|': return peek_char() == '|' ? two(TokenKind::Lor) : one(TokenKind::Pipe);
    case '-': return peek_char() == '>' ? two(TokenKind::Arrow) : one(TokenKind::Minus);
    case '{': return peek_char() == '}' ? two(TokenKind::Empty) : one(TokenKind::LBrace);
    case '+': return one(TokenKind::Plus);
    case ':': return one(TokenKind::Colon);
    case '.': return one(TokenKind::Dot);
    case ',': return one(TokenKind::Comma);
    case '~': return one(TokenKind::Tilde);
    case '^': return one(TokenKind::Caret);
    case '*': return one(TokenKind::Star);
    case '/': return one(TokenKind::Slash);
    case '%': return one(TokenKind::Percent);
    case '#': return one(TokenKind::Card);
    case '(': return one(TokenKind::LPar);
    case ')': return one(TokenKind::RPar);
    case '[': return one(TokenKind::LBrack);
    case ']': return one(TokenKind::RBrack);
    case '}': return one(TokenKind::RBrace);
    case ';': return one(TokenKind::Then);
    case '!': return one(TokenKind::Not);
    case '=': return one(TokenKind::Eq);
    default:
      break;
  }

  // Grab the run of unrecognized characters so the error shows the whole
  // violating string.
  std::string bad;
  while (!at_end() && !is_ident_start(cur()) && !is_digit(cur()) &&
         std::string_view(" \t\r\n\"<>&|-{+:.,~^*/%#()[]};!=").find(cur()) ==
             std::string_view::npos) {
    bad += cur();
    advance();
  }
  if (bad.empty()) {
    bad += cur();
    advance();
  }
  throw LexError("unrecognized character sequence: " + bad,
                 SourceLocation{file_, start_line, start_col, line_, col_});
}

std::vector<Token> tokenize(std::string_view source, const std::string& file_path) {
  Lexer lexer(source, file_path);
  std::vector<Token> out;
  for (;;) {
    out.push_back(lexer.next());
    if (out.back().kind == TokenKind::Eof) break;
  }
  return out;
}

}  // namespace conceptual::lex
