#pragma once

#include <stdexcept>
#include <string>

#include "conceptual/ast.hpp"
#include "conceptual/lexer.hpp"

namespace conceptual::parser {

/// Single syntax error per run. The location is approximated from the lexer
/// state: the reported position is never after the true error position.
struct SyntaxError : std::runtime_error {
  SyntaxError(const std::string& message, SourceLocation location)
      : std::runtime_error(message), loc(std::move(location)) {}
  SourceLocation loc;
};

/// Parse a whole program: `concept* app* EOF`.
ast::Model parse(lex::Lexer& lexer);

/// Convenience: lex and parse a source string.
ast::Model parse_source(std::string_view source, const std::string& file_path);

/// Parse a standalone expression followed by EOF (test surface).
ast::ExprPtr parse_expr_source(std::string_view source, const std::string& file_path = "<expr>");

/// Parse a standalone type followed by EOF (test surface).
ast::Type parse_type_source(std::string_view source, const std::string& file_path = "<type>");

}  // namespace conceptual::parser
