#pragma once

#include <string>

#include "conceptual/ast.hpp"
#include "conceptual/lexer.hpp"

namespace conceptual::dump {

/// Deterministic indented tree, one node per line, `Kind@line:col` headers.
std::string dump_model(const ast::Model& model);

/// One token per line: `KIND[(payload)] @ line:col-line:col`.
std::string dump_tokens(const std::vector<lex::Token>& tokens);

}  // namespace conceptual::dump
