#pragma once

#include <string>

#include "conceptual/ast.hpp"

namespace conceptual::printer {

/// Canonical source text. Reparsing the output yields a structurally
/// identical model. Canonical spellings: symbolic operators, `then` over
/// `;`, `{}` for the empty set.
std::string print(const ast::Model& model);

/// Minimal parenthesization by default; `full_parens` wraps every compound
/// subexpression (both forms must reparse to the same tree).
std::string print_expr(const ast::Expr& e, bool full_parens = false);

std::string print_type(const ast::Type& t);

}  // namespace conceptual::printer
