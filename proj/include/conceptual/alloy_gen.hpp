#pragma once

#include <stdexcept>
#include <string>

#include "conceptual/alloy_ir.hpp"
#include "conceptual/typed_ast.hpp"

namespace conceptual::alloy {

/// Internal invariant violation during lowering; inputs are pre-validated,
/// so this indicates a compiler bug rather than a user error.
struct CodegenFault : std::logic_error {
  using std::logic_error::logic_error;
};

struct Options {
  std::string check_scope = "for 4 but 20 steps";
};

/// Lower one typed concept to an Alloy module: mutable singleton State,
/// custom types as empty top-level sigs, actions as predicates/functions
/// with `_can_` companions and frame conditions, a stutter-completed
/// transition fact, and one temporal assertion per principle scenario.
Document gen_concept(const sem::TConcept& c, const Options& opts = {});

/// Lower one typed app to an Alloy file: opens with generic instantiations,
/// singleton trigger atoms, string-literal atoms, and the synchronization
/// fact (trigger implies the conjunction of responses, under always).
Document gen_app(const sem::TApp& app, const sem::TypedModel& model,
                 const Options& opts = {});

}  // namespace conceptual::alloy
