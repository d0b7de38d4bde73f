#pragma once

#include <string>

#include "conceptual/ast.hpp"
#include "conceptual/diagnostics.hpp"
#include "conceptual/include_loader.hpp"
#include "conceptual/typed_ast.hpp"

namespace conceptual::sem {

/// Validate a parsed model: scopes and namespaces, bidirectional type
/// checking, context rules, two-pass state/dependency handling, and dynamic
/// includes. Never throws; every failure becomes a diagnostic and the typed
/// model is produced regardless, with ErrorType plugging the holes.
///
/// `base_dir` is the directory of the file being compiled; includes resolve
/// relative to it.
TypedModel analyze(const ast::Model& model, driver::IncludeLoader& loader,
                   const std::string& base_dir, diag::Sink& sink);

}  // namespace conceptual::sem
