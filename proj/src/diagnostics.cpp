#include "conceptual/diagnostics.hpp"

#include <sstream>

namespace conceptual::diag {

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::LexError: return "lex error";
    case Kind::SyntaxError: return "syntax error";
    case Kind::UndeclaredName: return "undeclared name";
    case Kind::DuplicateName: return "duplicate name";
    case Kind::UnknownType: return "unknown type";
    case Kind::TypeMismatch: return "type mismatch";
    case Kind::NotFirstOrder: return "not first-order";
    case Kind::ContextViolation: return "context violation";
    case Kind::MixedAssignment: return "mixed assignment";
    case Kind::IllTypedCompound: return "ill-typed compound assignment";
    case Kind::ConstAssign: return "assignment to constant";
    case Kind::AssignTarget: return "invalid assignment target";
    case Kind::UnknownConcept: return "unknown concept";
    case Kind::UnknownAction: return "unknown action";
    case Kind::ArityMismatch: return "arity mismatch";
    case Kind::MissingTypeArgs: return "missing type arguments";
    case Kind::UnsupportedMult: return "unsupported multiplicity";
    case Kind::NoOpAction: return "action has no effect";
  }
  return "error";
}

std::string Sink::render() const {
  std::ostringstream out;
  for (const auto& d : entries_) {
    out << (d.severity == Severity::Error ? "error" : "warning") << ": "
        << d.loc.file << ":" << d.loc.start_line << ":" << d.loc.start_col
        << ": " << d.message << "\n";
  }
  return out.str();
}

}  // namespace conceptual::diag
