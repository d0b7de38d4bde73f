#pragma once

#include <string>
#include <vector>

#include "conceptual/source_location.hpp"

namespace conceptual::diag {

enum class Severity { Error, Warning };

enum class Kind {
  LexError,
  SyntaxError,
  UndeclaredName,
  DuplicateName,
  UnknownType,
  TypeMismatch,
  NotFirstOrder,
  ContextViolation,
  MixedAssignment,
  IllTypedCompound,
  ConstAssign,
  AssignTarget,
  UnknownConcept,
  UnknownAction,
  ArityMismatch,
  MissingTypeArgs,
  UnsupportedMult,
  NoOpAction,
};

const char* kind_name(Kind k);

struct Diagnostic {
  Severity severity = Severity::Error;
  Kind kind = Kind::TypeMismatch;
  std::string message;
  SourceLocation loc;
};

/// Append-only sink shared by every analysis scope. Diagnostics emitted in a
/// nested scope survive when that scope's environment is discarded.
class Sink {
 public:
  void emit(Diagnostic d) { entries_.push_back(std::move(d)); }

  void error(Kind kind, std::string message, SourceLocation loc) {
    emit(Diagnostic{Severity::Error, kind, std::move(message), std::move(loc)});
  }

  void warning(Kind kind, std::string message, SourceLocation loc) {
    emit(Diagnostic{Severity::Warning, kind, std::move(message), std::move(loc)});
  }

  const std::vector<Diagnostic>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  size_t size() const { return entries_.size(); }

  size_t error_count() const {
    size_t n = 0;
    for (const auto& d : entries_)
      if (d.severity == Severity::Error) ++n;
    return n;
  }

  bool has(Kind kind) const {
    for (const auto& d : entries_)
      if (d.kind == kind) return true;
    return false;
  }

  size_t count(Kind kind) const {
    size_t n = 0;
    for (const auto& d : entries_)
      if (d.kind == kind) ++n;
    return n;
  }

  /// One line per diagnostic, in emission order:
  /// `<severity>: <file>:<line>:<col>: <message>`
  std::string render() const;

 private:
  std::vector<Diagnostic> entries_;
};

}  // namespace conceptual::diag
