#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace conceptual::alloy {

// ---------------------------------------------------------------------------
// Expressions. Serialization is precedence-aware; state-field references are
// always wrapped in parentheses (`(State.f)`, `(State.f')`).
// ---------------------------------------------------------------------------

struct AExpr;
using AExprPtr = std::unique_ptr<AExpr>;

/// Fully-rendered identifier or qualified reference.
struct AName { std::string text; };

struct AIntLit { int64_t value = 0; };

/// Empty constant of the given arity: `none`, `none -> none`, ...
struct ANone { size_t arity = 1; };

struct AStateRef {
  std::string qualifier;  // module alias; empty inside the owning module
  std::string field;
  bool primed = false;
};

enum class AUnOp { Transpose, Closure, ReflClosure, Card, Not, Always, After, Historically };
struct AUnary { AUnOp op; AExprPtr operand; };

/// `no <expr>` emptiness formula; the operand is always parenthesized.
struct ANoExpr { AExprPtr operand; };

enum class ABinOp { Join, Arrow, Inter, Override, Union, Diff, And, Or, Implies, Until };
struct ABinary { ABinOp op; AExprPtr lhs, rhs; };

enum class ACmpOp { Eq, Neq, In, NotIn, Lt, Gt, Lte, Gte };
struct ACompare { ACmpOp op; AExprPtr lhs, rhs; };

/// Predicate or function application; printed bare when there are no
/// arguments.
struct ACall { std::string name; std::vector<AExprPtr> args; };

struct ABox { AExprPtr target; std::vector<AExprPtr> args; };

struct ADecl { std::string name; std::string type_text; };

enum class AQuantKind { All, Some };
struct AQuant { AQuantKind kind; std::vector<ADecl> decls; AExprPtr body; };

struct AComprehension { std::vector<ADecl> decls; AExprPtr body; };

struct AExpr {
  std::variant<AName, AIntLit, ANone, AStateRef, AUnary, ANoExpr, ABinary,
               ACompare, ACall, ABox, AQuant, AComprehension>
      node;
};

AExprPtr aexpr(std::variant<AName, AIntLit, ANone, AStateRef, AUnary, ANoExpr,
                            ABinary, ACompare, ACall, ABox, AQuant, AComprehension>
                   node);

std::string print_expr(const AExpr& e);

// ---------------------------------------------------------------------------
// Documents
// ---------------------------------------------------------------------------

struct FieldDecl {
  std::string name;
  bool var_field = true;
  std::string type_text;
};

struct SigDecl {
  std::string name;
  bool one = false;
  bool abstract_sig = false;
  std::optional<std::string> extends;
  std::optional<std::string> in_set;  // subset sig (`one sig x in Int`)
  std::vector<FieldDecl> fields;
};

struct Fact {
  std::string name;  // may be empty for an anonymous fact
  std::vector<AExprPtr> body;
};

struct Pred {
  std::string name;
  std::vector<ADecl> params;
  std::vector<AExprPtr> body;
};

struct Fun {
  std::string name;
  std::vector<ADecl> params;
  std::string result_text;
  AExprPtr body;
};

struct Assert {
  std::string name;
  AExprPtr body;
};

struct Command {
  enum class Kind { Check, Run };
  Kind kind = Kind::Check;
  std::string target;
  std::string scope_text;  // e.g. "for 4 but 20 steps"
};

struct Open {
  std::string module;
  std::vector<std::string> args;
  std::string alias;
};

/// One Alloy module. Serialization is deterministic: identical documents
/// yield byte-identical text.
struct Document {
  std::string comment;  // leading comment block (the concept purpose)
  std::string module_name;
  std::vector<std::string> module_params;
  std::vector<Open> opens;
  std::vector<SigDecl> sigs;
  std::vector<Fact> facts;
  std::vector<Pred> preds;
  std::vector<Fun> funs;
  std::vector<Assert> asserts;
  std::vector<Command> commands;
};

std::string serialize(const Document& doc);

/// Alloy-safe identifier: names colliding with Alloy reserved words (or the
/// generated infrastructure) gain a leading underscore.
std::string mangle(const std::string& name);

}  // namespace conceptual::alloy
