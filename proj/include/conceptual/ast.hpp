#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "conceptual/source_location.hpp"

namespace conceptual::ast {

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

enum class Mult { Set, One, Lone };

struct PrimType {
  enum class Kind { Str, Int, Named };
  Kind kind = Kind::Named;
  std::string name;  // for Named

  static PrimType str() { return {Kind::Str, {}}; }
  static PrimType integer() { return {Kind::Int, {}}; }
  static PrimType named(std::string n) { return {Kind::Named, std::move(n)}; }

  bool operator==(const PrimType& other) const {
    return kind == other.kind && name == other.name;
  }
};

struct ScalarType {
  std::optional<Mult> mult;
  PrimType prim;
};

/// First-order by construction: relation columns are primitive types only.
/// The final column may carry a multiplicity (`User -> set Resource`).
struct RelationType {
  std::vector<PrimType> columns;  // arity >= 2
  std::optional<Mult> target_mult;
};

using Type = std::variant<ScalarType, RelationType>;

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

enum class UnOp { Transpose, Closure, ReflClosure, Card, No, Not };
enum class BinOp { Plus, Minus, Amp, Dot, Arrow, Star, Slash, Percent,
                   Land, Lor, Then, Until };
enum class CmpOp { Eq, In, Lt, Gt, Lte, Gte };
enum class CanMod { None, Can, CanNot };

struct Decl {
  std::vector<std::string> names;  // non-empty
  Type type;
  SourceLocation loc;
};

struct EmptySetExpr {};
struct IntLitExpr { int64_t value = 0; };
struct StrLitExpr { std::string value; };
struct NameExpr { std::string name; };
struct UnopExpr { UnOp op; ExprPtr operand; };
struct BinopExpr { BinOp op; ExprPtr lhs, rhs; };
struct CompareExpr { CmpOp op; bool negated = false; ExprPtr lhs, rhs; };
struct BoxJoinExpr { ExprPtr target; std::vector<ExprPtr> args; };
struct ComprehensionExpr { std::vector<Decl> decls; ExprPtr body; };
struct CallExpr { std::string action; std::vector<ExprPtr> args; CanMod can = CanMod::None; };

struct Expr {
  SourceLocation loc;
  std::variant<EmptySetExpr, IntLitExpr, StrLitExpr, NameExpr, UnopExpr,
               BinopExpr, CompareExpr, BoxJoinExpr, ComprehensionExpr, CallExpr>
      node;
};

// ---------------------------------------------------------------------------
// Concepts
// ---------------------------------------------------------------------------

/// Assignment target: a state field, optionally reached through a dot path
/// rooted at a parameter (`u.reservations`).
struct Lval {
  std::vector<std::string> path;  // non-empty
  SourceLocation loc;
};

struct Stmt {
  std::vector<Lval> lhs;               // non-empty
  std::optional<BinOp> compound;       // nullopt: simple `:=`
  ExprPtr rhs;
  SourceLocation loc;
};

struct StateDecl {
  bool is_const = false;
  Decl decl;
  ExprPtr init;  // may be null
  SourceLocation loc;
};

struct Mutator {
  ExprPtr firing_cond;  // may be null
  std::vector<Stmt> body;
};

struct Query {
  Type return_type;
  ExprPtr body;
};

struct Action {
  std::string name;
  std::vector<Decl> params;
  std::variant<Mutator, Query> kind;
  SourceLocation loc;
};

struct Concept {
  std::string name;
  std::vector<std::string> type_params;
  std::string purpose;
  std::vector<StateDecl> states;
  std::vector<Action> actions;      // non-empty
  std::vector<ExprPtr> principles;  // one expression per scenario
  SourceLocation loc;
};

// ---------------------------------------------------------------------------
// Apps
// ---------------------------------------------------------------------------

struct QualPrim {
  std::optional<std::string> ns;  // e.g. `todo` in `todo.Task`
  PrimType prim;
  SourceLocation loc;
};

struct Dependency {
  std::string path;  // verbatim file path text
  bool brackets_present = false;
  std::vector<QualPrim> type_args;
  SourceLocation loc;
};

struct SyncArg {
  std::optional<Mult> mult;  // trigger arguments only
  ExprPtr expr;
};

struct SyncCall {
  std::string concept_name;
  std::string action;
  std::vector<SyncArg> args;
  SourceLocation loc;
};

struct Sync {
  SyncCall trigger;
  std::vector<SyncCall> responses;  // non-empty
  SourceLocation loc;
};

struct App {
  std::string name;
  std::vector<Dependency> deps;  // non-empty
  std::vector<Sync> syncs;
  SourceLocation loc;
};

struct Model {
  std::vector<Concept> concepts;
  std::vector<App> apps;
};

// ---------------------------------------------------------------------------
// Helpers
// ---------------------------------------------------------------------------

ExprPtr make_expr(SourceLocation loc,
                  std::variant<EmptySetExpr, IntLitExpr, StrLitExpr, NameExpr,
                               UnopExpr, BinopExpr, CompareExpr, BoxJoinExpr,
                               ComprehensionExpr, CallExpr>
                      node);

ExprPtr clone_expr(const Expr& e);

/// Structural equality, ignoring source locations.
bool equal(const Expr& a, const Expr& b);
bool equal(const Type& a, const Type& b);
bool equal(const Model& a, const Model& b);

/// File basename of a dependency path, without directories or a trailing
/// one-dot extension: `../lib/label.con` -> `label`.
std::string dep_basename(const std::string& path);

const char* binop_symbol(BinOp op);
const char* cmpop_symbol(CmpOp op);
const char* unop_symbol(UnOp op);

}  // namespace conceptual::ast
