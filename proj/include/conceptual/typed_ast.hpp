#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "conceptual/ast.hpp"

namespace conceptual::sem {

// ---------------------------------------------------------------------------
// Semantic types
// ---------------------------------------------------------------------------

/// Primitive column type. Named types carry the declaring concept when they
/// are referenced from outside it (app context); inside a concept the owner
/// is empty.
struct Prim {
  enum class Kind { Str, Int, Named };
  Kind kind = Kind::Named;
  std::string owner;
  std::string name;

  static Prim str() { return {Kind::Str, {}, {}}; }
  static Prim integer() { return {Kind::Int, {}, {}}; }
  static Prim named(std::string owner, std::string name) {
    return {Kind::Named, std::move(owner), std::move(name)};
  }

  bool operator==(const Prim& o) const {
    return kind == o.kind && owner == o.owner && name == o.name;
  }
  std::string to_string() const;
};

/// First-order by construction: no sets of sets, no relations over sets.
/// Boolean is internal only and never user-denotable. Error is universal and
/// compatible with everything, which stops cascades.
struct SemType {
  enum class Kind { Scalar, SetOf, Relation, Bool, EmptyPoly, Error };
  Kind kind = Kind::Error;
  std::vector<Prim> columns;  // 1 for Scalar/SetOf, >=2 for Relation

  static SemType scalar(Prim p) { return {Kind::Scalar, {std::move(p)}}; }
  static SemType set_of(Prim p) { return {Kind::SetOf, {std::move(p)}}; }
  static SemType relation(std::vector<Prim> cols) { return {Kind::Relation, std::move(cols)}; }
  static SemType boolean() { return {Kind::Bool, {}}; }
  static SemType empty_poly() { return {Kind::EmptyPoly, {}}; }
  static SemType error() { return {Kind::Error, {}}; }

  bool is_error() const { return kind == Kind::Error; }
  bool is_bool() const { return kind == Kind::Bool; }
  bool is_int() const {
    return kind == Kind::Scalar && columns.size() == 1 && columns[0].kind == Prim::Kind::Int;
  }
  bool is_setlike() const {
    return kind == Kind::Scalar || kind == Kind::SetOf || kind == Kind::Relation ||
           kind == Kind::EmptyPoly;
  }
  size_t arity() const { return columns.size(); }

  bool operator==(const SemType& o) const {
    return kind == o.kind && columns == o.columns;
  }
  std::string to_string() const;
};

// ---------------------------------------------------------------------------
// Typed expressions
// ---------------------------------------------------------------------------

struct TExpr;
using TExprPtr = std::unique_ptr<TExpr>;

enum class RefKind { StateField, Param, TempVar };

struct TName {
  std::string name;
  RefKind ref = RefKind::Param;
  std::string owner;  // declaring concept, set for state fields referenced from apps
};

struct TEmpty {};
struct TIntLit { int64_t value = 0; };
struct TStrLit { std::string value; };
struct TUnop { ast::UnOp op; TExprPtr operand; };
struct TBinop { ast::BinOp op; TExprPtr lhs, rhs; };

struct TCompare {
  ast::CmpOp op;
  bool negated = false;
  TExprPtr lhs, rhs;
  // Columns of the relation rhs matched by a relation-membership `in`
  // (empty for ordinary subset membership).
  std::vector<size_t> rel_columns;
};

struct TBoxJoin { TExprPtr target; std::vector<TExprPtr> args; };

struct TComprehension {
  struct Var { std::string name; Prim prim; };
  std::vector<Var> vars;
  TExprPtr body;
};

struct TCall {
  std::string concept_name;  // empty inside a concept's own principles
  std::string action;
  bool is_query = false;
  ast::CanMod can = ast::CanMod::None;
  std::vector<TExprPtr> args;
};

struct TExpr {
  SourceLocation loc;
  SemType type;
  std::variant<TEmpty, TIntLit, TStrLit, TName, TUnop, TBinop, TCompare,
               TBoxJoin, TComprehension, TCall>
      node;
};

TExprPtr make_texpr(SourceLocation loc, SemType type,
                    std::variant<TEmpty, TIntLit, TStrLit, TName, TUnop, TBinop,
                                 TCompare, TBoxJoin, TComprehension, TCall>
                        node);

// ---------------------------------------------------------------------------
// Typed model
// ---------------------------------------------------------------------------

struct TempVar {
  std::string name;
  SemType type;
  bool singleton = false;  // multiplicity-prefixed sync trigger argument
};

struct TStmt {
  struct Target {
    std::string field;
    std::optional<std::string> root;  // parameter for dot-path targets
    SemType field_type;
    SourceLocation loc;
  };
  std::vector<Target> targets;
  std::optional<ast::BinOp> compound;  // nullopt: simple assignment
  TExprPtr rhs;
  SourceLocation loc;
};

struct TParam {
  std::string name;
  SemType type;
  ast::Type declared;
};

struct TMutator {
  TExprPtr firing_cond;  // may be null
  std::vector<TStmt> body;
};

struct TQuery {
  ast::Type declared_return;
  SemType return_type;
  TExprPtr body;
};

struct TAction {
  std::string name;
  std::vector<TParam> params;
  std::variant<TMutator, TQuery> kind;
  SourceLocation loc;

  bool is_query() const { return std::holds_alternative<TQuery>(kind); }
};

struct TStateField {
  std::string name;
  bool is_const = false;
  ast::Type declared;
  SemType type;
  TExprPtr init;  // may be null
  SourceLocation loc;
};

struct Scenario {
  TExprPtr expr;
  std::vector<TempVar> temps;  // in order of first use
};

struct TConcept {
  std::string name;
  std::vector<std::string> type_params;
  std::vector<std::string> custom_types;  // declaration order
  std::string purpose;
  std::vector<TStateField> fields;
  std::vector<TAction> actions;
  std::vector<Scenario> principles;
  SourceLocation loc;
};

struct TSyncCall {
  std::string concept_name;
  std::string action;
  std::vector<TExprPtr> args;
  std::vector<bool> singleton_arg;  // parallel to args
  SourceLocation loc;
};

struct TSync {
  TSyncCall trigger;
  std::vector<TSyncCall> responses;
  std::vector<TempVar> temps;
  SourceLocation loc;
};

struct TDep {
  std::string concept_name;
  std::string path;
  std::vector<Prim> generic_args;                   // one per type parameter
  std::map<std::string, Prim> custom_instantiated;  // custom type -> binding
  SourceLocation loc;
};

struct TApp {
  std::string name;
  std::vector<TDep> deps;
  std::vector<TSync> syncs;
  SourceLocation loc;
};

struct TypedModel {
  std::vector<TConcept> concepts;  // includes dynamically included concepts
  std::vector<TApp> apps;
};

// ---------------------------------------------------------------------------
// Concept summaries (saved environments)
// ---------------------------------------------------------------------------

struct ActionSig {
  std::string name;
  bool is_query = false;
  std::vector<std::string> param_names;
  std::vector<SemType> param_types;
  SemType return_type;  // queries only
};

/// Saved per-concept environment: looked up through the concept namespace
/// when apps are analyzed. Immutable once stored.
struct ConceptSummary {
  std::string name;
  std::vector<std::string> type_params;
  std::vector<std::string> custom_types;
  std::map<std::string, SemType> state_fields;
  std::map<std::string, ActionSig> actions;
};

std::string dump_typed_model(const TypedModel& m);

}  // namespace conceptual::sem
