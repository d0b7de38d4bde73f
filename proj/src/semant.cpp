#include "conceptual/semant.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "conceptual/pretty_print.hpp"

namespace conceptual::sem {

using namespace ast;
using diag::Kind;

std::string Prim::to_string() const {
  switch (kind) {
    case Kind::Str: return "string";
    case Kind::Int: return "int";
    case Kind::Named: return owner.empty() ? name : owner + "." + name;
  }
  return "?";
}

std::string SemType::to_string() const {
  switch (kind) {
    case Kind::Scalar:
      return columns[0].kind == Prim::Kind::Int ? "int" : "one " + columns[0].to_string();
    case Kind::SetOf:
      return "set " + columns[0].to_string();
    case Kind::Relation: {
      std::string out;
      for (size_t i = 0; i < columns.size(); ++i) {
        if (i) out += " -> ";
        out += columns[i].to_string();
      }
      return out;
    }
    case Kind::Bool: return "bool";
    case Kind::EmptyPoly: return "empty";
    case Kind::Error: return "error";
  }
  return "?";
}

TExprPtr make_texpr(SourceLocation loc, SemType type,
                    std::variant<TEmpty, TIntLit, TStrLit, TName, TUnop, TBinop,
                                 TCompare, TBoxJoin, TComprehension, TCall>
                        node) {
  auto e = std::make_unique<TExpr>();
  e->loc = std::move(loc);
  e->type = std::move(type);
  e->node = std::move(node);
  return e;
}

namespace {

TExprPtr clone_texpr(const TExpr& e) {
  return std::visit(
      [&](const auto& n) -> TExprPtr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, TEmpty> || std::is_same_v<T, TIntLit> ||
                      std::is_same_v<T, TStrLit> || std::is_same_v<T, TName>) {
          return make_texpr(e.loc, e.type, n);
        } else if constexpr (std::is_same_v<T, TUnop>) {
          return make_texpr(e.loc, e.type, TUnop{n.op, clone_texpr(*n.operand)});
        } else if constexpr (std::is_same_v<T, TBinop>) {
          return make_texpr(e.loc, e.type,
                            TBinop{n.op, clone_texpr(*n.lhs), clone_texpr(*n.rhs)});
        } else if constexpr (std::is_same_v<T, TCompare>) {
          return make_texpr(e.loc, e.type,
                            TCompare{n.op, n.negated, clone_texpr(*n.lhs),
                                     clone_texpr(*n.rhs), n.rel_columns});
        } else if constexpr (std::is_same_v<T, TBoxJoin>) {
          TBoxJoin out{clone_texpr(*n.target), {}};
          for (const auto& a : n.args) out.args.push_back(clone_texpr(*a));
          return make_texpr(e.loc, e.type, std::move(out));
        } else if constexpr (std::is_same_v<T, TComprehension>) {
          TComprehension out{n.vars, clone_texpr(*n.body)};
          return make_texpr(e.loc, e.type, std::move(out));
        } else {
          static_assert(std::is_same_v<T, TCall>);
          TCall out{n.concept_name, n.action, n.is_query, n.can, {}};
          for (const auto& a : n.args) out.args.push_back(clone_texpr(*a));
          return make_texpr(e.loc, e.type, std::move(out));
        }
      },
      e.node);
}

enum class Ctx { Plain, Principle, SyncArg };

struct ValueEntry {
  enum class K { StateField, Param, Temp, Action };
  K kind = K::Param;
  SemType type;
  bool is_const = false;
  size_t action_index = 0;  // for K::Action
  SourceLocation loc;
};

const char* value_kind_word(ValueEntry::K k) {
  switch (k) {
    case ValueEntry::K::StateField: return "state variable";
    case ValueEntry::K::Param: return "parameter";
    case ValueEntry::K::Temp: return "temporary variable";
    case ValueEntry::K::Action: return "action";
  }
  return "name";
}

/// Per-dependency view of a concept with its type arguments applied.
struct DepInfo {
  std::string concept_name;
  const ConceptSummary* summary = nullptr;
  std::vector<Prim> generic_args;
  std::map<std::string, Prim> custom_instantiated;
  std::map<std::string, SemType> state_fields;  // instantiated
  std::map<std::string, ActionSig> actions;     // instantiated
};

class Analyzer {
 public:
  Analyzer(driver::IncludeLoader& loader, std::string base_dir, diag::Sink& sink)
      : loader_(loader), base_dir_(std::move(base_dir)), sink_(sink) {}

  TypedModel run(const Model& model) {
    TypedModel out;
    for (const Concept& c : model.concepts) {
      if (summaries_.count(c.name)) {
        sink_.error(Kind::DuplicateName, "concept '" + c.name + "' is already defined",
                    c.loc);
        continue;
      }
      out.concepts.push_back(analyze_concept(c));
    }
    for (const App& a : model.apps) {
      if (app_names_.count(a.name)) {
        sink_.error(Kind::DuplicateName, "app '" + a.name + "' is already defined",
                    a.loc);
        continue;
      }
      app_names_.insert(a.name);
      out.apps.push_back(analyze_app(a, out));
    }
    return out;
  }

 private:
  // --- shared helpers -------------------------------------------------------

  void error(Kind kind, std::string message, const SourceLocation& loc) {
    sink_.error(kind, std::move(message), loc);
  }

  static Prim prim_of(const PrimType& p) {
    switch (p.kind) {
      case PrimType::Kind::Str: return Prim::str();
      case PrimType::Kind::Int: return Prim::integer();
      case PrimType::Kind::Named: return Prim::named("", p.name);
    }
    return Prim::integer();
  }

  static SemType semtype_of(const Type& t) {
    if (const auto* s = std::get_if<ScalarType>(&t)) {
      Prim p = prim_of(s->prim);
      if (s->mult == Mult::Set) return SemType::set_of(p);
      return SemType::scalar(p);  // one, lone, or absent (defaults to one)
    }
    const auto& rel = std::get<RelationType>(t);
    std::vector<Prim> cols;
    for (const PrimType& c : rel.columns) cols.push_back(prim_of(c));
    return SemType::relation(std::move(cols));
  }

  /// Named prims must be declared in the concept header or its state section.
  void check_type_names(const Type& t, const SourceLocation& loc) {
    auto check_prim = [&](const PrimType& p) {
      if (p.kind != PrimType::Kind::Named) return;
      if (!known_types_.count(p.name))
        error(Kind::UnknownType,
              "unknown type '" + p.name +
                  "'; custom types are declared in the concept header or state section",
              loc);
    };
    if (const auto* s = std::get_if<ScalarType>(&t)) {
      check_prim(s->prim);
    } else {
      for (const PrimType& c : std::get<RelationType>(t).columns) check_prim(c);
    }
  }

  // Checking-direction compatibility: Error is universal; a scalar coerces to
  // a set of the same primitive; the polymorphic empty set adopts any set or
  // relation type.
  static bool compatible(const SemType& found, const SemType& expected) {
    if (found.is_error() || expected.is_error()) return true;
    if (found == expected) return true;
    if (found.kind == SemType::Kind::EmptyPoly) return expected.is_setlike();
    if (found.kind == SemType::Kind::Scalar && expected.kind == SemType::Kind::SetOf)
      return found.columns == expected.columns;
    return false;
  }

  // Looser comparison for call arguments and query results: only the
  // primitive column structure matters, not set-versus-scalar multiplicity.
  static bool prim_compatible(const SemType& found, const SemType& expected) {
    if (found.is_error() || expected.is_error()) return true;
    if (found.kind == SemType::Kind::Bool || expected.kind == SemType::Kind::Bool)
      return found.kind == expected.kind;
    if (found.kind == SemType::Kind::EmptyPoly) return expected.is_setlike();
    if (expected.kind == SemType::Kind::EmptyPoly) return found.is_setlike();
    return found.columns == expected.columns;
  }

  static SemType upgraded(const SemType& t) {
    if (t.kind == SemType::Kind::Scalar) return SemType::set_of(t.columns[0]);
    return t;
  }

  static void retype_empty(TExpr& t, const SemType& adopted) {
    if (t.type.kind == SemType::Kind::EmptyPoly && adopted.is_setlike() &&
        adopted.kind != SemType::Kind::EmptyPoly)
      t.type = upgraded(adopted);
  }

  TExprPtr check(const Expr& e, const SemType& expected) {
    TExprPtr t = infer(e);
    retype_empty(*t, expected);
    if (!compatible(t->type, expected)) {
      error(Kind::TypeMismatch,
            "expected " + expected.to_string() + ", found " + t->type.to_string(), e.loc);
      t->type = SemType::error();
    }
    return t;
  }

  TExprPtr check_bool(const Expr& e) { return check(e, SemType::boolean()); }

  // --- name lookup ------------------------------------------------------------

  const ValueEntry* lookup(const std::string& name) const {
    auto it = locals_.find(name);
    if (it != locals_.end()) return &it->second;
    it = values_.find(name);
    if (it != values_.end()) return &it->second;
    return nullptr;
  }

  bool declare_value(std::map<std::string, ValueEntry>& table, const std::string& name,
                     ValueEntry entry) {
    if (const ValueEntry* existing = lookup(name)) {
      error(Kind::DuplicateName,
            "'" + name + "' is already declared as a " +
                value_kind_word(existing->kind) +
                "; the same name may not be reused and shadowing is disallowed",
            entry.loc);
      return false;
    }
    table.emplace(name, std::move(entry));
    return true;
  }

  // --- expression typing --------------------------------------------------------

  TExprPtr infer(const Expr& e) {
    return std::visit([&](const auto& n) { return infer_node(e, n); }, e.node);
  }

  TExprPtr infer_node(const Expr& e, const EmptySetExpr&) {
    return make_texpr(e.loc, SemType::empty_poly(), TEmpty{});
  }

  TExprPtr infer_node(const Expr& e, const IntLitExpr& n) {
    return make_texpr(e.loc, SemType::scalar(Prim::integer()), TIntLit{n.value});
  }

  TExprPtr infer_node(const Expr& e, const StrLitExpr& n) {
    return make_texpr(e.loc, SemType::scalar(Prim::str()), TStrLit{n.value});
  }

  TExprPtr infer_node(const Expr& e, const NameExpr& n) {
    if (const ValueEntry* entry = lookup(n.name)) {
      if (entry->kind == ValueEntry::K::Action) {
        error(Kind::TypeMismatch, "action '" + n.name + "' used as a value", e.loc);
        return make_texpr(e.loc, SemType::error(), TName{n.name, RefKind::Param, ""});
      }
      RefKind ref = entry->kind == ValueEntry::K::StateField ? RefKind::StateField
                    : entry->kind == ValueEntry::K::Temp     ? RefKind::TempVar
                                                             : RefKind::Param;
      return make_texpr(e.loc, entry->type, TName{n.name, ref, ""});
    }
    // In an app, an unqualified name may be a state field of any included
    // concept; the saved summary makes the access legal.
    if (in_app_ && deps_) {
      for (const DepInfo& dep : *deps_) {
        auto it = dep.state_fields.find(n.name);
        if (it != dep.state_fields.end())
          return make_texpr(e.loc, it->second,
                            TName{n.name, RefKind::StateField, dep.concept_name});
      }
    }
    error(Kind::UndeclaredName, "undeclared name '" + n.name + "'", e.loc);
    return make_texpr(e.loc, SemType::error(), TName{n.name, RefKind::Param, ""});
  }

  TExprPtr infer_node(const Expr& e, const UnopExpr& n) {
    switch (n.op) {
      case UnOp::Card: {
        TExprPtr operand = infer(*n.operand);
        SemType result = SemType::scalar(Prim::integer());
        if (!operand->type.is_error() && !operand->type.is_setlike()) {
          error(Kind::TypeMismatch,
                "cardinality requires a set or relation, found " +
                    operand->type.to_string(),
                e.loc);
          result = SemType::error();
        }
        return make_texpr(e.loc, result, TUnop{n.op, std::move(operand)});
      }
      case UnOp::Transpose: {
        TExprPtr operand = infer(*n.operand);
        SemType result = SemType::error();
        if (operand->type.is_error()) {
        } else if (operand->type.kind == SemType::Kind::Relation &&
                   operand->type.arity() == 2) {
          result =
              SemType::relation({operand->type.columns[1], operand->type.columns[0]});
        } else {
          error(Kind::TypeMismatch,
                "transpose requires a binary relation, found " + operand->type.to_string(),
                e.loc);
        }
        return make_texpr(e.loc, result, TUnop{n.op, std::move(operand)});
      }
      case UnOp::Closure:
      case UnOp::ReflClosure: {
        TExprPtr operand = infer(*n.operand);
        SemType result = SemType::error();
        if (operand->type.is_error()) {
        } else if (operand->type.kind == SemType::Kind::Relation &&
                   operand->type.arity() == 2 &&
                   operand->type.columns[0] == operand->type.columns[1]) {
          result = operand->type;
        } else {
          error(Kind::TypeMismatch,
                "transitive closure requires a homogeneous binary relation, found " +
                    operand->type.to_string(),
                e.loc);
        }
        return make_texpr(e.loc, result, TUnop{n.op, std::move(operand)});
      }
      case UnOp::Not: {
        TExprPtr operand = check_bool(*n.operand);
        return make_texpr(e.loc, SemType::boolean(), TUnop{n.op, std::move(operand)});
      }
      case UnOp::No: {
        if (ctx_ != Ctx::Principle)
          error(Kind::ContextViolation,
                "'no' is only allowed within an operational principle", e.loc);
        TExprPtr operand = check_bool(*n.operand);
        return make_texpr(e.loc, SemType::boolean(), TUnop{n.op, std::move(operand)});
      }
    }
    return make_texpr(e.loc, SemType::error(), TEmpty{});
  }

  SemType join_type(const SemType& lhs, const SemType& rhs, const SourceLocation& loc) {
    if (lhs.is_error() || rhs.is_error()) return SemType::error();
    if (!lhs.is_setlike() || !rhs.is_setlike() ||
        lhs.kind == SemType::Kind::EmptyPoly || rhs.kind == SemType::Kind::EmptyPoly) {
      error(Kind::TypeMismatch,
            "join requires relational operands, found " + lhs.to_string() + " and " +
                rhs.to_string(),
            loc);
      return SemType::error();
    }
    if (!(lhs.columns.back() == rhs.columns.front())) {
      error(Kind::TypeMismatch,
            "join column mismatch: " + lhs.to_string() + " . " + rhs.to_string(), loc);
      return SemType::error();
    }
    std::vector<Prim> cols(lhs.columns.begin(), lhs.columns.end() - 1);
    cols.insert(cols.end(), rhs.columns.begin() + 1, rhs.columns.end());
    if (cols.empty()) {
      error(Kind::TypeMismatch, "join eliminates every column", loc);
      return SemType::error();
    }
    if (cols.size() == 1) return SemType::set_of(cols[0]);
    return SemType::relation(std::move(cols));
  }

  // Union/difference/intersection over sets and relations; plus and minus
  // are integer arithmetic when both sides are integers.
  SemType setop_type(BinOp op, const SemType& lhs, const SemType& rhs,
                     const SourceLocation& loc) {
    if (lhs.is_error() || rhs.is_error()) return SemType::error();
    if ((op == BinOp::Plus || op == BinOp::Minus) && lhs.is_int() && rhs.is_int())
      return SemType::scalar(Prim::integer());
    if (!lhs.is_setlike() || !rhs.is_setlike()) {
      error(Kind::TypeMismatch,
            std::string("'") + binop_symbol(op) + "' requires set operands, found " +
                lhs.to_string() + " and " + rhs.to_string(),
            loc);
      return SemType::error();
    }
    if (lhs.kind == SemType::Kind::EmptyPoly) return upgraded(rhs);
    if (rhs.kind == SemType::Kind::EmptyPoly) return upgraded(lhs);
    if (lhs.columns != rhs.columns) {
      error(Kind::TypeMismatch,
            std::string("'") + binop_symbol(op) + "' operands have different types: " +
                lhs.to_string() + " and " + rhs.to_string(),
            loc);
      return SemType::error();
    }
    return upgraded(lhs);
  }

  TExprPtr infer_node(const Expr& e, const BinopExpr& n) {
    switch (n.op) {
      case BinOp::Dot: {
        TExprPtr lhs = infer(*n.lhs);
        TExprPtr rhs = infer(*n.rhs);
        SemType type = join_type(lhs->type, rhs->type, e.loc);
        return make_texpr(e.loc, type, TBinop{n.op, std::move(lhs), std::move(rhs)});
      }
      case BinOp::Arrow: {
        TExprPtr lhs = infer(*n.lhs);
        TExprPtr rhs = infer(*n.rhs);
        SemType type = SemType::error();
        if (!lhs->type.is_error() && !rhs->type.is_error()) {
          if (lhs->type.is_setlike() && rhs->type.is_setlike() &&
              lhs->type.kind != SemType::Kind::EmptyPoly &&
              rhs->type.kind != SemType::Kind::EmptyPoly) {
            std::vector<Prim> cols = lhs->type.columns;
            cols.insert(cols.end(), rhs->type.columns.begin(), rhs->type.columns.end());
            type = SemType::relation(std::move(cols));
          } else {
            error(Kind::TypeMismatch,
                  "'->' requires set operands, found " + lhs->type.to_string() + " and " +
                      rhs->type.to_string(),
                  e.loc);
          }
        }
        return make_texpr(e.loc, type, TBinop{n.op, std::move(lhs), std::move(rhs)});
      }
      case BinOp::Plus:
      case BinOp::Minus:
      case BinOp::Amp: {
        TExprPtr lhs = infer(*n.lhs);
        TExprPtr rhs = infer(*n.rhs);
        SemType type = setop_type(n.op, lhs->type, rhs->type, e.loc);
        if (!type.is_error()) {
          retype_empty(*lhs, type);
          retype_empty(*rhs, type);
        }
        return make_texpr(e.loc, type, TBinop{n.op, std::move(lhs), std::move(rhs)});
      }
      case BinOp::Star:
      case BinOp::Slash:
      case BinOp::Percent: {
        TExprPtr lhs = check(*n.lhs, SemType::scalar(Prim::integer()));
        TExprPtr rhs = check(*n.rhs, SemType::scalar(Prim::integer()));
        return make_texpr(e.loc, SemType::scalar(Prim::integer()),
                          TBinop{n.op, std::move(lhs), std::move(rhs)});
      }
      case BinOp::Land:
      case BinOp::Lor: {
        TExprPtr lhs = check_bool(*n.lhs);
        TExprPtr rhs = check_bool(*n.rhs);
        return make_texpr(e.loc, SemType::boolean(),
                          TBinop{n.op, std::move(lhs), std::move(rhs)});
      }
      case BinOp::Then:
      case BinOp::Until: {
        if (ctx_ != Ctx::Principle)
          error(Kind::ContextViolation,
                std::string("'") + binop_symbol(n.op) +
                    "' is only allowed within an operational principle",
                e.loc);
        TExprPtr lhs = check_bool(*n.lhs);
        TExprPtr rhs = check_bool(*n.rhs);
        return make_texpr(e.loc, SemType::boolean(),
                          TBinop{n.op, std::move(lhs), std::move(rhs)});
      }
    }
    return make_texpr(e.loc, SemType::error(), TEmpty{});
  }

  TExprPtr infer_node(const Expr& e, const CompareExpr& n) {
    TExprPtr lhs = infer(*n.lhs);
    TExprPtr rhs = infer(*n.rhs);
    TCompare node{n.op, n.negated, nullptr, nullptr, {}};

    switch (n.op) {
      case CmpOp::Lt:
      case CmpOp::Gt:
      case CmpOp::Lte:
      case CmpOp::Gte: {
        auto require_int = [&](const TExpr& side) {
          if (!side.type.is_error() && !side.type.is_int())
            error(Kind::TypeMismatch,
                  "ordering comparison requires integers, found " + side.type.to_string(),
                  side.loc);
        };
        require_int(*lhs);
        require_int(*rhs);
        break;
      }
      case CmpOp::Eq: {
        if (!lhs->type.is_error() && !rhs->type.is_error()) {
          retype_empty(*lhs, rhs->type);
          retype_empty(*rhs, lhs->type);
          bool ok = lhs->type.kind != SemType::Kind::Bool &&
                    rhs->type.kind != SemType::Kind::Bool &&
                    prim_compatible(lhs->type, rhs->type);
          if (!ok)
            error(Kind::TypeMismatch,
                  "cannot compare " + lhs->type.to_string() + " with " +
                      rhs->type.to_string(),
                  e.loc);
        }
        break;
      }
      case CmpOp::In: {
        node.rel_columns = check_membership(*lhs, *rhs, e.loc);
        break;
      }
    }
    node.lhs = std::move(lhs);
    node.rhs = std::move(rhs);
    return make_texpr(e.loc, SemType::boolean(), std::move(node));
  }

  /// Membership is legal between compatible sets, and between an element and
  /// a relation containing a column of the element's type. Returns the
  /// matched relation columns (empty for ordinary membership).
  std::vector<size_t> check_membership(TExpr& lhs, TExpr& rhs, const SourceLocation& loc) {
    if (lhs.type.is_error() || rhs.type.is_error()) return {};
    if (rhs.type.kind == SemType::Kind::EmptyPoly) {
      retype_empty(rhs, lhs.type);
      return {};
    }
    if (lhs.type.kind == SemType::Kind::EmptyPoly) {
      retype_empty(lhs, rhs.type);
      return {};
    }
    if (!lhs.type.is_setlike() || !rhs.type.is_setlike()) {
      error(Kind::TypeMismatch,
            "'in' requires set operands, found " + lhs.type.to_string() + " and " +
                rhs.type.to_string(),
            loc);
      return {};
    }
    if (lhs.type.columns == rhs.type.columns) return {};  // ordinary membership
    if (lhs.type.columns.size() == 1 && rhs.type.kind == SemType::Kind::Relation) {
      std::vector<size_t> matched;
      for (size_t i = 0; i < rhs.type.columns.size(); ++i)
        if (rhs.type.columns[i] == lhs.type.columns[0]) matched.push_back(i);
      if (!matched.empty()) return matched;
    }
    error(Kind::TypeMismatch,
          "no column of " + rhs.type.to_string() + " matches " + lhs.type.to_string(),
          loc);
    return {};
  }

  TExprPtr infer_node(const Expr& e, const BoxJoinExpr& n) {
    TExprPtr target = infer(*n.target);
    TBoxJoin node{nullptr, {}};
    SemType cur = target->type;
    for (const auto& arg : n.args) {
      TExprPtr targ = infer(*arg);
      cur = join_type(targ->type, cur, e.loc);
      node.args.push_back(std::move(targ));
    }
    node.target = std::move(target);
    return make_texpr(e.loc, cur, std::move(node));
  }

  TExprPtr infer_node(const Expr& e, const ComprehensionExpr& n) {
    TComprehension node;
    std::vector<std::string> declared_here;
    for (const Decl& d : n.decls) {
      check_type_names(d.type, d.loc);
      SemType t = semtype_of(d.type);
      const auto* scalar = std::get_if<ScalarType>(&d.type);
      bool is_scalar_one = scalar && (!scalar->mult || *scalar->mult == Mult::One);
      if (!is_scalar_one)
        error(Kind::NotFirstOrder,
              "set comprehension variables must be scalars; quantifying over '" +
                  printer::print_type(d.type) + "' is not first-order",
              d.loc);
      for (const std::string& name : d.names) {
        Prim p = t.columns.empty() ? Prim::integer() : t.columns[0];
        if (declare_value(locals_, name,
                          ValueEntry{ValueEntry::K::Param, SemType::scalar(p), false, 0,
                                     d.loc}))
          declared_here.push_back(name);
        node.vars.push_back(TComprehension::Var{name, p});
      }
    }
    node.body = check_bool(*n.body);
    for (const std::string& name : declared_here) locals_.erase(name);

    SemType type;
    if (node.vars.size() == 1) {
      type = SemType::set_of(node.vars[0].prim);
    } else {
      std::vector<Prim> cols;
      for (const auto& v : node.vars) cols.push_back(v.prim);
      type = SemType::relation(std::move(cols));
    }
    return make_texpr(e.loc, type, std::move(node));
  }

  TExprPtr infer_node(const Expr& e, const CallExpr& n) {
    if (ctx_ != Ctx::Principle) {
      error(Kind::ContextViolation,
            "calls are only allowed within an operational principle or synchronization",
            e.loc);
      return make_texpr(e.loc, SemType::error(), TCall{"", n.action, false, n.can, {}});
    }
    const ValueEntry* entry = lookup(n.action);
    if (!entry || entry->kind != ValueEntry::K::Action) {
      error(Kind::UnknownAction, "unknown action '" + n.action + "'", e.loc);
      return make_texpr(e.loc, SemType::error(), TCall{"", n.action, false, n.can, {}});
    }
    const ActionSig& sig = action_sigs_[entry->action_index];

    TCall node{"", sig.name, sig.is_query, n.can, {}};
    if (n.args.size() != sig.param_types.size())
      error(Kind::ArityMismatch,
            "action '" + sig.name + "' takes " + std::to_string(sig.param_types.size()) +
                " argument(s), got " + std::to_string(n.args.size()),
            e.loc);
    for (size_t i = 0; i < n.args.size(); ++i) {
      SemType expected =
          i < sig.param_types.size() ? sig.param_types[i] : SemType::error();
      node.args.push_back(type_call_arg(*n.args[i], expected, false));
    }
    if (n.can != CanMod::None && sig.is_query)
      error(Kind::TypeMismatch,
            "'can' applies to actions that mutate the state; '" + sig.name +
                "' is a query",
            e.loc);
    SemType type = sig.is_query && n.can == CanMod::None ? sig.return_type
                                                         : SemType::boolean();
    return make_texpr(e.loc, type, std::move(node));
  }

  /// An undeclared plain-identifier argument becomes a temporary variable
  /// typed by the action's parameter; it lives for a single principle
  /// scenario or synchronization. Reuse at an incompatible type is an error.
  TExprPtr type_call_arg(const Expr& arg, const SemType& expected, bool singleton) {
    if (const auto* name = std::get_if<NameExpr>(&arg.node)) {
      const ValueEntry* entry = lookup(name->name);
      if (!entry) {
        SemType t = expected;
        if (t.kind == SemType::Kind::SetOf) t.kind = SemType::Kind::Scalar;
        temp_index_[name->name] = temps_.size();
        temps_.push_back(TempVar{name->name, t, singleton});
        locals_.emplace(name->name,
                        ValueEntry{ValueEntry::K::Temp, t, false, 0, arg.loc});
        return make_texpr(arg.loc, t, TName{name->name, RefKind::TempVar, ""});
      }
      if (entry->kind == ValueEntry::K::Temp) {
        TempVar& temp = temps_[temp_index_.at(name->name)];
        if (!prim_compatible(temp.type, expected))
          error(Kind::TypeMismatch,
                "'" + name->name + "' is used both as " + temp.type.to_string() +
                    " and as " + expected.to_string(),
                arg.loc);
        temp.singleton = temp.singleton || singleton;
        return make_texpr(arg.loc, temp.type, TName{name->name, RefKind::TempVar, ""});
      }
    }
    // Ordinary expression argument: multiplicity-insensitive check against
    // the parameter's primitive structure.
    Ctx saved = ctx_;
    if (in_app_) ctx_ = Ctx::SyncArg;
    TExprPtr t = infer(arg);
    ctx_ = saved;
    retype_empty(*t, expected);
    if (!prim_compatible(t->type, expected)) {
      error(Kind::TypeMismatch,
            "argument has type " + t->type.to_string() + ", expected " +
                expected.to_string(),
            arg.loc);
      t->type = SemType::error();
    }
    return t;
  }

  // --- concepts ------------------------------------------------------------------

 public:
  TConcept analyze_concept(const Concept& c) {
    // Fresh environment: only the diagnostics sink and the concept table are
    // shared with the enclosing analysis. Re-entrant for dynamic includes.
    auto saved_values = std::move(values_);
    auto saved_locals = std::move(locals_);
    auto saved_types = std::move(known_types_);
    auto saved_sigs = std::move(action_sigs_);
    auto saved_temps = std::move(temps_);
    auto saved_temp_index = std::move(temp_index_);
    auto saved_concept = std::move(current_concept_);
    bool saved_in_app = in_app_;
    Ctx saved_ctx = ctx_;

    values_.clear();
    locals_.clear();
    known_types_.clear();
    action_sigs_.clear();
    temps_.clear();
    temp_index_.clear();
    current_concept_ = c.name;
    in_app_ = false;
    ctx_ = Ctx::Plain;

    TConcept out = analyze_concept_body(c);
    summaries_.emplace(c.name, summarize(out));

    values_ = std::move(saved_values);
    locals_ = std::move(saved_locals);
    known_types_ = std::move(saved_types);
    action_sigs_ = std::move(saved_sigs);
    temps_ = std::move(saved_temps);
    temp_index_ = std::move(saved_temp_index);
    current_concept_ = std::move(saved_concept);
    in_app_ = saved_in_app;
    ctx_ = saved_ctx;
    return out;
  }

 private:
  TConcept analyze_concept_body(const Concept& c) {
    TConcept out;
    out.name = c.name;
    out.purpose = c.purpose;
    out.loc = c.loc;

    for (const std::string& p : c.type_params) {
      if (known_types_.count(p)) {
        error(Kind::DuplicateName, "type parameter '" + p + "' is already declared",
              c.loc);
        continue;
      }
      known_types_.insert(p);
      out.type_params.push_back(p);
    }

    // Pass 1: register every state variable and custom type so declarations
    // may appear in any order and reference one another.
    for (const StateDecl& s : c.states) {
      collect_custom_types(s.decl.type, out);
      SemType t = semtype_of(s.decl.type);
      for (const std::string& name : s.decl.names)
        declare_value(values_, name,
                      ValueEntry{ValueEntry::K::StateField, t, s.is_const, 0, s.loc});
    }

    // Pass 2: init-constraint expressions, then actions, then principles.
    for (const StateDecl& s : c.states) {
      SemType t = semtype_of(s.decl.type);
      TExprPtr init;
      if (s.init) init = check(*s.init, t);
      for (size_t i = 0; i < s.decl.names.size(); ++i) {
        TStateField f;
        f.name = s.decl.names[i];
        f.is_const = s.is_const;
        f.declared = s.decl.type;
        f.type = t;
        f.loc = s.loc;
        if (init)
          f.init = i + 1 == s.decl.names.size() ? std::move(init) : clone_texpr(*init);
        out.fields.push_back(std::move(f));
      }
    }

    // A single pass suffices for actions; they are defined independently.
    for (const Action& a : c.actions) out.actions.push_back(analyze_action(a));

    // Principles: calls and LTL operators become legal, and undeclared call
    // arguments bind as per-scenario temporaries.
    for (const auto& p : c.principles) {
      temps_.clear();
      temp_index_.clear();
      locals_.clear();
      ctx_ = Ctx::Principle;
      Scenario scenario;
      scenario.expr = check_bool(*p);
      scenario.temps = temps_;
      out.principles.push_back(std::move(scenario));
      ctx_ = Ctx::Plain;
    }
    temps_.clear();
    temp_index_.clear();
    locals_.clear();
    return out;
  }

  void collect_custom_types(const Type& t, TConcept& out) {
    auto add = [&](const PrimType& p) {
      if (p.kind != PrimType::Kind::Named) return;
      if (known_types_.count(p.name)) return;
      known_types_.insert(p.name);
      out.custom_types.push_back(p.name);
    };
    if (const auto* s = std::get_if<ScalarType>(&t)) {
      add(s->prim);
    } else {
      for (const PrimType& c : std::get<RelationType>(t).columns) add(c);
    }
  }

  TAction analyze_action(const Action& a) {
    TAction out;
    out.name = a.name;
    out.loc = a.loc;

    std::vector<SemType> param_types;
    std::vector<std::string> param_names;
    for (const Decl& d : a.params) {
      check_type_names(d.type, d.loc);
      SemType t = semtype_of(d.type);
      bool scalar_one = false;
      if (const auto* s = std::get_if<ScalarType>(&d.type))
        scalar_one = !s->mult || *s->mult == Mult::One;
      if (!scalar_one)
        error(Kind::NotFirstOrder,
              "action parameters must be scalars; quantifying over '" +
                  printer::print_type(d.type) + "' is not first-order",
              d.loc);
      for (const std::string& name : d.names) {
        param_types.push_back(t);
        param_names.push_back(name);
        out.params.push_back(TParam{name, t, d.type});
      }
    }

    ActionSig sig;
    sig.name = a.name;
    sig.is_query = std::holds_alternative<Query>(a.kind);
    sig.param_names = param_names;
    sig.param_types = param_types;
    if (const auto* q = std::get_if<Query>(&a.kind)) {
      check_type_names(q->return_type, a.loc);
      sig.return_type = semtype_of(q->return_type);
    }

    // The signature joins the values namespace before the body is analyzed.
    size_t sig_index = action_sigs_.size();
    action_sigs_.push_back(sig);
    declare_value(values_, a.name,
                  ValueEntry{ValueEntry::K::Action, SemType::error(), false, sig_index,
                             a.loc});

    // Nested scope holding the parameters; discarded afterwards.
    locals_.clear();
    for (size_t i = 0; i < param_names.size(); ++i)
      declare_value(locals_, param_names[i],
                    ValueEntry{ValueEntry::K::Param, param_types[i], false, 0, a.loc});

    if (const auto* q = std::get_if<Query>(&a.kind)) {
      TQuery tq;
      tq.declared_return = q->return_type;
      tq.return_type = sig.return_type;
      tq.body = infer(*q->body);
      if (!prim_compatible(tq.body->type, tq.return_type))
        error(Kind::TypeMismatch,
              "query body has type " + tq.body->type.to_string() +
                  ", declared to return " + tq.return_type.to_string(),
              q->body->loc);
      out.kind = std::move(tq);
    } else {
      const auto& m = std::get<Mutator>(a.kind);
      TMutator tm;
      if (m.firing_cond) tm.firing_cond = check_bool(*m.firing_cond);
      if (!m.firing_cond && m.body.empty())
        sink_.warning(Kind::NoOpAction,
                      "action '" + a.name + "' has no condition and no statements", a.loc);
      analyze_statements(m.body, tm);
      out.kind = std::move(tm);
    }

    locals_.clear();
    return out;
  }

  void analyze_statements(const std::vector<Stmt>& stmts, TMutator& out) {
    // Per variable: all compound, or exactly one simple assignment.
    struct FieldUse { bool simple = false; bool compound = false; bool reported = false; };
    std::map<std::string, FieldUse> uses;

    for (const Stmt& s : stmts) {
      TStmt ts;
      ts.compound = s.compound;
      ts.loc = s.loc;

      for (const Lval& lv : s.lhs) {
        auto target = resolve_lvalue(lv);
        if (!target) continue;
        FieldUse& use = uses[target->field];
        bool conflict = s.compound ? use.simple : (use.simple || use.compound);
        if (conflict && !use.reported) {
          error(Kind::MixedAssignment,
                "state variable '" + target->field +
                    "' mixes simple and compound assignments in one action",
                lv.loc);
          use.reported = true;
        }
        (s.compound ? use.compound : use.simple) = true;
        ts.targets.push_back(std::move(*target));
      }

      SemType expected =
          ts.targets.empty() ? SemType::error() : value_type_of(ts.targets[0]);
      ts.rhs = check_stmt_rhs(s, expected);

      // Additional targets of a multi-target statement must agree, except for
      // the empty set which fits any of them.
      if (!std::holds_alternative<EmptySetExpr>(s.rhs->node)) {
        for (size_t i = 1; i < ts.targets.size(); ++i) {
          SemType ti = value_type_of(ts.targets[i]);
          if (!prim_compatible(ts.rhs->type, ti))
            error(Kind::TypeMismatch,
                  "assignment value has type " + ts.rhs->type.to_string() +
                      " but target '" + ts.targets[i].field + "' expects " +
                      ti.to_string(),
                  ts.targets[i].loc);
        }
      }
      out.body.push_back(std::move(ts));
    }
  }

  TExprPtr check_stmt_rhs(const Stmt& s, const SemType& target) {
    if (!s.compound) return check(*s.rhs, target);
    if (target.is_error()) return infer(*s.rhs);

    switch (*s.compound) {
      case BinOp::Plus:
      case BinOp::Minus:
      case BinOp::Amp:
        if (target.is_setlike() || target.is_int()) return check(*s.rhs, target);
        break;
      case BinOp::Star:
      case BinOp::Slash:
      case BinOp::Percent:
        if (target.is_int()) return check(*s.rhs, target);
        break;
      case BinOp::Dot: {
        TExprPtr rhs = infer(*s.rhs);
        SemType joined = join_type(target, rhs->type, s.loc);
        if (!(joined == target) && !joined.is_error())
          error(Kind::IllTypedCompound,
                "'.=' changes the variable's type from " + target.to_string() + " to " +
                    joined.to_string(),
                s.loc);
        return rhs;
      }
      default:
        break;
    }
    error(Kind::IllTypedCompound,
          std::string("'") + binop_symbol(*s.compound) +
              "=' is never well-typed for a target of type " + target.to_string(),
          s.loc);
    return infer(*s.rhs);
  }

  SemType value_type_of(const TStmt::Target& t) const {
    if (!t.root) return t.field_type;
    if (t.field_type.kind != SemType::Kind::Relation) return SemType::error();
    std::vector<Prim> rest(t.field_type.columns.begin() + 1, t.field_type.columns.end());
    if (rest.size() == 1) return SemType::set_of(rest[0]);
    return SemType::relation(std::move(rest));
  }

  std::optional<TStmt::Target> resolve_lvalue(const Lval& lv) {
    if (lv.path.size() > 2) {
      error(Kind::AssignTarget,
            "assignment targets are a state variable or a parameter.field path", lv.loc);
      return std::nullopt;
    }
    if (lv.path.size() == 1) {
      const std::string& name = lv.path[0];
      const ValueEntry* entry = lookup(name);
      if (!entry) {
        error(Kind::UndeclaredName, "undeclared name '" + name + "'", lv.loc);
        return std::nullopt;
      }
      if (entry->kind != ValueEntry::K::StateField) {
        error(Kind::AssignTarget,
              "cannot assign to " + std::string(value_kind_word(entry->kind)) + " '" +
                  name + "'; only state variables are assignable",
              lv.loc);
        return std::nullopt;
      }
      if (entry->is_const) {
        error(Kind::ConstAssign,
              "cannot assign to constant state variable '" + name + "'", lv.loc);
        return std::nullopt;
      }
      return TStmt::Target{name, std::nullopt, entry->type, lv.loc};
    }

    const std::string& root = lv.path[0];
    const std::string& field = lv.path[1];
    const ValueEntry* root_entry = lookup(root);
    if (!root_entry) {
      error(Kind::UndeclaredName, "undeclared name '" + root + "'", lv.loc);
      return std::nullopt;
    }
    if (root_entry->kind != ValueEntry::K::Param ||
        root_entry->type.kind != SemType::Kind::Scalar) {
      error(Kind::AssignTarget,
            "the root of a dotted assignment target must be a scalar parameter", lv.loc);
      return std::nullopt;
    }
    const ValueEntry* field_entry = lookup(field);
    if (!field_entry || field_entry->kind != ValueEntry::K::StateField) {
      error(Kind::UndeclaredName, "'" + field + "' is not a state variable", lv.loc);
      return std::nullopt;
    }
    if (field_entry->is_const) {
      error(Kind::ConstAssign,
            "cannot assign to constant state variable '" + field + "'", lv.loc);
      return std::nullopt;
    }
    if (field_entry->type.kind != SemType::Kind::Relation ||
        !(field_entry->type.columns[0] == root_entry->type.columns[0])) {
      error(Kind::TypeMismatch,
            "'" + field + "' is not a relation whose first column matches '" + root + "'",
            lv.loc);
      return std::nullopt;
    }
    return TStmt::Target{field, root, field_entry->type, lv.loc};
  }

  ConceptSummary summarize(const TConcept& c) const {
    ConceptSummary s;
    s.name = c.name;
    s.type_params = c.type_params;
    s.custom_types = c.custom_types;
    for (const TStateField& f : c.fields) s.state_fields.emplace(f.name, f.type);
    for (const ActionSig& sig : action_sigs_) s.actions.emplace(sig.name, sig);
    return s;
  }

  // --- apps -----------------------------------------------------------------------

 public:
  TApp analyze_app(const App& app, TypedModel& model_out) {
    TApp out;
    out.name = app.name;
    out.loc = app.loc;

    values_.clear();
    locals_.clear();
    action_sigs_.clear();
    temps_.clear();
    temp_index_.clear();
    in_app_ = true;
    ctx_ = Ctx::Plain;

    // Pass 1: make every dependency available (dynamically including missing
    // concepts), then resolve type arguments, which bind the concept's type
    // parameters first and its custom types in declaration order.
    std::vector<DepInfo> deps;
    std::map<std::string, size_t> dep_index;
    std::vector<const Dependency*> dep_src;
    for (const Dependency& d : app.deps) {
      std::string name = dep_basename(d.path);
      if (dep_index.count(name)) {
        error(Kind::DuplicateName, "concept '" + name + "' is included twice", d.loc);
        continue;
      }
      if (!summaries_.count(name) && !resolve_include(d, name, model_out)) continue;
      DepInfo info;
      info.concept_name = name;
      info.summary = &summaries_.at(name);
      dep_index.emplace(name, deps.size());
      deps.push_back(std::move(info));
      dep_src.push_back(&d);
    }

    for (size_t i = 0; i < deps.size(); ++i)
      resolve_type_args(*dep_src[i], deps[i], deps, dep_index);

    // Instantiations may reach through other dependencies
    // (todo [email.Content] makes todo.Task stand for email.Content).
    for (DepInfo& info : deps) {
      auto chase = [&](Prim p) {
        for (int hops = 0;
             hops < 8 && p.kind == Prim::Kind::Named && !p.owner.empty(); ++hops) {
          auto oit = dep_index.find(p.owner);
          if (oit == dep_index.end()) break;
          const DepInfo& owner = deps[oit->second];
          auto cit = owner.custom_instantiated.find(p.name);
          if (cit == owner.custom_instantiated.end()) break;
          p = cit->second;
        }
        return p;
      };
      for (Prim& p : info.generic_args) p = chase(p);
      for (auto& [name, prim] : info.custom_instantiated) prim = chase(prim);
    }
    for (DepInfo& info : deps) instantiate_summary(info);

    for (size_t i = 0; i < deps.size(); ++i) {
      TDep td;
      td.concept_name = deps[i].concept_name;
      td.path = dep_src[i]->path;
      td.loc = dep_src[i]->loc;
      td.generic_args = deps[i].generic_args;
      td.custom_instantiated = deps[i].custom_instantiated;
      out.deps.push_back(std::move(td));
    }

    // Pass 2: synchronizations, with per-sync temporaries.
    deps_ = &deps;
    for (const Sync& sync : app.syncs) {
      temps_.clear();
      temp_index_.clear();
      locals_.clear();
      TSync ts;
      ts.loc = sync.loc;
      ts.trigger = analyze_sync_call(sync.trigger, deps, dep_index);
      for (const SyncCall& r : sync.responses)
        ts.responses.push_back(analyze_sync_call(r, deps, dep_index));
      ts.temps = temps_;
      out.syncs.push_back(std::move(ts));
    }
    deps_ = nullptr;
    in_app_ = false;
    temps_.clear();
    temp_index_.clear();
    locals_.clear();
    return out;
  }

 private:
  bool resolve_include(const Dependency& d, const std::string& name,
                       TypedModel& model_out) {
    auto result = loader_.load(base_dir_, d.path);
    if (!result.model) {
      error(Kind::UnknownConcept,
            "concept '" + name + "' is not defined and could not be included (" +
                result.error + ")",
            d.loc);
      return false;
    }
    const Concept* found = nullptr;
    for (const Concept& c : result.model->concepts)
      if (c.name == name) {
        found = &c;
        break;
      }
    if (!found) {
      error(Kind::UnknownConcept,
            "file " + result.resolved_path + " does not define concept '" + name + "'",
            d.loc);
      return false;
    }
    // Splice the included concept into the model and analyze it like a local
    // one; analyze_concept saves and restores the app's environment.
    model_out.concepts.push_back(analyze_concept(*found));
    return summaries_.count(name) > 0;
  }

  void resolve_type_args(const Dependency& d, DepInfo& info,
                         const std::vector<DepInfo>& deps,
                         const std::map<std::string, size_t>& dep_index) {
    const ConceptSummary& summary = *info.summary;
    size_t n_generic = summary.type_params.size();
    size_t n_slots = n_generic + summary.custom_types.size();

    if (d.type_args.size() > n_slots)
      error(Kind::ArityMismatch,
            "concept '" + summary.name + "' takes at most " + std::to_string(n_slots) +
                " type argument(s), got " + std::to_string(d.type_args.size()),
            d.loc);
    if (n_generic > 0 && d.type_args.size() < n_generic)
      error(Kind::MissingTypeArgs,
            "generic concept '" + summary.name + "' requires " +
                std::to_string(n_generic) + " type argument(s)",
            d.loc);

    for (size_t i = 0; i < d.type_args.size() && i < n_slots; ++i) {
      Prim resolved = resolve_qual_prim(d.type_args[i], deps, dep_index);
      if (i < n_generic)
        info.generic_args.push_back(resolved);
      else
        info.custom_instantiated.emplace(summary.custom_types[i - n_generic], resolved);
    }
    // Unfilled generic slots keep an opaque placeholder so positions line up.
    while (info.generic_args.size() < n_generic)
      info.generic_args.push_back(
          Prim::named(info.concept_name, summary.type_params[info.generic_args.size()]));
  }

  Prim resolve_qual_prim(const QualPrim& qp, const std::vector<DepInfo>& deps,
                         const std::map<std::string, size_t>& dep_index) {
    switch (qp.prim.kind) {
      case PrimType::Kind::Str: return Prim::str();
      case PrimType::Kind::Int: return Prim::integer();
      case PrimType::Kind::Named: break;
    }
    if (!qp.ns) {
      error(Kind::UnknownType,
            "type argument '" + qp.prim.name +
                "' must be qualified with the concept declaring it (e.g. todo." +
                qp.prim.name + ")",
            qp.loc);
      return Prim::named("", qp.prim.name);
    }
    auto it = dep_index.find(*qp.ns);
    if (it == dep_index.end()) {
      error(Kind::UnknownConcept, "'" + *qp.ns + "' is not an included concept", qp.loc);
      return Prim::named(*qp.ns, qp.prim.name);
    }
    const DepInfo& owner = deps[it->second];
    const auto& customs = owner.summary->custom_types;
    if (std::find(customs.begin(), customs.end(), qp.prim.name) == customs.end())
      error(Kind::UnknownType,
            "concept '" + *qp.ns + "' declares no type '" + qp.prim.name + "'", qp.loc);
    return Prim::named(*qp.ns, qp.prim.name);
  }

  void instantiate_summary(DepInfo& info) {
    const ConceptSummary& s = *info.summary;
    auto subst = [&](const Prim& p) -> Prim {
      if (p.kind != Prim::Kind::Named || !p.owner.empty()) return p;
      for (size_t i = 0; i < s.type_params.size(); ++i)
        if (s.type_params[i] == p.name) return info.generic_args[i];
      auto it = info.custom_instantiated.find(p.name);
      if (it != info.custom_instantiated.end()) return it->second;
      return Prim::named(info.concept_name, p.name);
    };
    auto subst_type = [&](SemType t) {
      for (Prim& p : t.columns) p = subst(p);
      return t;
    };
    for (const auto& [name, type] : s.state_fields)
      info.state_fields.emplace(name, subst_type(type));
    for (const auto& [name, sig] : s.actions) {
      ActionSig inst = sig;
      for (SemType& t : inst.param_types) t = subst_type(t);
      inst.return_type = subst_type(inst.return_type);
      info.actions.emplace(name, inst);
    }
  }

  TSyncCall analyze_sync_call(const SyncCall& call, const std::vector<DepInfo>& deps,
                              const std::map<std::string, size_t>& dep_index) {
    TSyncCall out;
    out.concept_name = call.concept_name;
    out.action = call.action;
    out.loc = call.loc;

    auto it = dep_index.find(call.concept_name);
    if (it == dep_index.end()) {
      error(Kind::UnknownConcept, "'" + call.concept_name + "' is not an included concept",
            call.loc);
      return out;
    }
    const DepInfo& dep = deps[it->second];
    auto ait = dep.actions.find(call.action);
    if (ait == dep.actions.end()) {
      error(Kind::UnknownAction,
            "concept '" + call.concept_name + "' has no action '" + call.action + "'",
            call.loc);
      return out;
    }
    const ActionSig& sig = ait->second;
    if (sig.is_query)
      error(Kind::TypeMismatch,
            "synchronizations compose actions that mutate the state; '" + call.action +
                "' is a query",
            call.loc);

    if (call.args.size() != sig.param_types.size())
      error(Kind::ArityMismatch,
            "action '" + sig.name + "' takes " + std::to_string(sig.param_types.size()) +
                " argument(s), got " + std::to_string(call.args.size()),
            call.loc);
    for (size_t i = 0; i < call.args.size(); ++i) {
      const SyncArg& sa = call.args[i];
      bool singleton = false;
      if (sa.mult) {
        if (*sa.mult != Mult::One) {
          error(Kind::UnsupportedMult,
                "only the 'one' multiplicity is supported on trigger arguments",
                sa.expr->loc);
        } else if (!std::holds_alternative<NameExpr>(sa.expr->node)) {
          error(Kind::UnsupportedMult,
                "a multiplicity prefix requires a plain variable argument", sa.expr->loc);
        } else {
          singleton = true;
        }
      }
      SemType expected = i < sig.param_types.size() ? sig.param_types[i] : SemType::error();
      out.args.push_back(type_call_arg(*sa.expr, expected, singleton));
      out.singleton_arg.push_back(singleton);
    }
    return out;
  }

  // --- members ---------------------------------------------------------------------

  driver::IncludeLoader& loader_;
  std::string base_dir_;
  diag::Sink& sink_;

  // Concept and app namespaces, shared across the whole model.
  std::map<std::string, ConceptSummary> summaries_;
  std::set<std::string> app_names_;

  // Per-concept environment.
  std::map<std::string, ValueEntry> values_;  // state variables and action signatures
  std::map<std::string, ValueEntry> locals_;  // parameters, comprehension vars, temps
  std::set<std::string> known_types_;         // type parameters and custom types
  std::vector<ActionSig> action_sigs_;
  std::string current_concept_;

  // Principle / synchronization temporaries, in order of first use.
  std::vector<TempVar> temps_;
  std::map<std::string, size_t> temp_index_;

  bool in_app_ = false;
  const std::vector<DepInfo>* deps_ = nullptr;
  Ctx ctx_ = Ctx::Plain;
};

}  // namespace

TypedModel analyze(const Model& model, driver::IncludeLoader& loader,
                   const std::string& base_dir, diag::Sink& sink) {
  Analyzer analyzer(loader, base_dir, sink);
  return analyzer.run(model);
}

// --- typed-AST dump --------------------------------------------------------------

namespace {

class TypedDumper {
 public:
  std::string take() { return out_.str(); }

  void line(const std::string& kind, const SourceLocation& loc,
            const std::string& extra = "", const SemType* type = nullptr) {
    out_ << std::string(indent_ * 2, ' ') << kind << "@" << loc.start_line << ":"
         << loc.start_col;
    if (!extra.empty()) out_ << " " << extra;
    if (type) out_ << " : " << type->to_string();
    out_ << "\n";
  }

  void expr(const TExpr& e) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, TEmpty>) {
            line("Empty", e.loc, "", &e.type);
          } else if constexpr (std::is_same_v<T, TIntLit>) {
            line("Int", e.loc, std::to_string(n.value), &e.type);
          } else if constexpr (std::is_same_v<T, TStrLit>) {
            line("Str", e.loc, "\"" + n.value + "\"", &e.type);
          } else if constexpr (std::is_same_v<T, TName>) {
            std::string extra = n.name;
            if (!n.owner.empty()) extra = n.owner + "/" + extra;
            line("Name", e.loc, extra, &e.type);
          } else if constexpr (std::is_same_v<T, TUnop>) {
            line("Unop", e.loc, unop_symbol(n.op), &e.type);
            Nest in(*this);
            expr(*n.operand);
          } else if constexpr (std::is_same_v<T, TBinop>) {
            line("Binop", e.loc, binop_symbol(n.op), &e.type);
            Nest in(*this);
            expr(*n.lhs);
            expr(*n.rhs);
          } else if constexpr (std::is_same_v<T, TCompare>) {
            line("Compare", e.loc,
                 std::string(n.negated ? "not " : "") + cmpop_symbol(n.op), &e.type);
            Nest in(*this);
            expr(*n.lhs);
            expr(*n.rhs);
          } else if constexpr (std::is_same_v<T, TBoxJoin>) {
            line("BoxJoin", e.loc, "", &e.type);
            Nest in(*this);
            expr(*n.target);
            for (const auto& a : n.args) expr(*a);
          } else if constexpr (std::is_same_v<T, TComprehension>) {
            std::string vars;
            for (const auto& v : n.vars) {
              if (!vars.empty()) vars += ", ";
              vars += v.name + " : " + v.prim.to_string();
            }
            line("Comprehension", e.loc, vars, &e.type);
            Nest in(*this);
            expr(*n.body);
          } else {
            static_assert(std::is_same_v<T, TCall>);
            std::string head;
            if (n.can == CanMod::Can) head += "can ";
            if (n.can == CanMod::CanNot) head += "can not ";
            if (!n.concept_name.empty()) head += n.concept_name + ".";
            head += n.action;
            line(n.is_query ? "QueryCall" : "Call", e.loc, head, &e.type);
            Nest in(*this);
            for (const auto& a : n.args) expr(*a);
          }
        },
        e.node);
  }

  void model(const TypedModel& m) {
    for (const TConcept& c : m.concepts) concept_node(c);
    for (const TApp& a : m.apps) app_node(a);
  }

 private:
  void concept_node(const TConcept& c) {
    line("Concept", c.loc, c.name);
    Nest in(*this);
    for (const TStateField& f : c.fields) {
      line("State", f.loc, f.name + (f.is_const ? " const" : ""), &f.type);
      if (f.init) {
        Nest in2(*this);
        expr(*f.init);
      }
    }
    for (const TAction& a : c.actions) {
      line(a.is_query() ? "Query" : "Mutator", a.loc, a.name);
      Nest in2(*this);
      for (const TParam& p : a.params) line("Param", a.loc, p.name, &p.type);
      if (const auto* q = std::get_if<TQuery>(&a.kind)) {
        line("Returns", a.loc, "", &q->return_type);
        expr(*q->body);
      } else {
        const auto& mu = std::get<TMutator>(a.kind);
        if (mu.firing_cond) {
          line("When", mu.firing_cond->loc);
          Nest in3(*this);
          expr(*mu.firing_cond);
        }
        for (const TStmt& s : mu.body) {
          std::string lhs;
          for (size_t i = 0; i < s.targets.size(); ++i) {
            if (i) lhs += ", ";
            if (s.targets[i].root) lhs += *s.targets[i].root + ".";
            lhs += s.targets[i].field;
          }
          std::string op =
              s.compound ? std::string(binop_symbol(*s.compound)) + "=" : ":=";
          line("Stmt", s.loc, lhs + " " + op);
          Nest in3(*this);
          expr(*s.rhs);
        }
      }
    }
    for (const Scenario& p : c.principles) {
      std::string temps;
      for (const TempVar& t : p.temps) {
        if (!temps.empty()) temps += ", ";
        temps += t.name + " : " + t.type.to_string();
      }
      line("Principle", p.expr->loc, temps.empty() ? "" : "[" + temps + "]");
      Nest in2(*this);
      expr(*p.expr);
    }
  }

  void app_node(const TApp& a) {
    line("App", a.loc, a.name);
    Nest in(*this);
    for (const TDep& d : a.deps) {
      std::string extra = d.concept_name;
      if (!d.generic_args.empty() || !d.custom_instantiated.empty()) {
        extra += " [";
        bool first = true;
        for (const Prim& p : d.generic_args) {
          if (!first) extra += ", ";
          first = false;
          extra += p.to_string();
        }
        for (const auto& [name, prim] : d.custom_instantiated) {
          if (!first) extra += ", ";
          first = false;
          extra += name + " := " + prim.to_string();
        }
        extra += "]";
      }
      line("Include", d.loc, extra);
    }
    for (const TSync& s : a.syncs) {
      std::string temps;
      for (const TempVar& t : s.temps) {
        if (!temps.empty()) temps += ", ";
        temps += t.name + (t.singleton ? "!" : "") + " : " + t.type.to_string();
      }
      line("Sync", s.loc, temps.empty() ? "" : "[" + temps + "]");
      Nest in2(*this);
      sync_call("Trigger", s.trigger);
      for (const TSyncCall& r : s.responses) sync_call("Response", r);
    }
  }

  void sync_call(const char* kind, const TSyncCall& call) {
    line(kind, call.loc, call.concept_name + "." + call.action);
    Nest in(*this);
    for (const auto& a : call.args) expr(*a);
  }

  struct Nest {
    explicit Nest(TypedDumper& d) : dumper(d) { ++dumper.indent_; }
    ~Nest() { --dumper.indent_; }
    TypedDumper& dumper;
  };

  std::ostringstream out_;
  int indent_ = 0;
};

}  // namespace

std::string dump_typed_model(const TypedModel& m) {
  TypedDumper d;
  d.model(m);
  return d.take();
}

}  // namespace conceptual::sem
