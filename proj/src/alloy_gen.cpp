#include "conceptual/alloy_gen.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace conceptual::alloy {

using namespace sem;
using ast::BinOp;
using ast::CanMod;
using ast::CmpOp;
using ast::Mult;
using ast::UnOp;

namespace {

/// Shared lowering state for one generated module.
class Lowerer {
 public:
  Lowerer(Document& doc, const sem::TypedModel* model, const sem::TApp* app)
      : doc_(doc), model_(model), app_(app) {}

  bool needs_integer = false;

  // --- type rendering -------------------------------------------------------

  std::string prim_text(const Prim& p) {
    switch (p.kind) {
      case Prim::Kind::Str:
        need_str_root();
        return "_Str";
      case Prim::Kind::Int:
        return "Int";
      case Prim::Kind::Named:
        if (p.owner.empty()) return mangle(p.name);
        return mangle(p.owner) + "/" + mangle(p.name);
    }
    return "univ";
  }

  std::string declared_type_text(const ast::Type& t) {
    auto prim = [&](const ast::PrimType& p) {
      switch (p.kind) {
        case ast::PrimType::Kind::Str:
          need_str_root();
          return std::string("_Str");
        case ast::PrimType::Kind::Int: return std::string("Int");
        case ast::PrimType::Kind::Named: return mangle(p.name);
      }
      return std::string("univ");
    };
    auto mult_word = [](Mult m) {
      switch (m) {
        case Mult::Set: return "set ";
        case Mult::One: return "one ";
        case Mult::Lone: return "lone ";
      }
      return "";
    };
    if (const auto* s = std::get_if<ast::ScalarType>(&t)) {
      std::string out;
      if (s->mult) out += mult_word(*s->mult);
      return out + prim(s->prim);
    }
    const auto& rel = std::get<ast::RelationType>(t);
    std::string out;
    for (size_t i = 0; i < rel.columns.size(); ++i) {
      if (i) out += " -> ";
      if (i + 1 == rel.columns.size() && rel.target_mult)
        out += mult_word(*rel.target_mult);
      out += prim(rel.columns[i]);
    }
    return out;
  }

  /// Query results translate as bounds: a bare scalar result is emitted with
  /// `set` so set-valued bodies (the common case) stay well-formed in Alloy.
  std::string query_result_text(const ast::Type& t) {
    if (const auto* s = std::get_if<ast::ScalarType>(&t)) {
      if (s->prim.kind == ast::PrimType::Kind::Int) return "Int";
      std::string base = s->prim.kind == ast::PrimType::Kind::Str
                             ? (need_str_root(), std::string("_Str"))
                             : mangle(s->prim.name);
      if (s->mult == Mult::One) return base;
      if (s->mult == Mult::Lone) return "lone " + base;
      return "set " + base;
    }
    const auto& rel = std::get<ast::RelationType>(t);
    std::string out;
    for (size_t i = 0; i < rel.columns.size(); ++i) {
      if (i) out += " -> ";
      switch (rel.columns[i].kind) {
        case ast::PrimType::Kind::Str:
          need_str_root();
          out += "_Str";
          break;
        case ast::PrimType::Kind::Int: out += "Int"; break;
        case ast::PrimType::Kind::Named: out += mangle(rel.columns[i].name); break;
      }
    }
    return out;
  }

  // --- string atoms ----------------------------------------------------------

  void need_str_root() {
    if (str_root_emitted_) return;
    str_root_emitted_ = true;
    SigDecl root;
    root.name = "_Str";
    root.abstract_sig = true;
    doc_.sigs.push_back(std::move(root));
  }

  /// One singleton atom per distinct (parent sig, literal) pair.
  std::string string_atom(const std::string& parent, const std::string& literal) {
    auto key = std::make_pair(parent, literal);
    auto it = string_atoms_.find(key);
    if (it != string_atoms_.end()) return it->second;

    std::string base = "_str_";
    for (char c : literal) {
      if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'))
        base += c;
      else
        base += '_';
    }
    std::string name = base;
    int suffix = 2;
    while (used_atom_names_.count(name)) name = base + "_" + std::to_string(suffix++);
    used_atom_names_.insert(name);

    SigDecl atom;
    atom.name = name;
    atom.one = true;
    atom.extends = parent;
    doc_.sigs.push_back(std::move(atom));
    string_atoms_.emplace(key, name);
    return name;
  }

  // --- expression lowering ------------------------------------------------------

  /// Lower a principle scenario. A `then` at the very top reads the left side
  /// as the antecedent of an implication; nested steps conjoin under `after`.
  AExprPtr lower_scenario(const TExpr& e) {
    if (const auto* b = std::get_if<TBinop>(&e.node); b && b->op == BinOp::Then)
      return aexpr(ABinary{ABinOp::Implies, lower(*b->lhs),
                           aexpr(AUnary{AUnOp::After, lower(*b->rhs)})});
    return lower(e);
  }

  AExprPtr lower(const TExpr& e) {
    return std::visit([&](const auto& n) { return lower_node(e, n); }, e.node);
  }

  AExprPtr lower_sync_call(const TSyncCall& call) {
    ACall out{mangle(call.concept_name) + "/" + mangle(call.action), {}};
    for (size_t i = 0; i < call.args.size(); ++i) {
      str_literal_parent_ = call_arg_parent(call.concept_name, call.action, i);
      out.args.push_back(lower(*call.args[i]));
      str_literal_parent_.clear();
    }
    return aexpr(std::move(out));
  }

 private:
  AExprPtr lower_node(const TExpr& e, const TEmpty&) {
    size_t arity = e.type.columns.empty() ? 1 : e.type.columns.size();
    return aexpr(ANone{arity});
  }

  AExprPtr lower_node(const TExpr&, const TIntLit& n) { return aexpr(AIntLit{n.value}); }

  AExprPtr lower_node(const TExpr& e, const TStrLit& n) {
    (void)e;
    std::string parent = str_literal_parent_;
    if (parent.empty()) {
      need_str_root();
      parent = "_Str";
    }
    return aexpr(AName{string_atom(parent, n.value)});
  }

  AExprPtr lower_node(const TExpr&, const TName& n) {
    switch (n.ref) {
      case RefKind::StateField:
        return aexpr(AStateRef{n.owner.empty() ? "" : mangle(n.owner),
                               mangle(n.name), false});
      case RefKind::Param:
      case RefKind::TempVar:
        return aexpr(AName{mangle(n.name)});
    }
    return aexpr(AName{mangle(n.name)});
  }

  AExprPtr lower_node(const TExpr& e, const TUnop& n) {
    switch (n.op) {
      case UnOp::Transpose: return aexpr(AUnary{AUnOp::Transpose, lower(*n.operand)});
      case UnOp::Closure: return aexpr(AUnary{AUnOp::Closure, lower(*n.operand)});
      case UnOp::ReflClosure: return aexpr(AUnary{AUnOp::ReflClosure, lower(*n.operand)});
      case UnOp::Card: return aexpr(AUnary{AUnOp::Card, lower(*n.operand)});
      case UnOp::Not: return aexpr(AUnary{AUnOp::Not, lower(*n.operand)});
      case UnOp::No:
        // `no a`: a has never been true historically.
        return aexpr(AUnary{AUnOp::Historically,
                            aexpr(AUnary{AUnOp::Not, lower(*n.operand)})});
    }
    (void)e;
    throw CodegenFault("unknown unary operator");
  }

  AExprPtr lower_node(const TExpr& e, const TBinop& n) {
    switch (n.op) {
      case BinOp::Dot: return aexpr(ABinary{ABinOp::Join, lower(*n.lhs), lower(*n.rhs)});
      case BinOp::Arrow:
        return aexpr(ABinary{ABinOp::Arrow, lower(*n.lhs), lower(*n.rhs)});
      case BinOp::Amp: return aexpr(ABinary{ABinOp::Inter, lower(*n.lhs), lower(*n.rhs)});
      case BinOp::Plus:
      case BinOp::Minus:
        if (e.type.is_int()) return int_fun(n.op, lower(*n.lhs), lower(*n.rhs));
        return aexpr(ABinary{n.op == BinOp::Plus ? ABinOp::Union : ABinOp::Diff,
                             lower(*n.lhs), lower(*n.rhs)});
      case BinOp::Star:
      case BinOp::Slash:
      case BinOp::Percent:
        return int_fun(n.op, lower(*n.lhs), lower(*n.rhs));
      case BinOp::Land: return aexpr(ABinary{ABinOp::And, lower(*n.lhs), lower(*n.rhs)});
      case BinOp::Lor: return aexpr(ABinary{ABinOp::Or, lower(*n.lhs), lower(*n.rhs)});
      case BinOp::Until:
        return aexpr(ABinary{ABinOp::Until, lower(*n.lhs), lower(*n.rhs)});
      case BinOp::Then:
        // Nested sequencing: the step holds and the continuation holds in the
        // state immediately following.
        return aexpr(ABinary{ABinOp::And, lower(*n.lhs),
                             aexpr(AUnary{AUnOp::After, lower(*n.rhs)})});
    }
    throw CodegenFault("unknown binary operator");
  }

  AExprPtr int_fun(BinOp op, AExprPtr lhs, AExprPtr rhs) {
    needs_integer = true;
    const char* name = op == BinOp::Plus    ? "plus"
                       : op == BinOp::Minus ? "minus"
                       : op == BinOp::Star  ? "mul"
                       : op == BinOp::Slash ? "div"
                                            : "rem";
    ACall call{name, {}};
    call.args.push_back(std::move(lhs));
    call.args.push_back(std::move(rhs));
    return aexpr(std::move(call));
  }

  AExprPtr lower_node(const TExpr&, const TCompare& n) {
    AExprPtr lhs = lower(*n.lhs);
    AExprPtr rhs;
    if (!n.rel_columns.empty()) {
      // Relation membership: the element appears in some matching column.
      // Each column is isolated by joining away the others with univ.
      size_t arity = n.rhs->type.columns.size();
      AExprPtr acc;
      for (size_t col : n.rel_columns) {
        AExprPtr proj = lower(*n.rhs);
        for (size_t k = col + 1; k < arity; ++k)
          proj = aexpr(ABinary{ABinOp::Join, std::move(proj), aexpr(AName{"univ"})});
        for (size_t k = 0; k < col; ++k)
          proj = aexpr(ABinary{ABinOp::Join, aexpr(AName{"univ"}), std::move(proj)});
        acc = acc ? aexpr(ABinary{ABinOp::Union, std::move(acc), std::move(proj)})
                  : std::move(proj);
      }
      rhs = std::move(acc);
    } else {
      rhs = lower(*n.rhs);
    }

    switch (n.op) {
      case CmpOp::Eq:
        return aexpr(ACompare{n.negated ? ACmpOp::Neq : ACmpOp::Eq, std::move(lhs),
                              std::move(rhs)});
      case CmpOp::In:
        return aexpr(ACompare{n.negated ? ACmpOp::NotIn : ACmpOp::In, std::move(lhs),
                              std::move(rhs)});
      case CmpOp::Lt:
      case CmpOp::Gt:
      case CmpOp::Lte:
      case CmpOp::Gte: {
        ACmpOp op = n.op == CmpOp::Lt   ? ACmpOp::Lt
                    : n.op == CmpOp::Gt ? ACmpOp::Gt
                    : n.op == CmpOp::Lte ? ACmpOp::Lte
                                         : ACmpOp::Gte;
        AExprPtr cmp = aexpr(ACompare{op, std::move(lhs), std::move(rhs)});
        if (n.negated) cmp = aexpr(AUnary{AUnOp::Not, std::move(cmp)});
        return cmp;
      }
    }
    throw CodegenFault("unknown comparison");
  }

  AExprPtr lower_node(const TExpr&, const TBoxJoin& n) {
    ABox out{lower(*n.target), {}};
    for (const auto& a : n.args) out.args.push_back(lower(*a));
    return aexpr(std::move(out));
  }

  AExprPtr lower_node(const TExpr&, const TComprehension& n) {
    AComprehension out;
    for (const auto& v : n.vars) out.decls.push_back(ADecl{mangle(v.name), prim_text(v.prim)});
    out.body = lower(*n.body);
    return aexpr(std::move(out));
  }

  AExprPtr lower_node(const TExpr&, const TCall& n) {
    std::string name;
    if (!n.concept_name.empty()) name = mangle(n.concept_name) + "/";
    if (n.can != CanMod::None)
      name += "_can_" + n.action;
    else
      name += mangle(n.action);

    ACall call{name, {}};
    for (size_t i = 0; i < n.args.size(); ++i) {
      str_literal_parent_ = call_arg_parent(n.concept_name, n.action, i);
      call.args.push_back(lower(*n.args[i]));
      str_literal_parent_.clear();
    }
    AExprPtr out = aexpr(std::move(call));
    if (n.can == CanMod::CanNot) out = aexpr(AUnary{AUnOp::Not, std::move(out)});
    return out;
  }

  /// For a string literal passed to an action whose parameter type is a
  /// custom type instantiated as `string`, the atom extends that concept's
  /// sig so the generated call stays well-typed in Alloy.
  std::string call_arg_parent(const std::string& concept_name, const std::string& action_name,
                              size_t arg_index) {
    if (!app_ || !model_ || concept_name.empty()) return "";
    const TDep* dep = nullptr;
    for (const TDep& d : app_->deps)
      if (d.concept_name == concept_name) {
        dep = &d;
        break;
      }
    if (!dep) return "";
    const TConcept* concept_def = nullptr;
    for (const TConcept& c : model_->concepts)
      if (c.name == concept_name) {
        concept_def = &c;
        break;
      }
    if (!concept_def) return "";
    const TAction* action = nullptr;
    for (const TAction& a : concept_def->actions)
      if (a.name == action_name) {
        action = &a;
        break;
      }
    if (!action || arg_index >= action->params.size()) return "";

    const ast::Type& declared = action->params[arg_index].declared;
    const auto* scalar = std::get_if<ast::ScalarType>(&declared);
    if (!scalar || scalar->prim.kind != ast::PrimType::Kind::Named) return "";
    const std::string& type_name = scalar->prim.name;
    auto it = dep->custom_instantiated.find(type_name);
    if (it == dep->custom_instantiated.end() || it->second.kind != Prim::Kind::Str)
      return "";
    return mangle(concept_name) + "/" + mangle(type_name);
  }

  Document& doc_;
  const sem::TypedModel* model_;
  const sem::TApp* app_;
  bool str_root_emitted_ = false;
  std::map<std::pair<std::string, std::string>, std::string> string_atoms_;
  std::set<std::string> used_atom_names_;
  std::string str_literal_parent_;
};

// --- statement accumulation -----------------------------------------------------

struct FieldPlan {
  enum class State { Unchanged, Simple, Compound };
  State state = State::Unchanged;
  AExprPtr expr;  // the accumulated next-state value when not Unchanged
};

size_t field_arity(const TStateField& f) {
  return f.type.columns.empty() ? 1 : f.type.columns.size();
}

/// Fold the statements, in source order, into one next-state expression per
/// changed field. Simple assignment replaces wholesale; compound operators
/// left-fold from the current state, so each field is primed exactly once.
std::map<std::string, FieldPlan> accumulate_statements(
    const sem::TConcept& c, const std::vector<TStmt>& stmts, Lowerer& lower) {
  std::map<std::string, FieldPlan> plan;
  std::map<std::string, const TStateField*> fields;
  for (const TStateField& f : c.fields) fields.emplace(f.name, &f);

  for (const TStmt& s : stmts) {
    for (const TStmt::Target& target : s.targets) {
      auto fit = fields.find(target.field);
      if (fit == fields.end()) throw CodegenFault("unknown field in statement");
      const TStateField& field = *fit->second;
      FieldPlan& fp = plan[target.field];

      if (!s.compound) {
        if (fp.state != FieldPlan::State::Unchanged)
          throw CodegenFault("mixed assignments reached code generation");
        fp.state = FieldPlan::State::Simple;
        if (!target.root) {
          if (std::holds_alternative<TEmpty>(s.rhs->node))
            fp.expr = aexpr(ANone{field_arity(field)});
          else
            fp.expr = lower.lower(*s.rhs);
        } else {
          AExprPtr cur = aexpr(AStateRef{"", mangle(field.name), false});
          AExprPtr root = aexpr(AName{mangle(*target.root)});
          if (std::holds_alternative<TEmpty>(s.rhs->node)) {
            // Clearing one row: override with an empty right side is a
            // no-op, so the rows are subtracted instead.
            AExprPtr rows = std::move(root);
            for (size_t k = 1; k < field_arity(field); ++k)
              rows = aexpr(ABinary{ABinOp::Arrow, std::move(rows), aexpr(AName{"univ"})});
            fp.expr = aexpr(ABinary{ABinOp::Diff, std::move(cur), std::move(rows)});
          } else {
            AExprPtr update =
                aexpr(ABinary{ABinOp::Arrow, std::move(root), lower.lower(*s.rhs)});
            fp.expr = aexpr(ABinary{ABinOp::Override, std::move(cur), std::move(update)});
          }
        }
        continue;
      }

      if (fp.state == FieldPlan::State::Simple)
        throw CodegenFault("mixed assignments reached code generation");
      fp.state = FieldPlan::State::Compound;
      AExprPtr base = fp.expr ? std::move(fp.expr)
                              : aexpr(AStateRef{"", mangle(field.name), false});
      AExprPtr rhs = lower.lower(*s.rhs);
      if (target.root)
        rhs = aexpr(ABinary{ABinOp::Arrow, aexpr(AName{mangle(*target.root)}),
                            std::move(rhs)});

      if (field.type.is_int()) {
        ACall call{*s.compound == BinOp::Plus    ? "plus"
                   : *s.compound == BinOp::Minus ? "minus"
                   : *s.compound == BinOp::Star  ? "mul"
                   : *s.compound == BinOp::Slash ? "div"
                                                 : "rem",
                   {}};
        call.args.push_back(std::move(base));
        call.args.push_back(std::move(rhs));
        lower.needs_integer = true;
        fp.expr = aexpr(std::move(call));
        continue;
      }

      ABinOp op;
      switch (*s.compound) {
        case BinOp::Plus: op = ABinOp::Union; break;
        case BinOp::Minus: op = ABinOp::Diff; break;
        case BinOp::Amp: op = ABinOp::Inter; break;
        case BinOp::Dot: op = ABinOp::Join; break;
        default: throw CodegenFault("compound operator reached code generation");
      }
      fp.expr = aexpr(ABinary{op, std::move(base), std::move(rhs)});
    }
  }
  return plan;
}

std::vector<ADecl> action_params(const TAction& a, Lowerer& lower) {
  std::vector<ADecl> out;
  for (const TParam& p : a.params)
    out.push_back(ADecl{mangle(p.name), lower.declared_type_text(p.declared)});
  return out;
}

}  // namespace

Document gen_concept(const sem::TConcept& c, const Options& opts) {
  Document doc;
  doc.comment = c.purpose;
  doc.module_name = mangle(c.name);
  for (const std::string& p : c.type_params) doc.module_params.push_back(mangle(p));

  Lowerer lower(doc, nullptr, nullptr);

  // Custom types become empty, top-level signatures.
  for (const std::string& t : c.custom_types) {
    SigDecl sig;
    sig.name = mangle(t);
    doc.sigs.push_back(std::move(sig));
  }

  // The mutable state lives in a concept-global singleton.
  SigDecl state;
  state.name = "State";
  state.one = true;
  for (const TStateField& f : c.fields)
    state.fields.push_back(
        FieldDecl{mangle(f.name), !f.is_const, lower.declared_type_text(f.declared)});
  doc.sigs.push_back(std::move(state));

  // All mutable state is empty initially; a fact without temporal operators
  // constrains only the first state of every trace.
  Fact init;
  init.name = "init";
  for (const TStateField& f : c.fields) {
    if (f.is_const) continue;
    init.body.push_back(
        aexpr(ANoExpr{aexpr(AStateRef{"", mangle(f.name), false})}));
  }
  if (!init.body.empty()) doc.facts.push_back(std::move(init));

  // Declared state constraints map to separate facts.
  for (const TStateField& f : c.fields) {
    if (!f.init) continue;
    Fact fact;
    fact.name = mangle(f.name) + "_init";
    AExprPtr value = lower.lower(*f.init);
    if (std::holds_alternative<TEmpty>(f.init->node))
      value = aexpr(ANone{f.type.columns.empty() ? 1 : f.type.columns.size()});
    fact.body.push_back(aexpr(ACompare{ACmpOp::Eq,
                                       aexpr(AStateRef{"", mangle(f.name), false}),
                                       std::move(value)}));
    doc.facts.push_back(std::move(fact));
  }

  // Actions: mutators become predicates (condition, effects, frames), each
  // with a `_can_` companion holding just the firing condition; queries
  // become functions.
  for (const TAction& a : c.actions) {
    std::vector<ADecl> params = action_params(a, lower);

    if (const auto* q = std::get_if<TQuery>(&a.kind)) {
      Fun fun;
      fun.name = mangle(a.name);
      fun.params = params;
      fun.result_text = lower.query_result_text(q->declared_return);
      fun.body = lower.lower(*q->body);
      doc.funs.push_back(std::move(fun));

      Pred can;
      can.name = "_can_" + a.name;
      can.params = params;
      doc.preds.push_back(std::move(can));
      continue;
    }

    const auto& m = std::get<TMutator>(a.kind);
    Pred pred;
    pred.name = mangle(a.name);
    pred.params = params;
    if (m.firing_cond) pred.body.push_back(lower.lower(*m.firing_cond));

    auto plan = accumulate_statements(c, m.body, lower);
    // Effects first, then frame conditions, each in declaration order.
    for (const TStateField& f : c.fields) {
      auto it = plan.find(f.name);
      if (it == plan.end() || it->second.state == FieldPlan::State::Unchanged) continue;
      pred.body.push_back(aexpr(ACompare{ACmpOp::Eq,
                                         aexpr(AStateRef{"", mangle(f.name), true}),
                                         std::move(it->second.expr)}));
    }
    for (const TStateField& f : c.fields) {
      if (f.is_const) continue;
      auto it = plan.find(f.name);
      if (it != plan.end() && it->second.state != FieldPlan::State::Unchanged) continue;
      pred.body.push_back(aexpr(ACompare{ACmpOp::Eq,
                                         aexpr(AStateRef{"", mangle(f.name), true}),
                                         aexpr(AStateRef{"", mangle(f.name), false})}));
    }
    doc.preds.push_back(std::move(pred));

    Pred can;
    can.name = "_can_" + a.name;
    can.params = params;
    if (m.firing_cond) can.body.push_back(lower.lower(*m.firing_cond));
    doc.preds.push_back(std::move(can));
  }

  // The transition system: in every state either some action fires (with its
  // parameters chosen existentially) or nothing changes.
  Pred stutter;
  stutter.name = "_stutter";
  for (const TStateField& f : c.fields) {
    if (f.is_const) continue;
    stutter.body.push_back(aexpr(ACompare{ACmpOp::Eq,
                                          aexpr(AStateRef{"", mangle(f.name), true}),
                                          aexpr(AStateRef{"", mangle(f.name), false})}));
  }
  doc.preds.push_back(std::move(stutter));

  AExprPtr transition = aexpr(AName{"_stutter"});
  for (const TAction& a : c.actions) {
    if (a.is_query()) continue;
    ACall call{mangle(a.name), {}};
    for (const TParam& p : a.params) call.args.push_back(aexpr(AName{mangle(p.name)}));
    AExprPtr disjunct = aexpr(std::move(call));
    if (!a.params.empty()) {
      AQuant quant{AQuantKind::Some, {}, std::move(disjunct)};
      for (const TParam& p : a.params)
        quant.decls.push_back(ADecl{mangle(p.name), lower.declared_type_text(p.declared)});
      disjunct = aexpr(std::move(quant));
    }
    transition = aexpr(ABinary{ABinOp::Or, std::move(transition), std::move(disjunct)});
  }
  Fact transitions;
  transitions.name = "transitions";
  transitions.body.push_back(aexpr(AUnary{AUnOp::Always, std::move(transition)}));
  doc.facts.push_back(std::move(transitions));

  // One assertion and check per principle scenario.
  for (size_t i = 0; i < c.principles.size(); ++i) {
    const Scenario& scenario = c.principles[i];
    AExprPtr body = lower.lower_scenario(*scenario.expr);
    if (!scenario.temps.empty()) {
      AQuant quant{AQuantKind::All, {}, std::move(body)};
      for (const TempVar& t : scenario.temps) {
        Prim p = t.type.columns.empty() ? Prim::integer() : t.type.columns[0];
        quant.decls.push_back(ADecl{mangle(t.name), lower.prim_text(p)});
      }
      body = aexpr(std::move(quant));
    }
    Assert assertion;
    assertion.name = "principle" + std::to_string(i + 1);
    assertion.body = aexpr(AUnary{AUnOp::Always, std::move(body)});
    doc.asserts.push_back(std::move(assertion));
    doc.commands.push_back(
        Command{Command::Kind::Check, "principle" + std::to_string(i + 1),
                opts.check_scope});
  }

  if (lower.needs_integer)
    doc.opens.insert(doc.opens.begin(), Open{"util/integer", {}, ""});
  return doc;
}

Document gen_app(const sem::TApp& app, const sem::TypedModel& model, const Options&) {
  Document doc;
  doc.module_name = mangle(app.name);

  Lowerer lower(doc, &model, &app);

  for (const TDep& dep : app.deps) {
    Open open;
    open.module = mangle(dep.concept_name);
    open.alias = mangle(dep.concept_name);
    for (const Prim& arg : dep.generic_args) open.args.push_back(lower.prim_text(arg));
    doc.opens.push_back(std::move(open));
  }

  // Multiplicity-prefixed trigger arguments denote fixed singleton atoms.
  std::map<std::string, std::string> singletons;  // name -> parent type text
  for (const TSync& sync : app.syncs) {
    for (const TempVar& t : sync.temps) {
      if (!t.singleton) continue;
      Prim p = t.type.columns.empty() ? Prim::integer() : t.type.columns[0];
      std::string parent = lower.prim_text(p);
      auto it = singletons.find(t.name);
      if (it == singletons.end()) {
        singletons.emplace(t.name, parent);
        SigDecl sig;
        sig.name = mangle(t.name);
        sig.one = true;
        if (parent == "Int")
          sig.in_set = parent;
        else
          sig.extends = parent;
        doc.sigs.push_back(std::move(sig));
      } else if (it->second != parent) {
        throw CodegenFault("singleton '" + t.name + "' used at two different types");
      }
    }
  }

  // Each synchronization: whenever the trigger occurs, every response occurs
  // with it; quantified over the sync's free variables.
  Fact fact;
  fact.name = "synchronizations";
  for (const TSync& sync : app.syncs) {
    AExprPtr trigger = lower.lower_sync_call(sync.trigger);
    AExprPtr responses;
    for (const TSyncCall& r : sync.responses) {
      AExprPtr one = lower.lower_sync_call(r);
      responses = responses
                      ? aexpr(ABinary{ABinOp::And, std::move(responses), std::move(one)})
                      : std::move(one);
    }
    if (!responses) continue;
    AExprPtr body =
        aexpr(ABinary{ABinOp::Implies, std::move(trigger), std::move(responses)});

    std::vector<ADecl> decls;
    for (const TempVar& t : sync.temps) {
      if (t.singleton) continue;
      Prim p = t.type.columns.empty() ? Prim::integer() : t.type.columns[0];
      decls.push_back(ADecl{mangle(t.name), lower.prim_text(p)});
    }
    if (!decls.empty()) body = aexpr(AQuant{AQuantKind::All, std::move(decls), std::move(body)});
    fact.body.push_back(aexpr(AUnary{AUnOp::Always, std::move(body)}));
  }
  if (!fact.body.empty()) doc.facts.push_back(std::move(fact));

  if (lower.needs_integer)
    doc.opens.insert(doc.opens.begin(), Open{"util/integer", {}, ""});
  return doc;
}

}  // namespace conceptual::alloy
