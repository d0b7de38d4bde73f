#include "conceptual/ast.hpp"

namespace conceptual::ast {

ExprPtr make_expr(SourceLocation loc,
                  std::variant<EmptySetExpr, IntLitExpr, StrLitExpr, NameExpr,
                               UnopExpr, BinopExpr, CompareExpr, BoxJoinExpr,
                               ComprehensionExpr, CallExpr>
                      node) {
  auto e = std::make_unique<Expr>();
  e->loc = std::move(loc);
  e->node = std::move(node);
  return e;
}

ExprPtr clone_expr(const Expr& e) {
  return std::visit(
      [&](const auto& n) -> ExprPtr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, EmptySetExpr> ||
                      std::is_same_v<T, IntLitExpr> ||
                      std::is_same_v<T, StrLitExpr> ||
                      std::is_same_v<T, NameExpr>) {
          return make_expr(e.loc, n);
        } else if constexpr (std::is_same_v<T, UnopExpr>) {
          return make_expr(e.loc, UnopExpr{n.op, clone_expr(*n.operand)});
        } else if constexpr (std::is_same_v<T, BinopExpr>) {
          return make_expr(e.loc, BinopExpr{n.op, clone_expr(*n.lhs), clone_expr(*n.rhs)});
        } else if constexpr (std::is_same_v<T, CompareExpr>) {
          return make_expr(e.loc,
                           CompareExpr{n.op, n.negated, clone_expr(*n.lhs), clone_expr(*n.rhs)});
        } else if constexpr (std::is_same_v<T, BoxJoinExpr>) {
          BoxJoinExpr out{clone_expr(*n.target), {}};
          for (const auto& a : n.args) out.args.push_back(clone_expr(*a));
          return make_expr(e.loc, std::move(out));
        } else if constexpr (std::is_same_v<T, ComprehensionExpr>) {
          ComprehensionExpr out{n.decls, clone_expr(*n.body)};
          return make_expr(e.loc, std::move(out));
        } else {
          static_assert(std::is_same_v<T, CallExpr>);
          CallExpr out{n.action, {}, n.can};
          for (const auto& a : n.args) out.args.push_back(clone_expr(*a));
          return make_expr(e.loc, std::move(out));
        }
      },
      e.node);
}

bool equal(const Type& a, const Type& b) {
  if (a.index() != b.index()) return false;
  if (const auto* sa = std::get_if<ScalarType>(&a)) {
    const auto& sb = std::get<ScalarType>(b);
    return sa->mult == sb.mult && sa->prim == sb.prim;
  }
  const auto& ra = std::get<RelationType>(a);
  const auto& rb = std::get<RelationType>(b);
  return ra.columns == rb.columns && ra.target_mult == rb.target_mult;
}

namespace {

bool equal_decls(const std::vector<Decl>& a, const std::vector<Decl>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].names != b[i].names || !equal(a[i].type, b[i].type)) return false;
  }
  return true;
}

bool equal_expr_lists(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!equal(*a[i], *b[i])) return false;
  return true;
}

}  // namespace

bool equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& na) -> bool {
        using T = std::decay_t<decltype(na)>;
        const auto& nb = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, EmptySetExpr>) {
          return true;
        } else if constexpr (std::is_same_v<T, IntLitExpr>) {
          return na.value == nb.value;
        } else if constexpr (std::is_same_v<T, StrLitExpr>) {
          return na.value == nb.value;
        } else if constexpr (std::is_same_v<T, NameExpr>) {
          return na.name == nb.name;
        } else if constexpr (std::is_same_v<T, UnopExpr>) {
          return na.op == nb.op && equal(*na.operand, *nb.operand);
        } else if constexpr (std::is_same_v<T, BinopExpr>) {
          return na.op == nb.op && equal(*na.lhs, *nb.lhs) && equal(*na.rhs, *nb.rhs);
        } else if constexpr (std::is_same_v<T, CompareExpr>) {
          return na.op == nb.op && na.negated == nb.negated &&
                 equal(*na.lhs, *nb.lhs) && equal(*na.rhs, *nb.rhs);
        } else if constexpr (std::is_same_v<T, BoxJoinExpr>) {
          return equal(*na.target, *nb.target) && equal_expr_lists(na.args, nb.args);
        } else if constexpr (std::is_same_v<T, ComprehensionExpr>) {
          return equal_decls(na.decls, nb.decls) && equal(*na.body, *nb.body);
        } else {
          static_assert(std::is_same_v<T, CallExpr>);
          return na.action == nb.action && na.can == nb.can &&
                 equal_expr_lists(na.args, nb.args);
        }
      },
      a.node);
}

namespace {

bool equal_action(const Action& a, const Action& b) {
  if (a.name != b.name || !equal_decls(a.params, b.params)) return false;
  if (a.kind.index() != b.kind.index()) return false;
  if (const auto* ma = std::get_if<Mutator>(&a.kind)) {
    const auto& mb = std::get<Mutator>(b.kind);
    if ((ma->firing_cond == nullptr) != (mb.firing_cond == nullptr)) return false;
    if (ma->firing_cond && !equal(*ma->firing_cond, *mb.firing_cond)) return false;
    if (ma->body.size() != mb.body.size()) return false;
    for (size_t i = 0; i < ma->body.size(); ++i) {
      const Stmt& sa = ma->body[i];
      const Stmt& sb = mb.body[i];
      if (sa.compound != sb.compound || sa.lhs.size() != sb.lhs.size()) return false;
      for (size_t j = 0; j < sa.lhs.size(); ++j)
        if (sa.lhs[j].path != sb.lhs[j].path) return false;
      if (!equal(*sa.rhs, *sb.rhs)) return false;
    }
    return true;
  }
  const auto& qa = std::get<Query>(a.kind);
  const auto& qb = std::get<Query>(b.kind);
  return equal(qa.return_type, qb.return_type) && equal(*qa.body, *qb.body);
}

bool equal_sync_call(const SyncCall& a, const SyncCall& b) {
  if (a.concept_name != b.concept_name || a.action != b.action) return false;
  if (a.args.size() != b.args.size()) return false;
  for (size_t i = 0; i < a.args.size(); ++i) {
    if (a.args[i].mult != b.args[i].mult) return false;
    if (!equal(*a.args[i].expr, *b.args[i].expr)) return false;
  }
  return true;
}

}  // namespace

bool equal(const Model& a, const Model& b) {
  if (a.concepts.size() != b.concepts.size() || a.apps.size() != b.apps.size())
    return false;
  for (size_t i = 0; i < a.concepts.size(); ++i) {
    const Concept& ca = a.concepts[i];
    const Concept& cb = b.concepts[i];
    if (ca.name != cb.name || ca.type_params != cb.type_params ||
        ca.purpose != cb.purpose)
      return false;
    if (ca.states.size() != cb.states.size()) return false;
    for (size_t j = 0; j < ca.states.size(); ++j) {
      const StateDecl& sa = ca.states[j];
      const StateDecl& sb = cb.states[j];
      if (sa.is_const != sb.is_const || sa.decl.names != sb.decl.names ||
          !equal(sa.decl.type, sb.decl.type))
        return false;
      if ((sa.init == nullptr) != (sb.init == nullptr)) return false;
      if (sa.init && !equal(*sa.init, *sb.init)) return false;
    }
    if (ca.actions.size() != cb.actions.size()) return false;
    for (size_t j = 0; j < ca.actions.size(); ++j)
      if (!equal_action(ca.actions[j], cb.actions[j])) return false;
    if (!equal_expr_lists(ca.principles, cb.principles)) return false;
  }
  for (size_t i = 0; i < a.apps.size(); ++i) {
    const App& aa = a.apps[i];
    const App& ab = b.apps[i];
    if (aa.name != ab.name || aa.deps.size() != ab.deps.size() ||
        aa.syncs.size() != ab.syncs.size())
      return false;
    for (size_t j = 0; j < aa.deps.size(); ++j) {
      const Dependency& da = aa.deps[j];
      const Dependency& db = ab.deps[j];
      if (da.path != db.path || da.brackets_present != db.brackets_present)
        return false;
      if (da.type_args.size() != db.type_args.size()) return false;
      for (size_t k = 0; k < da.type_args.size(); ++k) {
        if (da.type_args[k].ns != db.type_args[k].ns ||
            !(da.type_args[k].prim == db.type_args[k].prim))
          return false;
      }
    }
    for (size_t j = 0; j < aa.syncs.size(); ++j) {
      if (!equal_sync_call(aa.syncs[j].trigger, ab.syncs[j].trigger)) return false;
      if (aa.syncs[j].responses.size() != ab.syncs[j].responses.size()) return false;
      for (size_t k = 0; k < aa.syncs[j].responses.size(); ++k)
        if (!equal_sync_call(aa.syncs[j].responses[k], ab.syncs[j].responses[k]))
          return false;
    }
  }
  return true;
}

std::string dep_basename(const std::string& path) {
  size_t slash = path.find_last_of('/');
  std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
  size_t dot = name.find_last_of('.');
  if (dot != std::string::npos && dot > 0) name = name.substr(0, dot);
  return name;
}

const char* binop_symbol(BinOp op) {
  switch (op) {
    case BinOp::Plus: return "+";
    case BinOp::Minus: return "-";
    case BinOp::Amp: return "&";
    case BinOp::Dot: return ".";
    case BinOp::Arrow: return "->";
    case BinOp::Star: return "*";
    case BinOp::Slash: return "/";
    case BinOp::Percent: return "%";
    case BinOp::Land: return "&&";
    case BinOp::Lor: return "||";
    case BinOp::Then: return "then";
    case BinOp::Until: return "until";
  }
  return "?";
}

const char* cmpop_symbol(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::In: return "in";
    case CmpOp::Lt: return "<";
    case CmpOp::Gt: return ">";
    case CmpOp::Lte: return "<=";
    case CmpOp::Gte: return ">=";
  }
  return "?";
}

const char* unop_symbol(UnOp op) {
  switch (op) {
    case UnOp::Transpose: return "~";
    case UnOp::Closure: return "^";
    case UnOp::ReflClosure: return "*^";
    case UnOp::Card: return "#";
    case UnOp::No: return "no";
    case UnOp::Not: return "!";
  }
  return "?";
}

}  // namespace conceptual::ast
