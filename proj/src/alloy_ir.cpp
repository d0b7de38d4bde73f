#include "conceptual/alloy_ir.hpp"

#include <set>
#include <sstream>

namespace conceptual::alloy {

AExprPtr aexpr(std::variant<AName, AIntLit, ANone, AStateRef, AUnary, ANoExpr,
                            ABinary, ACompare, ACall, ABox, AQuant, AComprehension>
                   node) {
  auto e = std::make_unique<AExpr>();
  e->node = std::move(node);
  return e;
}

namespace {

// Print ranks, higher binds tighter. Binary temporal operators and
// quantified formulas rank lowest so they are parenthesized whenever they
// appear as operands.
constexpr int kQuant = 0;
constexpr int kUntil = 0;
constexpr int kOr = 1;
constexpr int kImplies = 2;
constexpr int kAnd = 3;
constexpr int kFormulaPrefix = 5;  // not, always, after, historically
constexpr int kCompare = 7;
constexpr int kUnionDiff = 8;
constexpr int kCard = 9;
constexpr int kOverride = 10;
constexpr int kInter = 11;
constexpr int kArrow = 12;
constexpr int kBox = 13;
constexpr int kJoin = 14;
constexpr int kUnaryRel = 15;
constexpr int kPrimary = 16;

struct Rendered {
  std::string text;
  int prec = kPrimary;
};

std::string wrap(const Rendered& r, int min_prec) {
  if (r.prec < min_prec) return "(" + r.text + ")";
  return r.text;
}

Rendered render(const AExpr& e);

std::string print_at(const AExpr& e, int min_prec) { return wrap(render(e), min_prec); }

const char* cmp_text(ACmpOp op) {
  switch (op) {
    case ACmpOp::Eq: return "=";
    case ACmpOp::Neq: return "!=";
    case ACmpOp::In: return "in";
    case ACmpOp::NotIn: return "not in";
    case ACmpOp::Lt: return "<";
    case ACmpOp::Gt: return ">";
    case ACmpOp::Lte: return "<=";
    case ACmpOp::Gte: return ">=";
  }
  return "?";
}

Rendered render(const AExpr& e) {
  return std::visit(
      [&](const auto& n) -> Rendered {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, AName>) {
          return {n.text, kPrimary};
        } else if constexpr (std::is_same_v<T, AIntLit>) {
          return {std::to_string(n.value), kPrimary};
        } else if constexpr (std::is_same_v<T, ANone>) {
          std::string out = "none";
          for (size_t i = 1; i < n.arity; ++i) out += " -> none";
          return {out, n.arity > 1 ? kArrow : kPrimary};
        } else if constexpr (std::is_same_v<T, AStateRef>) {
          std::string out = "(";
          if (!n.qualifier.empty()) out += n.qualifier + "/";
          out += "State." + n.field;
          if (n.primed) out += "'";
          out += ")";
          return {out, kPrimary};
        } else if constexpr (std::is_same_v<T, AUnary>) {
          switch (n.op) {
            case AUnOp::Transpose:
              return {"~" + print_at(*n.operand, kUnaryRel), kUnaryRel};
            case AUnOp::Closure:
              return {"^" + print_at(*n.operand, kUnaryRel), kUnaryRel};
            case AUnOp::ReflClosure:
              return {"*" + print_at(*n.operand, kUnaryRel), kUnaryRel};
            case AUnOp::Card:
              return {"#" + print_at(*n.operand, kCard), kCard};
            case AUnOp::Not:
              return {"not " + print_at(*n.operand, kFormulaPrefix), kFormulaPrefix};
            case AUnOp::Always:
              return {"always " + print_at(*n.operand, kFormulaPrefix), kFormulaPrefix};
            case AUnOp::After:
              return {"after " + print_at(*n.operand, kFormulaPrefix), kFormulaPrefix};
            case AUnOp::Historically:
              return {"historically " + print_at(*n.operand, kFormulaPrefix),
                      kFormulaPrefix};
          }
          return {"?", kPrimary};
        } else if constexpr (std::is_same_v<T, ANoExpr>) {
          Rendered r = render(*n.operand);
          std::string text = r.prec == kPrimary ? r.text : "(" + r.text + ")";
          return {"no " + text, kFormulaPrefix};
        } else if constexpr (std::is_same_v<T, ABinary>) {
          auto bin = [&](const char* sym, int prec, bool right_assoc = false) -> Rendered {
            int lhs_min = right_assoc ? prec + 1 : prec;
            int rhs_min = right_assoc ? prec : prec + 1;
            std::string lhs = print_at(*n.lhs, lhs_min);
            std::string rhs = print_at(*n.rhs, rhs_min);
            if (std::string(sym) == ".") return Rendered{lhs + "." + rhs, prec};
            return Rendered{lhs + " " + sym + " " + rhs, prec};
          };
          switch (n.op) {
            case ABinOp::Join: return bin(".", kJoin);
            case ABinOp::Arrow: return bin("->", kArrow);
            case ABinOp::Inter: return bin("&", kInter);
            case ABinOp::Override: return bin("++", kOverride);
            case ABinOp::Union: return bin("+", kUnionDiff);
            case ABinOp::Diff: return bin("-", kUnionDiff);
            case ABinOp::And: return bin("and", kAnd);
            case ABinOp::Or: return bin("or", kOr);
            case ABinOp::Implies: return bin("implies", kImplies, /*right_assoc=*/true);
            case ABinOp::Until: {
              // Operand precedence differs across Alloy grammar descriptions,
              // so anything looser than a prefix formula is parenthesized.
              std::string lhs = print_at(*n.lhs, kFormulaPrefix);
              std::string rhs = print_at(*n.rhs, kFormulaPrefix);
              return Rendered{lhs + " until " + rhs, kUntil};
            }
          }
          return {"?", kPrimary};
        } else if constexpr (std::is_same_v<T, ACompare>) {
          std::string lhs = print_at(*n.lhs, kCompare + 1);
          std::string rhs = print_at(*n.rhs, kCompare + 1);
          return {lhs + " " + cmp_text(n.op) + " " + rhs, kCompare};
        } else if constexpr (std::is_same_v<T, ACall>) {
          if (n.args.empty()) return {n.name, kPrimary};
          std::string out = n.name + "[";
          for (size_t i = 0; i < n.args.size(); ++i) {
            if (i) out += ", ";
            out += print_at(*n.args[i], 0);
          }
          out += "]";
          return {out, kPrimary};
        } else if constexpr (std::is_same_v<T, ABox>) {
          std::string out = print_at(*n.target, kBox) + "[";
          for (size_t i = 0; i < n.args.size(); ++i) {
            if (i) out += ", ";
            out += print_at(*n.args[i], 0);
          }
          out += "]";
          return {out, kBox};
        } else if constexpr (std::is_same_v<T, AQuant>) {
          std::string out = n.kind == AQuantKind::All ? "all " : "some ";
          for (size_t i = 0; i < n.decls.size(); ++i) {
            if (i) out += ", ";
            out += n.decls[i].name + " : " + n.decls[i].type_text;
          }
          out += " | " + print_at(*n.body, kQuant);
          return {out, kQuant};
        } else {
          static_assert(std::is_same_v<T, AComprehension>);
          std::string out = "{";
          for (size_t i = 0; i < n.decls.size(); ++i) {
            if (i) out += ", ";
            out += n.decls[i].name + " : " + n.decls[i].type_text;
          }
          out += " | " + print_at(*n.body, kQuant) + "}";
          return {out, kPrimary};
        }
      },
      e.node);
}

}  // namespace

std::string print_expr(const AExpr& e) { return render(e).text; }

std::string mangle(const std::string& name) {
  static const std::set<std::string> reserved = {
      // Alloy keywords (Alloy 6, including the temporal operators).
      "abstract", "after", "all", "always", "and", "as", "assert", "before",
      "but", "check", "disj", "else", "enabled", "event", "eventually",
      "exactly", "extends", "fact", "for", "fun", "historically", "iden",
      "iff", "implies", "in", "int", "Int", "let", "lone", "module", "no",
      "none", "not", "once", "one", "open", "or", "pred", "releases", "run",
      "seq", "set", "sig", "since", "some", "steps", "String", "sum", "this",
      "triggered", "univ", "until", "var",
      // Generated infrastructure.
      "State", "init", "transitions", "synchronizations",
  };
  if (reserved.count(name)) return "_" + name;
  return name;
}

std::string serialize(const Document& doc) {
  std::ostringstream out;

  if (!doc.comment.empty()) {
    std::istringstream lines(doc.comment);
    std::string line;
    while (std::getline(lines, line)) out << "// " << line << "\n";
  }

  out << "module " << doc.module_name;
  if (!doc.module_params.empty()) {
    out << "[";
    for (size_t i = 0; i < doc.module_params.size(); ++i) {
      if (i) out << ", ";
      out << doc.module_params[i];
    }
    out << "]";
  }
  out << "\n";

  if (!doc.opens.empty()) out << "\n";
  for (const Open& o : doc.opens) {
    out << "open " << o.module;
    if (!o.args.empty()) {
      out << "[";
      for (size_t i = 0; i < o.args.size(); ++i) {
        if (i) out << ", ";
        out << o.args[i];
      }
      out << "]";
    }
    if (!o.alias.empty()) out << " as " << o.alias;
    out << "\n";
  }

  for (const SigDecl& sig : doc.sigs) {
    out << "\n";
    if (sig.abstract_sig) out << "abstract ";
    if (sig.one) out << "one ";
    out << "sig " << sig.name;
    if (sig.extends) out << " extends " << *sig.extends;
    if (sig.in_set) out << " in " << *sig.in_set;
    if (sig.fields.empty()) {
      out << " {}\n";
    } else {
      out << " {\n";
      for (size_t i = 0; i < sig.fields.size(); ++i) {
        const FieldDecl& f = sig.fields[i];
        out << "  " << (f.var_field ? "var " : "") << f.name << " : " << f.type_text;
        if (i + 1 < sig.fields.size()) out << ",";
        out << "\n";
      }
      out << "}\n";
    }
  }

  for (const Fact& fact : doc.facts) {
    out << "\nfact";
    if (!fact.name.empty()) out << " " << fact.name;
    out << " {\n";
    for (const auto& f : fact.body) out << "  " << print_expr(*f) << "\n";
    out << "}\n";
  }

  auto print_params = [&](const std::vector<ADecl>& params) {
    if (params.empty()) return;
    out << "[";
    for (size_t i = 0; i < params.size(); ++i) {
      if (i) out << ", ";
      out << params[i].name << " : " << params[i].type_text;
    }
    out << "]";
  };

  for (const Pred& pred : doc.preds) {
    out << "\npred " << pred.name;
    print_params(pred.params);
    if (pred.body.empty()) {
      out << " {}\n";
    } else {
      out << " {\n";
      for (const auto& f : pred.body) out << "  " << print_expr(*f) << "\n";
      out << "}\n";
    }
  }

  for (const Fun& fun : doc.funs) {
    out << "\nfun " << fun.name;
    print_params(fun.params);
    out << " : " << fun.result_text << " {\n  " << print_expr(*fun.body) << "\n}\n";
  }

  for (const Assert& a : doc.asserts) {
    out << "\nassert " << a.name << " {\n  " << print_expr(*a.body) << "\n}\n";
  }

  if (!doc.commands.empty()) out << "\n";
  for (const Command& c : doc.commands) {
    out << (c.kind == Command::Kind::Check ? "check " : "run ") << c.target;
    if (!c.scope_text.empty()) out << " " << c.scope_text;
    out << "\n";
  }
  return out.str();
}

}  // namespace conceptual::alloy
