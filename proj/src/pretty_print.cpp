#include "conceptual/pretty_print.hpp"

#include <sstream>

namespace conceptual::printer {

using namespace ast;

namespace {

// Higher binds tighter. Mirrors the parser's levels.
constexpr int kThen = 1;
constexpr int kUntil = 2;
constexpr int kNo = 3;
constexpr int kLor = 4;
constexpr int kLand = 5;
constexpr int kNot = 6;
constexpr int kCompare = 7;
constexpr int kAdd = 8;
constexpr int kCard = 9;
constexpr int kMul = 10;
constexpr int kArrow = 11;
constexpr int kBox = 12;
constexpr int kDot = 13;
constexpr int kUnary = 14;
constexpr int kPrimary = 15;

int binop_prec(BinOp op) {
  switch (op) {
    case BinOp::Then: return kThen;
    case BinOp::Until: return kUntil;
    case BinOp::Lor: return kLor;
    case BinOp::Land: return kLand;
    case BinOp::Plus:
    case BinOp::Minus: return kAdd;
    case BinOp::Amp:
    case BinOp::Star:
    case BinOp::Slash:
    case BinOp::Percent: return kMul;
    case BinOp::Arrow: return kArrow;
    case BinOp::Dot: return kDot;
  }
  return kPrimary;
}

int unop_prec(UnOp op) {
  switch (op) {
    case UnOp::No: return kNo;
    case UnOp::Not: return kNot;
    case UnOp::Card: return kCard;
    case UnOp::Transpose:
    case UnOp::Closure:
    case UnOp::ReflClosure: return kUnary;
  }
  return kPrimary;
}

std::string escape_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

class ExprPrinter {
 public:
  explicit ExprPrinter(bool full_parens) : full_(full_parens) {}

  std::string print(const Expr& e, int min_prec) {
    auto [text, prec] = render(e);
    if (prec < min_prec || (full_ && prec != kPrimary)) return "(" + text + ")";
    return text;
  }

 private:
  std::pair<std::string, int> render(const Expr& e) {
    return std::visit(
        [&](const auto& n) -> std::pair<std::string, int> {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, EmptySetExpr>) {
            return {"{}", kPrimary};
          } else if constexpr (std::is_same_v<T, IntLitExpr>) {
            return {std::to_string(n.value), kPrimary};
          } else if constexpr (std::is_same_v<T, StrLitExpr>) {
            return {escape_string(n.value), kPrimary};
          } else if constexpr (std::is_same_v<T, NameExpr>) {
            return {n.name, kPrimary};
          } else if constexpr (std::is_same_v<T, UnopExpr>) {
            int prec = unop_prec(n.op);
            std::string op = unop_symbol(n.op);
            // Loose boolean prefixes read as words; tight relational ones do not.
            bool spaced = n.op == UnOp::No;
            return {op + (spaced ? " " : "") + print(*n.operand, prec), prec};
          } else if constexpr (std::is_same_v<T, BinopExpr>) {
            int prec = binop_prec(n.op);
            bool right_assoc = n.op == BinOp::Then;
            int lhs_min = right_assoc ? prec + 1 : prec;
            int rhs_min = right_assoc ? prec : prec + 1;
            std::string lhs = print(*n.lhs, lhs_min);
            std::string rhs = print(*n.rhs, rhs_min);
            if (n.op == BinOp::Dot) return {lhs + "." + rhs, prec};
            return {lhs + " " + binop_symbol(n.op) + " " + rhs, prec};
          } else if constexpr (std::is_same_v<T, CompareExpr>) {
            std::string lhs = print(*n.lhs, kCompare + 1);
            std::string rhs = print(*n.rhs, kCompare + 1);
            std::string op = n.negated ? std::string("not ") + cmpop_symbol(n.op)
                                       : cmpop_symbol(n.op);
            return {lhs + " " + op + " " + rhs, kCompare};
          } else if constexpr (std::is_same_v<T, BoxJoinExpr>) {
            std::string out = print(*n.target, kBox);
            out += '[';
            for (size_t i = 0; i < n.args.size(); ++i) {
              if (i) out += ", ";
              out += print(*n.args[i], 0);
            }
            out += ']';
            return {out, kBox};
          } else if constexpr (std::is_same_v<T, ComprehensionExpr>) {
            std::string out = "{";
            for (size_t i = 0; i < n.decls.size(); ++i) {
              if (i) out += ", ";
              out += print_decl(n.decls[i]);
            }
            out += " | " + print(*n.body, 0) + "}";
            return {out, kPrimary};
          } else {
            static_assert(std::is_same_v<T, CallExpr>);
            std::string out;
            if (n.can == CanMod::Can) out += "can ";
            if (n.can == CanMod::CanNot) out += "can not ";
            out += n.action;
            out += '(';
            for (size_t i = 0; i < n.args.size(); ++i) {
              if (i) out += ", ";
              out += print(*n.args[i], 0);
            }
            out += ')';
            return {out, kPrimary};
          }
        },
        e.node);
  }

  std::string print_decl(const Decl& d) {
    std::string out;
    for (size_t i = 0; i < d.names.size(); ++i) {
      if (i) out += ", ";
      out += d.names[i];
    }
    out += " : " + print_type(d.type);
    return out;
  }

  bool full_;
};

const char* mult_word(Mult m) {
  switch (m) {
    case Mult::Set: return "set";
    case Mult::One: return "one";
    case Mult::Lone: return "lone";
  }
  return "?";
}

std::string prim_word(const PrimType& p) {
  switch (p.kind) {
    case PrimType::Kind::Str: return "string";
    case PrimType::Kind::Int: return "int";
    case PrimType::Kind::Named: return p.name;
  }
  return "?";
}

std::string decl_text(const Decl& d) {
  std::string out;
  for (size_t i = 0; i < d.names.size(); ++i) {
    if (i) out += ", ";
    out += d.names[i];
  }
  out += " : " + print_type(d.type);
  return out;
}

void print_concept(std::ostringstream& out, const Concept& c) {
  out << "concept " << c.name;
  if (!c.type_params.empty()) {
    out << " [";
    for (size_t i = 0; i < c.type_params.size(); ++i) {
      if (i) out << ", ";
      out << c.type_params[i];
    }
    out << "]";
  }
  out << "\npurpose " << escape_string(c.purpose) << "\nstate\n";
  for (const StateDecl& s : c.states) {
    out << "  ";
    if (s.is_const) out << "const ";
    out << decl_text(s.decl);
    if (s.init) out << " = " << print_expr(*s.init);
    out << "\n";
  }
  out << "actions\n";
  for (const Action& a : c.actions) {
    out << "  " << a.name << "(";
    for (size_t i = 0; i < a.params.size(); ++i) {
      if (i) out << ", ";
      out << decl_text(a.params[i]);
    }
    out << ")";
    if (const auto* q = std::get_if<Query>(&a.kind)) {
      out << " : " << print_type(q->return_type) << "\n    " << print_expr(*q->body) << "\n";
    } else {
      const auto& m = std::get<Mutator>(a.kind);
      out << "\n";
      if (m.firing_cond) out << "    when " << print_expr(*m.firing_cond) << "\n";
      for (const Stmt& s : m.body) {
        out << "    ";
        for (size_t i = 0; i < s.lhs.size(); ++i) {
          if (i) out << ", ";
          for (size_t j = 0; j < s.lhs[i].path.size(); ++j) {
            if (j) out << ".";
            out << s.lhs[i].path[j];
          }
        }
        if (s.compound)
          out << " " << binop_symbol(*s.compound) << "= ";
        else
          out << " := ";
        out << print_expr(*s.rhs) << "\n";
      }
    }
  }
  out << "principle";
  for (size_t i = 0; i < c.principles.size(); ++i) {
    out << (i ? ",\n  " : "\n  ") << print_expr(*c.principles[i]);
  }
  out << "\n";
}

void print_app(std::ostringstream& out, const App& app) {
  out << "app " << app.name << "\ninclude\n";
  for (const Dependency& dep : app.deps) {
    out << "  " << dep.path;
    if (dep.brackets_present || !dep.type_args.empty()) {
      out << " [";
      for (size_t i = 0; i < dep.type_args.size(); ++i) {
        if (i) out << ", ";
        if (dep.type_args[i].ns) out << *dep.type_args[i].ns << ".";
        out << prim_word(dep.type_args[i].prim);
      }
      out << "]";
    }
    out << "\n";
  }
  auto print_sync_call = [&](const SyncCall& call) {
    out << call.concept_name << "." << call.action << "(";
    for (size_t i = 0; i < call.args.size(); ++i) {
      if (i) out << ", ";
      if (call.args[i].mult) out << mult_word(*call.args[i].mult) << " ";
      out << print_expr(*call.args[i].expr);
    }
    out << ")";
  };
  for (const Sync& sync : app.syncs) {
    out << "sync ";
    print_sync_call(sync.trigger);
    out << "\n";
    for (const SyncCall& r : sync.responses) {
      out << "  ";
      print_sync_call(r);
      out << "\n";
    }
  }
}

}  // namespace

std::string print_type(const Type& t) {
  if (const auto* s = std::get_if<ScalarType>(&t)) {
    std::string out;
    if (s->mult) out += std::string(mult_word(*s->mult)) + " ";
    return out + prim_word(s->prim);
  }
  const auto& rel = std::get<RelationType>(t);
  std::string out;
  for (size_t i = 0; i < rel.columns.size(); ++i) {
    if (i) out += " -> ";
    if (i + 1 == rel.columns.size() && rel.target_mult)
      out += std::string(mult_word(*rel.target_mult)) + " ";
    out += prim_word(rel.columns[i]);
  }
  return out;
}

std::string print_expr(const Expr& e, bool full_parens) {
  return ExprPrinter(full_parens).print(e, 0);
}

std::string print(const Model& model) {
  std::ostringstream out;
  bool first = true;
  for (const Concept& c : model.concepts) {
    if (!first) out << "\n";
    first = false;
    print_concept(out, c);
  }
  for (const App& a : model.apps) {
    if (!first) out << "\n";
    first = false;
    print_app(out, a);
  }
  return out.str();
}

}  // namespace conceptual::printer
