#include "conceptual/ast_dump.hpp"

#include <sstream>

#include "conceptual/pretty_print.hpp"

namespace conceptual::dump {

using namespace ast;

namespace {

class Dumper {
 public:
  std::string take() { return out_.str(); }

  void line(const std::string& kind, const SourceLocation& loc, const std::string& extra = "") {
    out_ << std::string(indent_ * 2, ' ') << kind << "@" << loc.start_line << ":"
         << loc.start_col;
    if (!extra.empty()) out_ << " " << extra;
    out_ << "\n";
  }

  void expr(const Expr& e) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, EmptySetExpr>) {
            line("Empty", e.loc);
          } else if constexpr (std::is_same_v<T, IntLitExpr>) {
            line("Int", e.loc, std::to_string(n.value));
          } else if constexpr (std::is_same_v<T, StrLitExpr>) {
            line("Str", e.loc, "\"" + n.value + "\"");
          } else if constexpr (std::is_same_v<T, NameExpr>) {
            line("Name", e.loc, n.name);
          } else if constexpr (std::is_same_v<T, UnopExpr>) {
            line("Unop", e.loc, unop_symbol(n.op));
            Nest in(*this);
            expr(*n.operand);
          } else if constexpr (std::is_same_v<T, BinopExpr>) {
            line("Binop", e.loc, binop_symbol(n.op));
            Nest in(*this);
            expr(*n.lhs);
            expr(*n.rhs);
          } else if constexpr (std::is_same_v<T, CompareExpr>) {
            line("Compare", e.loc,
                 std::string(n.negated ? "not " : "") + cmpop_symbol(n.op));
            Nest in(*this);
            expr(*n.lhs);
            expr(*n.rhs);
          } else if constexpr (std::is_same_v<T, BoxJoinExpr>) {
            line("BoxJoin", e.loc);
            Nest in(*this);
            expr(*n.target);
            for (const auto& a : n.args) expr(*a);
          } else if constexpr (std::is_same_v<T, ComprehensionExpr>) {
            line("Comprehension", e.loc);
            Nest in(*this);
            for (const Decl& d : n.decls) decl(d);
            expr(*n.body);
          } else {
            static_assert(std::is_same_v<T, CallExpr>);
            std::string head = n.action;
            if (n.can == CanMod::Can) head = "can " + head;
            if (n.can == CanMod::CanNot) head = "can not " + head;
            line("Call", e.loc, head);
            Nest in(*this);
            for (const auto& a : n.args) expr(*a);
          }
        },
        e.node);
  }

  void decl(const Decl& d) {
    std::string names;
    for (size_t i = 0; i < d.names.size(); ++i) {
      if (i) names += ", ";
      names += d.names[i];
    }
    line("Decl", d.loc, names + " : " + printer::print_type(d.type));
  }

  void model(const Model& m) {
    SourceLocation root;
    if (!m.concepts.empty())
      root = m.concepts.front().loc;
    else if (!m.apps.empty())
      root = m.apps.front().loc;
    line("Model", root);
    Nest in(*this);
    for (const Concept& c : m.concepts) concept_node(c);
    for (const App& a : m.apps) app_node(a);
  }

  void concept_node(const Concept& c) {
    std::string head = c.name;
    if (!c.type_params.empty()) {
      head += " [";
      for (size_t i = 0; i < c.type_params.size(); ++i) {
        if (i) head += ", ";
        head += c.type_params[i];
      }
      head += "]";
    }
    line("Concept", c.loc, head);
    Nest in(*this);
    line("Purpose", c.loc, "\"" + c.purpose + "\"");
    for (const StateDecl& s : c.states) {
      line("State", s.loc, s.is_const ? "const" : "");
      Nest in2(*this);
      decl(s.decl);
      if (s.init) expr(*s.init);
    }
    for (const Action& a : c.actions) {
      line(std::holds_alternative<Query>(a.kind) ? "Query" : "Mutator", a.loc, a.name);
      Nest in2(*this);
      for (const Decl& p : a.params) decl(p);
      if (const auto* q = std::get_if<Query>(&a.kind)) {
        line("Returns", a.loc, printer::print_type(q->return_type));
        expr(*q->body);
      } else {
        const auto& mu = std::get<Mutator>(a.kind);
        if (mu.firing_cond) {
          line("When", mu.firing_cond->loc);
          Nest in3(*this);
          expr(*mu.firing_cond);
        }
        for (const Stmt& s : mu.body) stmt(s);
      }
    }
    for (const auto& p : c.principles) {
      line("Principle", p->loc);
      Nest in2(*this);
      expr(*p);
    }
  }

  void stmt(const Stmt& s) {
    std::string lhs;
    for (size_t i = 0; i < s.lhs.size(); ++i) {
      if (i) lhs += ", ";
      for (size_t j = 0; j < s.lhs[i].path.size(); ++j) {
        if (j) lhs += ".";
        lhs += s.lhs[i].path[j];
      }
    }
    std::string op = s.compound ? std::string(binop_symbol(*s.compound)) + "=" : ":=";
    line("Stmt", s.loc, lhs + " " + op);
    Nest in(*this);
    expr(*s.rhs);
  }

  void app_node(const App& a) {
    line("App", a.loc, a.name);
    Nest in(*this);
    for (const Dependency& d : a.deps) {
      std::string extra = d.path;
      if (d.brackets_present || !d.type_args.empty()) {
        extra += " [";
        for (size_t i = 0; i < d.type_args.size(); ++i) {
          if (i) extra += ", ";
          if (d.type_args[i].ns) extra += *d.type_args[i].ns + ".";
          extra += printer::print_type(ScalarType{std::nullopt, d.type_args[i].prim});
        }
        extra += "]";
      }
      line("Include", d.loc, extra);
    }
    for (const Sync& s : a.syncs) {
      line("Sync", s.loc);
      Nest in2(*this);
      sync_call("Trigger", s.trigger);
      for (const SyncCall& r : s.responses) sync_call("Response", r);
    }
  }

  void sync_call(const char* kind, const SyncCall& call) {
    line(kind, call.loc, call.concept_name + "." + call.action);
    Nest in(*this);
    for (const SyncArg& arg : call.args) {
      if (arg.mult) {
        const char* m = *arg.mult == Mult::Set ? "set"
                        : *arg.mult == Mult::One ? "one" : "lone";
        line("MultArg", arg.expr->loc, m);
        Nest in2(*this);
        expr(*arg.expr);
      } else {
        expr(*arg.expr);
      }
    }
  }

 private:
  struct Nest {
    explicit Nest(Dumper& d) : dumper(d) { ++dumper.indent_; }
    ~Nest() { --dumper.indent_; }
    Dumper& dumper;
  };

  std::ostringstream out_;
  int indent_ = 0;
};

}  // namespace

std::string dump_model(const Model& model) {
  Dumper d;
  d.model(model);
  return d.take();
}

std::string dump_tokens(const std::vector<lex::Token>& tokens) {
  std::ostringstream out;
  for (const lex::Token& t : tokens) {
    out << t.describe() << " @ " << t.loc.start_line << ":" << t.loc.start_col
        << "-" << t.loc.end_line << ":" << t.loc.end_col << "\n";
  }
  return out.str();
}

}  // namespace conceptual::dump
