#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "conceptual/ast_dump.hpp"
#include "conceptual/parser.hpp"
#include "conceptual/pretty_print.hpp"
#include "test_util.hpp"

using namespace conceptual;
using namespace conceptual::ast;

namespace {

Model parse_str(const std::string& source) {
  return parser::parse_source(source, "test.con");
}

ExprPtr expr_of(const std::string& source) {
  return parser::parse_expr_source(source);
}

bool expr_equal(const std::string& a, const std::string& b) {
  return equal(*expr_of(a), *expr_of(b));
}

}  // namespace

TEST_CASE("the todo listing parses into the expected shape") {
  Model m = parse_str(test_util::read_corpus("todo.con"));
  REQUIRE(m.concepts.size() == 1);
  REQUIRE(m.apps.empty());
  const Concept& c = m.concepts[0];
  CHECK(c.name == "todo");
  CHECK(c.type_params.empty());
  CHECK(c.purpose == "keep track of tasks");
  REQUIRE(c.states.size() == 1);
  CHECK(c.states[0].decl.names == std::vector<std::string>{"done", "pending"});
  REQUIRE(c.actions.size() == 3);
  CHECK(c.actions[0].name == "add");
  CHECK(c.actions[1].name == "delete");
  CHECK(c.actions[2].name == "complete");
  CHECK(c.principles.size() == 2);
}

TEST_CASE("empty input is a model with empty lists") {
  Model m = parse_str("");
  CHECK(m.concepts.empty());
  CHECK(m.apps.empty());
}

TEST_CASE("the todo_label app parses with two deps and four syncs") {
  Model m = parse_str(test_util::read_corpus("todo_label.con"));
  REQUIRE(m.apps.size() == 1);
  const App& app = m.apps[0];
  CHECK(app.name == "todo_label");
  REQUIRE(app.deps.size() == 2);
  CHECK(app.deps[0].path == "todo");
  CHECK(app.deps[0].type_args.empty());
  CHECK(app.deps[1].path == "label");
  REQUIRE(app.deps[1].type_args.size() == 2);
  CHECK(app.deps[1].type_args[0].ns == "todo");
  CHECK(app.deps[1].type_args[0].prim == PrimType::named("Task"));
  CHECK(app.deps[1].type_args[1].prim == PrimType::str());
  REQUIRE(app.syncs.size() == 4);
  CHECK(app.syncs[0].trigger.concept_name == "todo");
  CHECK(app.syncs[0].trigger.action == "delete");
  REQUIRE(app.syncs[0].responses.size() == 1);
  CHECK(app.syncs[0].responses[0].concept_name == "label");
  CHECK(app.syncs[0].responses[0].action == "clear");
}

TEST_CASE("the mult-prefixed trigger argument of the mail app parses") {
  Model m = parse_str(test_util::read_corpus("todo_label_mail.con"));
  REQUIRE(m.apps.size() == 1);
  const Sync& sync = m.apps[0].syncs[1];
  REQUIRE(sync.trigger.args.size() == 2);
  CHECK(sync.trigger.args[0].mult == Mult::One);
  CHECK(!sync.trigger.args[1].mult.has_value());
}

TEST_CASE("concept sections are fixed in order") {
  // actions before state
  CHECK_THROWS_AS(parse_str("concept c\n"
                            "purpose \"p\"\n"
                            "actions\n  a(x : T)\nstate\nprinciple"),
                  parser::SyntaxError);
  // purpose after state
  CHECK_THROWS_AS(parse_str("concept c\nstate\npurpose \"p\"\nactions\n  a()\nprinciple"),
                  parser::SyntaxError);
  // missing principle keyword entirely
  CHECK_THROWS_AS(parse_str("concept c\npurpose \"p\"\nstate\nactions\n  a()"),
                  parser::SyntaxError);
}

TEST_CASE("a concept requires at least one action") {
  CHECK_THROWS_AS(parse_str("concept c\npurpose \"p\"\nstate\nactions\nprinciple"),
                  parser::SyntaxError);
}

TEST_CASE("empty signature brackets are meaningless") {
  Model a = parse_str("concept c []\npurpose \"p\"\nstate\nactions\n  f()\nprinciple");
  Model b = parse_str("concept c\npurpose \"p\"\nstate\nactions\n  f()\nprinciple");
  CHECK(a.concepts[0].type_params.empty());
  CHECK(equal(a, b));
}

TEST_CASE("precedence: & binds tighter than +") {
  CHECK(expr_equal("a + b & c", "a + (b & c)"));
  CHECK_FALSE(expr_equal("a + b & c", "(a + b) & c"));
}

TEST_CASE("precedence: dot tighter than card tighter than minus") {
  CHECK(expr_equal("#i.upvotes - #i.downvotes", "(#(i.upvotes)) - (#(i.downvotes))"));
}

TEST_CASE("precedence: the todo firing condition") {
  ExprPtr e = expr_of("t not in done+pending");
  const auto* cmp = std::get_if<CompareExpr>(&e->node);
  REQUIRE(cmp);
  CHECK(cmp->op == CmpOp::In);
  CHECK(cmp->negated);
  CHECK(std::holds_alternative<BinopExpr>(cmp->rhs->node));
}

TEST_CASE("then is right-associative and ; is its synonym") {
  ExprPtr e = expr_of("a;b;c");
  const auto* top = std::get_if<BinopExpr>(&e->node);
  REQUIRE(top);
  CHECK(top->op == BinOp::Then);
  CHECK(std::holds_alternative<NameExpr>(top->lhs->node));
  const auto* rhs = std::get_if<BinopExpr>(&top->rhs->node);
  REQUIRE(rhs);
  CHECK(rhs->op == BinOp::Then);
  CHECK(expr_equal("a;b;c", "a then (b then c)"));
}

TEST_CASE("until binds tighter than then, or tighter than until") {
  CHECK(expr_equal("add(t) then t in pending until delete(t) or complete(t)",
                   "add(t) then (t in pending until (delete(t) or complete(t)))"));
}

TEST_CASE("no binds looser than or") {
  CHECK(expr_equal("no affix(i,l) or detach(i,l)", "no (affix(i,l) or detach(i,l))"));
}

TEST_CASE("comparisons are non-associative") {
  CHECK_THROWS_AS((void)expr_of("a < b < c"), parser::SyntaxError);
  CHECK_THROWS_AS((void)expr_of("a = b = c"), parser::SyntaxError);
  CHECK_THROWS_AS((void)expr_of("a in b in c"), parser::SyntaxError);
  // Parenthesized chains are fine.
  CHECK_NOTHROW((void)expr_of("(a < b) = c"));
}

TEST_CASE("dual spellings parse to identical trees") {
  CHECK(expr_equal("a is b", "a = b"));
  CHECK(expr_equal("a and b", "a && b"));
  CHECK(expr_equal("a or b", "a || b"));
  CHECK(expr_equal("a then b", "a;b"));
  CHECK(expr_equal("none", "{}"));
  CHECK(expr_equal("empty", "{}"));
  CHECK(expr_equal("a ! = b", "a != b"));
}

TEST_CASE("unary relational operators bind tightest") {
  CHECK(expr_equal("l.~labels", "l.(~labels)"));
  CHECK(expr_equal("~a.b", "(~a).b"));
  CHECK(expr_equal("*^r", "*^ r"));
}

TEST_CASE("box join and comprehension parse") {
  ExprPtr box = expr_of("r[x, y]");
  CHECK(std::holds_alternative<BoxJoinExpr>(box->node));
  CHECK(expr_equal("a.b[c]", "(a.b)[c]"));

  ExprPtr comp = expr_of("{t : Task | t in done}");
  const auto* c = std::get_if<ComprehensionExpr>(&comp->node);
  REQUIRE(c);
  CHECK(c->decls.size() == 1);
}

TEST_CASE("can and can not prefix calls") {
  ExprPtr e = expr_of("can use(u,r)");
  const auto* call = std::get_if<CallExpr>(&e->node);
  REQUIRE(call);
  CHECK(call->can == CanMod::Can);
  ExprPtr e2 = expr_of("can not upvote(i,u)");
  CHECK(std::get_if<CallExpr>(&e2->node)->can == CanMod::CanNot);
}

TEST_CASE("negative integer literals are grammatical") {
  ExprPtr e = expr_of("-5");
  const auto* lit = std::get_if<IntLitExpr>(&e->node);
  REQUIRE(lit);
  CHECK(lit->value == -5);
  CHECK(expr_equal("a - -5", "a - (-5)"));
}

TEST_CASE("types parse with multiplicities in the right places") {
  Type t1 = parser::parse_type_source("set Task");
  const auto* s1 = std::get_if<ScalarType>(&t1);
  REQUIRE(s1);
  CHECK(s1->mult == Mult::Set);
  CHECK(s1->prim == PrimType::named("Task"));

  Type t2 = parser::parse_type_source("User -> set Resource");
  const auto* r2 = std::get_if<RelationType>(&t2);
  REQUIRE(r2);
  REQUIRE(r2->columns.size() == 2);
  CHECK(r2->columns[0] == PrimType::named("User"));
  CHECK(r2->columns[1] == PrimType::named("Resource"));
  CHECK(r2->target_mult == Mult::Set);

  Type t3 = parser::parse_type_source("Item -> one Style");
  CHECK(std::get<RelationType>(t3).target_mult == Mult::One);

  Type t4 = parser::parse_type_source("A -> B -> C");
  CHECK(std::get<RelationType>(t4).columns.size() == 3);
}

TEST_CASE("multiplicities on non-final relation columns are rejected") {
  CHECK_THROWS_AS((void)parser::parse_type_source("set A -> B"), parser::SyntaxError);
  CHECK_THROWS_AS((void)parser::parse_type_source("A -> set B -> C"),
                  parser::SyntaxError);
}

TEST_CASE("some is lexed but rejected as a multiplicity") {
  CHECK_THROWS_AS((void)parser::parse_type_source("some Task"), parser::SyntaxError);
}

TEST_CASE("dependency paths parse verbatim") {
  Model m = parse_str("app a\ninclude\n  ../lib/label [string]\n  dir/todo.con");
  REQUIRE(m.apps.size() == 1);
  CHECK(m.apps[0].deps[0].path == "../lib/label");
  CHECK(m.apps[0].deps[1].path == "dir/todo.con");
  CHECK(dep_basename("../lib/label") == "label");
  CHECK(dep_basename("dir/todo.con") == "todo");
}

TEST_CASE("error locations never precede the true error") {
  std::string source = test_util::read_corpus("todo.con");
  // Removing the principle keyword makes the scenarios unparsable; the
  // reported location must lie at or after the last action line.
  size_t pos = source.find("principle");
  REQUIRE(pos != std::string::npos);
  std::string broken = source.substr(0, pos) + source.substr(pos + 10);
  try {
    parse_str(broken);
    FAIL("expected a syntax error");
  } catch (const parser::SyntaxError& e) {
    // The last action ends on line 15 of the listing.
    CHECK(e.loc.start_line >= 15);
  }
}

TEST_CASE("an error at the first token reports the file start") {
  try {
    parse_str("+");
    FAIL("expected a syntax error");
  } catch (const parser::SyntaxError& e) {
    CHECK(e.loc.start_line == 1);
    CHECK(e.loc.start_col == 1);
  }
}

TEST_CASE("every corpus file round-trips through the pretty printer") {
  std::vector<std::string> files = test_util::concept_corpus();
  files.push_back("todo_label.con");
  files.push_back("todo_label_mail.con");
  for (const std::string& name : files) {
    CAPTURE(name);
    Model first = parse_str(test_util::read_corpus(name));
    std::string printed = printer::print(first);
    CAPTURE(printed);
    Model second = parse_str(printed);
    CHECK(equal(first, second));
    // And printing is a fixed point from the second parse on.
    CHECK(printer::print(second) == printed);
  }
}

TEST_CASE("then chains print without redundant parens") {
  ExprPtr e = expr_of("a then b then c");
  CHECK(printer::print_expr(*e) == "a then b then c");
}

TEST_CASE("every parsed location lies within the file bounds") {
  std::string source = test_util::read_corpus("email.con");
  Model m = parse_str(source);
  uint32_t max_line = 1;
  for (char c : source)
    if (c == '\n') ++max_line;
  const Concept& c = m.concepts[0];
  CHECK(c.loc.start_line >= 1);
  CHECK(c.loc.end_line <= max_line + 1);
  for (const Action& a : c.actions) {
    CHECK(a.loc.start_line >= 1);
    CHECK(a.loc.end_line <= max_line + 1);
  }
}

// ---------------------------------------------------------------------------
// Random expression round-trips. The generator derives expressions from the
// grammar level by level, so every generated tree is parseable; minimal and
// fully parenthesized printings must both reparse to the same tree.
// ---------------------------------------------------------------------------

namespace {

class ExprGen {
 public:
  explicit ExprGen(uint32_t seed) : rng_(seed) {}

  ExprPtr gen(int depth) { return gen_then(depth); }

 private:
  SourceLocation loc_;

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  bool chance(int percent) { return pick(100) < percent; }

  std::string name() {
    static const char* names[] = {"a", "b", "c", "d", "e"};
    return names[pick(5)];
  }

  ExprPtr gen_then(int d) {
    if (d > 0 && chance(30))
      return make_expr(loc_, BinopExpr{BinOp::Then, gen_until(d - 1), gen_then(d - 1)});
    return gen_until(d);
  }

  ExprPtr gen_until(int d) {
    if (d > 0 && chance(25))
      return make_expr(loc_, BinopExpr{BinOp::Until, gen_until(d - 1), gen_no(d - 1)});
    return gen_no(d);
  }

  ExprPtr gen_no(int d) {
    if (d > 0 && chance(20)) return make_expr(loc_, UnopExpr{UnOp::No, gen_no(d - 1)});
    return gen_lor(d);
  }

  ExprPtr gen_lor(int d) {
    if (d > 0 && chance(25))
      return make_expr(loc_, BinopExpr{BinOp::Lor, gen_lor(d - 1), gen_land(d - 1)});
    return gen_land(d);
  }

  ExprPtr gen_land(int d) {
    if (d > 0 && chance(25))
      return make_expr(loc_, BinopExpr{BinOp::Land, gen_land(d - 1), gen_not(d - 1)});
    return gen_not(d);
  }

  ExprPtr gen_not(int d) {
    if (d > 0 && chance(20)) return make_expr(loc_, UnopExpr{UnOp::Not, gen_not(d - 1)});
    return gen_compare(d);
  }

  ExprPtr gen_compare(int d) {
    if (d > 0 && chance(40)) {
      CmpOp ops[] = {CmpOp::Eq, CmpOp::In, CmpOp::Lt, CmpOp::Gt, CmpOp::Lte, CmpOp::Gte};
      return make_expr(loc_, CompareExpr{ops[pick(6)], chance(30), gen_add(d - 1),
                                         gen_add(d - 1)});
    }
    return gen_add(d);
  }

  ExprPtr gen_add(int d) {
    if (d > 0 && chance(35)) {
      BinOp op = chance(50) ? BinOp::Plus : BinOp::Minus;
      return make_expr(loc_, BinopExpr{op, gen_add(d - 1), gen_card(d - 1)});
    }
    return gen_card(d);
  }

  ExprPtr gen_card(int d) {
    if (d > 0 && chance(15)) return make_expr(loc_, UnopExpr{UnOp::Card, gen_card(d - 1)});
    return gen_mul(d);
  }

  ExprPtr gen_mul(int d) {
    if (d > 0 && chance(25)) {
      BinOp ops[] = {BinOp::Amp, BinOp::Star, BinOp::Slash, BinOp::Percent};
      return make_expr(loc_, BinopExpr{ops[pick(4)], gen_mul(d - 1), gen_arrow(d - 1)});
    }
    return gen_arrow(d);
  }

  ExprPtr gen_arrow(int d) {
    if (d > 0 && chance(25))
      return make_expr(loc_, BinopExpr{BinOp::Arrow, gen_arrow(d - 1), gen_box(d - 1)});
    return gen_box(d);
  }

  ExprPtr gen_box(int d) {
    ExprPtr target = gen_dot(d);
    if (d > 0 && chance(15)) {
      BoxJoinExpr box{std::move(target), {}};
      int n = 1 + pick(2);
      for (int i = 0; i < n; ++i) box.args.push_back(gen(d - 1));
      return make_expr(loc_, std::move(box));
    }
    return target;
  }

  ExprPtr gen_dot(int d) {
    if (d > 0 && chance(30))
      return make_expr(loc_, BinopExpr{BinOp::Dot, gen_dot(d - 1), gen_unary(d - 1)});
    return gen_unary(d);
  }

  ExprPtr gen_unary(int d) {
    if (d > 0 && chance(25)) {
      UnOp ops[] = {UnOp::Transpose, UnOp::Closure, UnOp::ReflClosure};
      return make_expr(loc_, UnopExpr{ops[pick(3)], gen_unary(d - 1)});
    }
    return gen_primary(d);
  }

  ExprPtr gen_primary(int d) {
    switch (pick(d > 0 ? 6 : 3)) {
      case 0: return make_expr(loc_, NameExpr{name()});
      case 1: return make_expr(loc_, IntLitExpr{pick(200) - 100});
      case 2: return make_expr(loc_, EmptySetExpr{});
      case 3: {
        CallExpr call{name(), {}, CanMod::None};
        if (chance(40)) call.can = chance(50) ? CanMod::Can : CanMod::CanNot;
        int n = pick(3);
        for (int i = 0; i < n; ++i) call.args.push_back(gen(d - 1));
        return make_expr(loc_, std::move(call));
      }
      case 4: {
        ComprehensionExpr comp;
        comp.decls.push_back(
            Decl{{name()}, ScalarType{std::nullopt, PrimType::named("T")}, loc_});
        comp.body = gen(d - 1);
        return make_expr(loc_, std::move(comp));
      }
      default:
        return make_expr(loc_, StrLitExpr{"s" + std::to_string(pick(3))});
    }
  }

  std::mt19937 rng_;
};

}  // namespace

TEST_CASE("1000 random expressions survive the precedence round-trip") {
  ExprGen gen(20240817);
  for (int i = 0; i < 1000; ++i) {
    CAPTURE(i);
    ExprPtr e = gen.gen(4);
    std::string minimal = printer::print_expr(*e);
    CAPTURE(minimal);
    ExprPtr reparsed = parser::parse_expr_source(minimal);
    CHECK(equal(*e, *reparsed));

    std::string full = printer::print_expr(*e, /*full_parens=*/true);
    CAPTURE(full);
    ExprPtr reparsed_full = parser::parse_expr_source(full);
    CHECK(equal(*e, *reparsed_full));
  }
}

TEST_CASE("the AST dump is deterministic and location-annotated") {
  Model m = parse_str(test_util::read_corpus("trash.con"));
  std::string d1 = dump::dump_model(m);
  std::string d2 = dump::dump_model(m);
  CHECK(d1 == d2);
  CHECK(d1.find("Concept@1:1 trash") != std::string::npos);
  CHECK(d1.find("Mutator@") != std::string::npos);
  CHECK(d1.find("Principle@") != std::string::npos);
}
