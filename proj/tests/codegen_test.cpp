#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "conceptual/alloy_gen.hpp"
#include "test_util.hpp"

using namespace conceptual;
using test_util::analyze_source;
using test_util::contains_normalized;

namespace {

std::string gen_concept_text(const std::string& source, size_t index = 0,
                             const std::string& file = "test.con") {
  auto r = analyze_source(source, file);
  REQUIRE(r.sink.error_count() == 0);
  REQUIRE(r.typed.concepts.size() > index);
  return alloy::serialize(alloy::gen_concept(r.typed.concepts[index]));
}

std::string gen_corpus_concept(const std::string& name) {
  return gen_concept_text(test_util::read_corpus(name), 0, name);
}

struct AppGen {
  std::string app_text;
  std::vector<std::string> concept_texts;
};

AppGen gen_app_text(const std::string& source, const std::string& file = "test.con") {
  auto r = analyze_source(source, file);
  REQUIRE(r.sink.error_count() == 0);
  REQUIRE(r.typed.apps.size() == 1);
  AppGen out;
  out.app_text = alloy::serialize(alloy::gen_app(r.typed.apps[0], r.typed));
  for (const auto& c : r.typed.concepts)
    out.concept_texts.push_back(alloy::serialize(alloy::gen_concept(c)));
  return out;
}

}  // namespace

TEST_CASE("the reservation module matches the reference translation") {
  std::string text = gen_corpus_concept("reservation.con");
  CHECK(contains_normalized(text,
                            "one sig State {\n"
                            "  var available : set Resource,\n"
                            "  var reservations : User -> set Resource\n"
                            "}"));
  CHECK(contains_normalized(text,
                            "pred provide[r : Resource] {\n"
                            "  (State.available') = (State.available) + r\n"
                            "  (State.reservations') = (State.reservations)\n"
                            "}"));
}

TEST_CASE("module headers carry generic parameters") {
  CHECK(gen_corpus_concept("reservation.con").find("module reservation[User, Resource]") !=
        std::string::npos);
  CHECK(gen_corpus_concept("label.con").find("module label[Item]") != std::string::npos);
  CHECK(gen_corpus_concept("todo.con").find("module todo\n") != std::string::npos);
}

TEST_CASE("custom types become empty top-level sigs") {
  std::string label = gen_corpus_concept("label.con");
  CHECK(label.find("sig Label {}") != std::string::npos);
  std::string email = gen_corpus_concept("email.con");
  CHECK(email.find("sig User {}") != std::string::npos);
  CHECK(email.find("sig Message {}") != std::string::npos);
  CHECK(email.find("sig Content {}") != std::string::npos);
}

TEST_CASE("the purpose is embedded as a comment") {
  std::string text = gen_corpus_concept("todo.con");
  CHECK(text.find("// keep track of tasks") == 0);
}

TEST_CASE("the init fact empties every mutable field and skips constants") {
  std::string text = gen_concept_text(
      "concept c\npurpose \"p\"\nstate\n  a : set T\n  const k : set T\nactions\n"
      "  f(x : T)\n    a += x\nprinciple\n");
  CHECK(contains_normalized(text, "fact init {\n  no (State.a)\n}"));
  CHECK(text.find("no (State.k)") == std::string::npos);
  CHECK(text.find("k : set T") != std::string::npos);
  CHECK(text.find("var k") == std::string::npos);
}

TEST_CASE("state constraints become separate facts") {
  std::string text = gen_corpus_concept("style.con");
  CHECK(contains_normalized(
      text, "fact format_init {\n  (State.format) = (State.assigned).(State.defined)\n}"));
}

TEST_CASE("accumulation folds compound assignments in source order") {
  std::string text = gen_concept_text(
      "concept c\npurpose \"p\"\nstate\n  available : set Resource\nactions\n"
      "  provide2(r1, r2 : Resource)\n    available += r1\n    available += r2\n"
      "principle\n");
  CHECK(contains_normalized(
      text, "(State.available') = (State.available) + r1 + r2"));
  // Exactly one primed occurrence of the field inside provide2.
  size_t first = text.find("(State.available')");
  REQUIRE(first != std::string::npos);
  size_t second = text.find("(State.available')", first + 1);
  // The second occurrence belongs to _stutter, not provide2.
  REQUIRE(second != std::string::npos);
  CHECK(text.find("(State.available')", second + 1) == std::string::npos);
  CHECK(text.find("''") == std::string::npos);
}

TEST_CASE("mixed-operator accumulation follows source order") {
  std::string text = gen_concept_text(
      "concept c\npurpose \"p\"\nstate\n  s : set T\nactions\n"
      "  f(a, b : T)\n    s += a\n    s -= b\nprinciple\n");
  CHECK(contains_normalized(text, "(State.s') = (State.s) + a - b"));
}

TEST_CASE("no corpus output contains a doubly-primed expression") {
  for (const std::string& name : test_util::concept_corpus()) {
    CAPTURE(name);
    CHECK(gen_corpus_concept(name).find("''") == std::string::npos);
  }
}

TEST_CASE("whole-field empty assignment serializes as none") {
  std::string trash = gen_corpus_concept("trash.con");
  CHECK(contains_normalized(trash, "(State.trashed') = none"));

  // Relations take a product of nones of matching arity.
  std::string text = gen_concept_text(
      "concept c\npurpose \"p\"\nstate\n  r : A -> B\nactions\n"
      "  wipe()\n    r := {}\nprinciple\n");
  CHECK(contains_normalized(text, "(State.r') = none -> none"));
}

TEST_CASE("dot-path compound assignments lower to row updates") {
  std::string upvote = gen_corpus_concept("upvote.con");
  CHECK(contains_normalized(upvote, "(State.upvotes') = (State.upvotes) + i -> u"));
  CHECK(contains_normalized(upvote, "(State.downvotes') = (State.downvotes) - i -> u"));
}

TEST_CASE("dot-path simple assignment overrides the row") {
  std::string email = gen_corpus_concept("email.con");
  CHECK(contains_normalized(email, "(State.content') = (State.content) ++ m -> c"));
}

TEST_CASE("dot-path assignment to empty subtracts the rows") {
  std::string label = gen_corpus_concept("label.con");
  CHECK(contains_normalized(label, "(State.labels') = (State.labels) - i -> univ"));
  CHECK(label.find("++ i -> none") == std::string::npos);
}

TEST_CASE("a condition-only action frames every field") {
  std::string text = gen_corpus_concept("reservation.con");
  CHECK(contains_normalized(text,
                            "pred use[u : User, r : Resource] {\n"
                            "  r in u.(State.reservations)\n"
                            "  (State.available') = (State.available)\n"
                            "  (State.reservations') = (State.reservations)\n"
                            "}"));
}

TEST_CASE("every mutable field is primed exactly once per mutator") {
  for (const std::string& name : test_util::concept_corpus()) {
    CAPTURE(name);
    auto r = analyze_source(test_util::read_corpus(name), name);
    REQUIRE(r.sink.error_count() == 0);
    const sem::TConcept& c = r.typed.concepts[0];
    alloy::Document doc = alloy::gen_concept(c);
    size_t mutable_fields = 0;
    for (const auto& f : c.fields)
      if (!f.is_const) ++mutable_fields;
    for (const alloy::Pred& p : doc.preds) {
      if (p.name.rfind("_can_", 0) == 0) continue;
      std::string body;
      for (const auto& line : p.body) body += alloy::print_expr(*line) + "\n";
      size_t primes = 0;
      for (size_t pos = body.find("')"); pos != std::string::npos;
           pos = body.find("')", pos + 1))
        ++primes;
      CAPTURE(p.name);
      CHECK(primes == mutable_fields);
    }
  }
}

TEST_CASE("_can_ predicates hold exactly the firing condition") {
  std::string text = gen_corpus_concept("reservation.con");
  CHECK(contains_normalized(text, "pred _can_provide[r : Resource] {}"));
  CHECK(contains_normalized(text,
                            "pred _can_reserve[u : User, r : Resource] {\n"
                            "  r in (State.available)\n"
                            "}"));
}

TEST_CASE("queries become functions with state-qualified bodies") {
  std::string label = gen_corpus_concept("label.con");
  CHECK(contains_normalized(label,
                            "fun find[l : Label] : set Item {\n  l.~(State.labels)\n}"));
  CHECK(contains_normalized(label, "pred _can_find[l : Label] {}"));

  std::string upvote = gen_corpus_concept("upvote.con");
  CHECK(contains_normalized(
      upvote,
      "fun count[i : Item] : Int {\n  minus[#i.(State.upvotes), #i.(State.downvotes)]\n}"));
  CHECK(upvote.find("open util/integer") != std::string::npos);
}

TEST_CASE("a query with an unused parameter keeps it") {
  std::string text = gen_concept_text(
      "concept c\npurpose \"p\"\nstate\n  s : set T\nactions\n"
      "  f(x : T, unused : T) : T\n    s\n  g(x : T)\n    s += x\nprinciple\n");
  CHECK(text.find("fun f[x : T, unused : T] : set T") != std::string::npos);
}

TEST_CASE("the transition fact covers every mutator under always") {
  std::string todo = gen_corpus_concept("todo.con");
  CHECK(contains_normalized(
      todo,
      "fact transitions {\n"
      "  always (_stutter or (some t : Task | add[t]) or (some t : Task | delete[t]) "
      "or (some t : Task | complete[t]))\n}"));
}

TEST_CASE("nullary actions appear bare in the transition disjunction") {
  std::string trash = gen_corpus_concept("trash.con");
  CHECK(contains_normalized(trash, "or clear)"));
  CHECK(contains_normalized(trash, "pred clear {"));
}

TEST_CASE("queries are excluded from the transition system") {
  std::string label = gen_corpus_concept("label.con");
  size_t fact_pos = label.find("fact transitions");
  size_t fact_end = label.find("}", fact_pos);
  std::string fact = label.substr(fact_pos, fact_end - fact_pos);
  CHECK(fact.find("find") == std::string::npos);
}

TEST_CASE("a concept with no mutable fields gets a vacuous stutter") {
  std::string text = gen_concept_text(
      "concept c\npurpose \"p\"\nstate\n  const k : set T\nactions\n"
      "  look(x : T) : T\n    k\nprinciple\n");
  CHECK(contains_normalized(text, "pred _stutter {}"));
  CHECK(text.find("fact init") == std::string::npos);
}

TEST_CASE("principles lower to assertions with checks") {
  std::string text = gen_corpus_concept("reservation.con");
  CHECK(contains_normalized(
      text,
      "assert principle1 {\n"
      "  always (all u : User, r : Resource | reserve[u, r] implies after "
      "(_can_use[u, r] until cancel[u, r]))\n}"));
  CHECK(text.find("check principle1 for 4 but 20 steps") != std::string::npos);
}

TEST_CASE("the scope text is configurable") {
  auto r = analyze_source(test_util::read_corpus("todo.con"), "todo.con");
  alloy::Options opts;
  opts.check_scope = "for 6 but 30 steps";
  std::string text = alloy::serialize(alloy::gen_concept(r.typed.concepts[0], opts));
  CHECK(text.find("check principle1 for 6 but 30 steps") != std::string::npos);
  CHECK(text.find("for 4 but") == std::string::npos);
}

TEST_CASE("no is history, can is the companion predicate") {
  std::string label = gen_corpus_concept("label.con");
  CHECK(contains_normalized(
      label, "historically not (affix[i, l] or detach[i, l]) implies after i not in find[l]"));
  std::string upvote = gen_corpus_concept("upvote.con");
  CHECK(contains_normalized(upvote, "not _can_upvote[i, u] until (unvote[i, u] or downvote[i, u])"));
}

TEST_CASE("a trivial principle needs no quantifier") {
  std::string text = gen_concept_text(
      "concept c\npurpose \"p\"\nstate\n  s : set T\nactions\n  f(x : T)\n    s += x\n"
      "principle 1 = 1\n");
  CHECK(contains_normalized(text, "assert principle1 {\n  always (1 = 1)\n}"));
}

TEST_CASE("relation membership lowers through univ joins") {
  std::string text = gen_corpus_concept("reservation.con");
  CHECK(contains_normalized(text, "r not in univ.(State.reservations)"));
}

TEST_CASE("name mangling shields Alloy keywords") {
  CHECK(alloy::mangle("check") == "_check");
  CHECK(alloy::mangle("fun") == "_fun");
  CHECK(alloy::mangle("task") == "task");
  CHECK(alloy::mangle("State") == "_State");
  CHECK(alloy::mangle("for") == "_for");

  std::string email = gen_corpus_concept("email.con");
  CHECK(email.find("_for : User") != std::string::npos);
  CHECK(email.find("[by : User, _for : User, m : Message, c : Content]") !=
        std::string::npos);

  std::string text = gen_concept_text(
      "concept c\npurpose \"p\"\nstate\n  s : set T\nactions\n"
      "  check(x : T)\n    s += x\nprinciple\n");
  CHECK(text.find("pred _check[x : T]") != std::string::npos);
  CHECK(text.find("pred _can_check[x : T]") != std::string::npos);
}

TEST_CASE("no emitted identifier is an Alloy reserved word") {
  for (const std::string& name : test_util::concept_corpus()) {
    auto r = analyze_source(test_util::read_corpus(name), name);
    alloy::Document doc = alloy::gen_concept(r.typed.concepts[0]);
    auto check_name = [&](const std::string& id) {
      CAPTURE(id);
      CHECK(alloy::mangle(id) == id);  // already safe
    };
    for (const auto& s : doc.sigs) check_name(s.name);
    for (const auto& p : doc.preds) check_name(p.name);
    for (const auto& f : doc.funs) check_name(f.name);
  }
}

TEST_CASE("generation is deterministic") {
  for (const std::string& name : {"upvote.con", "email.con"}) {
    std::string a = gen_corpus_concept(name);
    std::string b = gen_corpus_concept(name);
    CHECK(a == b);
  }
}

// --- apps -------------------------------------------------------------------

TEST_CASE("the todo_label app opens its deps and instantiates label") {
  AppGen gen = gen_app_text(test_util::read_corpus("todo_label.con"), "todo_label.con");
  CHECK(gen.app_text.find("module todo_label") != std::string::npos);
  CHECK(gen.app_text.find("open todo as todo") != std::string::npos);
  CHECK(gen.app_text.find("open label[todo/Task] as label") != std::string::npos);
}

TEST_CASE("string instantiation produces atoms under the concept's sig") {
  AppGen gen = gen_app_text(test_util::read_corpus("todo_label.con"), "todo_label.con");
  CHECK(gen.app_text.find("one sig _str_pending extends label/Label {}") !=
        std::string::npos);
  // One atom, reused across all four syncs.
  size_t count = 0;
  for (size_t pos = gen.app_text.find("one sig _str_pending"); pos != std::string::npos;
       pos = gen.app_text.find("one sig _str_pending", pos + 1))
    ++count;
  CHECK(count == 1);
}

TEST_CASE("syncs become always-implications inside one fact") {
  AppGen gen = gen_app_text(test_util::read_corpus("todo_label.con"), "todo_label.con");
  CHECK(contains_normalized(
      gen.app_text,
      "fact synchronizations {\n"
      "  always (all t : todo/Task | todo/delete[t] implies label/clear[t])\n"
      "  always (all t : todo/Task | todo/add[t] implies label/affix[t, _str_pending])\n"
      "  always (all t : todo/Task | todo/complete[t] implies label/detach[t, _str_pending])\n"
      "  always (all t : todo/Task | label/detach[t, _str_pending] implies todo/complete[t])\n"
      "}"));
}

TEST_CASE("multiple responses conjoin in the consequent") {
  std::string source =
      "app a\ninclude\n  todo\n  label [todo.Task, string]\n"
      "sync todo.delete(t)\n  label.clear(t)\n  label.detach(t, \"pending\")\n";
  AppGen gen = gen_app_text(source);
  CHECK(contains_normalized(
      gen.app_text,
      "always (all t : todo/Task | todo/delete[t] implies "
      "(label/clear[t] and label/detach[t, _str_pending]))"));
}

TEST_CASE("singleton trigger arguments quantify nothing and become one-sigs") {
  AppGen gen = gen_app_text(test_util::read_corpus("todo_label_mail.con"),
                            "todo_label_mail.con");
  CHECK(gen.app_text.find("one sig todo_user extends email/User {}") != std::string::npos);
  CHECK(contains_normalized(
      gen.app_text,
      "always (all m : email/Message | email/receive[todo_user, m] implies "
      "todo/add[m.(email/State.content)])"));
}

TEST_CASE("an app with no syncs has no synchronization fact") {
  AppGen gen = gen_app_text("app a\ninclude\n  todo\n");
  CHECK(gen.app_text.find("fact") == std::string::npos);
  CHECK(gen.app_text.find("open todo as todo") != std::string::npos);
}

TEST_CASE("app generation is deterministic") {
  std::string a =
      gen_app_text(test_util::read_corpus("todo_label.con"), "todo_label.con").app_text;
  std::string b =
      gen_app_text(test_util::read_corpus("todo_label.con"), "todo_label.con").app_text;
  CHECK(a == b);
}
