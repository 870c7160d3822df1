// Tests for the reference evaluator and the exhaustive small-instance search:
// relational operator semantics against hand-computed tables, closure against
// an independent reachability oracle, counterexample validation, and
// multiplicity-consistent enumeration.

#include "doctest.h"
#include "relcheck/eval.hpp"
#include "testutil.hpp"

#include <random>

using namespace relcheck;
using namespace testutil;

namespace {

// Typecheck `prefix` plus a scratch assertion `expr = expr` and return the
// model together with the lowered left-hand side. Lets tests evaluate an
// arbitrary closed relational or integer expression.
struct Extracted {
  Model model;
  CoreExprPtr expr;
};

Extracted extract(const std::string& prefix, const std::string& expr) {
  std::string src = prefix + "\nassert ScratchE { " + expr + " = " + expr + " }\ncheck ScratchE";
  Extracted out{typecheck(ast::parse(src)), nullptr};
  const NamedFormula* a = out.model.assert_by_name("ScratchE");
  REQUIRE(a != nullptr);
  REQUIRE(a->body->kids.size() == 2);
  out.expr = a->body->kids[0];
  return out;
}

TupleSet rel_value(const Extracted& ex, const Instance& inst) {
  EvalEnv env;
  return eval_rel(ex.model, inst, *ex.expr, env);
}

// Independent reachability oracle: Warshall's algorithm over a boolean
// matrix, nothing shared with the evaluator's fixpoint join.
TupleSet warshall(const TupleSet& edges, int n) {
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (const Tuple& t : edges) adj[static_cast<size_t>(t[0])][static_cast<size_t>(t[1])] = true;
  for (int k = 0; k < n; k++)
    for (int i = 0; i < n; i++)
      for (int j = 0; j < n; j++)
        if (adj[i][k] && adj[k][j]) adj[i][j] = true;
  TupleSet out;
  for (int i = 0; i < n; i++)
    for (int j = 0; j < n; j++)
      if (adj[i][j]) out.insert({i, j});
  return out;
}

}  // namespace

TEST_CASE("relational operators match hand-computed tables") {
  const std::string prefix = "sig A { f: set A, g: set A }";
  Extracted probe = extract(prefix, "f");
  SigId a = *probe.model.sig_by_name("A");
  FieldId ff = *probe.model.field_by_name("f");
  FieldId fg = *probe.model.field_by_name("g");

  Instance inst;
  inst.atom_names = {"A0", "A1", "A2"};
  inst.atom_sig = {a, a, a};
  inst.rel_extent[ff] = {{0, 1}, {1, 2}};
  inst.rel_extent[fg] = {{1, 2}, {0, 2}};

  auto val = [&](const std::string& e) { return rel_value(extract(prefix, e), inst); };

  CHECK(val("f + g") == TupleSet{{0, 1}, {0, 2}, {1, 2}});
  CHECK(val("f - g") == TupleSet{{0, 1}});
  CHECK(val("f & g") == TupleSet{{1, 2}});
  CHECK(val("f.g") == TupleSet{{0, 2}});
  CHECK(val("A.f") == TupleSet{{1}, {2}});
  CHECK(val("f.A") == TupleSet{{0}, {1}});
  CHECK(val("A -> A").size() == 9);
  CHECK(val("(A.f) -> (f.A)") == TupleSet{{1, 0}, {1, 1}, {2, 0}, {2, 1}});
  CHECK(val("f.g.g") == TupleSet{});
  CHECK(val("A - A") == TupleSet{});
  {
    CoreExpr none_set;
    none_set.kind = CoreKind::NoneSet;
    none_set.sort = ExprSort::Rel;
    EvalEnv env;
    CHECK(eval_rel(probe.model, inst, none_set, env) == TupleSet{});
  }
  CHECK(val("^f") == TupleSet{{0, 1}, {0, 2}, {1, 2}});
  CHECK(val("*f") == TupleSet{{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}});

  SUBCASE("formulas over the same tables") {
    auto holds = [&](const std::string& e) {
      Extracted ex = extract(prefix + "\npred scratchP { " + e + " }", "A");
      const Template* t = nullptr;
      for (const auto& tp : ex.model.templates)
        if (tp.name == "scratchP") t = &tp;
      REQUIRE(t != nullptr);
      EvalEnv env;
      return eval_formula(ex.model, inst, *t->body, env);
    };
    CHECK(holds("f.g in f + g"));
    CHECK(!holds("f + g in f.g"));
    CHECK(holds("some f & g"));
    CHECK(holds("no g & (f - g)"));
    CHECK(holds("lone f.g"));
    CHECK(!holds("one f"));
    CHECK(holds("all x: A | x in A"));
    CHECK(holds("some x: A | x.g = A.f - x.f"));
    CHECK(holds("f != g"));
  }
}

TEST_CASE("closure agrees with an independent reachability oracle") {
  const std::string prefix = "sig Node { e: set Node }";
  Extracted tc = extract(prefix, "^e");
  Extracted rc = extract(prefix, "*e");
  SigId node = *tc.model.sig_by_name("Node");
  FieldId fe = *tc.model.field_by_name("e");

  std::mt19937 rng(20240817);
  for (int iter = 0; iter < 200; iter++) {
    int n = 1 + static_cast<int>(rng() % 5);
    Instance inst;
    for (int i = 0; i < n; i++) {
      inst.atom_names.push_back("N" + std::to_string(i));
      inst.atom_sig.push_back(node);
    }
    TupleSet edges;
    for (int i = 0; i < n; i++)
      for (int j = 0; j < n; j++)
        if (rng() % 3 == 0) edges.insert({i, j});
    inst.rel_extent[fe] = edges;

    TupleSet expect = warshall(edges, n);
    CHECK(rel_value(tc, inst) == expect);

    TupleSet expect_refl = expect;
    for (int i = 0; i < n; i++) expect_refl.insert({i, i});
    CHECK(rel_value(rc, inst) == expect_refl);
  }

  SUBCASE("closure is idempotent") {
    Extracted idem = extract(prefix, "^^e");
    std::mt19937 rng2(7);
    for (int iter = 0; iter < 50; iter++) {
      Instance inst;
      int n = 1 + static_cast<int>(rng2() % 4);
      for (int i = 0; i < n; i++) {
        inst.atom_names.push_back("N" + std::to_string(i));
        inst.atom_sig.push_back(node);
      }
      TupleSet edges;
      for (int i = 0; i < n; i++)
        for (int j = 0; j < n; j++)
          if (rng2() % 2 == 0) edges.insert({i, j});
      inst.rel_extent[fe] = edges;
      CHECK(rel_value(idem, inst) == rel_value(tc, inst));
    }
  }

  SUBCASE("reflexive closure closes over the whole extends-tree") {
    // `holds` relates Box to Mid; *(...) on a square Mid-tree relation must
    // add (x, x) for every Top atom, not just for atoms under Mid.
    Extracted ex = extract(fixture_text("micro_tree.als"), "*(Box.holds -> Box.holds)");
    SigId leaf1 = *ex.model.sig_by_name("Leaf1");
    SigId other = *ex.model.sig_by_name("Other");
    SigId box = *ex.model.sig_by_name("Box");
    Instance inst;
    inst.atom_names = {"L", "O", "B"};
    inst.atom_sig = {leaf1, other, box};
    inst.rel_extent[*ex.model.field_by_name("holds")] = {};
    CHECK(rel_value(ex, inst) == TupleSet{{0, 0}, {1, 1}});
  }
}

TEST_CASE("lookup resolves chains through names to addresses") {
  Model m = model_fixture("addressbook.als");
  SigId book = *m.sig_by_name("Book"), name = *m.sig_by_name("Name");
  SigId addr_sig = *m.sig_by_name("Addr");
  FieldId fnames = *m.field_by_name("names"), faddr = *m.field_by_name("addr");

  Instance inst;
  inst.atom_names = {"B", "N0", "N1", "A0"};
  inst.atom_sig = {book, name, name, addr_sig};
  inst.rel_extent[fnames] = {{0, 1}, {0, 2}};
  inst.rel_extent[faddr] = {{0, 1, 2}, {0, 2, 3}};
  REQUIRE(!ill_formed_reason(m, inst).has_value());

  const Template* lookup = nullptr;
  for (const auto& t : m.templates)
    if (t.name == "lookup") lookup = &t;
  REQUIRE(lookup != nullptr);

  EvalEnv env;
  env[lookup->params[0].id] = EvalBinding{false, 0, 0};
  env[lookup->params[1].id] = EvalBinding{false, 1, 0};  // N0: resolves via N1
  CHECK(eval_rel(m, inst, *lookup->body, env) == TupleSet{{3}});

  env[lookup->params[1].id] = EvalBinding{false, 2, 0};  // N1: direct
  CHECK(eval_rel(m, inst, *lookup->body, env) == TupleSet{{3}});

  EvalEnv fact_env;
  CHECK(eval_formula(m, inst, *m.facts[0].body, fact_env));

  SUBCASE("a cyclic chain violates the well-formedness fact") {
    inst.rel_extent[faddr] = {{0, 1, 1}};
    inst.rel_extent[fnames] = {{0, 1}};
    EvalEnv env2;
    CHECK(!eval_formula(m, inst, *m.facts[0].body, env2));
  }
}

TEST_CASE("counterexample validation checks structure, facts, fields, assertion") {
  Model m = model_fixture("addressbook.als");
  SigId book = *m.sig_by_name("Book"), name = *m.sig_by_name("Name");
  SigId addr_sig = *m.sig_by_name("Addr");
  FieldId fnames = *m.field_by_name("names"), faddr = *m.field_by_name("addr");
  const CoreExpr& buggy = *m.assert_by_name("delUndoesAddBuggy")->body;

  // The shape a failing add/del round trip takes: book 0 already maps the
  // name, book 1 is the result of deleting that entry.
  Instance inst;
  inst.atom_names = {"Book0", "Book1", "Name0", "Addr0"};
  inst.atom_sig = {book, book, name, addr_sig};
  inst.rel_extent[fnames] = {{0, 2}};
  inst.rel_extent[faddr] = {{0, 2, 3}};

  std::string why;
  CHECK(validate_counterexample(m, inst, buggy, &why));
  CHECK(why.empty());

  SUBCASE("an instance satisfying the assertion is rejected") {
    const CoreExpr& fixed = *m.assert_by_name("delUndoesAdd")->body;
    CHECK(!validate_counterexample(m, inst, fixed, &why));
    CHECK(why.find("assertion holds") != std::string::npos);
  }
  SUBCASE("a fact violation is reported by name") {
    Instance bad = inst;
    bad.rel_extent[faddr] = {{0, 2, 2}};  // name resolves through itself
    CHECK(!validate_counterexample(m, bad, buggy, &why));
    CHECK(why.find("wellFormedChains") != std::string::npos);
  }
  SUBCASE("a field violation is reported by field name") {
    Instance bad = inst;
    bad.rel_extent[faddr] = {{1, 2, 3}};  // (Book1, Name0) not in names
    CHECK(!validate_counterexample(m, bad, buggy, &why));
    CHECK(why.find("addr") != std::string::npos);
  }
  SUBCASE("structural problems are caught before evaluation") {
    Instance bad = inst;
    bad.atom_sig[2] = *m.sig_by_name("Target");  // abstract placement
    CHECK(!validate_counterexample(m, bad, buggy, &why));
    CHECK(!why.empty());

    Instance bad2 = inst;
    bad2.rel_extent[faddr] = {{0, 2}};  // arity mismatch
    CHECK(ill_formed_reason(m, bad2).has_value());

    Instance bad3 = inst;
    bad3.rel_extent[fnames] = {{0, 9}};  // atom out of range
    CHECK(ill_formed_reason(m, bad3).has_value());
  }
}

TEST_CASE("integer evaluation: exact window vs signed wraparound") {
  Extracted sum = extract("sig Unit {}", "3 + 1");
  Instance inst;
  inst.atom_names = {"U"};
  inst.atom_sig = {0};

  EvalEnv env;
  inst.int_width = 0;
  CHECK(eval_int(sum.model, inst, *sum.expr, env) == 4);
  CHECK(int_window(inst) == std::pair<long long, long long>{-4, 4});
  inst.int_width = 3;
  CHECK(eval_int(sum.model, inst, *sum.expr, env) == -4);
  CHECK(int_window(inst) == std::pair<long long, long long>{-4, 3});
  inst.int_width = 2;
  CHECK(int_window(inst) == std::pair<long long, long long>{-2, 1});

  Model mi = model_fixture("micro_int.als");
  const CoreExpr& wrap = *mi.assert_by_name("intWrap")->body;
  const CoreExpr& zero = *mi.assert_by_name("zeroOnly")->body;
  for (int w : {0, 2, 3, 4}) {
    Instance ii;
    ii.atom_names = {"U"};
    ii.atom_sig = {*mi.sig_by_name("Unit")};
    ii.int_width = w;
    EvalEnv e;
    // Successor is monotone only in the exact window; every finite width has
    // a wrap point. Zero is the unique idempotent sum everywhere.
    CHECK(eval_formula(mi, ii, wrap, e) == (w == 0));
    CHECK(eval_formula(mi, ii, zero, e));
  }
}

TEST_CASE("ordering primitives evaluate over ascending atom ids") {
  const std::string prefix = "open util/ordering[S] as ord\nsig S {}";
  Extracted first = extract(prefix, "ord/first");
  Extracted last = extract(prefix, "ord/last");
  Extracted next = extract(prefix, "ord/next");
  Extracted prev = extract(prefix, "ord/prev");
  SigId s = *first.model.sig_by_name("S");

  Instance inst;
  for (int i = 0; i < 3; i++) {
    inst.atom_names.push_back("S" + std::to_string(i));
    inst.atom_sig.push_back(s);
  }
  CHECK(rel_value(first, inst) == TupleSet{{0}});
  CHECK(rel_value(last, inst) == TupleSet{{2}});
  CHECK(rel_value(next, inst) == TupleSet{{0, 1}, {1, 2}});
  CHECK(rel_value(prev, inst) == TupleSet{{1, 0}, {2, 1}});

  Instance empty;
  CHECK(rel_value(first, empty) == TupleSet{});
  CHECK(rel_value(last, empty) == TupleSet{});

  Model mo = model_fixture("micro_order.als");
  const CoreExpr& no_pred = *mo.assert_by_name("noPredOfFirst")->body;
  const CoreExpr& meet = *mo.assert_by_name("endpointsMeet")->body;
  for (int k = 0; k <= 3; k++) {
    Instance oi;
    for (int i = 0; i < k; i++) {
      oi.atom_names.push_back("S" + std::to_string(i));
      oi.atom_sig.push_back(*mo.sig_by_name("S"));
    }
    EvalEnv e;
    CHECK(eval_formula(mo, oi, no_pred, e));
    CHECK(eval_formula(mo, oi, meet, e) == (k <= 1));
  }
}

TEST_CASE("instance enumeration is multiplicity-consistent and complete") {
  auto count = [](const std::string& src, std::vector<int> sizes) {
    Model m = typecheck(ast::parse(src));
    long long c = 0;
    bool finished = for_each_instance(m, sizes, [&](const Instance& inst) {
      REQUIRE(!ill_formed_reason(m, inst).has_value());
      for (FieldId f = 0; f < static_cast<FieldId>(m.fields.size()); f++) {
        EvalEnv env;
        REQUIRE(eval_formula(m, inst, *field_constraint(m, f), env));
      }
      c++;
      return true;
    });
    REQUIRE(finished);
    return c;
  };

  CHECK(count("sig A {}", {2}) == 1);
  CHECK(count("sig A { f: lone A }", {2}) == 9);          // 3 choices per atom
  CHECK(count("sig A { f: one A }", {2}) == 4);           // 2 choices per atom
  CHECK(count("sig A { f: some A }", {1}) == 1);          // only {(0,0)}
  CHECK(count("sig A { f: some A }", {2}) == 9);          // (2^2-1)^2
  CHECK(count("sig A { f: set A }", {2}) == 16);          // 2^4 tables
  CHECK(count("abstract sig T {}\nsig B extends T {}\nsig C extends T {}", {2}) == 4);
  CHECK(count("sig N {}\nsig T {}\nsig B { ns: set N, ad: ns -> some T }", {1, 1, 1}) == 2);
  CHECK(count("sig A {}", {0}) == 1);  // the empty instance

  // An abstract top with no concrete child admits no non-empty placement.
  CHECK(count("abstract sig T {}", {1}) == 0);
  CHECK(count("abstract sig T {}", {0}) == 1);
}

TEST_CASE("exhaustive search finds minimal counterexamples and respects budgets") {
  Model ml = model_fixture("micro_link.als");
  auto ce = enumerate_check(ml, *ml.assert_by_name("linkAcyclic")->body, {3, 1000000});
  REQUIRE(ce.has_value());
  CHECK(ce->atom_count() == 1);
  CHECK(ce->rel_extent.at(*ml.field_by_name("link")) == TupleSet{{0, 0}});
  std::string why;
  CHECK(validate_counterexample(ml, *ce, *ml.assert_by_name("linkAcyclic")->body, &why));

  Model m = model_fixture("addressbook.als");
  SUBCASE("the buggy round-trip assertion has a four-atom counterexample") {
    auto found = enumerate_check(m, *m.assert_by_name("delUndoesAddBuggy")->body,
                                 {2, 2000000});
    REQUIRE(found.has_value());
    CHECK(found->atom_count() == 4);
    CHECK(validate_counterexample(m, *found, *m.assert_by_name("delUndoesAddBuggy")->body,
                                  &why));
  }
  SUBCASE("the corrected assertion has no small counterexample") {
    CHECK(!enumerate_check(m, *m.assert_by_name("delUndoesAdd")->body, {2, 2000000})
               .has_value());
    CHECK(!enumerate_check(m, *m.assert_by_name("lookupYields")->body, {2, 2000000})
               .has_value());
  }
  SUBCASE("tautologies produce no counterexample") {
    Model mt = typecheck(ast::parse("sig A {}\nassert T { all a: A | a in A }\ncheck T"));
    CHECK(!enumerate_check(mt, *mt.assert_by_name("T")->body, {3, 1000000}).has_value());
  }
  SUBCASE("blowing the instance budget raises a budget error") {
    bool threw = false;
    try {
      enumerate_check(m, *m.assert_by_name("delUndoesAdd")->body, {3, 20000});
    } catch (const Error& e) {
      threw = true;
      CHECK(e.kind() == ErrorKind::Budget);
    }
    CHECK(threw);
  }
}

TEST_CASE("instances round-trip through JSON") {
  Model m = model_fixture("addressbook.als");
  Instance inst;
  inst.atom_names = {"Book0", "Book1", "Name0", "Addr0"};
  inst.atom_sig = {*m.sig_by_name("Book"), *m.sig_by_name("Book"), *m.sig_by_name("Name"),
                   *m.sig_by_name("Addr")};
  inst.rel_extent[*m.field_by_name("names")] = {{0, 2}};
  inst.rel_extent[*m.field_by_name("addr")] = {{0, 2, 3}};
  inst.int_width = 5;

  std::string js = instance_to_json(m, inst);
  Instance back = instance_from_json(m, js);
  CHECK(back.atom_names == inst.atom_names);
  CHECK(back.atom_sig == inst.atom_sig);
  CHECK(back.rel_extent == inst.rel_extent);
  CHECK(back.int_width == inst.int_width);

  auto decode_fails = [&](const std::string& text) {
    try {
      instance_from_json(m, text);
    } catch (const Error& e) {
      return e.kind() == ErrorKind::Decode;
    }
    return false;
  };
  CHECK(decode_fails("not json at all"));
  CHECK(decode_fails("{}"));
  CHECK(decode_fails(R"({"atoms": [{"name": "x", "sig": "NoSuchSig"}],)"
                     R"( "relations": {}, "int_width": 0})"));
  CHECK(decode_fails(R"({"atoms": [{"name": "x", "sig": "Target"}],)"
                     R"( "relations": {}, "int_width": 0})"));  // abstract
  CHECK(decode_fails(R"({"atoms": [{"name": "x", "sig": "Book"}],)"
                     R"( "relations": {"addr": [[0, 0]]}, "int_width": 0})"));  // arity
  CHECK(decode_fails(R"({"atoms": [{"name": "x", "sig": "Book"}],)"
                     R"( "relations": {"nosuch": []}, "int_width": 0})"));
}
