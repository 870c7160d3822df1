// Tests for the relational first-order theory: generated declarations and
// axioms, the finite-interpretation evaluator, the shipped simplification
// rules and the rewriter built on them, the closure induction schema, and
// proof-obligation export.

#include "doctest.h"
#include "relcheck/fol.hpp"
#include "testutil.hpp"

#include <functional>
#include <random>
#include <set>

using namespace relcheck;
using namespace relcheck::fol;
using namespace testutil;

namespace {

Model model_of(const std::string& src) { return typecheck(ast::parse(src)); }

long long ipow(long long n, int k) {
  long long p = 1;
  for (int i = 0; i < k; i++) p *= n;
  return p;
}

// Largest atom count (at most `want`) on which every relation-sorted
// quantifier in the formula stays within the evaluator's table limit.
int checkable_atoms(const FormulaPtr& f, int want) {
  int widest = 0;
  std::function<void(const FormulaPtr&)> walk = [&](const FormulaPtr& g) {
    if (g->binder && g->binder->sort.kind == Sort::Rel)
      widest = std::max(widest, g->binder->sort.arity);
    for (const FormulaPtr& k : g->kids) walk(k);
  };
  walk(f);
  int n = want;
  while (n > 1 && ipow(n, widest) > 16) n--;
  return n;
}

const LemmaRule& rule_named(const std::string& name) {
  for (const LemmaRule& r : shipped_lemmas())
    if (r.name == name) return r;
  FAIL("no shipped rule named ", name);
  throw std::logic_error("unreachable");
}

std::vector<std::string> decl_names(const std::vector<TheoryDecl>& ds) {
  std::vector<std::string> out;
  for (const TheoryDecl& d : ds) out.push_back(d.name);
  return out;
}

// Free variables and undeclared relation constants of a formula.
void scan_closed(const FormulaPtr& f, std::set<int>& bound, std::set<int>& free,
                 std::set<std::string>& consts) {
  std::function<void(const TermPtr&)> term = [&](const TermPtr& t) {
    if (!t) return;
    if (t->kind == TermKind::Var && !bound.count(t->var_id)) free.insert(t->var_id);
    if (t->kind == TermKind::RelConst) consts.insert(t->name);
    for (const TermPtr& k : t->kids) term(k);
  };
  for (const TermPtr& t : f->terms) term(t);
  if (f->binder) {
    bound.insert(f->binder->var_id);
    for (const FormulaPtr& k : f->kids) scan_closed(k, bound, free, consts);
    bound.erase(f->binder->var_id);
  } else {
    for (const FormulaPtr& k : f->kids) scan_closed(k, bound, free, consts);
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Theory generation.
// ---------------------------------------------------------------------------

TEST_CASE("theory declarations are generated tier by tier") {
  Theory th = build_theory(3);
  CHECK(th.max_arity == 3);
  CHECK(th.sort_lines == std::vector<std::string>{
                             "Atom <: Tuple", "Tuple2 <: Tuple", "Tuple3 <: Tuple",
                             "Rel1 <: Relation", "Rel2 <: Relation", "Rel3 <: Relation"});
  CHECK(decl_names(th.constructors) == std::vector<std::string>{"binary", "ternary"});
  CHECK(decl_names(th.operators) ==
        std::vector<std::string>{
            "none1", "sing", "union1", "diff1", "inter1", "subset1",
            "none2", "union2", "diff2", "inter2", "subset2", "prod1x1",
            "join1x2", "join2x1", "join2x2", "transClos", "reflClos",
            "none3", "union3", "diff3", "inter3", "subset3", "prod1x2",
            "prod2x1", "join1x3", "join2x3", "join3x1", "join3x2"});
}

TEST_CASE("operator signatures carry the right sorts") {
  Theory th = build_theory(3);
  std::map<std::string, std::string> sig;
  for (const TheoryDecl& d : th.operators) sig[d.name] = d.signature;
  CHECK(sig["sing"] == "Atom -> Rel1");
  CHECK(sig["union2"] == "Rel2 x Rel2 -> Rel2");
  CHECK(sig["prod1x2"] == "Rel1 x Rel2 -> Rel3");
  CHECK(sig["join2x2"] == "Rel2 x Rel2 -> Rel2");
  CHECK(sig["join3x2"] == "Rel3 x Rel2 -> Rel3");
  CHECK(sig["subset3"] == "Rel3 x Rel3 -> Bool");
  CHECK(sig["transClos"] == "Rel2 -> Rel2");
  CHECK(sig["reflClos"] == "Rel2 x Rel1 -> Rel2");
  for (const TheoryDecl& d : th.constructors) {
    CHECK(d.signature.find("Atom x Atom") == 0);
    CHECK(d.signature.find("-> Tuple") != std::string::npos);
  }
}

TEST_CASE("every generated axiom holds on all small interpretations") {
  Theory th = build_theory(3);
  REQUIRE(!th.axioms.empty());
  for (const Axiom& a : th.axioms) {
    int cap = checkable_atoms(a.formula, 3);
    CAPTURE(a.name);
    CHECK(cap >= 2);
    std::string why;
    CHECK_MESSAGE(holds_in_all_sizes(a.formula, cap, &why), a.name, ": ", why);
  }
}

TEST_CASE("product operator matches the explicit Cartesian product") {
  TermPtr r = mk_rel_const("r", 1);
  TermPtr s = mk_rel_const("s", 1);
  const int n = 2;
  for (uint64_t rb = 0; rb < 4; rb++)
    for (uint64_t sb = 0; sb < 4; sb++) {
      FiniteInterp interp{n, {{"r", {1, rb}}, {"s", {1, sb}}}};
      FiniteEval ev(interp);
      uint64_t expected = 0;
      for (int i = 0; i < n; i++)
        for (int j = 0; j < n; j++)
          if ((rb >> i & 1) && (sb >> j & 1)) expected |= uint64_t{1} << (i * n + j);
      FiniteRel got = ev.rel(mk_prod(r, s));
      CHECK(got.arity == 2);
      CHECK(got.bits == expected);
    }
}

TEST_CASE("finite evaluation of closure and membership") {
  // r = {(0,1), (1,2)} over 3 atoms: closure adds (0,2).
  FiniteInterp interp{3, {{"r", {2, (uint64_t{1} << 1) | (uint64_t{1} << 5)}}}};
  FiniteEval ev(interp);
  TermPtr r = mk_rel_const("r", 2);
  FiniteRel tc = ev.rel(mk_trans_clos(r));
  CHECK(tc.bits == ((uint64_t{1} << 1) | (uint64_t{1} << 5) | (uint64_t{1} << 2)));
  TermPtr a = mk_var(1, "a", tuple_sort(1));
  TermPtr b = mk_var(2, "b", tuple_sort(1));
  ev.push_binding(1, {false, 0, {}});
  ev.push_binding(2, {false, 2, {}});
  CHECK(ev.formula(mk_in(mk_tuple({a, b}), mk_trans_clos(r))));
  CHECK(!ev.formula(mk_in(mk_tuple({b, a}), mk_trans_clos(r))));
  ev.pop_binding();
  ev.pop_binding();
}

// ---------------------------------------------------------------------------
// Shipped rules.
// ---------------------------------------------------------------------------

TEST_CASE("every shipped rule holds on all interpretations with three atoms") {
  REQUIRE(shipped_lemmas().size() == 18);
  for (const LemmaRule& rule : shipped_lemmas()) {
    CAPTURE(rule.name);
    std::string why;
    CHECK_MESSAGE(lemma_holds_finitely(rule, 3, &why), why);
  }
}

TEST_CASE("the finite check rejects an unsound rule") {
  TermPtr r = mk_var(-1, "r", rel_sort(1));
  TermPtr s = mk_var(-2, "s", rel_sort(1));
  LemmaRule bogus{"subsetFlip", {mk_subset(r, s)}, nullptr, nullptr, mk_subset(s, r)};
  std::string why;
  CHECK(!lemma_holds_finitely(bogus, 3, &why));
  CHECK(why.find("subsetFlip") != std::string::npos);
  CHECK(why.find("atoms") != std::string::npos);
}

TEST_CASE("rule statements close over their pattern variables") {
  CHECK(to_text(lemma_statement(rule_named("unionSubset1"))) ==
        "forall r : Rel1 . forall s : Rel1 . (subset1(r, s) => (union1(r, s) = s))");
  CHECK(to_text(lemma_statement(rule_named("useSubset2"))) ==
        "forall t : Tuple2 . forall r : Rel2 . forall s : Rel2 . "
        "((in(t, r) & subset2(r, s)) => in(t, s))");
  CHECK(to_text(lemma_statement(rule_named("joinMonotoneLeft2x2"))) ==
        "forall r : Rel2 . forall s : Rel2 . forall t : Rel2 . "
        "(subset2(r, s) => subset2(join2x2(r, t), join2x2(s, t)))");
  CHECK(to_text(lemma_statement(rule_named("subsetRefl1"))) ==
        "forall r : Rel1 . subset1(r, r)");
}

// ---------------------------------------------------------------------------
// Rewriting.
// ---------------------------------------------------------------------------

TEST_CASE("a union collapses to its superset under a containment hypothesis") {
  TermPtr r = mk_rel_const("r", 1);
  TermPtr s = mk_rel_const("s", 1);
  std::vector<FormulaPtr> hyps = {mk_subset(r, s)};
  TermRewriteResult out = rewrite_with_lemmas(mk_union(r, s), hyps, 8);
  CHECK(equal(out.term, s));
  CHECK(out.steps == 1);
  CHECK(!out.budget_exhausted);
}

TEST_CASE("reflexive redexes simplify without hypotheses") {
  TermPtr r = mk_rel_const("r", 1);
  CHECK(equal(rewrite_with_lemmas(mk_union(r, r), {}, 8).term, r));
  CHECK(equal(rewrite_with_lemmas(mk_inter(r, r), {}, 8).term, r));
  CHECK(equal(rewrite_with_lemmas(mk_diff(r, r), {}, 8).term, mk_none(1)));
}

TEST_CASE("membership follows from a hypothesis through a containment chain") {
  TermPtr r = mk_rel_const("r", 1);
  TermPtr s = mk_rel_const("s", 1);
  TermPtr t = mk_rel_const("t", 1);
  TermPtr x = mk_var(7, "x", tuple_sort(1));
  std::vector<FormulaPtr> hyps = {mk_in(x, r), mk_subset(r, s), mk_subset(s, t)};
  RewriteResult out = rewrite_with_lemmas(mk_in(x, t), hyps, 8);
  REQUIRE(out.formula->kind == FormulaKind::Truth);
  CHECK(out.formula->bval);
  CHECK(out.steps == 1);
}

TEST_CASE("containments compose through transitivity and join monotonicity") {
  TermPtr r = mk_rel_const("r", 2);
  TermPtr s = mk_rel_const("s", 2);
  TermPtr t = mk_rel_const("t", 2);
  TermPtr u = mk_rel_const("u", 2);
  std::vector<FormulaPtr> hyps = {mk_subset(r, s), mk_subset(s, t)};
  RewriteResult chain = rewrite_with_lemmas(mk_subset(r, t), hyps, 8);
  REQUIRE(chain.formula->kind == FormulaKind::Truth);
  CHECK(chain.formula->bval);
  RewriteResult mono =
      rewrite_with_lemmas(mk_subset(mk_join(r, u), mk_join(t, u)), hyps, 8);
  REQUIRE(mono.formula->kind == FormulaKind::Truth);
  CHECK(mono.formula->bval);
}

TEST_CASE("a zero budget returns the input unchanged with the flag set") {
  TermPtr r = mk_rel_const("r", 1);
  TermPtr s = mk_rel_const("s", 1);
  std::vector<FormulaPtr> hyps = {mk_subset(r, s)};
  FormulaPtr f = mk_subset(r, s);
  RewriteResult out = rewrite_with_lemmas(f, hyps, 0);
  CHECK(out.budget_exhausted);
  CHECK(out.steps == 0);
  CHECK(equal(out.formula, f));
}

TEST_CASE("a partial budget simplifies as far as it can and reports exhaustion") {
  TermPtr r = mk_rel_const("r", 1);
  TermPtr s = mk_rel_const("s", 1);
  std::vector<FormulaPtr> hyps = {mk_subset(r, s)};
  FormulaPtr f = mk_and(mk_subset(r, s), mk_subset(r, s));
  RewriteResult out = rewrite_with_lemmas(f, hyps, 1);
  CHECK(out.budget_exhausted);
  CHECK(out.steps == 1);
  // The first conjunct became true and folded away; the second is untouched.
  CHECK(equal(out.formula, mk_subset(r, s)));
}

TEST_CASE("quantifiers only fold when the fold is domain-independent") {
  TermPtr x = mk_var(3, "x", tuple_sort(1));
  FormulaPtr all_true = mk_forall(x, mk_truth(true));
  FormulaPtr some_true = mk_exists(x, mk_truth(true));
  FormulaPtr some_false = mk_exists(x, mk_truth(false));
  RewriteResult a = rewrite_with_lemmas(all_true, {}, 8);
  REQUIRE(a.formula->kind == FormulaKind::Truth);
  CHECK(a.formula->bval);
  // An atom domain may be empty, so an existential over `true` must survive.
  CHECK(equal(rewrite_with_lemmas(some_true, {}, 8).formula, some_true));
  RewriteResult sf = rewrite_with_lemmas(some_false, {}, 8);
  REQUIRE(sf.formula->kind == FormulaKind::Truth);
  CHECK(!sf.formula->bval);
}

TEST_CASE("rewriting preserves truth on every interpretation satisfying the"
          " hypotheses") {
  TermPtr p = mk_rel_const("p", 1);
  TermPtr q = mk_rel_const("q", 1);
  std::mt19937 rng(481207u);
  auto pick = [&](int n) { return static_cast<int>(rng() % n); };

  std::function<TermPtr(int)> rand_term = [&](int depth) -> TermPtr {
    if (depth == 0) {
      switch (pick(3)) {
        case 0: return p;
        case 1: return q;
        default: return mk_none(1);
      }
    }
    TermPtr a = rand_term(depth - 1), b = rand_term(depth - 1);
    switch (pick(3)) {
      case 0: return mk_union(a, b);
      case 1: return mk_inter(a, b);
      default: return mk_diff(a, b);
    }
  };
  std::function<FormulaPtr(int)> rand_form = [&](int depth) -> FormulaPtr {
    if (depth == 0) {
      TermPtr a = rand_term(pick(3)), b = rand_term(pick(3));
      return pick(2) ? mk_subset(a, b) : mk_eq(a, b);
    }
    FormulaPtr a = rand_form(depth - 1), b = rand_form(depth - 1);
    switch (pick(4)) {
      case 0: return mk_not(a);
      case 1: return mk_and(a, b);
      case 2: return mk_or(a, b);
      default: return mk_implies(a, b);
    }
  };

  for (int trial = 0; trial < 60; trial++) {
    FormulaPtr f = rand_form(2);
    std::vector<FormulaPtr> hyps;
    if (pick(2)) hyps.push_back(mk_subset(p, q));
    if (pick(4) == 0) hyps.push_back(mk_subset(q, p));
    RewriteResult out = rewrite_with_lemmas(f, hyps, 64);
    CHECK(!out.budget_exhausted);
    for (int n = 0; n <= 3; n++)
      for (uint64_t pb = 0; pb < (uint64_t{1} << n); pb++)
        for (uint64_t qb = 0; qb < (uint64_t{1} << n); qb++) {
          FiniteInterp interp{n, {{"p", {1, pb}}, {"q", {1, qb}}}};
          FiniteEval ev(interp);
          bool applicable = true;
          for (const FormulaPtr& h : hyps)
            if (!ev.formula(h)) {
              applicable = false;
              break;
            }
          if (!applicable) continue;
          CAPTURE(trial);
          CAPTURE(n);
          CHECK(ev.formula(f) == ev.formula(out.formula));
        }
  }
}

// ---------------------------------------------------------------------------
// Closure induction.
// ---------------------------------------------------------------------------

TEST_CASE("the closure induction schema instantiates per the rule") {
  TermPtr a = mk_var(-1, "a", tuple_sort(1));
  TermPtr b = mk_var(-2, "b", tuple_sort(1));
  TermPtr r = mk_rel_const("r", 2);
  ClosureInduction ci = closure_induction(mk_not(mk_eq(a, b)), {a, b}, r);
  CHECK(to_text(ci.base) ==
        "forall a_ : Atom . forall b_ : Atom . (in(binary(a_, b_), r) => !(a_ = b_))");
  CHECK(to_text(ci.step) ==
        "forall a_ : Atom . forall b_ : Atom . forall c : Atom . "
        "(((in(binary(a_, b_), r) & in(binary(b_, c), transClos(r))) & !(b_ = c)) "
        "=> !(a_ = c))");
  CHECK(to_text(ci.conclusion) ==
        "forall a_ : Atom . forall b_ : Atom . "
        "(in(binary(a_, b_), transClos(r)) => !(a_ = b_))");
}

TEST_CASE("closure induction validates its inputs") {
  TermPtr a = mk_var(-1, "a", tuple_sort(1));
  TermPtr b = mk_var(-2, "b", tuple_sort(1));
  TermPtr r = mk_rel_const("r", 2);
  FormulaPtr phi = mk_not(mk_eq(a, b));
  CHECK_THROWS_WITH_AS(closure_induction(phi, {a}, r),
                       doctest::Contains("exactly two"), Error);
  CHECK_THROWS_WITH_AS(closure_induction(phi, {a, a}, r),
                       doctest::Contains("distinct"), Error);
  CHECK_THROWS_WITH_AS(closure_induction(phi, {a, mk_rel_const("s", 1)}, r),
                       doctest::Contains("atom variables"), Error);
  CHECK_THROWS_WITH_AS(closure_induction(phi, {a, b}, mk_rel_const("s", 1)),
                       doctest::Contains("binary relation"), Error);
  try {
    closure_induction(phi, {a}, r);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Arity);
  }
}

TEST_CASE("distinct properties give distinct schema instances") {
  TermPtr a = mk_var(-1, "a", tuple_sort(1));
  TermPtr b = mk_var(-2, "b", tuple_sort(1));
  TermPtr r = mk_rel_const("r", 2);
  ClosureInduction one = closure_induction(mk_not(mk_eq(a, b)), {a, b}, r);
  ClosureInduction two =
      closure_induction(mk_in(mk_tuple({b, a}), r), {a, b}, r);
  CHECK(!equal(one.conclusion, two.conclusion));
  CHECK(!equal(one.step, two.step));
}

TEST_CASE("on an acyclic relation the instantiated premises and conclusion hold") {
  TermPtr a = mk_var(-1, "a", tuple_sort(1));
  TermPtr b = mk_var(-2, "b", tuple_sort(1));
  TermPtr r = mk_rel_const("r", 2);
  ClosureInduction ci = closure_induction(mk_not(mk_eq(a, b)), {a, b}, r);
  // r = {(0,1), (1,2)} over 3 atoms is acyclic, so distinctness is inductive.
  FiniteInterp interp{3, {{"r", {2, (uint64_t{1} << 1) | (uint64_t{1} << 5)}}}};
  FiniteEval ev(interp);
  CHECK(ev.formula(ci.base));
  CHECK(ev.formula(ci.step));
  CHECK(ev.formula(ci.conclusion));
  // On a cycle the premises fail rather than the schema deriving a falsehood.
  FiniteInterp cyc{2, {{"r", {2, (uint64_t{1} << 1) | (uint64_t{1} << 2)}}}};
  FiniteEval ev2(cyc);
  bool sound = !ev2.formula(ci.base) || !ev2.formula(ci.step) || ev2.formula(ci.conclusion);
  CHECK(sound);
  CHECK(!ev2.formula(ci.conclusion));
}

TEST_CASE("induction instances are sound on every relation with up to three"
          " atoms") {
  TermPtr a = mk_var(-1, "a", tuple_sort(1));
  TermPtr b = mk_var(-2, "b", tuple_sort(1));
  TermPtr r = mk_rel_const("r", 2);
  std::vector<FormulaPtr> phis = {
      mk_truth(true),
      mk_eq(a, b),
      mk_not(mk_eq(a, b)),
      mk_in(mk_tuple({a, b}), r),
      mk_in(mk_tuple({b, a}), r),
      mk_or(mk_in(mk_tuple({a, b}), r), mk_eq(a, b)),
      mk_implies(mk_in(mk_tuple({b, a}), r), mk_eq(a, b)),
  };
  for (size_t pi = 0; pi < phis.size(); pi++) {
    ClosureInduction ci = closure_induction(phis[pi], {a, b}, r);
    for (int n = 0; n <= 3; n++) {
      uint64_t cells = uint64_t{1} << (n * n);
      for (uint64_t bits = 0; bits < cells; bits++) {
        FiniteInterp interp{n, {{"r", {2, bits}}}};
        FiniteEval ev(interp);
        if (ev.formula(ci.base) && ev.formula(ci.step)) {
          CAPTURE(pi);
          CAPTURE(n);
          CAPTURE(bits);
          CHECK(ev.formula(ci.conclusion));
        }
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Obligation export.
// ---------------------------------------------------------------------------

TEST_CASE("the address-book obligation matches its golden rendering") {
  Model m = model_fixture("addressbook.als");
  Obligation ob = export_obligation(m, "lookupYields");
  CHECK(obligation_to_text(ob) == read_file(golden_path("addressbook_lookupYields.fol.txt")));
  // Export is deterministic.
  CHECK(obligation_to_text(export_obligation(m, "lookupYields")) ==
        obligation_to_text(ob));
}

TEST_CASE("the address-book obligation declares one constant per signature and"
          " field") {
  Model m = model_fixture("addressbook.als");
  Obligation ob = export_obligation(m, "lookupYields");
  std::map<std::string, std::string> decls;
  for (const TheoryDecl& d : ob.constants) decls[d.name] = d.signature;
  for (const char* sig : {"Target", "Addr", "Name", "Book"}) {
    REQUIRE(decls.count(sig));
    CHECK(decls[sig] == "Rel1");
  }
  CHECK(decls["names"] == "Rel2");
  CHECK(decls["addr"] == "Rel3");
  CHECK(decls["ordAt"] == "Int -> Atom");
  CHECK(ob.theory.max_arity == 3);
  REQUIRE(ob.hypotheses.size() == 1);
  CHECK(ob.hypotheses[0].name == "wellFormedChains");
}

TEST_CASE("the ordering bijection comes with its four defining pieces") {
  Model m = model_fixture("addressbook.als");
  Obligation ob = export_obligation(m, "lookupYields");
  std::vector<std::string> names;
  for (const Axiom& a : ob.ordering_axioms) names.push_back(a.name);
  CHECK(names == std::vector<std::string>{"ordering-onto", "ordering-into",
                                          "ordering-injective", "ordFirst-def",
                                          "ordNext-def", "ordPrev-def", "ordLast-def"});
  CHECK(to_text(ob.ordering_axioms[1].formula) ==
        "forall i : Int . ((i >= 0) => in(ordAt(i), Book))");
}

TEST_CASE("the goal is closed and mentions only declared constants") {
  Model m = model_fixture("addressbook.als");
  Obligation ob = export_obligation(m, "lookupYields");
  std::set<int> bound, free;
  std::set<std::string> used;
  scan_closed(ob.goal, bound, free, used);
  CHECK(free.empty());
  std::set<std::string> declared;
  for (const TheoryDecl& d : ob.constants) declared.insert(d.name);
  for (const std::string& name : used) {
    CAPTURE(name);
    CHECK(declared.count(name) == 1);
  }
}

TEST_CASE("the goal embeds the assertion structure node for node") {
  for (const char* fixture : {"addressbook.als", "mark_sweep.als"}) {
    Model m = model_fixture(fixture);
    const std::string name =
        std::string(fixture) == "addressbook.als" ? "lookupYields" : "succClosed";
    Obligation ob = export_obligation(m, name);
    std::string why;
    CAPTURE(fixture);
    CHECK_MESSAGE(structure_preserved(*m.assert_by_name(name)->body, ob, &why), why);
    CHECK(!ob.assertion_links.empty());
  }
}

TEST_CASE("tampering with the node links is detected") {
  Model m = model_fixture("mark_sweep.als");
  Obligation ob = export_obligation(m, "succClosed");
  const CoreExpr& a = *m.assert_by_name("succClosed")->body;
  Obligation dropped = ob;
  dropped.assertion_links.pop_back();
  std::string why;
  CHECK(!structure_preserved(a, dropped, &why));
  Obligation reversed = ob;
  std::reverse(reversed.assertion_links.begin(), reversed.assertion_links.end());
  CHECK(!structure_preserved(a, reversed, &why));
  Obligation aliased = ob;
  aliased.assertion_links[0].formula = nullptr;
  aliased.assertion_links[0].term = ob.assertion_links.back().term;
  CHECK(!structure_preserved(a, aliased, &why));
}

TEST_CASE("reflexive closure carries its ranging set and needs no ordering") {
  Model m = model_fixture("mark_sweep.als");
  Obligation ob = export_obligation(m, "succClosed");
  CHECK(ob.ordering_axioms.empty());
  std::string text = obligation_to_text(ob);
  CHECK(text.find("reflClos(succ, Node)") != std::string::npos);
  CHECK(text.find("ordering axioms") == std::string::npos);
  CHECK(text.find("ordAt") == std::string::npos);
}

TEST_CASE("a finite ordering bound rewrites the bijection to an interval") {
  Model m = model_fixture("addressbook.als");
  ObligationOptions opts;
  opts.finite_ordering = 4;
  Obligation ob = export_obligation(m, "lookupYields", opts);
  CHECK(to_text(ob.ordering_axioms[1].formula) ==
        "forall i : Int . (((i >= 0) & (i < 4)) => in(ordAt(i), Book))");
  std::string next = to_text(ob.ordering_axioms[4].formula);
  CHECK(next.find("((i + 1) < 4)") != std::string::npos);
  opts.finite_ordering = 0;
  CHECK_THROWS_WITH_AS(export_obligation(m, "lookupYields", opts),
                       doctest::Contains("at least 1"), Error);
}

TEST_CASE("unknown assertions and oversized arities are reported") {
  Model m = model_fixture("addressbook.als");
  try {
    export_obligation(m, "noSuchAssert");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Name);
    CHECK(e.message().find("noSuchAssert") != std::string::npos);
  }
  Model wide = model_of("sig A { f: set A }\nassert wide { f->f in f->f }\n");
  try {
    export_obligation(wide, "wide");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnsupportedArity);
    CHECK(e.message().find("arity 4") != std::string::npos);
    CHECK(e.message().find("arity 2") != std::string::npos);
  }
}

TEST_CASE("a goal over one empty signature is valid on every interpretation") {
  Model m = model_of("sig A {}\nassert trivial { no A or some A }\n");
  Obligation ob = export_obligation(m, "trivial");
  CHECK(ob.model_axioms.empty());
  CHECK(ob.hypotheses.empty());
  for (int n = 0; n <= 3; n++)
    for (uint64_t bits = 0; bits < (uint64_t{1} << n); bits++) {
      FiniteInterp interp{n, {{"A", {1, bits}}}};
      FiniteEval ev(interp);
      CAPTURE(n);
      CAPTURE(bits);
      CHECK(ev.formula(ob.goal));
    }
}

TEST_CASE("model names colliding with theory symbols are renamed, not the"
          " theory") {
  Model m = model_of(
      "sig union1 {}\n"
      "sig sing { f: set union1 }\n"
      "assert collide { no f }\n");
  Obligation ob = export_obligation(m, "collide");
  std::set<std::string> names;
  for (const TheoryDecl& d : ob.constants) names.insert(d.name);
  CHECK(names.count("union1_") == 1);
  CHECK(names.count("sing_") == 1);
  CHECK(names.count("union1") == 0);
  std::string why;
  CHECK_MESSAGE(structure_preserved(*m.assert_by_name("collide")->body, ob, &why), why);
}
