// Tests for the SMT layer: deterministic serialization, S-expression reading,
// model parsing, model-term evaluation, and the solver subprocess driver.

#include "doctest.h"
#include "relcheck/diag.hpp"
#include "relcheck/smt/sexpr.hpp"
#include "relcheck/smt/smt.hpp"
#include "relcheck/smt/solver.hpp"
#include "testutil.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>

#include <sys/stat.h>

using namespace relcheck;
using namespace relcheck::smt;

namespace {

std::string fake_solver(const std::string& name, const std::string& body) {
  std::filesystem::path p = std::filesystem::temp_directory_path() / name;
  {
    std::ofstream f(p);
    f << "#!/bin/sh\n" << body;
  }
  ::chmod(p.c_str(), 0755);
  return p.string();
}

ErrorKind kind_of_call(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  throw std::logic_error("unreachable");
}

}  // namespace

TEST_CASE("scripts serialize deterministically") {
  Sort bv3 = Sort::bitvec(3);
  Script s;
  s.logic = "UFBV";
  s.comment("bounded check");
  s.declare_sort("S");
  s.declare_fun("isA", {bv3}, Sort::boolean());
  s.declare_fun("addr", {bv3, bv3}, bv3);
  s.define_fun("live", {{"x", bv3}}, Sort::boolean(), app("isA", sym("x")));
  s.assert_term(forall({{"x", bv3}}, implies(app("isA", sym("x")), eq(sym("x"), bv_lit(5, 3)))),
                "every A is five");
  s.assert_term(exists({{"i", Sort::integer()}}, eq(sym("i"), int_lit(-3))));
  s.check_sat();
  s.get_model();

  const std::string expected =
      "(set-option :produce-models true)\n"
      "(set-logic UFBV)\n"
      "; bounded check\n"
      "(declare-sort S 0)\n"
      "(declare-fun isA ((_ BitVec 3)) Bool)\n"
      "(declare-fun addr ((_ BitVec 3) (_ BitVec 3)) (_ BitVec 3))\n"
      "(define-fun live ((x (_ BitVec 3))) Bool (isA x))\n"
      "; every A is five\n"
      "(assert (forall ((x (_ BitVec 3))) (=> (isA x) (= x #b101))))\n"
      "(assert (exists ((i Int)) (= i (- 3))))\n"
      "(check-sat)\n"
      "(get-model)\n";
  CHECK(serialize(s) == expected);
  CHECK(serialize(s) == expected);  // no hidden state

  SUBCASE("bit-vector literals are zero-padded to their width") {
    CHECK(term_text(*bv_lit(5, 8)) == "#b00000101");
    CHECK(term_text(*bv_lit(0, 1)) == "#b0");
    CHECK(term_text(*bv_lit(1, 1)) == "#b1");
    CHECK(term_text(*bv_lit(10, 2)) == "#b10");  // masked to the width
  }
}

TEST_CASE("connective builders fold constants") {
  TermPtr t = bool_lit(true), f = bool_lit(false), p = sym("p"), q = sym("q");
  CHECK(term_text(*conj({})) == "true");
  CHECK(term_text(*conj({p})) == "p");
  CHECK(term_text(*conj({p, t, q})) == "(and p q)");
  CHECK(term_text(*conj({p, f, q})) == "false");
  CHECK(term_text(*disj({})) == "false");
  CHECK(term_text(*disj({p, f})) == "p");
  CHECK(term_text(*disj({p, t})) == "true");
  CHECK(term_text(*negate(negate(p))) == "p");
  CHECK(term_text(*negate(t)) == "false");
  CHECK(term_text(*implies(t, p)) == "p");
  CHECK(term_text(*implies(f, p)) == "true");
  CHECK(term_text(*implies(p, t)) == "true");
  CHECK(term_text(*implies(p, q)) == "(=> p q)");
  CHECK(term_text(*forall({{"x", Sort::named("S")}}, t)) == "true");
  CHECK(term_text(*exists({}, p)) == "p");
}

TEST_CASE("s-expressions read back with comments skipped") {
  auto es = parse_sexprs("; leading\n(a (b #b01) |odd sym| \"str\") atom ; trailing\n42");
  REQUIRE(es.size() == 3);
  CHECK(!es[0].is_atom);
  REQUIRE(es[0].items.size() == 4);
  CHECK(es[0].items[0].is("a"));
  CHECK(es[0].items[1].head() == "b");
  CHECK(es[0].items[1].items[1].is("#b01"));
  CHECK(es[0].items[2].is("|odd sym|"));
  CHECK(es[0].items[3].is("\"str\""));
  CHECK(es[1].is("atom"));
  CHECK(es[2].is("42"));
  CHECK(sexpr_text(es[0]) == "(a (b #b01) |odd sym| \"str\")");

  CHECK(kind_of_call([] { parse_sexprs("(a (b)"); }) == ErrorKind::Decode);
  CHECK(kind_of_call([] { parse_sexprs("a)"); }) == ErrorKind::Decode);
  CHECK(kind_of_call([] { parse_sexprs("(|unterminated"); }) == ErrorKind::Decode);
  CHECK(parse_sexprs("  ; only a comment\n").empty());
}

TEST_CASE("solver models parse: functions, universes, cardinality noise") {
  // Shape taken from real z3 output for a one-element free sort.
  const std::string text =
      "(\n"
      "  ;; universe for S:\n"
      "  ;;   S!val!0 S!val!1 \n"
      "  ;; -----------\n"
      "  ;; definitions for universe elements:\n"
      "  (declare-fun S!val!0 () S)\n"
      "  (declare-fun S!val!1 () S)\n"
      "  ;; cardinality constraint:\n"
      "  (forall ((x S)) (or (= x S!val!0) (= x S!val!1)))\n"
      "  ;; -----------\n"
      "  (define-fun c () S S!val!1)\n"
      "  (define-fun f ((x!0 S)) Bool (= x!0 S!val!1))\n"
      ")\n";
  SolverModel m = parse_model(text);
  REQUIRE(m.universes.count("S"));
  CHECK(m.universes.at("S") == std::vector<std::string>{"S!val!0", "S!val!1"});
  REQUIRE(m.funs.count("c"));
  REQUIRE(m.funs.count("f"));
  CHECK(m.funs.at("f").param_names == std::vector<std::string>{"x!0"});
  CHECK(m.funs.at("f").param_sorts == std::vector<std::string>{"S"});

  CHECK(eval_model_fun(m, "c", {}) == Value::of_sym("S!val!1"));
  CHECK(eval_model_fun(m, "f", {Value::of_sym("S!val!1")}) == Value::of_bool(true));
  CHECK(eval_model_fun(m, "f", {Value::of_sym("S!val!0")}) == Value::of_bool(false));

  SUBCASE("universe members may come only from declare-funs") {
    SolverModel m2 = parse_model("((declare-fun T!val!0 () T) (define-fun g () T T!val!0))");
    CHECK(m2.universes.at("T") == std::vector<std::string>{"T!val!0"});
  }
  SUBCASE("the model wrapper word is accepted") {
    SolverModel m3 = parse_model("(model (define-fun k () Bool true))");
    CHECK(eval_model_fun(m3, "k", {}) == Value::of_bool(true));
  }
  SUBCASE("malformed models raise decode errors") {
    CHECK(kind_of_call([] { parse_model("atom"); }) == ErrorKind::Decode);
    CHECK(kind_of_call([] { parse_model("((define-fun broken))"); }) == ErrorKind::Decode);
    CHECK(kind_of_call([] { parse_model("((check-sat))"); }) == ErrorKind::Decode);
  }
}

TEST_CASE("model-term evaluation covers the shapes solvers emit") {
  // Shape taken from real z3 output for a bit-vector relation.
  SolverModel m = parse_model(
      "(\n"
      "  (define-fun k () (_ BitVec 2) #b00)\n"
      "  (define-fun g ((x!0 (_ BitVec 2)) (x!1 (_ BitVec 2))) Bool\n"
      "    (and (not (= x!1 #b10)) (= x!0 #b00)))\n"
      "  (define-fun h ((x!0 (_ BitVec 2))) Bool\n"
      "    (ite (= x!0 #b01) true (let ((a!1 (= x!0 k))) a!1)))\n"
      "  (define-fun via () Bool (g k #b01))\n"
      "  (define-fun iv () Int (- 5))\n"
      "  (define-fun ar ((x!0 Int)) Int (+ x!0 (* 2 3)))\n"
      "  (define-fun ix ((x!0 (_ BitVec 4))) Bool (= x!0 (_ bv6 4)))\n"
      ")");

  CHECK(eval_model_fun(m, "k", {}) == Value::of_bits(0, 2));
  for (unsigned a = 0; a < 4; a++)
    for (unsigned b = 0; b < 4; b++) {
      bool expect = (b != 2) && (a == 0);
      CHECK(eval_model_fun(m, "g", {Value::of_bits(a, 2), Value::of_bits(b, 2)}) ==
            Value::of_bool(expect));
    }
  CHECK(eval_model_fun(m, "h", {Value::of_bits(1, 2)}) == Value::of_bool(true));
  CHECK(eval_model_fun(m, "h", {Value::of_bits(0, 2)}) == Value::of_bool(true));
  CHECK(eval_model_fun(m, "h", {Value::of_bits(3, 2)}) == Value::of_bool(false));
  CHECK(eval_model_fun(m, "via", {}) == Value::of_bool(true));
  CHECK(eval_model_fun(m, "iv", {}) == Value::of_int(-5));
  CHECK(eval_model_fun(m, "ar", {Value::of_int(10)}) == Value::of_int(16));
  CHECK(eval_model_fun(m, "ix", {Value::of_bits(6, 4)}) == Value::of_bool(true));
  CHECK(eval_model_fun(m, "ix", {Value::of_bits(7, 4)}) == Value::of_bool(false));

  SUBCASE("a handwritten five-bit address table reads back exactly") {
    // Three books, a name, and a target over five-bit atoms; membership holds
    // for (1, 1, 0) and (16, 1, 0) only.
    SolverModel tbl = parse_model(
        "((define-fun addr ((b (_ BitVec 5)) (n (_ BitVec 5)) (t (_ BitVec 5))) Bool\n"
        "   (or (and (= b #b00001) (= n #b00001) (= t #b00000))\n"
        "       (and (= b #b10000) (= n #b00001) (= t #b00000)))))");
    int members = 0;
    for (unsigned b = 0; b < 32; b++)
      for (unsigned n = 0; n < 2; n++)
        for (unsigned t = 0; t < 2; t++) {
          bool in = eval_model_fun(tbl, "addr",
                                   {Value::of_bits(b, 5), Value::of_bits(n, 5),
                                    Value::of_bits(t, 5)})
                        .b;
          if (in) members++;
          CHECK(in == ((b == 1 || b == 16) && n == 1 && t == 0));
        }
    CHECK(members == 2);
  }

  SUBCASE("failures are decode errors, never verdicts") {
    CHECK(kind_of_call([&] { eval_model_fun(m, "nosuch", {}); }) == ErrorKind::Decode);
    CHECK(kind_of_call([&] { eval_model_fun(m, "g", {Value::of_bits(0, 2)}); }) ==
          ErrorKind::Decode);
    SolverModel bad = parse_model("((define-fun w () Bool (bvadd #b1 #b1)))");
    CHECK(kind_of_call([&] { eval_model_fun(bad, "w", {}); }) == ErrorKind::Decode);
  }
}

TEST_CASE("the subprocess driver classifies solver behavior") {
  SUBCASE("a verdict line is required") {
    std::string ok = fake_solver("relcheck_fake_sat.sh", "echo sat\necho '(model)'\n");
    SolveResult r = run_solver(ok, "(check-sat)\n", 10);
    CHECK(r.status == SolveStatus::Sat);
    CHECK(!r.timed_out);
    CHECK(r.model_text.find("(model)") != std::string::npos);

    std::string un = fake_solver("relcheck_fake_unsat.sh", "echo unsat\n");
    CHECK(run_solver(un, "x", 10).status == SolveStatus::Unsat);

    std::string uk = fake_solver("relcheck_fake_unknown.sh", "echo unknown\n");
    CHECK(run_solver(uk, "x", 10).status == SolveStatus::Unknown);

    std::string to = fake_solver("relcheck_fake_timeout.sh", "echo timeout\n");
    SolveResult rt = run_solver(to, "x", 10);
    CHECK(rt.status == SolveStatus::Unknown);
    CHECK(rt.timed_out);
  }
  SUBCASE("silence and garbage are crashes") {
    std::string broken = fake_solver("relcheck_fake_broken.sh", "exit 1\n");
    CHECK(kind_of_call([&] { run_solver(broken, "x", 10); }) == ErrorKind::SolverCrashed);
    std::string noise = fake_solver("relcheck_fake_noise.sh", "echo flagrant error\n");
    CHECK(kind_of_call([&] { run_solver(noise, "x", 10); }) == ErrorKind::SolverCrashed);
  }
  SUBCASE("the wall clock limit kills the process group") {
    std::string slow = fake_solver("relcheck_fake_slow.sh", "sleep 600\necho sat\n");
    auto t0 = std::chrono::steady_clock::now();
    SolveResult r = run_solver(slow, "x", 1.0);
    auto elapsed = std::chrono::duration_cast<std::chrono::seconds>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
    CHECK(r.status == SolveStatus::Unknown);
    CHECK(r.timed_out);
    CHECK(elapsed < 30);
  }
  SUBCASE("resolution prefers the explicit path and reports failures") {
    CHECK(kind_of_call([] { resolve_solver("/no/such/solver"); }) ==
          ErrorKind::SolverNotFound);
    std::string ok = fake_solver("relcheck_fake_resolve.sh", "echo sat\n");
    CHECK(resolve_solver(ok) == ok);
  }
}

TEST_CASE("the bundled solver answers round trips" * doctest::timeout(300)) {
  std::string solver = testutil::test_solver();

  Script sat_script;
  sat_script.logic = "UF";
  sat_script.declare_sort("S");
  sat_script.declare_fun("f", {Sort::named("S")}, Sort::boolean());
  sat_script.declare_fun("c", {}, Sort::named("S"));
  sat_script.assert_term(app("f", sym("c")));
  sat_script.check_sat();
  sat_script.get_model();

  SolveResult r = run_solver(solver, serialize(sat_script), 120);
  REQUIRE(r.status == SolveStatus::Sat);
  SolverModel m = parse_model(r.model_text);
  REQUIRE(m.universes.count("S"));
  REQUIRE(!m.universes.at("S").empty());
  Value c = eval_model_fun(m, "c", {});
  CHECK(c.kind == Value::Kind::Sym);
  CHECK(eval_model_fun(m, "f", {c}) == Value::of_bool(true));

  Script unsat_script;
  unsat_script.logic = "UFBV";
  unsat_script.declare_fun("p", {Sort::bitvec(4)}, Sort::boolean());
  unsat_script.assert_term(forall({{"x", Sort::bitvec(4)}}, app("p", sym("x"))));
  unsat_script.assert_term(negate(app("p", bv_lit(6, 4))));
  unsat_script.check_sat();
  CHECK(run_solver(solver, serialize(unsat_script), 120).status == SolveStatus::Unsat);
}
