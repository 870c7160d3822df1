// Tests for the typed core representation: name resolution, lowering of the
// surface constructs onto the small core calculus, template instantiation,
// and the implicit field constraints.

#include "doctest.h"
#include "relcheck/eval.hpp"
#include "relcheck/model.hpp"
#include "testutil.hpp"

#include <set>

using namespace relcheck;
using namespace testutil;

namespace {

Model model_of(const std::string& src) { return typecheck(ast::parse(src)); }

Error capture_model(const std::string& src) {
  try {
    typecheck(ast::parse(src));
  } catch (const Error& e) {
    return e;
  }
  FAIL("expected an error");
  throw std::logic_error("unreachable");
}

SigId sig_id(const Model& m, const std::string& name) {
  auto s = m.sig_by_name(name);
  REQUIRE(s.has_value());
  return *s;
}

FieldId field_id(const Model& m, const std::string& name) {
  auto f = m.field_by_name(name);
  REQUIRE(f.has_value());
  return *f;
}

const Template& template_of(const Model& m, const std::string& name) {
  for (const auto& t : m.templates)
    if (t.name == name) return t;
  FAIL("no template named ", name);
  throw std::logic_error("unreachable");
}

}  // namespace

TEST_CASE("address book model: hierarchy, fields, ordering, templates") {
  Model m = model_fixture("addressbook.als");

  REQUIRE(m.sigs.size() == 4);
  SigId target = sig_id(m, "Target"), addr_sig = sig_id(m, "Addr");
  SigId name_sig = sig_id(m, "Name"), book = sig_id(m, "Book");

  CHECK(m.sig(target).is_abstract);
  CHECK(!m.sig(target).parent.has_value());
  CHECK(m.sig(target).depth == 0);
  CHECK(m.sig(addr_sig).parent == target);
  CHECK(m.sig(addr_sig).top == target);
  CHECK(m.sig(addr_sig).depth == 1);
  CHECK(m.sig(name_sig).top == target);
  CHECK(m.sig(book).top == book);
  CHECK(m.sig(target).children == std::vector<SigId>{addr_sig, name_sig});

  CHECK(m.sig_le(addr_sig, target));
  CHECK(!m.sig_le(target, addr_sig));
  CHECK(!m.sig_le(addr_sig, name_sig));
  CHECK(m.top_sigs() == std::vector<SigId>{target, book});
  CHECK(m.subtree(target) == std::vector<SigId>{target, addr_sig, name_sig});

  REQUIRE(m.fields.size() == 2);
  const Field& names = m.field(field_id(m, "names"));
  CHECK(names.owner == book);
  CHECK(names.cols == std::vector<SigId>{book, name_sig});
  CHECK(names.mult == Mult::Set);
  CHECK(!names.restriction.has_value());

  const Field& addr = m.field(field_id(m, "addr"));
  CHECK(addr.cols == std::vector<SigId>{book, name_sig, target});
  CHECK(addr.mult == Mult::Some);
  REQUIRE(addr.restriction.has_value());
  CHECK(*addr.restriction == field_id(m, "names"));

  REQUIRE(m.ordered_sig.has_value());
  CHECK(*m.ordered_sig == book);
  CHECK(m.ordering_alias == "ord");

  REQUIRE(m.templates.size() == 4);
  const Template& add = template_of(m, "add");
  CHECK(add.is_pred);
  REQUIRE(add.params.size() == 4);
  CHECK(add.params[0].name == "b");
  CHECK(add.params[1].name == "b'");
  CHECK(add.params[0].col.top == book);
  CHECK(add.params[2].col.top == target);

  const Template& lookup = template_of(m, "lookup");
  CHECK(!lookup.is_pred);
  CHECK(lookup.result.top == target);
  // The body `n.^(b.addr) & Addr` narrows to the Target tree; the
  // intersection keeps both comparable signatures.
  REQUIRE(lookup.body->type.arity() == 1);
  CHECK(lookup.body->type.cols[0].top == target);
  const auto& body_sigs = lookup.body->type.cols[0].sigs;
  CHECK(std::count(body_sigs.begin(), body_sigs.end(), addr_sig) == 1);

  REQUIRE(m.checks.size() == 3);
  CHECK(m.checks[0].assertion == "delUndoesAddBuggy");
  CHECK(m.checks[0].scope == 2);
  CHECK(m.checks[2].assertion == "lookupYields");
  CHECK(m.assert_by_name("delUndoesAdd") != nullptr);
  CHECK(m.assert_by_name("nonexistent") == nullptr);
}

TEST_CASE("lowering rewrites the extended forms onto the core calculus") {
  SUBCASE("no-quantifier becomes all+not") {
    Model m = model_of("sig A { f: set A }\nassert X { no a: A | a in a.f }\ncheck X");
    CHECK(core_to_string(m, *m.asserts[0].body) ==
          "(all a@0: A | (not (in a@0 (. a@0 f))))");
  }
  SUBCASE("lone-quantifier duplicates the binder") {
    Model m = model_of("sig A { f: set A }\nassert X { lone a: A | some a.f }\ncheck X");
    CHECK(core_to_string(m, *m.asserts[0].body) ==
          "(all a@0: A | (all a_@2: A | (implies (and (some t0@1: A | (in t0@1 (. a@0 f))) "
          "(some t0@1: A | (in t0@1 (. a_@2 f)))) (= a@0 a_@2))))");
  }
  SUBCASE("one-quantifier is some plus lone") {
    Model m = model_of("sig A { f: set A }\nassert X { one a: A | some a.f }\ncheck X");
    std::string s = core_to_string(m, *m.asserts[0].body);
    CHECK(s.substr(0, 10) == "(and (some");
    CHECK(s.find("(implies (and") != std::string::npos);
  }
  SUBCASE("cardinality prefixes become quantifiers") {
    Model m = model_of("sig A { f: set A }\nassert X { lone A.f }\ncheck X");
    CHECK(core_to_string(m, *m.asserts[0].body) ==
          "(all u0@0: A | (all v0@1: A | (implies (and (in u0@0 (. A f)) "
          "(in v0@1 (. A f))) (= u0@0 v0@1))))");
  }
  SUBCASE("cardinality of a binary relation uses one variable per column") {
    Model m = model_of("sig A { f: set A }\nassert X { some f }\ncheck X");
    CHECK(core_to_string(m, *m.asserts[0].body) ==
          "(some t0@0: A | (some t1@1: A | (in (-> t0@0 t1@1) f)))");
  }
  SUBCASE("statically empty expressions fold") {
    Model m = model_of("sig A {}\nassert X { some none }\ncheck X");
    CHECK(core_to_string(m, *m.asserts[0].body) == "false");
    Model m2 = model_of("sig A {}\nassert X { no A & none }\ncheck X");
    CHECK(core_to_string(m2, *m2.asserts[0].body) == "true");
    Model m3 = model_of("sig A {}\nassert X { all a: A & none | some a }\ncheck X");
    CHECK(core_to_string(m3, *m3.asserts[0].body) == "true");
    Model m4 = model_of("sig A {}\nassert X { some a: A - A | a = a }\ncheck X");
    // A - A is not *statically* empty: emptiness here is semantic, not a
    // column-type fact, so the quantifier must survive to the evaluator.
    CHECK(core_to_string(m4, *m4.asserts[0].body).substr(0, 5) == "(some");
  }
  SUBCASE("inequality becomes negated equality") {
    Model m = model_of("sig A { f: set A }\nassert X { A.f != A }\ncheck X");
    CHECK(core_to_string(m, *m.asserts[0].body) == "(not (= (. A f) A))");
  }
  SUBCASE("let bindings are expanded away") {
    Model m = model_of("sig A { f: set A }\nassert X { let g = ^f | A.g in A.f }\ncheck X");
    CHECK(core_to_string(m, *m.asserts[0].body) == "(in (. A (^ f)) (. A f))");
  }
  SUBCASE("ordering names resolve through the alias") {
    Model m = model_of(
        "open util/ordering[S] as s\nsig S {}\nassert X { no s/next.(s/first) }\ncheck X");
    CHECK(core_to_string(m, *m.asserts[0].body) ==
          "(all t0@0: S | (not (in t0@0 (. next[S] first[S]))))");
  }
  SUBCASE("a later binder's domain may mention an earlier binder") {
    Model m = model_fixture("addressbook.als");
    const NamedFormula* a = m.assert_by_name("lookupYields");
    REQUIRE(a != nullptr);
    std::string s = core_to_string(m, *a->body);
    CHECK(s.find("n@") != std::string::npos);
    CHECK(s.find(": (. b@") != std::string::npos);  // n ranges over b.names
  }
  SUBCASE("empty blocks are vacuously true") {
    Model m = model_of("sig A {}\npred p {}\nassert X { some A }\ncheck X");
    CHECK(core_to_string(m, *template_of(m, "p").body) == "true");
  }
  SUBCASE("integer comparisons and arithmetic") {
    Model m = model_of("assert X { 1 + 2 = 3 and 4 - 5 < 0 }\ncheck X");
    CHECK(core_to_string(m, *m.asserts[0].body) ==
          "(and (=i (iadd 1 2) 3) (< (isub 4 5) 0))");
  }
  SUBCASE("integer quantifier binders have no relational domain") {
    Model m = model_of("assert X { all i: Int | i = i }\ncheck X");
    CHECK(core_to_string(m, *m.asserts[0].body) == "(all i@0: Int | (=i i@0 i@0))");
  }
}

TEST_CASE("predicate and function calls expand to their bodies") {
  Model m = model_fixture("addressbook.als");
  SigId book = sig_id(m, "Book");

  const Template& add = template_of(m, "add");
  std::vector<CoreExprPtr> args = {
      core::mk_sig_ref(m, book), core::mk_sig_ref(m, book),
      core::mk_sig_ref(m, sig_id(m, "Name")), core::mk_sig_ref(m, sig_id(m, "Target"))};
  CoreExprPtr inst = instantiate_template(m, add, args);
  CHECK(core_to_string(m, *inst) == "(= (. Book addr) (+ (. Book addr) (-> Name Target)))");
  CHECK(free_vars(*inst).empty());

  // Instantiation is repeatable and does not disturb the stored template.
  CoreExprPtr inst2 = instantiate_template(m, add, args);
  CHECK(core_to_string(m, *inst2) == core_to_string(m, *inst));
  CHECK(free_vars(*add.body).size() == 4);

  SUBCASE("argument count is enforced") {
    Error e = [&] {
      try {
        instantiate_template(m, add, {core::mk_sig_ref(m, book)});
      } catch (const Error& err) {
        return err;
      }
      throw std::logic_error("unreachable");
    }();
    CHECK(e.kind() == ErrorKind::Arity);
  }
  SUBCASE("argument signatures are enforced") {
    std::vector<CoreExprPtr> bad = args;
    bad[0] = core::mk_sig_ref(m, sig_id(m, "Name"));
    Error e = [&] {
      try {
        instantiate_template(m, add, bad);
      } catch (const Error& err) {
        return err;
      }
      throw std::logic_error("unreachable");
    }();
    CHECK(e.kind() == ErrorKind::Type);
  }

  SUBCASE("calls inside formulas inline the instantiated body") {
    Model m2 = model_of(
        "sig A { f: set A }\n"
        "pred edge [x, y: A] { y in x.f }\n"
        "assert X { all a: A | edge[a, a] implies a in a.f }\n"
        "check X");
    std::string s = core_to_string(m2, *m2.asserts[0].body);
    CHECK(s == "(all a@2: A | (implies (in a@2 (. a@2 f)) (in a@2 (. a@2 f))))");
  }
}

TEST_CASE("variable replacement is capture-safe and sharing-friendly") {
  Model m = model_of("sig A { f: set A }\nassert X { all a: A | a in a.f }\ncheck X");
  SigId a_sig = sig_id(m, "A");

  VarDecl x{10, "x", false, ColType{a_sig, {a_sig}}};
  VarDecl y{20, "y", false, ColType{a_sig, {a_sig}}};
  CoreExprPtr body = core::mk_in(core::mk_var_ref(x), core::mk_var_ref(y));
  CoreExprPtr quant = core::mk_quant(QuantKind::All, x, core::mk_sig_ref(m, a_sig), body);

  // Free occurrences are replaced.
  CoreExprPtr replaced = replace_var(quant, 20, core::mk_sig_ref(m, a_sig));
  CHECK(core_to_string(m, *replaced) == "(all x@10: A | (in x@10 A))");

  // Occurrences under a binder of the same id are left alone.
  CoreExprPtr shadow = replace_var(quant, 10, core::mk_sig_ref(m, a_sig));
  CHECK(shadow == quant);  // shared, not rebuilt

  // Untouched subtrees are shared rather than copied.
  CoreExprPtr partial = replace_var(body, 10, core::mk_var_ref(y));
  CHECK(partial->kids[1] == body->kids[1]);

  // free_vars reports first-occurrence order and skips bound variables.
  auto fv = free_vars(*quant);
  REQUIRE(fv.size() == 1);
  CHECK(fv[0].id == 20);
  auto fv2 = free_vars(*body);
  REQUIRE(fv2.size() == 2);
  CHECK(fv2[0].id == 10);
  CHECK(fv2[1].id == 20);
}

TEST_CASE("lowering is deterministic") {
  std::string src = fixture_text("addressbook.als");
  Model m1 = typecheck(ast::parse(src));
  Model m2 = typecheck(ast::parse(src));
  CHECK(m1.var_counter == m2.var_counter);
  REQUIRE(m1.facts.size() == m2.facts.size());
  for (size_t i = 0; i < m1.facts.size(); i++)
    CHECK(core_to_string(m1, *m1.facts[i].body) == core_to_string(m2, *m2.facts[i].body));
  REQUIRE(m1.asserts.size() == m2.asserts.size());
  for (size_t i = 0; i < m1.asserts.size(); i++)
    CHECK(core_to_string(m1, *m1.asserts[i].body) == core_to_string(m2, *m2.asserts[i].body));
  REQUIRE(m1.templates.size() == m2.templates.size());
  for (size_t i = 0; i < m1.templates.size(); i++)
    CHECK(core_to_string(m1, *m1.templates[i].body) ==
          core_to_string(m2, *m2.templates[i].body));
}

TEST_CASE("name, type, arity, and multiplicity errors carry the right kind") {
  auto kind_of = [](const std::string& src) { return capture_model(src).kind(); };

  CHECK(kind_of("sig A {}\nfact F { A in B }") == ErrorKind::Name);
  CHECK(kind_of("sig A {}\ncheck nothing for 3") == ErrorKind::Name);
  CHECK(kind_of("sig A {}\npred A {}") == ErrorKind::Name);
  CHECK(kind_of("sig A { A: A }") == ErrorKind::Name);
  CHECK(kind_of("sig A extends Z {}") == ErrorKind::Name);
  CHECK(kind_of("sig A extends B {}\nsig B extends A {}") == ErrorKind::Name);
  CHECK(capture_model("sig A extends B {}\nsig B extends A {}").message().find("cyclic") !=
        std::string::npos);

  CHECK(kind_of("sig A {}\nfact F { some A.A }") == ErrorKind::Arity);
  CHECK(kind_of("sig A { f: set A }\nfact F { some A + f }") == ErrorKind::Arity);
  CHECK(kind_of("sig B { n: set B, f: n -> some B }\nfact F { some ^f }") ==
        ErrorKind::Arity);
  CHECK(kind_of("sig A {}\nsig B { f: set B }\npred p [x: A, y: A] {}\n"
                "fact F { p[A] }") == ErrorKind::Arity);

  CHECK(kind_of("sig A {}\nsig B { f: set B }\nfact F { some A.f }") == ErrorKind::Type);
  CHECK(kind_of("sig A {}\nsig B { f: set A }\nfact F { some ^f }") == ErrorKind::Type);
  CHECK(kind_of("sig A {}\nsig B {}\nfact F { some A + B }") == ErrorKind::Type);
  CHECK(kind_of("sig A {}\nfact F { 1 = A }") == ErrorKind::Type);
  CHECK(kind_of("sig A {}\nfact F { some 1 + A }") == ErrorKind::Type);
  CHECK(kind_of("sig A {}\npred p {}\nfact F { some p }") == ErrorKind::Type);
  CHECK(kind_of("sig A {}\nsig B {}\nfun f [a: A] : set A { a }\nfact F { some f[B] }") ==
        ErrorKind::Type);
  CHECK(kind_of("fact F { 1 in 2 }") == ErrorKind::Type);

  CHECK(kind_of("sig A {}\nsig B { f: one A -> A }") == ErrorKind::Multiplicity);

  CHECK(kind_of("pred p { p }") == ErrorKind::UnsupportedConstruct);
  CHECK(kind_of("pred p { q }\npred q { p }") == ErrorKind::UnsupportedConstruct);
  CHECK(kind_of("sig A { n: Int }") == ErrorKind::UnsupportedConstruct);
  CHECK(kind_of("abstract sig T {}\nsig A extends T {}\nopen util/ordering[A]") ==
        ErrorKind::UnsupportedConstruct);
  CHECK(kind_of("abstract sig T {}\nsig A extends T {}\nopen util/ordering[T]") ==
        ErrorKind::UnsupportedConstruct);
  CHECK(kind_of("open util/ordering[A]\nopen util/ordering[B]\nsig A {}\nsig B {}") ==
        ErrorKind::UnsupportedConstruct);
  CHECK(kind_of("sig A {}\nfact F { some Int }") == ErrorKind::UnsupportedConstruct);

  // A let binding shadows even a predicate name.
  Model ok = model_of("sig A {}\npred p {}\nfact F { let p = A | some p }");
  CHECK(core_to_string(ok, *ok.facts[0].body).substr(0, 5) == "(some");
}

TEST_CASE("default field multiplicity is one for binary fields") {
  Model m = model_of("sig P {}\nsig Q { d: P, s: set P }");
  CHECK(m.field(field_id(m, "d")).mult == Mult::One);
  CHECK(m.field(field_id(m, "s")).mult == Mult::Set);
  // Arrow fields default to set.
  Model m2 = model_of("sig P {}\nsig Q { r: P -> P }");
  CHECK(m2.field(field_id(m2, "r")).mult == Mult::Set);
  CHECK(m2.field(field_id(m2, "r")).cols.size() == 3);
}

// The implicit field constraint, evaluated over explicit instances, must agree
// with a direct reading of the declaration. This pins the one shared
// desugaring that counterexample validation relies on.
TEST_CASE("field constraints agree with a direct multiplicity check") {
  SUBCASE("unrestricted fields: set, some, one, lone") {
    Model m = model_of("sig P {}\nsig Q { s: set P, m: some P, o: one P, l: lone P }");
    SigId p = sig_id(m, "P"), q = sig_id(m, "Q");

    Instance inst;
    inst.atom_names = {"Q0", "P0", "P1"};
    inst.atom_sig = {q, p, p};

    FieldId fs = field_id(m, "s"), fm = field_id(m, "m");
    FieldId fo = field_id(m, "o"), fl = field_id(m, "l");
    const Tuple qp0{0, 1}, qp1{0, 2};

    int checked = 0;
    for (int bits = 0; bits < 256; bits++) {
      auto table = [&](int shift) {
        TupleSet t;
        if (bits >> shift & 1) t.insert(qp0);
        if (bits >> (shift + 1) & 1) t.insert(qp1);
        return t;
      };
      inst.rel_extent[fs] = table(0);
      inst.rel_extent[fm] = table(2);
      inst.rel_extent[fo] = table(4);
      inst.rel_extent[fl] = table(6);
      REQUIRE(!ill_formed_reason(m, inst).has_value());

      auto holds = [&](FieldId f) {
        EvalEnv env;
        return eval_formula(m, inst, *field_constraint(m, f), env);
      };
      CHECK(holds(fs) == true);
      CHECK(holds(fm) == (inst.rel_extent[fm].size() >= 1));
      CHECK(holds(fo) == (inst.rel_extent[fo].size() == 1));
      CHECK(holds(fl) == (inst.rel_extent[fl].size() <= 1));
      checked++;
    }
    CHECK(checked == 256);
  }

  SUBCASE("a restricted field constrains per tuple of its base field") {
    Model m = model_of("sig N {}\nsig T {}\nsig B { ns: set N, ad: ns -> some T }");
    SigId n = sig_id(m, "N"), t = sig_id(m, "T"), b = sig_id(m, "B");
    FieldId fns = field_id(m, "ns"), fad = field_id(m, "ad");

    Instance inst;
    inst.atom_names = {"B0", "N0", "N1", "T0"};
    inst.atom_sig = {b, n, n, t};

    const std::vector<Tuple> ns_all = {{0, 1}, {0, 2}};
    const std::vector<Tuple> ad_all = {{0, 1, 3}, {0, 2, 3}};
    for (int nb = 0; nb < 4; nb++) {
      for (int ab = 0; ab < 4; ab++) {
        TupleSet ns, ad;
        for (int i = 0; i < 2; i++) {
          if (nb >> i & 1) ns.insert(ns_all[i]);
          if (ab >> i & 1) ad.insert(ad_all[i]);
        }
        inst.rel_extent[fns] = ns;
        inst.rel_extent[fad] = ad;

        // Direct reading: every ad tuple extends an ns tuple, and every ns
        // tuple has at least one extension.
        bool expect = true;
        for (const Tuple& tu : ad)
          if (!ns.count(Tuple{tu[0], tu[1]})) expect = false;
        for (const Tuple& tu : ns) {
          bool found = false;
          for (const Tuple& au : ad)
            if (au[0] == tu[0] && au[1] == tu[1]) found = true;
          if (!found) expect = false;
        }

        EvalEnv env;
        CHECK(eval_formula(m, inst, *field_constraint(m, fad), env) == expect);
      }
    }

    // The base field's own constraint (set) never restricts.
    EvalEnv env;
    inst.rel_extent[fns] = {{0, 1}};
    inst.rel_extent[fad] = {{0, 1, 3}};
    CHECK(eval_formula(m, inst, *field_constraint(m, fns), env));
  }
}
