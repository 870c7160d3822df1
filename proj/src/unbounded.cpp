// Unbounded backend: one free sort per top-level signature, so unsat proves
// the assertion over instances of every size. Transitive closure has no
// first-order definition; it becomes an uninterpreted relation constrained
// from below (base case, transitivity, and one-step composition), which
// over-approximates the real closure. unsat answers therefore remain sound
// proofs, while sat answers may be spurious and must be validated against
// the reference evaluator before they count as counterexamples.

#include <set>

#include "encode_core.hpp"
#include "relcheck/diag.hpp"

namespace relcheck {

namespace {

// Avoid colliding with sort names various solvers treat as built in.
std::string sort_name_for(const std::string& n) {
  static const std::set<std::string> taken = {
      "Array", "Bool", "Int", "Real", "String", "Seq", "Set",
      "List",  "BitVec", "RegLan", "RoundingMode", "FloatingPoint"};
  return taken.count(n) ? n + "_" : n;
}

class UnboundedEncoder final : public EncoderBase {
 public:
  explicit UnboundedEncoder(const Model& m) : EncoderBase(m) {
    meta_.bounded = false;
    for (SigId top : m.top_sigs()) meta_.sort_name[top] = sort_name_for(m.sig(top).name);
  }

 private:
  void begin(bool ints_used) override {
    s_.logic = ints_used ? "UFLIA" : "UF";
    s_.comment("free-sort check: one sort per top-level signature, no size bound");
    for (SigId top : m_.top_sigs()) s_.declare_sort(meta_.sort_name.at(top));
  }

  smt::Sort atom_sort(SigId top) const override {
    return smt::Sort::named(meta_.sort_name.at(top));
  }

  void emit_top(SigId top) override {
    s_.define_fun(meta_.is_fun.at(top), {{"x", atom_sort(top)}}, smt::Sort::boolean(),
                  smt::bool_lit(true));
  }

  void emit_ordering() override {
    SigId t = *m_.ordered_sig;
    smt::Sort S = atom_sort(t);
    meta_.lte_fun = "ord_lte";
    s_.comment("linear ordering on " + m_.sig(t).name);
    s_.declare_fun("ord_lte", {S, S}, smt::Sort::boolean());
    auto lte = [](smt::TermPtr a, smt::TermPtr b) {
      return smt::app("ord_lte", std::move(a), std::move(b));
    };
    std::string xn = fresh_name(), yn = fresh_name(), zn = fresh_name();
    auto x = smt::sym(xn), y = smt::sym(yn), z = smt::sym(zn);
    s_.assert_term(smt::forall({{xn, S}}, lte(x, x)), "ord_lte is reflexive");
    s_.assert_term(smt::forall({{xn, S}, {yn, S}},
                               smt::implies(smt::conj({lte(x, y), lte(y, x)}), smt::eq(x, y))),
                   "ord_lte is antisymmetric");
    s_.assert_term(smt::forall({{xn, S}, {yn, S}, {zn, S}},
                               smt::implies(smt::conj({lte(x, y), lte(y, z)}), lte(x, z))),
                   "ord_lte is transitive");
    s_.assert_term(smt::forall({{xn, S}, {yn, S}}, smt::disj({lte(x, y), lte(y, x)})),
                   "ord_lte is total");
    s_.declare_fun("ord_first", {}, S);
    s_.declare_fun("ord_last", {}, S);
    s_.assert_term(smt::forall({{xn, S}}, lte(smt::sym("ord_first"), x)),
                   "ord_first precedes every atom");
    s_.assert_term(smt::forall({{xn, S}}, lte(x, smt::sym("ord_last"))),
                   "ord_last follows every atom");
    // Immediate successor: nothing strictly between a and b.
    auto between = smt::forall(
        {{zn, S}}, smt::implies(smt::conj({lte(x, z), lte(z, y)}),
                                smt::disj({smt::eq(z, x), smt::eq(z, y)})));
    s_.define_fun("ord_next", {{xn, S}, {yn, S}}, smt::Sort::boolean(),
                  smt::conj({lte(x, y), smt::negate(smt::eq(x, y)), between}));
  }

  smt::TermPtr ord_mem(CoreKind k, const std::vector<smt::TermPtr>& ts) override {
    switch (k) {
      case CoreKind::OrdFirst:
        return smt::eq(ts[0], smt::sym("ord_first"));
      case CoreKind::OrdLast:
        return smt::eq(ts[0], smt::sym("ord_last"));
      case CoreKind::OrdNext:
        return smt::app("ord_next", ts[0], ts[1]);
      case CoreKind::OrdPrev:
        return smt::app("ord_next", ts[1], ts[0]);
      default:
        throw Error(ErrorKind::Internal, "encoder: not an ordering expression");
    }
  }

  smt::TermPtr ord_const(CoreKind k) override {
    return smt::sym(k == CoreKind::OrdFirst ? "ord_first" : "ord_last");
  }

  std::string define_closure(const std::string& base, const CoreExpr& operand,
                             const std::vector<VarDecl>& fvs, SigId top) override {
    smt::Sort S = atom_sort(top);
    std::vector<smt::Sort> argsorts{S, S};
    std::vector<std::pair<std::string, smt::Sort>> fvb;
    std::vector<smt::TermPtr> fvt;
    for (const VarDecl& v : fvs) {
      argsorts.push_back(atom_sort(v.col.top));
      fvb.push_back({var_name(v.id), atom_sort(v.col.top)});
      fvt.push_back(var_term(v.id));
    }
    s_.declare_fun(base, argsorts, smt::Sort::boolean());
    auto tc = [&](smt::TermPtr p, smt::TermPtr q) {
      std::vector<smt::TermPtr> args{std::move(p), std::move(q)};
      args.insert(args.end(), fvt.begin(), fvt.end());
      return smt::app(base, std::move(args));
    };
    std::string an = fresh_name(), bn = fresh_name(), cn = fresh_name();
    auto a = smt::sym(an), b = smt::sym(bn), c = smt::sym(cn);
    std::vector<std::pair<std::string, smt::Sort>> two{{an, S}, {bn, S}};
    two.insert(two.end(), fvb.begin(), fvb.end());
    std::vector<std::pair<std::string, smt::Sort>> three{{an, S}, {bn, S}, {cn, S}};
    three.insert(three.end(), fvb.begin(), fvb.end());

    s_.assert_term(smt::forall(two, smt::implies(mem(operand, {a, b}), tc(a, b))),
                   base + " contains the stepped relation");
    s_.assert_term(
        smt::forall(three, smt::implies(smt::conj({tc(a, b), tc(b, c)}), tc(a, c))),
        base + " is transitive");
    s_.assert_term(
        smt::forall(three, smt::implies(smt::conj({tc(a, b), mem(operand, {b, c})}), tc(a, c))),
        base + " absorbs one more step");
    return base;
  }

  smt::Sort int_sort() const override { return smt::Sort::integer(); }

  smt::TermPtr int_literal(long long v) const override { return smt::int_lit(v); }

  smt::TermPtr int_binop(CoreKind k, smt::TermPtr a, smt::TermPtr b) const override {
    return smt::app(k == CoreKind::IntAdd ? "+" : "-", std::move(a), std::move(b));
  }

  smt::TermPtr int_compare(CmpOp c, smt::TermPtr a, smt::TermPtr b) const override {
    switch (c) {
      case CmpOp::Eq: return smt::eq(std::move(a), std::move(b));
      case CmpOp::Lt: return smt::app("<", std::move(a), std::move(b));
      case CmpOp::Le: return smt::app("<=", std::move(a), std::move(b));
      case CmpOp::Gt: return smt::app(">", std::move(a), std::move(b));
      case CmpOp::Ge: return smt::app(">=", std::move(a), std::move(b));
    }
    throw Error(ErrorKind::Internal, "encoder: unknown comparison");
  }
};

}  // namespace

Encoded encode_unbounded(const Model& m, const CoreExpr& assertion) {
  UnboundedEncoder enc(m);
  return enc.run(assertion);
}

}  // namespace relcheck
