// Bounded backend: every top-level signature draws its atoms from the first
// `scope` values of one bit-vector sort, so satisfiability is decidable and a
// sat answer yields a finite candidate counterexample. Extents are
// uninterpreted subsets of the live values (a run may use fewer atoms than
// the scope allows); only an ordered signature is pinned to the full scope,
// because the ordering names a first and a last atom and steps by one.

#include "encode_core.hpp"
#include "relcheck/diag.hpp"

namespace relcheck {

namespace {

class BoundedEncoder final : public EncoderBase {
 public:
  BoundedEncoder(const Model& m, int scope) : EncoderBase(m), k_(scope) {
    w_ = 1;
    while ((1LL << w_) < k_) w_++;
    exact_ = (1LL << w_) == k_;
    meta_.bounded = true;
    meta_.scope = k_;
    meta_.width = w_;
  }

 private:
  smt::Sort bv() const { return smt::Sort::bitvec(w_); }

  smt::TermPtr live(smt::TermPtr x) const {
    if (exact_) return smt::bool_lit(true);
    return smt::app("bvult", std::move(x), smt::bv_lit(static_cast<unsigned long long>(k_), w_));
  }

  void begin(bool ints_used) override {
    s_.logic = "UFBV";
    std::string head = "bounded check at scope " + std::to_string(k_) + ": atoms are " +
                       std::to_string(w_) + "-bit values";
    if (!exact_) head += " below " + std::to_string(k_);
    s_.comment(head);
    if (ints_used)
      s_.comment("integers are signed " + std::to_string(w_) + "-bit vectors");
  }

  smt::Sort atom_sort(SigId) const override { return bv(); }

  void emit_top(SigId top) override {
    const std::string& fn = meta_.is_fun.at(top);
    if (m_.ordered_sig && *m_.ordered_sig == top) {
      // The ordering names first and last atoms and steps by one, which only
      // makes sense over the full range, so the extent is pinned.
      s_.define_fun(fn, {{"x", bv()}}, smt::Sort::boolean(), live(smt::sym("x")));
      return;
    }
    s_.declare_fun(fn, {bv()}, smt::Sort::boolean());
    if (!exact_) {
      std::string x = fresh_name();
      s_.assert_term(smt::forall({{x, bv()}},
                                 smt::implies(smt::app(fn, smt::sym(x)), live(smt::sym(x)))),
                     m_.sig(top).name + " atoms lie within the scope");
    }
  }

  void emit_ordering() override {
    s_.comment("ordering on " + m_.sig(*m_.ordered_sig).name + ": first = 0, last = " +
               std::to_string(k_ - 1) + ", next adds 1");
  }

  smt::TermPtr ord_mem(CoreKind k, const std::vector<smt::TermPtr>& ts) override {
    switch (k) {
      case CoreKind::OrdFirst:
        return smt::eq(ts[0], smt::bv_lit(0, w_));
      case CoreKind::OrdLast:
        return smt::eq(ts[0], smt::bv_lit(static_cast<unsigned long long>(k_) - 1, w_));
      case CoreKind::OrdNext:
        return smt::conj(
            {smt::eq(ts[1], smt::app("bvadd", ts[0], smt::bv_lit(1, w_))),
             smt::app("bvult", ts[0], smt::bv_lit(static_cast<unsigned long long>(k_) - 1, w_))});
      case CoreKind::OrdPrev:
        return smt::conj(
            {smt::eq(ts[0], smt::app("bvadd", ts[1], smt::bv_lit(1, w_))),
             smt::app("bvult", ts[1], smt::bv_lit(static_cast<unsigned long long>(k_) - 1, w_))});
      default:
        throw Error(ErrorKind::Internal, "encoder: not an ordering expression");
    }
  }

  smt::TermPtr ord_const(CoreKind k) override {
    if (k == CoreKind::OrdFirst) return smt::bv_lit(0, w_);
    return smt::bv_lit(static_cast<unsigned long long>(k_) - 1, w_);
  }

  // Iterative squaring: tier j covers paths of up to 2^j steps, so
  // ceil(log2(scope)) doublings reach every path a scope-sized extent allows.
  std::string define_closure(const std::string& base, const CoreExpr& operand,
                             const std::vector<VarDecl>& fvs, SigId top) override {
    std::vector<std::pair<std::string, smt::Sort>> params;
    std::string an = fresh_name(), bn = fresh_name();
    params.push_back({an, bv()});
    params.push_back({bn, bv()});
    std::vector<smt::TermPtr> fvt;
    for (const VarDecl& v : fvs) {
      params.push_back({var_name(v.id), atom_sort(v.col.top)});
      fvt.push_back(var_term(v.id));
    }
    auto call = [&](const std::string& fn, smt::TermPtr x, smt::TermPtr y) {
      std::vector<smt::TermPtr> args{std::move(x), std::move(y)};
      args.insert(args.end(), fvt.begin(), fvt.end());
      return smt::app(fn, std::move(args));
    };

    auto body0 = mem(operand, {smt::sym(an), smt::sym(bn)});
    s_.define_fun(base + "_0", params, smt::Sort::boolean(), body0);

    int tiers = 0;
    while ((1LL << tiers) < k_) tiers++;
    std::string prev = base + "_0";
    for (int j = 1; j <= tiers; j++) {
      std::string name = base + "_" + std::to_string(j);
      std::string zn = fresh_name();
      auto z = smt::sym(zn);
      auto step = smt::exists(
          {{zn, bv()}},
          smt::conj({is_sig(top, z), call(prev, smt::sym(an), z), call(prev, z, smt::sym(bn))}));
      s_.define_fun(name, params, smt::Sort::boolean(),
                    smt::disj({call(prev, smt::sym(an), smt::sym(bn)), step}));
      prev = name;
    }
    return prev;
  }

  smt::Sort int_sort() const override { return bv(); }

  smt::TermPtr int_literal(long long v) const override {
    return smt::bv_lit(static_cast<unsigned long long>(v), w_);
  }

  smt::TermPtr int_binop(CoreKind k, smt::TermPtr a, smt::TermPtr b) const override {
    return smt::app(k == CoreKind::IntAdd ? "bvadd" : "bvsub", std::move(a), std::move(b));
  }

  smt::TermPtr int_compare(CmpOp c, smt::TermPtr a, smt::TermPtr b) const override {
    switch (c) {
      case CmpOp::Eq: return smt::eq(std::move(a), std::move(b));
      case CmpOp::Lt: return smt::app("bvslt", std::move(a), std::move(b));
      case CmpOp::Le: return smt::app("bvsle", std::move(a), std::move(b));
      case CmpOp::Gt: return smt::app("bvsgt", std::move(a), std::move(b));
      case CmpOp::Ge: return smt::app("bvsge", std::move(a), std::move(b));
    }
    throw Error(ErrorKind::Internal, "encoder: unknown comparison");
  }

  int k_;
  int w_ = 1;
  bool exact_ = false;
};

}  // namespace

Encoded encode_bounded(const Model& m, const CoreExpr& assertion, int scope) {
  if (scope < 1)
    throw Error(ErrorKind::Scope, "scope must be at least 1, got " + std::to_string(scope));
  BoundedEncoder enc(m, scope);
  return enc.run(assertion);
}

}  // namespace relcheck
