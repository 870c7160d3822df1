// Shipped simplification rules, their exhaustive finite validation, the
// hypothesis-driven rewriter, and the transitive-closure induction schema.

#include <algorithm>
#include <functional>
#include <set>

#include "relcheck/diag.hpp"
#include "relcheck/fol.hpp"

namespace relcheck::fol {

namespace {

long long ipow(long long n, int k) {
  long long p = 1;
  for (int i = 0; i < k; i++) p *= n;
  return p;
}

}  // namespace

// ---------------------------------------------------------------------------
// The shipped rules. Pattern variables use negative ids.
// ---------------------------------------------------------------------------

const std::vector<LemmaRule>& shipped_lemmas() {
  static const std::vector<LemmaRule> rules = [] {
    std::vector<LemmaRule> out;

    for (int k : {1, 2}) {
      const std::string ks = std::to_string(k);
      auto r = mk_var(-1, "r", rel_sort(k));
      auto s = mk_var(-2, "s", rel_sort(k));
      auto t = mk_var(-3, "t", rel_sort(k));
      auto tup = mk_var(-4, "t", tuple_sort(k));

      out.push_back({"subsetRefl" + ks, {}, nullptr, nullptr, mk_subset(r, r)});
      out.push_back({"subsetTrans" + ks,
                     {mk_subset(r, s), mk_subset(s, t)},
                     nullptr, nullptr,
                     mk_subset(r, t)});
      out.push_back({"unionSubset" + ks, {mk_subset(r, s)}, mk_union(r, s), s, nullptr});
      out.push_back({"intersectSubset" + ks, {mk_subset(r, s)}, mk_inter(r, s), r, nullptr});
      out.push_back({"diffEmpty" + ks, {mk_subset(r, s)}, mk_diff(r, s), mk_none(k), nullptr});
      out.push_back({"useSubset" + ks,
                     {mk_in(tup, r), mk_subset(r, s)},
                     nullptr, nullptr,
                     mk_in(tup, s)});
    }

    // Join is monotone in each argument; shipped for every join up to arity 2.
    for (auto [i, j] : {std::pair<int, int>{1, 2}, {2, 1}, {2, 2}}) {
      const std::string suffix = std::to_string(i) + "x" + std::to_string(j);
      {
        auto r = mk_var(-1, "r", rel_sort(i));
        auto s = mk_var(-2, "s", rel_sort(i));
        auto t = mk_var(-3, "t", rel_sort(j));
        out.push_back({"joinMonotoneLeft" + suffix,
                       {mk_subset(r, s)},
                       nullptr, nullptr,
                       mk_subset(mk_join(r, t), mk_join(s, t))});
      }
      {
        auto r = mk_var(-1, "r", rel_sort(j));
        auto s = mk_var(-2, "s", rel_sort(j));
        auto t = mk_var(-3, "t", rel_sort(i));
        out.push_back({"joinMonotoneRight" + suffix,
                       {mk_subset(r, s)},
                       nullptr, nullptr,
                       mk_subset(mk_join(t, r), mk_join(t, s))});
      }
    }

    return out;
  }();
  return rules;
}

// ---------------------------------------------------------------------------
// Pattern-variable collection and the closed statement of a rule.
// ---------------------------------------------------------------------------

namespace {

void collect_pattern_vars(const TermPtr& t, std::vector<TermPtr>& out, std::set<int>& seen) {
  if (!t) return;
  if (t->kind == TermKind::Var && t->var_id < 0 && seen.insert(t->var_id).second)
    out.push_back(t);
  for (const TermPtr& k : t->kids) collect_pattern_vars(k, out, seen);
}

void collect_pattern_vars(const FormulaPtr& f, std::vector<TermPtr>& out, std::set<int>& seen) {
  if (!f) return;
  for (const TermPtr& t : f->terms) collect_pattern_vars(t, out, seen);
  for (const FormulaPtr& k : f->kids) collect_pattern_vars(k, out, seen);
}

FormulaPtr rule_conclusion(const LemmaRule& rule) {
  return rule.fact ? rule.fact : mk_eq(rule.lhs, rule.rhs);
}

// Pattern variables in premise-first occurrence order, so that enumerating
// them left to right lets each premise be checked as soon as possible.
std::vector<TermPtr> rule_vars(const LemmaRule& rule) {
  std::vector<TermPtr> vars;
  std::set<int> seen;
  for (const FormulaPtr& p : rule.premises) collect_pattern_vars(p, vars, seen);
  collect_pattern_vars(rule_conclusion(rule), vars, seen);
  return vars;
}

}  // namespace

FormulaPtr lemma_statement(const LemmaRule& rule) {
  FormulaPtr body = rule_conclusion(rule);
  if (!rule.premises.empty()) body = mk_implies(conj(rule.premises), body);
  std::vector<TermPtr> vars = rule_vars(rule);
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = mk_forall(*it, body);
  return body;
}

// ---------------------------------------------------------------------------
// Exhaustive finite validation.
// ---------------------------------------------------------------------------

bool lemma_holds_finitely(const LemmaRule& rule, int max_atoms, std::string* why) {
  const std::vector<TermPtr> vars = rule_vars(rule);
  const FormulaPtr conclusion = rule_conclusion(rule);

  // Premise i can be checked once every variable occurring in it is bound.
  std::vector<int> ready(rule.premises.size(), -1);
  for (size_t p = 0; p < rule.premises.size(); p++) {
    std::vector<TermPtr> pv;
    std::set<int> seen;
    collect_pattern_vars(rule.premises[p], pv, seen);
    for (const TermPtr& v : pv)
      for (size_t i = 0; i < vars.size(); i++)
        if (vars[i]->var_id == v->var_id)
          ready[p] = std::max(ready[p], static_cast<int>(i));
  }

  for (int n = 0; n <= max_atoms; n++) {
    FiniteInterp interp{n, {}};
    FiniteEval ev(interp);

    // A variable-free premise that fails makes the rule vacuous at this size.
    bool vacuous = false;
    for (size_t p = 0; p < rule.premises.size() && !vacuous; p++)
      if (ready[p] < 0 && !ev.formula(rule.premises[p])) vacuous = true;
    if (vacuous) continue;

    std::function<bool(size_t)> assign = [&](size_t vi) -> bool {
      if (vi == vars.size()) return ev.formula(conclusion);
      const Sort& s = vars[vi]->sort;
      const int id = vars[vi]->var_id;
      auto try_value = [&](const FiniteValue& val) -> bool {
        ev.push_binding(id, val);
        bool prems_ok = true;
        for (size_t p = 0; p < rule.premises.size(); p++)
          if (ready[p] == static_cast<int>(vi) && !ev.formula(rule.premises[p])) {
            prems_ok = false;
            break;
          }
        bool ok = !prems_ok || assign(vi + 1);
        ev.pop_binding();
        return ok;
      };
      if (s.kind == Sort::Tuple) {
        for (long long v = 0; v < ipow(n, s.arity); v++)
          if (!try_value({false, v, {}})) return false;
        return true;
      }
      if (s.kind == Sort::Rel) {
        long long cells = ipow(n, s.arity);
        if (cells > 16)
          throw Error(ErrorKind::Scope, "rule variable " + vars[vi]->name +
                                            " is too wide for exhaustive checking");
        uint64_t limit = cells >= 64 ? ~uint64_t{0} : (uint64_t{1} << cells) - 1;
        for (uint64_t bits = 0;; bits++) {
          if (!try_value({true, 0, {s.arity, bits}})) return false;
          if (bits == limit) break;
        }
        return true;
      }
      throw Error(ErrorKind::UnsupportedExpr, "rule variables must be tuples or relations");
    };

    if (!assign(0)) {
      if (why)
        *why = rule.name + " fails on an interpretation with " + std::to_string(n) + " atoms";
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Hypothesis-driven rewriting.
// ---------------------------------------------------------------------------

namespace {

struct RwCtx {
  const std::vector<FormulaPtr>& hyps;
  int budget = 0;
  int steps = 0;
  bool exhausted = false;

  // Claim one rule application; when the budget is spent, mark the result
  // incomplete and leave the redex alone.
  bool can_step() {
    if (steps >= budget) {
      exhausted = true;
      return false;
    }
    steps++;
    return true;
  }
};

bool subset_provable(const TermPtr& a, const TermPtr& b, RwCtx& ctx,
                     std::vector<TermPtr>& visited);

// Derives a containment from reflexivity, a hypothesis, transitive chains of
// hypotheses, and join monotonicity — exactly the shipped derivation rules.
bool subset_provable(const TermPtr& a, const TermPtr& b, RwCtx& ctx,
                     std::vector<TermPtr>& visited) {
  if (equal(a, b)) return true;  // subsetRefl
  for (const TermPtr& v : visited)
    if (equal(v, a)) return false;
  visited.push_back(a);
  for (const FormulaPtr& h : ctx.hyps) {
    if (h->kind != FormulaKind::Subset || !equal(h->terms[0], a)) continue;
    if (equal(h->terms[1], b)) return true;
    if (subset_provable(h->terms[1], b, ctx, visited)) return true;  // subsetTrans
  }
  if (a->kind == TermKind::Join && b->kind == TermKind::Join &&
      a->kids[0]->sort == b->kids[0]->sort && a->kids[1]->sort == b->kids[1]->sort) {
    std::vector<TermPtr> fresh0, fresh1;
    if (subset_provable(a->kids[0], b->kids[0], ctx, fresh0) &&
        subset_provable(a->kids[1], b->kids[1], ctx, fresh1))
      return true;  // joinMonotoneLeft + joinMonotoneRight + subsetTrans
  }
  return false;
}

bool subset_provable(const TermPtr& a, const TermPtr& b, RwCtx& ctx) {
  std::vector<TermPtr> visited;
  return subset_provable(a, b, ctx, visited);
}

// Membership from a hypothesis, widened along provable containments.
bool in_provable(const TermPtr& tuple, const TermPtr& rel, RwCtx& ctx) {
  for (const FormulaPtr& h : ctx.hyps) {
    if (h->kind != FormulaKind::In || !equal(h->terms[0], tuple)) continue;
    if (equal(h->terms[1], rel)) return true;
    if (subset_provable(h->terms[1], rel, ctx)) return true;  // useSubset
  }
  return false;
}

TermPtr rw_term(const TermPtr& t, RwCtx& ctx) {
  TermPtr cur = t;
  if (!t->kids.empty()) {
    bool changed = false;
    std::vector<TermPtr> kids;
    kids.reserve(t->kids.size());
    for (const TermPtr& k : t->kids) {
      kids.push_back(rw_term(k, ctx));
      changed = changed || kids.back().get() != k.get();
    }
    if (changed) {
      auto copy = std::make_shared<Term>(*t);
      copy->kids = std::move(kids);
      cur = copy;
    }
  }
  switch (cur->kind) {
    case TermKind::Union:  // unionSubset
      if (subset_provable(cur->kids[0], cur->kids[1], ctx) && ctx.can_step())
        return cur->kids[1];
      break;
    case TermKind::Inter:  // intersectSubset
      if (subset_provable(cur->kids[0], cur->kids[1], ctx) && ctx.can_step())
        return cur->kids[0];
      break;
    case TermKind::Diff:  // diffEmpty
      if (subset_provable(cur->kids[0], cur->kids[1], ctx) && ctx.can_step())
        return mk_none(cur->sort.arity);
      break;
    default: break;
  }
  return cur;
}

bool truth_of(const FormulaPtr& f, bool* out) {
  if (f->kind != FormulaKind::Truth) return false;
  *out = f->bval;
  return true;
}

FormulaPtr rw_formula(const FormulaPtr& f, RwCtx& ctx) {
  switch (f->kind) {
    case FormulaKind::Truth: return f;
    case FormulaKind::In: {
      TermPtr t0 = rw_term(f->terms[0], ctx);
      TermPtr t1 = rw_term(f->terms[1], ctx);
      if (in_provable(t0, t1, ctx) && ctx.can_step()) return mk_truth(true);
      return t0.get() == f->terms[0].get() && t1.get() == f->terms[1].get()
                 ? f
                 : mk_in(t0, t1);
    }
    case FormulaKind::Subset: {
      TermPtr t0 = rw_term(f->terms[0], ctx);
      TermPtr t1 = rw_term(f->terms[1], ctx);
      if (subset_provable(t0, t1, ctx) && ctx.can_step()) return mk_truth(true);
      return t0.get() == f->terms[0].get() && t1.get() == f->terms[1].get()
                 ? f
                 : mk_subset(t0, t1);
    }
    case FormulaKind::Eq:
    case FormulaKind::Cmp: {
      TermPtr t0 = rw_term(f->terms[0], ctx);
      TermPtr t1 = rw_term(f->terms[1], ctx);
      if (t0.get() == f->terms[0].get() && t1.get() == f->terms[1].get()) return f;
      auto copy = std::make_shared<Formula>(*f);
      copy->terms = {t0, t1};
      return copy;
    }
    case FormulaKind::Not: {
      FormulaPtr a = rw_formula(f->kids[0], ctx);
      bool v;
      if (truth_of(a, &v)) return mk_truth(!v);
      return a.get() == f->kids[0].get() ? f : mk_not(a);
    }
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
    case FormulaKind::Iff: {
      FormulaPtr a = rw_formula(f->kids[0], ctx);
      FormulaPtr b = rw_formula(f->kids[1], ctx);
      bool va, vb;
      bool ka = truth_of(a, &va), kb = truth_of(b, &vb);
      switch (f->kind) {
        case FormulaKind::And:
          if (ka) return va ? b : mk_truth(false);
          if (kb) return vb ? a : mk_truth(false);
          break;
        case FormulaKind::Or:
          if (ka) return va ? mk_truth(true) : b;
          if (kb) return vb ? mk_truth(true) : a;
          break;
        case FormulaKind::Implies:
          if (ka) return va ? b : mk_truth(true);
          if (kb) return vb ? mk_truth(true) : mk_not(a);
          break;
        case FormulaKind::Iff:
          if (ka) return va ? b : mk_not(b);
          if (kb) return vb ? a : mk_not(a);
          break;
        default: break;
      }
      if (a.get() == f->kids[0].get() && b.get() == f->kids[1].get()) return f;
      auto copy = std::make_shared<Formula>(*f);
      copy->kids = {a, b};
      return copy;
    }
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
      FormulaPtr body = rw_formula(f->kids[0], ctx);
      bool v;
      // Domain-independent folds only: atom domains may be empty, so an
      // existential over a constant body is not foldable to the constant.
      if (truth_of(body, &v)) {
        if (f->kind == FormulaKind::Forall && v) return mk_truth(true);
        if (f->kind == FormulaKind::Exists && !v) return mk_truth(false);
      }
      if (body.get() == f->kids[0].get()) return f;
      auto copy = std::make_shared<Formula>(*f);
      copy->kids = {body};
      return copy;
    }
  }
  return f;
}

}  // namespace

RewriteResult rewrite_with_lemmas(const FormulaPtr& f,
                                  const std::vector<FormulaPtr>& hypotheses,
                                  int budget) {
  RwCtx ctx{hypotheses, budget};
  FormulaPtr cur = f;
  while (true) {
    FormulaPtr next = rw_formula(cur, ctx);
    bool done = equal(next, cur) || ctx.exhausted;
    cur = next;
    if (done) break;
  }
  return {cur, ctx.steps, ctx.exhausted};
}

TermRewriteResult rewrite_with_lemmas(const TermPtr& t,
                                      const std::vector<FormulaPtr>& hypotheses,
                                      int budget) {
  RwCtx ctx{hypotheses, budget};
  TermPtr cur = t;
  while (true) {
    TermPtr next = rw_term(cur, ctx);
    bool done = equal(next, cur) || ctx.exhausted;
    cur = next;
    if (done) break;
  }
  return {cur, ctx.steps, ctx.exhausted};
}

// ---------------------------------------------------------------------------
// Induction schema for transitive closure.
// ---------------------------------------------------------------------------

namespace {

void scan_names(const TermPtr& t, int& max_id, std::set<std::string>& names) {
  if (!t) return;
  if (t->kind == TermKind::Var) {
    max_id = std::max(max_id, t->var_id);
    names.insert(t->name);
  }
  for (const TermPtr& k : t->kids) scan_names(k, max_id, names);
}

void scan_names(const FormulaPtr& f, int& max_id, std::set<std::string>& names) {
  if (!f) return;
  scan_names(f->binder, max_id, names);
  for (const TermPtr& t : f->terms) scan_names(t, max_id, names);
  for (const FormulaPtr& k : f->kids) scan_names(k, max_id, names);
}

}  // namespace

ClosureInduction closure_induction(const FormulaPtr& phi,
                                   const std::vector<TermPtr>& params,
                                   const TermPtr& r) {
  if (params.size() != 2)
    throw Error(ErrorKind::Arity,
                "closure induction takes a property of exactly two atom parameters, got " +
                    std::to_string(params.size()));
  for (const TermPtr& p : params)
    if (!p || p->kind != TermKind::Var || !(p->sort == tuple_sort(1)))
      throw Error(ErrorKind::Arity, "closure induction parameters must be atom variables");
  if (params[0]->var_id == params[1]->var_id)
    throw Error(ErrorKind::Arity, "closure induction parameters must be distinct");
  if (!r || !(r->sort == rel_sort(2)))
    throw Error(ErrorKind::Arity, "closure induction needs a binary relation");

  int max_id = 0;
  std::set<std::string> used;
  scan_names(phi, max_id, used);
  scan_names(r, max_id, used);
  auto fresh = [&](std::string want, int id) {
    while (used.count(want)) want += "_";
    used.insert(want);
    return mk_var(id, want, tuple_sort(1));
  };
  TermPtr a = fresh("a", max_id + 1);
  TermPtr b = fresh("b", max_id + 2);
  TermPtr c = fresh("c", max_id + 3);

  auto phi_at = [&](const TermPtr& x, const TermPtr& y) {
    return subst(phi, {{params[0]->var_id, x}, {params[1]->var_id, y}});
  };

  ClosureInduction out;
  out.base = mk_forall(a, mk_forall(b, mk_implies(mk_in(mk_tuple({a, b}), r),
                                                  phi_at(a, b))));
  out.step = mk_forall(
      a, mk_forall(b, mk_forall(c, mk_implies(mk_and(mk_and(mk_in(mk_tuple({a, b}), r),
                                                            mk_in(mk_tuple({b, c}),
                                                                  mk_trans_clos(r))),
                                                     phi_at(b, c)),
                                              phi_at(a, c)))));
  out.conclusion = mk_forall(
      a, mk_forall(b, mk_implies(mk_in(mk_tuple({a, b}), mk_trans_clos(r)),
                                 phi_at(a, b))));
  return out;
}

}  // namespace relcheck::fol
