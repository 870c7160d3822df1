// Exhaustive evaluator for the relational theory over small universes.
// Relations are 64-bit tables indexed row-major, which caps usable sizes at
// atoms^arity <= 64 — plenty for the lemma and schema soundness sweeps.

#include <algorithm>

#include "relcheck/diag.hpp"
#include "relcheck/fol.hpp"

namespace relcheck::fol {

namespace {

long long ipow(long long n, int k) {
  long long p = 1;
  for (int i = 0; i < k; i++) p *= n;
  return p;
}

// Number of cells in an arity-k table over n atoms, guarded for the 64-bit
// representation.
long long cells_of(int atoms, int arity) {
  long long c = ipow(atoms, arity);
  if (c > 64)
    throw Error(ErrorKind::Scope,
                "relation of arity " + std::to_string(arity) + " over " +
                    std::to_string(atoms) + " atoms exceeds the 64-bit table evaluator");
  return c;
}

uint64_t mask_of(long long cells) {
  return cells >= 64 ? ~uint64_t{0} : (uint64_t{1} << cells) - 1;
}

uint64_t transitive_closure_bits(uint64_t bits, int n) {
  for (int k = 0; k < n; k++)
    for (int i = 0; i < n; i++) {
      if (!(bits >> (i * n + k) & 1)) continue;
      for (int j = 0; j < n; j++)
        if (bits >> (k * n + j) & 1) bits |= uint64_t{1} << (i * n + j);
    }
  return bits;
}

}  // namespace

const FiniteValue& FiniteEval::lookup(int id, const std::string& name) const {
  for (auto it = env_.rbegin(); it != env_.rend(); ++it)
    if (it->first == id) return it->second;
  throw Error(ErrorKind::Name, "unbound variable " + name + " in finite evaluation");
}

long long FiniteEval::integer(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::IntLit: return t->ival;
    case TermKind::IntAdd: return integer(t->kids[0]) + integer(t->kids[1]);
    case TermKind::IntSub: return integer(t->kids[0]) - integer(t->kids[1]);
    case TermKind::Var: return lookup(t->var_id, t->name).num;
    default:
      throw Error(ErrorKind::UnsupportedExpr,
                  "term " + to_text(t) + " has no finite evaluation");
  }
}

long long FiniteEval::tuple(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Var: return lookup(t->var_id, t->name).num;
    case TermKind::TupleMk: {
      long long idx = 0;
      for (const TermPtr& k : t->kids) idx = idx * interp_.atoms + tuple(k);
      return idx;
    }
    case TermKind::OrdAt:
      throw Error(ErrorKind::UnsupportedExpr,
                  "ordering terms have no finite evaluation");
    default:
      throw Error(ErrorKind::Internal, "not a tuple term: " + to_text(t));
  }
}

FiniteRel FiniteEval::rel(const TermPtr& t) {
  const int n = interp_.atoms;
  const int k = t->sort.arity;
  switch (t->kind) {
    case TermKind::Var: {
      const FiniteValue& v = lookup(t->var_id, t->name);
      if (!v.is_rel) throw Error(ErrorKind::Internal, "variable " + t->name + " is not a relation");
      return v.rel;
    }
    case TermKind::RelConst: {
      auto it = interp_.consts.find(t->name);
      if (it == interp_.consts.end())
        throw Error(ErrorKind::Name, "no interpretation for constant " + t->name);
      return it->second;
    }
    case TermKind::None: return {k, 0};
    case TermKind::Sing: {
      cells_of(n, 1);
      return {1, n == 0 ? uint64_t{0} : uint64_t{1} << tuple(t->kids[0])};
    }
    case TermKind::Union: {
      FiniteRel a = rel(t->kids[0]), b = rel(t->kids[1]);
      return {k, a.bits | b.bits};
    }
    case TermKind::Diff: {
      FiniteRel a = rel(t->kids[0]), b = rel(t->kids[1]);
      return {k, a.bits & ~b.bits & mask_of(cells_of(n, k))};
    }
    case TermKind::Inter: {
      FiniteRel a = rel(t->kids[0]), b = rel(t->kids[1]);
      return {k, a.bits & b.bits};
    }
    case TermKind::Prod: {
      FiniteRel a = rel(t->kids[0]), b = rel(t->kids[1]);
      cells_of(n, k);
      long long ca = ipow(n, a.arity), cb = ipow(n, b.arity);
      uint64_t out = 0;
      for (long long i = 0; i < ca; i++) {
        if (!(a.bits >> i & 1)) continue;
        for (long long j = 0; j < cb; j++)
          if (b.bits >> j & 1) out |= uint64_t{1} << (i * cb + j);
      }
      return {k, out};
    }
    case TermKind::Join: {
      FiniteRel a = rel(t->kids[0]), b = rel(t->kids[1]);
      cells_of(n, std::max({a.arity, b.arity, k}));
      long long ca = ipow(n, a.arity - 1);  // left columns kept
      long long cb = ipow(n, b.arity - 1);  // right columns kept
      uint64_t out = 0;
      for (long long i = 0; i < ca; i++)
        for (long long j = 0; j < cb; j++)
          for (int z = 0; z < n; z++) {
            if ((a.bits >> (i * n + z) & 1) && (b.bits >> (z * cb + j) & 1)) {
              out |= uint64_t{1} << (i * cb + j);
              break;
            }
          }
      return {k, out};
    }
    case TermKind::TransClos: {
      FiniteRel r = rel(t->kids[0]);
      auto it = closure_memo_.find(r.bits);
      if (it != closure_memo_.end()) return {2, it->second};
      uint64_t tc = transitive_closure_bits(r.bits, n);
      closure_memo_.emplace(r.bits, tc);
      return {2, tc};
    }
    case TermKind::ReflClos: {
      FiniteRel r = rel(t->kids[0]);
      FiniteRel w = rel(t->kids[1]);
      uint64_t out = transitive_closure_bits(r.bits, n);
      for (int a = 0; a < n; a++)
        if (w.bits >> a & 1) out |= uint64_t{1} << (a * n + a);
      return {2, out};
    }
    default:
      throw Error(ErrorKind::Internal, "not a relation term: " + to_text(t));
  }
}

bool FiniteEval::formula(const FormulaPtr& f) {
  switch (f->kind) {
    case FormulaKind::Truth: return f->bval;
    case FormulaKind::In: {
      cells_of(interp_.atoms, f->terms[0]->sort.arity);
      long long idx = tuple(f->terms[0]);
      return rel(f->terms[1]).bits >> idx & 1;
    }
    case FormulaKind::Eq: {
      const Sort& s = f->terms[0]->sort;
      if (s.kind == Sort::Int) return integer(f->terms[0]) == integer(f->terms[1]);
      if (s.kind == Sort::Tuple) return tuple(f->terms[0]) == tuple(f->terms[1]);
      return rel(f->terms[0]) == rel(f->terms[1]);
    }
    case FormulaKind::Subset: {
      FiniteRel a = rel(f->terms[0]), b = rel(f->terms[1]);
      return (a.bits & ~b.bits) == 0;
    }
    case FormulaKind::Cmp: {
      long long a = integer(f->terms[0]), b = integer(f->terms[1]);
      switch (f->cmp) {
        case CmpOp::Lt: return a < b;
        case CmpOp::Le: return a <= b;
        case CmpOp::Gt: return a > b;
        case CmpOp::Ge: return a >= b;
        default: return a == b;
      }
    }
    case FormulaKind::Not: return !formula(f->kids[0]);
    case FormulaKind::And: return formula(f->kids[0]) && formula(f->kids[1]);
    case FormulaKind::Or: return formula(f->kids[0]) || formula(f->kids[1]);
    case FormulaKind::Implies: return !formula(f->kids[0]) || formula(f->kids[1]);
    case FormulaKind::Iff: return formula(f->kids[0]) == formula(f->kids[1]);
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
      const bool is_forall = f->kind == FormulaKind::Forall;
      const Sort& s = f->binder->sort;
      const int id = f->binder->var_id;
      if (s.kind == Sort::Int)
        throw Error(ErrorKind::UnsupportedExpr,
                    "integer quantifiers have no finite evaluation");
      if (s.kind == Sort::Tuple) {
        long long count = ipow(interp_.atoms, s.arity);
        for (long long v = 0; v < count; v++) {
          push_binding(id, {false, v, {}});
          bool ok = formula(f->kids[0]);
          pop_binding();
          if (ok != is_forall) return !is_forall;
        }
        return is_forall;
      }
      long long cells = cells_of(interp_.atoms, s.arity);
      if (cells > 16)
        throw Error(ErrorKind::Scope,
                    "quantifier over " + sort_name(s) + " would enumerate 2^" +
                        std::to_string(cells) + " tables at " +
                        std::to_string(interp_.atoms) + " atoms");
      for (uint64_t bits = 0; bits <= mask_of(cells); bits++) {
        push_binding(id, {true, 0, {s.arity, bits}});
        bool ok = formula(f->kids[0]);
        pop_binding();
        if (ok != is_forall) return !is_forall;
        if (cells == 0) break;
      }
      return is_forall;
    }
  }
  throw Error(ErrorKind::Internal, "unreachable formula kind");
}

bool holds_in_all_sizes(const FormulaPtr& f, int max_atoms, std::string* why) {
  for (int n = 0; n <= max_atoms; n++) {
    FiniteInterp interp{n, {}};
    FiniteEval ev(interp);
    if (!ev.formula(f)) {
      if (why) *why = "fails on an interpretation with " + std::to_string(n) + " atoms";
      return false;
    }
  }
  return true;
}

}  // namespace relcheck::fol
