// Term and formula builders for the relational first-order theory, their
// text rendering, and the tier-by-tier theory generator.

#include <algorithm>
#include <sstream>

#include "relcheck/diag.hpp"
#include "relcheck/fol.hpp"

namespace relcheck::fol {

// ---------------------------------------------------------------------------
// Sorts.
// ---------------------------------------------------------------------------

Sort int_sort() { return {Sort::Int, 1}; }

Sort tuple_sort(int arity) {
  if (arity < 1) throw Error(ErrorKind::Internal, "tuple sort needs arity >= 1");
  return {Sort::Tuple, arity};
}

Sort rel_sort(int arity) {
  if (arity < 1) throw Error(ErrorKind::Internal, "relation sort needs arity >= 1");
  return {Sort::Rel, arity};
}

std::string sort_name(const Sort& s) {
  switch (s.kind) {
    case Sort::Int: return "Int";
    case Sort::Tuple: return s.arity == 1 ? "Atom" : "Tuple" + std::to_string(s.arity);
    case Sort::Rel: return "Rel" + std::to_string(s.arity);
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Term builders.
// ---------------------------------------------------------------------------

namespace {

TermPtr make_term(TermKind k, Sort sort, std::vector<TermPtr> kids) {
  auto t = std::make_shared<Term>();
  t->kind = k;
  t->sort = sort;
  t->kids = std::move(kids);
  return t;
}

void want(const TermPtr& t, const Sort& s, const char* what) {
  if (!t) throw Error(ErrorKind::Internal, std::string(what) + ": missing operand");
  if (!(t->sort == s))
    throw Error(ErrorKind::Internal, std::string(what) + ": expected " + sort_name(s) +
                                         ", got " + sort_name(t->sort));
}

void want_rel(const TermPtr& t, const char* what) {
  if (!t || t->sort.kind != Sort::Rel)
    throw Error(ErrorKind::Internal, std::string(what) + ": expected a relation operand");
}

void want_int(const TermPtr& t, const char* what) { want(t, int_sort(), what); }

}  // namespace

TermPtr mk_var(int id, const std::string& name, const Sort& sort) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Var;
  t->sort = sort;
  t->var_id = id;
  t->name = name;
  return t;
}

TermPtr mk_int_lit(long long v) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::IntLit;
  t->sort = int_sort();
  t->ival = v;
  return t;
}

TermPtr mk_int_add(TermPtr a, TermPtr b) {
  want_int(a, "+"); want_int(b, "+");
  return make_term(TermKind::IntAdd, int_sort(), {std::move(a), std::move(b)});
}

TermPtr mk_int_sub(TermPtr a, TermPtr b) {
  want_int(a, "-"); want_int(b, "-");
  return make_term(TermKind::IntSub, int_sort(), {std::move(a), std::move(b)});
}

TermPtr mk_ord_at(TermPtr index) {
  want_int(index, "ordAt");
  return make_term(TermKind::OrdAt, tuple_sort(1), {std::move(index)});
}

TermPtr mk_rel_const(const std::string& name, int arity) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::RelConst;
  t->sort = rel_sort(arity);
  t->name = name;
  return t;
}

TermPtr mk_sing(TermPtr atom) {
  want(atom, tuple_sort(1), "sing");
  return make_term(TermKind::Sing, rel_sort(1), {std::move(atom)});
}

TermPtr mk_tuple(std::vector<TermPtr> atoms) {
  if (atoms.size() < 2)
    throw Error(ErrorKind::Internal, "tuple constructors take two or more atoms");
  for (const TermPtr& a : atoms) want(a, tuple_sort(1), "tuple constructor");
  int k = static_cast<int>(atoms.size());
  return make_term(TermKind::TupleMk, tuple_sort(k), std::move(atoms));
}

TermPtr mk_none(int arity) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::None;
  t->sort = rel_sort(arity);
  return t;
}

namespace {
TermPtr mk_same_arity(TermKind k, TermPtr a, TermPtr b, const char* what) {
  want_rel(a, what); want_rel(b, what);
  if (a->sort.arity != b->sort.arity)
    throw Error(ErrorKind::Internal, std::string(what) + ": operand arities differ");
  Sort s = a->sort;
  return make_term(k, s, {std::move(a), std::move(b)});
}
}  // namespace

TermPtr mk_union(TermPtr a, TermPtr b) { return mk_same_arity(TermKind::Union, std::move(a), std::move(b), "union"); }
TermPtr mk_diff(TermPtr a, TermPtr b) { return mk_same_arity(TermKind::Diff, std::move(a), std::move(b), "diff"); }
TermPtr mk_inter(TermPtr a, TermPtr b) { return mk_same_arity(TermKind::Inter, std::move(a), std::move(b), "inter"); }

TermPtr mk_prod(TermPtr a, TermPtr b) {
  want_rel(a, "prod"); want_rel(b, "prod");
  int k = a->sort.arity + b->sort.arity;
  return make_term(TermKind::Prod, rel_sort(k), {std::move(a), std::move(b)});
}

TermPtr mk_join(TermPtr a, TermPtr b) {
  want_rel(a, "join"); want_rel(b, "join");
  int k = a->sort.arity + b->sort.arity - 2;
  if (k < 1) throw Error(ErrorKind::Internal, "join of two unary relations has no columns");
  return make_term(TermKind::Join, rel_sort(k), {std::move(a), std::move(b)});
}

TermPtr mk_trans_clos(TermPtr r) {
  want(r, rel_sort(2), "transClos");
  return make_term(TermKind::TransClos, rel_sort(2), {std::move(r)});
}

TermPtr mk_refl_clos(TermPtr r, TermPtr within) {
  want(r, rel_sort(2), "reflClos");
  want(within, rel_sort(1), "reflClos");
  return make_term(TermKind::ReflClos, rel_sort(2), {std::move(r), std::move(within)});
}

// ---------------------------------------------------------------------------
// Formula builders.
// ---------------------------------------------------------------------------

namespace {
std::shared_ptr<Formula> make_formula(FormulaKind k) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  return f;
}
}  // namespace

FormulaPtr mk_truth(bool v) {
  auto f = make_formula(FormulaKind::Truth);
  f->bval = v;
  return f;
}

FormulaPtr mk_in(TermPtr tuple, TermPtr rel) {
  if (!tuple || tuple->sort.kind != Sort::Tuple)
    throw Error(ErrorKind::Internal, "in: first operand must be a tuple");
  want_rel(rel, "in");
  if (tuple->sort.arity != rel->sort.arity)
    throw Error(ErrorKind::Internal, "in: tuple and relation arities differ");
  auto f = make_formula(FormulaKind::In);
  f->terms = {std::move(tuple), std::move(rel)};
  return f;
}

FormulaPtr mk_eq(TermPtr a, TermPtr b) {
  if (!a || !b || !(a->sort == b->sort))
    throw Error(ErrorKind::Internal, "=: operand sorts differ");
  auto f = make_formula(FormulaKind::Eq);
  f->terms = {std::move(a), std::move(b)};
  return f;
}

FormulaPtr mk_subset(TermPtr r, TermPtr s) {
  want_rel(r, "subset"); want_rel(s, "subset");
  if (r->sort.arity != s->sort.arity)
    throw Error(ErrorKind::Internal, "subset: operand arities differ");
  auto f = make_formula(FormulaKind::Subset);
  f->terms = {std::move(r), std::move(s)};
  return f;
}

FormulaPtr mk_cmp(CmpOp op, TermPtr a, TermPtr b) {
  if (op == CmpOp::Eq) return mk_eq(std::move(a), std::move(b));
  want_int(a, "comparison"); want_int(b, "comparison");
  auto f = make_formula(FormulaKind::Cmp);
  f->cmp = op;
  f->terms = {std::move(a), std::move(b)};
  return f;
}

FormulaPtr mk_not(FormulaPtr a) {
  auto f = make_formula(FormulaKind::Not);
  f->kids = {std::move(a)};
  return f;
}

namespace {
FormulaPtr mk_bin(FormulaKind k, FormulaPtr a, FormulaPtr b) {
  auto f = make_formula(k);
  f->kids = {std::move(a), std::move(b)};
  return f;
}
}  // namespace

FormulaPtr mk_and(FormulaPtr a, FormulaPtr b) { return mk_bin(FormulaKind::And, std::move(a), std::move(b)); }
FormulaPtr mk_or(FormulaPtr a, FormulaPtr b) { return mk_bin(FormulaKind::Or, std::move(a), std::move(b)); }
FormulaPtr mk_implies(FormulaPtr a, FormulaPtr b) { return mk_bin(FormulaKind::Implies, std::move(a), std::move(b)); }
FormulaPtr mk_iff(FormulaPtr a, FormulaPtr b) { return mk_bin(FormulaKind::Iff, std::move(a), std::move(b)); }

namespace {
FormulaPtr mk_quant(FormulaKind k, TermPtr var, FormulaPtr body) {
  if (!var || var->kind != TermKind::Var)
    throw Error(ErrorKind::Internal, "quantifier binder must be a variable");
  auto f = make_formula(k);
  f->binder = std::move(var);
  f->kids = {std::move(body)};
  return f;
}
}  // namespace

FormulaPtr mk_forall(TermPtr var, FormulaPtr body) { return mk_quant(FormulaKind::Forall, std::move(var), std::move(body)); }
FormulaPtr mk_exists(TermPtr var, FormulaPtr body) { return mk_quant(FormulaKind::Exists, std::move(var), std::move(body)); }

FormulaPtr conj(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) return mk_truth(true);
  FormulaPtr acc = fs[0];
  for (size_t i = 1; i < fs.size(); i++) acc = mk_and(acc, fs[i]);
  return acc;
}

// ---------------------------------------------------------------------------
// Text rendering.
// ---------------------------------------------------------------------------

namespace {

// Operator symbol with its arity suffix, e.g. union2, prod1x2, join2x2.
std::string op_symbol(const Term& t) {
  auto a = [&](size_t i) { return std::to_string(t.kids[i]->sort.arity); };
  switch (t.kind) {
    case TermKind::Sing: return "sing";
    case TermKind::None: return "none" + std::to_string(t.sort.arity);
    case TermKind::Union: return "union" + a(0);
    case TermKind::Diff: return "diff" + a(0);
    case TermKind::Inter: return "inter" + a(0);
    case TermKind::Prod: return "prod" + a(0) + "x" + a(1);
    case TermKind::Join: return "join" + a(0) + "x" + a(1);
    case TermKind::TransClos: return "transClos";
    case TermKind::ReflClos: return "reflClos";
    default: break;
  }
  return "?";
}

std::string ctor_symbol(int arity) {
  if (arity == 2) return "binary";
  if (arity == 3) return "ternary";
  return "tuple" + std::to_string(arity);
}

void render(const TermPtr& t, std::ostream& out) {
  switch (t->kind) {
    case TermKind::Var: out << t->name; return;
    case TermKind::IntLit: out << t->ival; return;
    case TermKind::IntAdd:
      out << "("; render(t->kids[0], out); out << " + "; render(t->kids[1], out); out << ")";
      return;
    case TermKind::IntSub:
      out << "("; render(t->kids[0], out); out << " - "; render(t->kids[1], out); out << ")";
      return;
    case TermKind::OrdAt:
      out << "ordAt("; render(t->kids[0], out); out << ")";
      return;
    case TermKind::RelConst: out << t->name; return;
    case TermKind::None: out << op_symbol(*t); return;
    case TermKind::TupleMk: {
      out << ctor_symbol(t->sort.arity) << "(";
      for (size_t i = 0; i < t->kids.size(); i++) {
        if (i) out << ", ";
        render(t->kids[i], out);
      }
      out << ")";
      return;
    }
    default: {
      out << op_symbol(*t) << "(";
      for (size_t i = 0; i < t->kids.size(); i++) {
        if (i) out << ", ";
        render(t->kids[i], out);
      }
      out << ")";
      return;
    }
  }
}

void render(const FormulaPtr& f, std::ostream& out) {
  switch (f->kind) {
    case FormulaKind::Truth: out << (f->bval ? "true" : "false"); return;
    case FormulaKind::In:
      out << "in("; render(f->terms[0], out); out << ", "; render(f->terms[1], out); out << ")";
      return;
    case FormulaKind::Eq:
      out << "("; render(f->terms[0], out); out << " = "; render(f->terms[1], out); out << ")";
      return;
    case FormulaKind::Subset:
      out << "subset" << f->terms[0]->sort.arity << "(";
      render(f->terms[0], out); out << ", "; render(f->terms[1], out); out << ")";
      return;
    case FormulaKind::Cmp: {
      const char* op = f->cmp == CmpOp::Lt ? "<" : f->cmp == CmpOp::Le ? "<="
                       : f->cmp == CmpOp::Gt ? ">" : ">=";
      out << "("; render(f->terms[0], out); out << " " << op << " ";
      render(f->terms[1], out); out << ")";
      return;
    }
    case FormulaKind::Not: out << "!"; render(f->kids[0], out); return;
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
    case FormulaKind::Iff: {
      const char* op = f->kind == FormulaKind::And ? " & "
                       : f->kind == FormulaKind::Or ? " | "
                       : f->kind == FormulaKind::Implies ? " => " : " <=> ";
      out << "("; render(f->kids[0], out); out << op; render(f->kids[1], out); out << ")";
      return;
    }
    case FormulaKind::Forall:
    case FormulaKind::Exists:
      out << (f->kind == FormulaKind::Forall ? "forall " : "exists ")
          << f->binder->name << " : " << sort_name(f->binder->sort) << " . ";
      render(f->kids[0], out);
      return;
  }
}

}  // namespace

std::string to_text(const TermPtr& t) {
  std::ostringstream out;
  render(t, out);
  return out.str();
}

std::string to_text(const FormulaPtr& f) {
  std::ostringstream out;
  render(f, out);
  return out.str();
}

// ---------------------------------------------------------------------------
// Equality and substitution.
// ---------------------------------------------------------------------------

bool equal(const TermPtr& a, const TermPtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || !(a->sort == b->sort)) return false;
  if (a->var_id != b->var_id || a->name != b->name || a->ival != b->ival) return false;
  if (a->kids.size() != b->kids.size()) return false;
  for (size_t i = 0; i < a->kids.size(); i++)
    if (!equal(a->kids[i], b->kids[i])) return false;
  return true;
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->bval != b->bval || a->cmp != b->cmp) return false;
  if (!equal(a->binder, b->binder)) return false;
  if (a->terms.size() != b->terms.size() || a->kids.size() != b->kids.size()) return false;
  for (size_t i = 0; i < a->terms.size(); i++)
    if (!equal(a->terms[i], b->terms[i])) return false;
  for (size_t i = 0; i < a->kids.size(); i++)
    if (!equal(a->kids[i], b->kids[i])) return false;
  return true;
}

TermPtr subst(const TermPtr& t, const std::map<int, TermPtr>& env) {
  if (t->kind == TermKind::Var) {
    auto it = env.find(t->var_id);
    if (it == env.end()) return t;
    if (!(it->second->sort == t->sort))
      throw Error(ErrorKind::Internal, "substitution changes the sort of " + t->name);
    return it->second;
  }
  bool changed = false;
  std::vector<TermPtr> kids;
  kids.reserve(t->kids.size());
  for (const TermPtr& k : t->kids) {
    kids.push_back(subst(k, env));
    changed = changed || kids.back().get() != k.get();
  }
  if (!changed) return t;
  auto copy = std::make_shared<Term>(*t);
  copy->kids = std::move(kids);
  return copy;
}

FormulaPtr subst(const FormulaPtr& f, const std::map<int, TermPtr>& env) {
  if (f->binder && env.count(f->binder->var_id))
    throw Error(ErrorKind::Internal,
                "substitution collides with bound variable " + f->binder->name);
  bool changed = false;
  std::vector<TermPtr> terms;
  terms.reserve(f->terms.size());
  for (const TermPtr& t : f->terms) {
    terms.push_back(subst(t, env));
    changed = changed || terms.back().get() != t.get();
  }
  std::vector<FormulaPtr> kids;
  kids.reserve(f->kids.size());
  for (const FormulaPtr& k : f->kids) {
    kids.push_back(subst(k, env));
    changed = changed || kids.back().get() != k.get();
  }
  if (!changed) return f;
  auto copy = std::make_shared<Formula>(*f);
  copy->terms = std::move(terms);
  copy->kids = std::move(kids);
  return copy;
}

// ---------------------------------------------------------------------------
// Theory generation.
// ---------------------------------------------------------------------------

namespace {

// Helpers for axiom formulas. Variable ids are local to each closed axiom.
struct AxiomVars {
  int next = 0;
  TermPtr fresh(const std::string& name, const Sort& s) { return mk_var(next++, name, s); }
};

// x1..xk atom variables named x1..xk (just "x" when k is 1).
std::vector<TermPtr> atom_row(AxiomVars& v, int k, const std::string& stem) {
  std::vector<TermPtr> xs;
  for (int i = 0; i < k; i++)
    xs.push_back(v.fresh(k == 1 ? stem : stem + std::to_string(i + 1), tuple_sort(1)));
  return xs;
}

// The tuple term for a row of atom variables (a lone atom when k is 1).
TermPtr row_tuple(const std::vector<TermPtr>& xs) {
  if (xs.size() == 1) return xs[0];
  return mk_tuple(xs);
}

FormulaPtr close_forall(const std::vector<TermPtr>& vars, FormulaPtr body) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = mk_forall(*it, body);
  return body;
}

std::string rel_sig(int k) { return "Rel" + std::to_string(k); }

// union/diff/inter defining axiom at arity k.
Axiom setop_axiom(TermKind op, const std::string& sym, int k) {
  AxiomVars v;
  TermPtr r = v.fresh("r", rel_sort(k));
  TermPtr s = v.fresh("s", rel_sort(k));
  TermPtr t = v.fresh("t", tuple_sort(k));
  TermPtr applied = op == TermKind::Union ? mk_union(r, s)
                    : op == TermKind::Diff ? mk_diff(r, s)
                                           : mk_inter(r, s);
  FormulaPtr in_r = mk_in(t, r);
  FormulaPtr in_s = mk_in(t, s);
  FormulaPtr rhs = op == TermKind::Union ? mk_or(in_r, in_s)
                   : op == TermKind::Diff ? mk_and(in_r, mk_not(in_s))
                                          : mk_and(in_r, in_s);
  FormulaPtr body = mk_iff(mk_in(t, applied), rhs);
  return {sym + "-def", close_forall({r, s, t}, body)};
}

}  // namespace

Theory build_theory(int max_arity) {
  if (max_arity < 1)
    throw Error(ErrorKind::Internal, "theory needs at least arity 1");
  Theory th;
  th.max_arity = max_arity;

  for (int k = 1; k <= max_arity; k++)
    th.sort_lines.push_back((k == 1 ? std::string("Atom") : "Tuple" + std::to_string(k)) +
                            " <: Tuple");
  for (int k = 1; k <= max_arity; k++)
    th.sort_lines.push_back(rel_sig(k) + " <: Relation");

  for (int k = 1; k <= max_arity; k++) {
    const std::string tk = sort_name(tuple_sort(k));

    // Constructor: image covers the whole tuple sort, and applications are
    // equal exactly when all parameters are.
    if (k >= 2) {
      std::string args;
      for (int i = 0; i < k; i++) args += i ? " x Atom" : "Atom";
      th.constructors.push_back({ctor_symbol(k), args + " -> " + tk});

      {
        AxiomVars v;
        TermPtr t = v.fresh("t", tuple_sort(k));
        std::vector<TermPtr> xs = atom_row(v, k, "a");
        FormulaPtr body = mk_eq(t, mk_tuple(xs));
        for (auto it = xs.rbegin(); it != xs.rend(); ++it) body = mk_exists(*it, body);
        th.axioms.push_back({ctor_symbol(k) + "-image", close_forall({t}, body)});
      }
      {
        AxiomVars v;
        std::vector<TermPtr> as = atom_row(v, k, "a");
        std::vector<TermPtr> bs = atom_row(v, k, "b");
        std::vector<FormulaPtr> eqs;
        for (int i = 0; i < k; i++) eqs.push_back(mk_eq(as[i], bs[i]));
        FormulaPtr body = mk_iff(mk_eq(mk_tuple(as), mk_tuple(bs)), conj(eqs));
        std::vector<TermPtr> all = as;
        all.insert(all.end(), bs.begin(), bs.end());
        th.axioms.push_back({ctor_symbol(k) + "-injective", close_forall(all, body)});
      }
    }

    // Empty relation.
    th.operators.push_back({"none" + std::to_string(k), rel_sig(k)});
    {
      AxiomVars v;
      TermPtr t = v.fresh("t", tuple_sort(k));
      th.axioms.push_back({"none" + std::to_string(k) + "-def",
                           close_forall({t}, mk_not(mk_in(t, mk_none(k))))});
    }

    // Singleton.
    if (k == 1) {
      th.operators.push_back({"sing", "Atom -> Rel1"});
      AxiomVars v;
      TermPtr x = v.fresh("x", tuple_sort(1));
      TermPtr a = v.fresh("a", tuple_sort(1));
      th.axioms.push_back(
          {"sing-def",
           close_forall({x, a}, mk_iff(mk_in(a, mk_sing(x)), mk_eq(a, x)))});
    }

    // Set operators.
    const std::string ks = std::to_string(k);
    th.operators.push_back({"union" + ks, rel_sig(k) + " x " + rel_sig(k) + " -> " + rel_sig(k)});
    th.axioms.push_back(setop_axiom(TermKind::Union, "union" + ks, k));
    th.operators.push_back({"diff" + ks, rel_sig(k) + " x " + rel_sig(k) + " -> " + rel_sig(k)});
    th.axioms.push_back(setop_axiom(TermKind::Diff, "diff" + ks, k));
    th.operators.push_back({"inter" + ks, rel_sig(k) + " x " + rel_sig(k) + " -> " + rel_sig(k)});
    th.axioms.push_back(setop_axiom(TermKind::Inter, "inter" + ks, k));

    // Containment predicate and extensionality.
    th.operators.push_back({"subset" + ks, rel_sig(k) + " x " + rel_sig(k) + " -> Bool"});
    {
      AxiomVars v;
      TermPtr r = v.fresh("r", rel_sort(k));
      TermPtr s = v.fresh("s", rel_sort(k));
      TermPtr t = v.fresh("t", tuple_sort(k));
      FormulaPtr body = mk_iff(mk_subset(r, s),
                               mk_forall(t, mk_implies(mk_in(t, r), mk_in(t, s))));
      th.axioms.push_back({"subset" + ks + "-def", close_forall({r, s}, body)});
    }
    {
      AxiomVars v;
      TermPtr r = v.fresh("r", rel_sort(k));
      TermPtr s = v.fresh("s", rel_sort(k));
      TermPtr t = v.fresh("t", tuple_sort(k));
      FormulaPtr same = mk_forall(t, mk_iff(mk_in(t, r), mk_in(t, s)));
      th.axioms.push_back({"rel" + ks + "-extensional",
                           close_forall({r, s}, mk_implies(same, mk_eq(r, s)))});
    }

    // Cartesian products whose result arity is k.
    for (int i = 1; i < k; i++) {
      int j = k - i;
      std::string sym = "prod" + std::to_string(i) + "x" + std::to_string(j);
      th.operators.push_back({sym, rel_sig(i) + " x " + rel_sig(j) + " -> " + rel_sig(k)});
      AxiomVars v;
      TermPtr r = v.fresh("r", rel_sort(i));
      TermPtr s = v.fresh("s", rel_sort(j));
      std::vector<TermPtr> xs = atom_row(v, i, "a");
      std::vector<TermPtr> ys = atom_row(v, j, "b");
      std::vector<TermPtr> all = xs;
      all.insert(all.end(), ys.begin(), ys.end());
      FormulaPtr body = mk_iff(mk_in(mk_tuple(all), mk_prod(r, s)),
                               mk_and(mk_in(row_tuple(xs), r), mk_in(row_tuple(ys), s)));
      std::vector<TermPtr> quant = {r, s};
      quant.insert(quant.end(), all.begin(), all.end());
      th.axioms.push_back({sym + "-def", close_forall(quant, body)});
    }

    // Joins whose widest sort is k.
    for (int i = 1; i <= max_arity; i++) {
      for (int j = 1; j <= max_arity; j++) {
        int m = i + j - 2;
        if (m < 1 || m > max_arity) continue;
        if (std::max({i, j, m}) != k) continue;
        std::string sym = "join" + std::to_string(i) + "x" + std::to_string(j);
        th.operators.push_back({sym, rel_sig(i) + " x " + rel_sig(j) + " -> " + rel_sig(m)});
        AxiomVars v;
        TermPtr r = v.fresh("r", rel_sort(i));
        TermPtr s = v.fresh("s", rel_sort(j));
        std::vector<TermPtr> xs = atom_row(v, i - 1, "a");  // left columns
        std::vector<TermPtr> ys = atom_row(v, j - 1, "b");  // right columns
        TermPtr z = v.fresh("z", tuple_sort(1));
        std::vector<TermPtr> res = xs;
        res.insert(res.end(), ys.begin(), ys.end());
        std::vector<TermPtr> left = xs;
        left.push_back(z);
        std::vector<TermPtr> right = {z};
        right.insert(right.end(), ys.begin(), ys.end());
        FormulaPtr witness =
            mk_exists(z, mk_and(mk_in(row_tuple(left), r), mk_in(row_tuple(right), s)));
        FormulaPtr body = mk_iff(mk_in(row_tuple(res), mk_join(r, s)), witness);
        std::vector<TermPtr> quant = {r, s};
        quant.insert(quant.end(), res.begin(), res.end());
        th.axioms.push_back({sym + "-def", close_forall(quant, body)});
      }
    }

    // Closures. transClos is under-axiomatized in first-order logic: these
    // two axioms give containment and transitivity; minimality is supplied
    // per use by the closure_induction schema.
    if (k == 2) {
      th.operators.push_back({"transClos", "Rel2 -> Rel2"});
      {
        AxiomVars v;
        TermPtr r = v.fresh("r", rel_sort(2));
        TermPtr a = v.fresh("a", tuple_sort(1));
        TermPtr b = v.fresh("b", tuple_sort(1));
        FormulaPtr body = mk_implies(mk_in(mk_tuple({a, b}), r),
                                     mk_in(mk_tuple({a, b}), mk_trans_clos(r)));
        th.axioms.push_back({"transClos-contains", close_forall({r, a, b}, body)});
      }
      {
        AxiomVars v;
        TermPtr r = v.fresh("r", rel_sort(2));
        TermPtr a = v.fresh("a", tuple_sort(1));
        TermPtr b = v.fresh("b", tuple_sort(1));
        TermPtr c = v.fresh("c", tuple_sort(1));
        TermPtr tc = mk_trans_clos(r);
        FormulaPtr body = mk_implies(mk_and(mk_in(mk_tuple({a, b}), tc),
                                            mk_in(mk_tuple({b, c}), tc)),
                                     mk_in(mk_tuple({a, c}), tc));
        th.axioms.push_back({"transClos-transitive", close_forall({r, a, b, c}, body)});
      }

      th.operators.push_back({"reflClos", "Rel2 x Rel1 -> Rel2"});
      {
        AxiomVars v;
        TermPtr r = v.fresh("r", rel_sort(2));
        TermPtr w = v.fresh("w", rel_sort(1));
        TermPtr a = v.fresh("a", tuple_sort(1));
        TermPtr b = v.fresh("b", tuple_sort(1));
        FormulaPtr body =
            mk_iff(mk_in(mk_tuple({a, b}), mk_refl_clos(r, w)),
                   mk_or(mk_in(mk_tuple({a, b}), mk_trans_clos(r)),
                         mk_and(mk_eq(a, b), mk_in(a, w))));
        th.axioms.push_back({"reflClos-def", close_forall({r, w, a, b}, body)});
      }
    }
  }

  return th;
}

}  // namespace relcheck::fol
