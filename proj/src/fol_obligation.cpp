// Proof-obligation export: renders a typed model and one assertion in the
// arity-indexed relational theory, producing relation constants for
// signatures and fields, axioms for hierarchy/typing/multiplicity, the
// ordering bijection when util/ordering is instantiated, translated facts as
// hypotheses, and a structure-preserving translation of the assertion.

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "relcheck/diag.hpp"
#include "relcheck/fol.hpp"

namespace relcheck::fol {

namespace {

// Fixed names of the ordering symbols; model entities are renamed away from
// these (and from every theory symbol) rather than the other way round.
const char* kOrdSymbols[] = {"ordAt", "ordFirst", "ordLast", "ordNext", "ordPrev"};

int model_max_arity(const Model& m) {
  int k = 1;
  for (const Field& f : m.fields) k = std::max(k, static_cast<int>(f.cols.size()));
  if (m.ordered_sig) k = std::max(k, 2);
  return k;
}

// A tuple term from one or more atom terms.
TermPtr row(std::vector<TermPtr> atoms) {
  return atoms.size() == 1 ? atoms[0] : mk_tuple(std::move(atoms));
}

class Exporter {
 public:
  Exporter(const Model& m, const ObligationOptions& opts) : m_(m), opts_(opts) {}

  Obligation run(const std::string& assertion_name);

 private:
  // --- naming ---
  std::string claim(std::string want) {
    while (used_.count(want)) want += "_";
    used_.insert(want);
    return want;
  }
  void reserve_theory_names(const Theory& th);
  void name_constants();

  // Fresh bound variable for an axiom; names avoid every claimed constant and
  // every variable already introduced in the same axiom.
  TermPtr axiom_var(const std::string& stem, const Sort& sort) {
    std::string name = stem;
    while (used_.count(name) || axiom_names_.count(name)) name += "_";
    axiom_names_.insert(name);
    return mk_var(next_id_++, name, sort);
  }
  void start_axiom() { axiom_names_.clear(); }

  // --- axiom groups ---
  void hierarchy_axioms();
  void field_axioms();
  void ordering_axioms();

  // --- translation of lowered expressions ---
  TermPtr sig_const(SigId s) { return mk_rel_const(sig_names_.at(s), 1); }
  TermPtr rel(const CoreExpr& e);
  TermPtr int_term(const CoreExpr& e);
  FormulaPtr form(const CoreExpr& e);
  void note(const CoreExpr& e, const Term* t, const Formula* f) {
    if (links_) links_->push_back({&e, f, t});
  }

  const Model& m_;
  const ObligationOptions& opts_;
  Obligation ob_;

  std::set<std::string> used_;         // names taken by the theory and constants
  std::set<std::string> axiom_names_;  // variable names of the axiom being built
  std::map<SigId, std::string> sig_names_;
  std::map<FieldId, std::string> field_names_;
  int next_id_ = 0;

  std::vector<NodeLink>* links_ = nullptr;      // set while translating the assertion
  std::map<int, std::string> binder_text_;      // variable id -> display name
  std::vector<std::string> binder_stack_;       // enclosing display names
};

void Exporter::reserve_theory_names(const Theory& th) {
  used_ = {"Int", "Tuple", "Relation", "Bool", "in", "true", "false",
           "forall", "exists"};
  for (int k = 1; k <= th.max_arity; k++) {
    used_.insert(sort_name(tuple_sort(k)));
    used_.insert(sort_name(rel_sort(k)));
  }
  for (const TheoryDecl& d : th.constructors) used_.insert(d.name);
  for (const TheoryDecl& d : th.operators) used_.insert(d.name);
  for (const char* s : kOrdSymbols) used_.insert(s);
}

void Exporter::name_constants() {
  for (size_t i = 0; i < m_.sigs.size(); i++) {
    std::string name = claim(m_.sigs[i].name);
    sig_names_[static_cast<SigId>(i)] = name;
    ob_.constants.push_back({name, "Rel1"});
  }
  std::map<std::string, int> uses;
  for (const Field& f : m_.fields) uses[f.name]++;
  for (size_t i = 0; i < m_.fields.size(); i++) {
    const Field& f = m_.fields[i];
    std::string want = f.name;
    if (uses[f.name] > 1) want += "_" + std::to_string(i);
    std::string name = claim(want);
    field_names_[static_cast<FieldId>(i)] = name;
    ob_.constants.push_back({name, "Rel" + std::to_string(f.cols.size())});
  }
  if (m_.ordered_sig) {
    ob_.constants.push_back({"ordAt", "Int -> Atom"});
    ob_.constants.push_back({"ordFirst", "Rel1"});
    ob_.constants.push_back({"ordLast", "Rel1"});
    ob_.constants.push_back({"ordNext", "Rel2"});
    ob_.constants.push_back({"ordPrev", "Rel2"});
  }
}

// ---------------------------------------------------------------------------
// Signature hierarchy: top-level extents are pairwise disjoint; an extension
// is contained in its parent; extensions of one parent are pairwise disjoint;
// an abstract signature is covered by its extensions.
// ---------------------------------------------------------------------------

void Exporter::hierarchy_axioms() {
  auto disjoint = [&](SigId a, SigId b) {
    start_axiom();
    TermPtr x = axiom_var("x", tuple_sort(1));
    ob_.model_axioms.push_back(
        {sig_names_.at(a) + "-" + sig_names_.at(b) + "-disjoint",
         mk_forall(x, mk_not(mk_and(mk_in(x, sig_const(a)), mk_in(x, sig_const(b)))))});
  };

  std::vector<SigId> tops = m_.top_sigs();
  for (size_t i = 0; i < tops.size(); i++)
    for (size_t j = i + 1; j < tops.size(); j++) disjoint(tops[i], tops[j]);

  for (SigId top : tops) {
    for (SigId s : m_.subtree(top)) {
      const Signature& sg = m_.sig(s);
      for (SigId c : sg.children)
        ob_.model_axioms.push_back(
            {sig_names_.at(c) + "-extends-" + sig_names_.at(s),
             mk_subset(sig_const(c), sig_const(s))});
      for (size_t i = 0; i < sg.children.size(); i++)
        for (size_t j = i + 1; j < sg.children.size(); j++)
          disjoint(sg.children[i], sg.children[j]);
      if (sg.is_abstract) {
        start_axiom();
        TermPtr x = axiom_var("x", tuple_sort(1));
        FormulaPtr body;
        if (sg.children.empty()) {
          body = mk_not(mk_in(x, sig_const(s)));
        } else {
          FormulaPtr cover;
          for (SigId c : sg.children) {
            FormulaPtr inc = mk_in(x, sig_const(c));
            cover = cover ? mk_or(cover, inc) : inc;
          }
          body = mk_implies(mk_in(x, sig_const(s)), cover);
        }
        ob_.model_axioms.push_back({sig_names_.at(s) + "-abstract", mk_forall(x, body)});
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Fields: column typing (with the tuple-restriction when declared), totality
// for Some/One, and functionality for Lone/One — the same constraints the
// solver encodings assert.
// ---------------------------------------------------------------------------

void Exporter::field_axioms() {
  for (size_t fi = 0; fi < m_.fields.size(); fi++) {
    const Field& f = m_.fields[fi];
    const int k = static_cast<int>(f.cols.size());
    TermPtr fc = mk_rel_const(field_names_.at(static_cast<FieldId>(fi)), k);
    auto restriction_const = [&]() {
      const Field& g = m_.field(*f.restriction);
      return mk_rel_const(field_names_.at(*f.restriction),
                          static_cast<int>(g.cols.size()));
    };

    {  // typing
      start_axiom();
      std::vector<TermPtr> xs;
      for (int c = 0; c < k; c++)
        xs.push_back(axiom_var("x" + std::to_string(c + 1), tuple_sort(1)));
      FormulaPtr cols;
      for (int c = 0; c < k; c++) {
        FormulaPtr inc = mk_in(xs[c], sig_const(f.cols[c]));
        cols = cols ? mk_and(cols, inc) : inc;
      }
      if (f.restriction) {
        std::vector<TermPtr> prefix(xs.begin(), xs.end() - 1);
        cols = mk_and(cols, mk_in(row(prefix), restriction_const()));
      }
      FormulaPtr body = mk_implies(mk_in(row(xs), fc), cols);
      for (auto it = xs.rbegin(); it != xs.rend(); ++it) body = mk_forall(*it, body);
      ob_.model_axioms.push_back(
          {field_names_.at(static_cast<FieldId>(fi)) + "-typing", body});
    }

    if (f.mult == Mult::Some || f.mult == Mult::One) {  // totality
      start_axiom();
      std::vector<TermPtr> ps;
      for (int c = 0; c < k - 1; c++)
        ps.push_back(axiom_var("x" + std::to_string(c + 1), tuple_sort(1)));
      FormulaPtr guard;
      if (f.restriction) {
        guard = mk_in(row(ps), restriction_const());
      } else {
        for (int c = 0; c < k - 1; c++) {
          FormulaPtr inc = mk_in(ps[c], sig_const(f.cols[c]));
          guard = guard ? mk_and(guard, inc) : inc;
        }
      }
      TermPtr y = axiom_var("y", tuple_sort(1));
      std::vector<TermPtr> full = ps;
      full.push_back(y);
      FormulaPtr body = mk_implies(guard, mk_exists(y, mk_in(row(full), fc)));
      for (auto it = ps.rbegin(); it != ps.rend(); ++it) body = mk_forall(*it, body);
      ob_.model_axioms.push_back(
          {field_names_.at(static_cast<FieldId>(fi)) + "-total", body});
    }

    if (f.mult == Mult::Lone || f.mult == Mult::One) {  // functionality
      start_axiom();
      std::vector<TermPtr> ps;
      for (int c = 0; c < k - 1; c++)
        ps.push_back(axiom_var("x" + std::to_string(c + 1), tuple_sort(1)));
      TermPtr y = axiom_var("y", tuple_sort(1));
      TermPtr z = axiom_var("z", tuple_sort(1));
      std::vector<TermPtr> wy = ps, wz = ps;
      wy.push_back(y);
      wz.push_back(z);
      FormulaPtr body = mk_implies(mk_and(mk_in(row(wy), fc), mk_in(row(wz), fc)),
                                   mk_eq(y, z));
      body = mk_forall(y, mk_forall(z, body));
      for (auto it = ps.rbegin(); it != ps.rend(); ++it) body = mk_forall(*it, body);
      ob_.model_axioms.push_back(
          {field_names_.at(static_cast<FieldId>(fi)) + "-unique", body});
    }
  }
}

// ---------------------------------------------------------------------------
// The linear ordering as a bijection between the ordered extent and the
// non-negative integers (or [0, N) under --finite-ordering), plus defining
// axioms for the derived first/last/next/prev symbols.
// ---------------------------------------------------------------------------

void Exporter::ordering_axioms() {
  TermPtr S = sig_const(*m_.ordered_sig);
  TermPtr first = mk_rel_const("ordFirst", 1);
  TermPtr last = mk_rel_const("ordLast", 1);
  TermPtr next = mk_rel_const("ordNext", 2);
  TermPtr prev = mk_rel_const("ordPrev", 2);
  const std::optional<long long>& n = opts_.finite_ordering;
  auto lit = [](long long v) { return mk_int_lit(v); };
  auto in_range = [&](const TermPtr& i) {
    FormulaPtr g = mk_cmp(CmpOp::Ge, i, lit(0));
    if (n) g = mk_and(g, mk_cmp(CmpOp::Lt, i, lit(*n)));
    return g;
  };

  {
    start_axiom();
    TermPtr a = axiom_var("a", tuple_sort(1));
    TermPtr i = axiom_var("i", int_sort());
    FormulaPtr found = mk_and(in_range(i), mk_eq(a, mk_ord_at(i)));
    ob_.ordering_axioms.push_back(
        {"ordering-onto",
         mk_forall(a, mk_implies(mk_in(a, S), mk_exists(i, found)))});
  }
  {
    start_axiom();
    TermPtr i = axiom_var("i", int_sort());
    ob_.ordering_axioms.push_back(
        {"ordering-into",
         mk_forall(i, mk_implies(in_range(i), mk_in(mk_ord_at(i), S)))});
  }
  {
    start_axiom();
    TermPtr i = axiom_var("i", int_sort());
    TermPtr j = axiom_var("j", int_sort());
    FormulaPtr guard = mk_and(mk_cmp(CmpOp::Ge, i, lit(0)), mk_cmp(CmpOp::Ge, j, lit(0)));
    if (n)
      guard = mk_and(mk_and(guard, mk_cmp(CmpOp::Lt, i, lit(*n))),
                     mk_cmp(CmpOp::Lt, j, lit(*n)));
    FormulaPtr same = mk_iff(mk_eq(mk_ord_at(i), mk_ord_at(j)), mk_eq(i, j));
    ob_.ordering_axioms.push_back(
        {"ordering-injective", mk_forall(i, mk_forall(j, mk_implies(guard, same)))});
  }
  {
    start_axiom();
    TermPtr x = axiom_var("x", tuple_sort(1));
    ob_.ordering_axioms.push_back(
        {"ordFirst-def",
         mk_forall(x, mk_iff(mk_in(x, first), mk_eq(x, mk_ord_at(lit(0)))))});
  }
  {
    start_axiom();
    TermPtr x = axiom_var("x", tuple_sort(1));
    TermPtr y = axiom_var("y", tuple_sort(1));
    TermPtr i = axiom_var("i", int_sort());
    FormulaPtr body = mk_cmp(CmpOp::Ge, i, lit(0));
    if (n) body = mk_and(body, mk_cmp(CmpOp::Lt, mk_int_add(i, lit(1)), lit(*n)));
    body = mk_and(body, mk_eq(x, mk_ord_at(i)));
    body = mk_and(body, mk_eq(y, mk_ord_at(mk_int_add(i, lit(1)))));
    ob_.ordering_axioms.push_back(
        {"ordNext-def",
         mk_forall(x, mk_forall(y, mk_iff(mk_in(mk_tuple({x, y}), next),
                                          mk_exists(i, body))))});
  }
  {
    start_axiom();
    TermPtr x = axiom_var("x", tuple_sort(1));
    TermPtr y = axiom_var("y", tuple_sort(1));
    ob_.ordering_axioms.push_back(
        {"ordPrev-def",
         mk_forall(x, mk_forall(y, mk_iff(mk_in(mk_tuple({x, y}), prev),
                                          mk_in(mk_tuple({y, x}), next))))});
  }
  {
    start_axiom();
    TermPtr x = axiom_var("x", tuple_sort(1));
    TermPtr y = axiom_var("y", tuple_sort(1));
    FormulaPtr no_succ = mk_not(mk_exists(y, mk_in(mk_tuple({x, y}), next)));
    ob_.ordering_axioms.push_back(
        {"ordLast-def",
         mk_forall(x, mk_iff(mk_in(x, last), mk_and(mk_in(x, S), no_succ)))});
  }
}

// ---------------------------------------------------------------------------
// Expression translation. Every lowered node becomes a freshly allocated
// theory node, recorded in assertion_links while the assertion is translated.
// ---------------------------------------------------------------------------

TermPtr Exporter::rel(const CoreExpr& e) {
  auto arity_guard = [&](int arity) {
    if (arity <= ob_.theory.max_arity) return;
    throw Error(ErrorKind::UnsupportedArity,
                "expression of arity " + std::to_string(arity) +
                    " exceeds the generated theory (tiers up to arity " +
                    std::to_string(ob_.theory.max_arity) + ")");
  };
  TermPtr out;
  switch (e.kind) {
    case CoreKind::SigRef: out = sig_const(e.sig); break;
    case CoreKind::FieldRef:
      out = mk_rel_const(field_names_.at(e.field),
                         static_cast<int>(m_.field(e.field).cols.size()));
      break;
    case CoreKind::VarRef: {
      auto it = binder_text_.find(e.var.id);
      std::string name = it == binder_text_.end() ? e.var.name : it->second;
      out = mk_sing(mk_var(e.var.id, name, tuple_sort(1)));
      break;
    }
    case CoreKind::NoneSet: out = mk_none(std::max(1, e.type.arity())); break;
    // Children are translated left to right in named locals so that the link
    // order is the post-order of the walk.
    case CoreKind::Union: {
      TermPtr a = rel(*e.kids[0]), b = rel(*e.kids[1]);
      out = mk_union(a, b);
      break;
    }
    case CoreKind::Diff: {
      TermPtr a = rel(*e.kids[0]), b = rel(*e.kids[1]);
      out = mk_diff(a, b);
      break;
    }
    case CoreKind::Inter: {
      TermPtr a = rel(*e.kids[0]), b = rel(*e.kids[1]);
      out = mk_inter(a, b);
      break;
    }
    case CoreKind::Product: {
      TermPtr a = rel(*e.kids[0]), b = rel(*e.kids[1]);
      arity_guard(a->sort.arity + b->sort.arity);
      out = mk_prod(a, b);
      break;
    }
    case CoreKind::Join: {
      TermPtr a = rel(*e.kids[0]), b = rel(*e.kids[1]);
      arity_guard(a->sort.arity + b->sort.arity - 2);
      out = mk_join(a, b);
      break;
    }
    case CoreKind::TransClose: out = mk_trans_clos(rel(*e.kids[0])); break;
    case CoreKind::ReflClose:
      out = mk_refl_clos(rel(*e.kids[0]), sig_const(e.sig));
      break;
    case CoreKind::OrdFirst: out = mk_rel_const("ordFirst", 1); break;
    case CoreKind::OrdLast: out = mk_rel_const("ordLast", 1); break;
    case CoreKind::OrdNext: out = mk_rel_const("ordNext", 2); break;
    case CoreKind::OrdPrev: out = mk_rel_const("ordPrev", 2); break;
    default:
      throw Error(ErrorKind::Internal, "relational translation of a non-relational node");
  }
  note(e, out.get(), nullptr);
  return out;
}

TermPtr Exporter::int_term(const CoreExpr& e) {
  TermPtr out;
  switch (e.kind) {
    case CoreKind::IntLit: out = mk_int_lit(e.ival); break;
    case CoreKind::IntAdd: {
      TermPtr a = int_term(*e.kids[0]), b = int_term(*e.kids[1]);
      out = mk_int_add(a, b);
      break;
    }
    case CoreKind::IntSub: {
      TermPtr a = int_term(*e.kids[0]), b = int_term(*e.kids[1]);
      out = mk_int_sub(a, b);
      break;
    }
    case CoreKind::VarRef: {
      auto it = binder_text_.find(e.var.id);
      std::string name = it == binder_text_.end() ? e.var.name : it->second;
      out = mk_var(e.var.id, name, int_sort());
      break;
    }
    default:
      throw Error(ErrorKind::Internal, "integer translation of a non-integer node");
  }
  note(e, out.get(), nullptr);
  return out;
}

FormulaPtr Exporter::form(const CoreExpr& e) {
  FormulaPtr out;
  switch (e.kind) {
    case CoreKind::BoolLit: out = mk_truth(e.bval); break;
    case CoreKind::Not: out = mk_not(form(*e.kids[0])); break;
    // Children are translated left to right in named locals so that the link
    // order is the post-order of the walk.
    case CoreKind::And:
    case CoreKind::Or:
    case CoreKind::Implies:
    case CoreKind::Iff: {
      FormulaPtr a = form(*e.kids[0]), b = form(*e.kids[1]);
      switch (e.kind) {
        case CoreKind::And: out = mk_and(a, b); break;
        case CoreKind::Or: out = mk_or(a, b); break;
        case CoreKind::Implies: out = mk_implies(a, b); break;
        default: out = mk_iff(a, b); break;
      }
      break;
    }
    case CoreKind::InRel: {
      TermPtr a = rel(*e.kids[0]), b = rel(*e.kids[1]);
      out = mk_subset(a, b);
      break;
    }
    case CoreKind::EqRel: {
      TermPtr a = rel(*e.kids[0]), b = rel(*e.kids[1]);
      out = mk_eq(a, b);
      break;
    }
    case CoreKind::IntCmp: {
      TermPtr a = int_term(*e.kids[0]), b = int_term(*e.kids[1]);
      out = e.cmp == CmpOp::Eq ? mk_eq(a, b) : mk_cmp(e.cmp, a, b);
      break;
    }
    case CoreKind::Quant: {
      std::string name = e.var.name;
      while (used_.count(name) ||
             std::count(binder_stack_.begin(), binder_stack_.end(), name))
        name += "_";
      binder_text_[e.var.id] = name;
      binder_stack_.push_back(name);
      if (e.var.is_int) {
        TermPtr v = mk_var(e.var.id, name, int_sort());
        FormulaPtr body = form(*e.quant_body());
        out = e.quant == QuantKind::All ? mk_forall(v, body) : mk_exists(v, body);
      } else {
        TermPtr v = mk_var(e.var.id, name, tuple_sort(1));
        TermPtr dom = rel(*e.quant_domain());
        FormulaPtr body = form(*e.quant_body());
        FormulaPtr membership = mk_in(mk_var(e.var.id, name, tuple_sort(1)), dom);
        out = e.quant == QuantKind::All
                  ? mk_forall(v, mk_implies(membership, body))
                  : mk_exists(v, mk_and(membership, body));
      }
      binder_stack_.pop_back();
      break;
    }
    default:
      throw Error(ErrorKind::Internal, "formula translation of a non-formula node");
  }
  note(e, nullptr, out.get());
  return out;
}

// ---------------------------------------------------------------------------
// Assembly.
// ---------------------------------------------------------------------------

Obligation Exporter::run(const std::string& assertion_name) {
  const NamedFormula* target = m_.assert_by_name(assertion_name);
  if (!target)
    throw Error(ErrorKind::Name, "no assertion named '" + assertion_name + "'");
  if (opts_.finite_ordering && *opts_.finite_ordering < 1)
    throw Error(ErrorKind::Scope, "finite ordering bound must be at least 1");

  ob_.assertion_name = assertion_name;
  ob_.theory = build_theory(model_max_arity(m_));
  reserve_theory_names(ob_.theory);
  name_constants();
  next_id_ = m_.var_counter;

  hierarchy_axioms();
  field_axioms();
  if (m_.ordered_sig) ordering_axioms();

  for (size_t i = 0; i < m_.facts.size(); i++) {
    const NamedFormula& fact = m_.facts[i];
    std::string name = fact.name.empty() ? "fact-" + std::to_string(i + 1) : fact.name;
    ob_.hypotheses.push_back({name, form(*fact.body)});
  }

  links_ = &ob_.assertion_links;
  ob_.assertion_body = form(*target->body);
  links_ = nullptr;

  FormulaPtr premise;
  for (const Axiom& h : ob_.hypotheses)
    premise = premise ? mk_and(premise, h.formula) : h.formula;
  ob_.goal = premise ? mk_implies(premise, ob_.assertion_body) : ob_.assertion_body;
  return ob_;
}

}  // namespace

Obligation export_obligation(const Model& m, const std::string& assertion_name,
                             const ObligationOptions& opts) {
  return Exporter(m, opts).run(assertion_name);
}

// ---------------------------------------------------------------------------
// Rendering.
// ---------------------------------------------------------------------------

namespace {

void decl_section(std::ostringstream& out, const std::string& header,
                  const std::vector<TheoryDecl>& decls) {
  if (decls.empty()) return;
  out << header << "\n";
  for (const TheoryDecl& d : decls) out << "  " << d.name << " : " << d.signature << "\n";
  out << "\n";
}

void axiom_section(std::ostringstream& out, const std::string& header,
                   const std::vector<Axiom>& axioms) {
  if (axioms.empty()) return;
  out << header << "\n\n";
  for (const Axiom& a : axioms)
    out << "axiom " << a.name << "\n  " << to_text(a.formula) << "\n\n";
}

}  // namespace

std::string obligation_to_text(const Obligation& ob) {
  std::ostringstream out;
  out << "obligation " << ob.assertion_name << "\n\n";

  out << "sorts\n";
  for (const std::string& line : ob.theory.sort_lines) out << "  " << line << "\n";
  out << "\n";

  decl_section(out, "constructors", ob.theory.constructors);
  decl_section(out, "operators", ob.theory.operators);
  axiom_section(out, "theory axioms", ob.theory.axioms);
  decl_section(out, "constants", ob.constants);
  axiom_section(out, "model axioms", ob.model_axioms);
  axiom_section(out, "ordering axioms", ob.ordering_axioms);

  for (const Axiom& h : ob.hypotheses)
    out << "hypothesis " << h.name << "\n  " << to_text(h.formula) << "\n\n";

  out << "goal " << ob.assertion_name << "\n  " << to_text(ob.assertion_body) << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Structure check: the links embed the assertion's operator tree into the
// translated goal, child intervals nesting strictly inside parent intervals.
// ---------------------------------------------------------------------------

namespace {

struct Euler {
  std::map<const void*, std::pair<int, int>> span;
  int clock = 0;

  void term(const TermPtr& t) {
    if (!t) return;
    int in = clock++;
    for (const TermPtr& k : t->kids) term(k);
    span[t.get()] = {in, clock++};
  }
  void formula(const FormulaPtr& f) {
    if (!f) return;
    int in = clock++;
    term(f->binder);
    for (const TermPtr& t : f->terms) term(t);
    for (const FormulaPtr& k : f->kids) formula(k);
    span[f.get()] = {in, clock++};
  }
};

bool fail(std::string* why, const std::string& msg) {
  if (why) *why = msg;
  return false;
}

}  // namespace

bool structure_preserved(const CoreExpr& assertion, const Obligation& ob,
                         std::string* why) {
  if (!ob.assertion_body) return fail(why, "the obligation has no translated assertion");

  Euler euler;
  euler.formula(ob.assertion_body);

  // Lowering shares subterms, so the source tree is walked as its unfolding:
  // each occurrence of a node consumes one link. Links are recorded in
  // translation order, which is exactly this post-order.
  size_t idx = 0;
  std::set<const void*> targets;
  std::function<const void*(const CoreExpr&)> walk =
      [&](const CoreExpr& e) -> const void* {
    std::vector<std::pair<int, int>> kid_spans;
    for (const CoreExprPtr& k : e.kids) {
      const void* kt = walk(*k);
      if (!kt) return nullptr;
      kid_spans.push_back(euler.span.at(kt));
    }
    if (idx >= ob.assertion_links.size()) {
      fail(why, "fewer links than assertion nodes");
      return nullptr;
    }
    const NodeLink& link = ob.assertion_links[idx++];
    const void* target = link.formula ? static_cast<const void*>(link.formula)
                                      : static_cast<const void*>(link.term);
    if (!target || (link.formula != nullptr) && (link.term != nullptr)) {
      fail(why, "a link is missing its target or carries two");
      return nullptr;
    }
    if (link.source != &e) {
      fail(why, "links do not follow the translation order");
      return nullptr;
    }
    if (!targets.insert(target).second) {
      fail(why, "two occurrences share one image");
      return nullptr;
    }
    auto it = euler.span.find(target);
    if (it == euler.span.end()) {
      fail(why, "an image lies outside the translated assertion");
      return nullptr;
    }
    for (const auto& child : kid_spans)
      if (!(it->second.first < child.first && child.second < it->second.second)) {
        fail(why, "a child's image escapes its parent's image");
        return nullptr;
      }
    return target;
  };

  const void* root = walk(assertion);
  if (!root) return false;
  if (idx != ob.assertion_links.size())
    return fail(why, "more links than assertion nodes");
  if (root != ob.assertion_body.get())
    return fail(why, "the assertion root is not mapped to the goal root");
  return true;
}

}  // namespace relcheck::fol
