#pragma once
// Typed first-order theory of relations and proof-obligation export.
//
// When neither solver backend settles an assertion, the model is rendered in
// an arity-indexed first-order theory: top-level sorts Tuple and Relation
// with arity subsorts (Atom, Tuple2, ... and Rel1, Rel2, ...), a membership
// predicate `in`, tuple constructors (binary, ternary, ...), and one family
// of operator symbols per arity (union1, prod1x1, join1x2, transClos, ...).
// Signatures and fields become relation constants constrained by hierarchy,
// typing, and multiplicity axioms; the result is written as a plain-text
// obligation for an interactive prover (grammar in docs/obligation-format.md).
//
// The module also ships a small library of conditional simplification rules
// (each checked exhaustively on all interpretations with few atoms), a
// rewriting pass that applies them under a step budget, and the induction
// schema for transitive closure.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "relcheck/model.hpp"

namespace relcheck::fol {

// ---------------------------------------------------------------------------
// Sorts. Tuples and relations are indexed by arity; the arity-1 tuple sort is
// Atom. Int is the mathematical integer sort used by the ordering bijection.
// ---------------------------------------------------------------------------

struct Sort {
  enum Kind { Int, Tuple, Rel };
  Kind kind = Tuple;
  int arity = 1;  // >= 1; ignored for Int

  bool operator==(const Sort&) const = default;
};

Sort int_sort();
Sort tuple_sort(int arity);  // tuple_sort(1) is Atom
Sort rel_sort(int arity);
std::string sort_name(const Sort& s);  // "Int", "Atom", "Tuple2", "Rel1", ...

// ---------------------------------------------------------------------------
// Terms.
// ---------------------------------------------------------------------------

enum class TermKind {
  Var,        // sorted variable (Int, Tuple_k, or Rel_k)
  IntLit,     // integer literal
  IntAdd,     // i + j
  IntSub,     // i - j
  OrdAt,      // ordAt(i): the atom at position i of the linear ordering
  RelConst,   // declared relation constant (signature, field, ordering set)
  Sing,       // singleton set holding one atom
  TupleMk,    // tuple constructor: binary(a,b), ternary(a,b,c), ...
  None,       // empty relation of a given arity
  Union, Diff, Inter,   // Rel_k x Rel_k -> Rel_k
  Prod,       // Rel_i x Rel_j -> Rel_{i+j}
  Join,       // Rel_i x Rel_j -> Rel_{i+j-2}
  TransClos,  // Rel2 -> Rel2
  ReflClos,   // Rel2 x Rel1 -> Rel2: closure plus identity on the given set
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  TermKind kind{};
  Sort sort;
  int var_id = -1;        // Var
  std::string name;       // Var, RelConst
  long long ival = 0;     // IntLit
  std::vector<TermPtr> kids;
};

// Builders check argument sorts and throw Error(Internal) on misuse.
TermPtr mk_var(int id, const std::string& name, const Sort& sort);
TermPtr mk_int_lit(long long v);
TermPtr mk_int_add(TermPtr a, TermPtr b);
TermPtr mk_int_sub(TermPtr a, TermPtr b);
TermPtr mk_ord_at(TermPtr index);
TermPtr mk_rel_const(const std::string& name, int arity);
TermPtr mk_sing(TermPtr atom);
TermPtr mk_tuple(std::vector<TermPtr> atoms);  // two or more atoms
TermPtr mk_none(int arity);
TermPtr mk_union(TermPtr a, TermPtr b);
TermPtr mk_diff(TermPtr a, TermPtr b);
TermPtr mk_inter(TermPtr a, TermPtr b);
TermPtr mk_prod(TermPtr a, TermPtr b);
TermPtr mk_join(TermPtr a, TermPtr b);
TermPtr mk_trans_clos(TermPtr r);
TermPtr mk_refl_clos(TermPtr r, TermPtr within);

// ---------------------------------------------------------------------------
// Formulas.
// ---------------------------------------------------------------------------

enum class FormulaKind {
  Truth,    // boolean literal
  In,       // tuple membership: in(t, r)
  Eq,       // equality of two terms of the same sort
  Subset,   // arity-indexed containment predicate: subset_k(r, s)
  Cmp,      // integer comparison (Lt/Le/Gt/Ge; integer equality uses Eq)
  Not, And, Or, Implies, Iff,
  Forall, Exists,
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  FormulaKind kind{};
  bool bval = false;             // Truth
  CmpOp cmp{};                   // Cmp
  TermPtr binder;                // Forall/Exists: a Var term
  std::vector<TermPtr> terms;    // In {tuple, rel}; Eq {a, b}; Subset {r, s}; Cmp {a, b}
  std::vector<FormulaPtr> kids;  // connective children
};

FormulaPtr mk_truth(bool v);
FormulaPtr mk_in(TermPtr tuple, TermPtr rel);
FormulaPtr mk_eq(TermPtr a, TermPtr b);
FormulaPtr mk_subset(TermPtr r, TermPtr s);
FormulaPtr mk_cmp(CmpOp op, TermPtr a, TermPtr b);  // op == Eq delegates to mk_eq
FormulaPtr mk_not(FormulaPtr a);
FormulaPtr mk_and(FormulaPtr a, FormulaPtr b);
FormulaPtr mk_or(FormulaPtr a, FormulaPtr b);
FormulaPtr mk_implies(FormulaPtr a, FormulaPtr b);
FormulaPtr mk_iff(FormulaPtr a, FormulaPtr b);
FormulaPtr mk_forall(TermPtr var, FormulaPtr body);
FormulaPtr mk_exists(TermPtr var, FormulaPtr body);
// Left fold of mk_and; empty input yields true.
FormulaPtr conj(const std::vector<FormulaPtr>& fs);

// Deterministic plain-text rendering (the obligation file syntax).
std::string to_text(const TermPtr& t);
std::string to_text(const FormulaPtr& f);

// Structural equality. Variables compare by id, constants by name.
bool equal(const TermPtr& a, const TermPtr& b);
bool equal(const FormulaPtr& a, const FormulaPtr& b);

// Replace variables by terms keyed on variable id. Callers only substitute
// for variables that are free wherever they occur (pattern variables carry
// negative ids so they can never collide with binders); substituting for a
// bound variable throws Error(Internal).
TermPtr subst(const TermPtr& t, const std::map<int, TermPtr>& env);
FormulaPtr subst(const FormulaPtr& f, const std::map<int, TermPtr>& env);

// ---------------------------------------------------------------------------
// The generated theory. Tier k carries the sorts, constructors, and operator
// symbols whose argument and result arities peak at k; tiers are generated
// on demand up to the model's maximum arity. Every operator comes with a
// defining axiom over `in` and the constructors, except transClos, whose
// first-order axioms state containment and transitivity (minimality is
// available as the closure_induction schema below).
// ---------------------------------------------------------------------------

struct TheoryDecl {
  std::string name;
  std::string signature;  // display form, e.g. "Rel1 x Rel1 -> Rel1"
};

struct Axiom {
  std::string name;
  FormulaPtr formula;
};

struct Theory {
  int max_arity = 1;
  std::vector<std::string> sort_lines;   // "Atom <: Tuple", "Rel1 <: Relation", ...
  std::vector<TheoryDecl> constructors;  // binary, ternary, ...
  std::vector<TheoryDecl> operators;     // none1, sing, union1, ..., subset1
  std::vector<Axiom> axioms;
};

Theory build_theory(int max_arity);

// ---------------------------------------------------------------------------
// Finite interpretations and the exhaustive evaluator. Atoms are 0..atoms-1;
// a relation of arity k is a bitset over row-major tuple indexes (the tuple
// (x1,..,xk) has index x1*n^(k-1) + .. + xk).
// ---------------------------------------------------------------------------

struct FiniteRel {
  int arity = 1;
  uint64_t bits = 0;

  bool operator==(const FiniteRel&) const = default;
};

struct FiniteInterp {
  int atoms = 0;
  std::map<std::string, FiniteRel> consts;  // relation constants by name
};

struct FiniteValue {
  bool is_rel = false;
  long long num = 0;  // atom or tuple index
  FiniteRel rel;
};

// Evaluates formulas and terms against one interpretation. Quantifiers over
// Tuple_k range over all n^k tuples and quantifiers over Rel_k over all
// 2^(n^k) tables (rejected with Error(Scope) when n^k exceeds 16). Integer
// quantifiers and ordering terms have no finite meaning and throw
// Error(UnsupportedExpr). Unknown constants throw Error(Name).
class FiniteEval {
 public:
  explicit FiniteEval(const FiniteInterp& interp) : interp_(interp) {}

  bool formula(const FormulaPtr& f);
  FiniteRel rel(const TermPtr& t);
  long long tuple(const TermPtr& t);
  long long integer(const TermPtr& t);

  // Bind / release a free variable (stack discipline).
  void push_binding(int id, const FiniteValue& v) { env_.emplace_back(id, v); }
  void pop_binding() { env_.pop_back(); }

 private:
  const FiniteValue& lookup(int id, const std::string& name) const;

  const FiniteInterp& interp_;
  std::vector<std::pair<int, FiniteValue>> env_;
  std::unordered_map<uint64_t, uint64_t> closure_memo_;
};

// True when the closed formula holds on every interpretation with 0 to
// max_atoms atoms (no relation constants; quantifiers carry the ranging).
bool holds_in_all_sizes(const FormulaPtr& f, int max_atoms, std::string* why = nullptr);

// ---------------------------------------------------------------------------
// Shipped inference rules. Pattern variables (negative ids) stand for
// arbitrary terms of their sort. A rule either rewrites lhs to rhs or derives
// a fact, whenever its premises hold.
// ---------------------------------------------------------------------------

struct LemmaRule {
  std::string name;
  std::vector<FormulaPtr> premises;
  TermPtr lhs, rhs;  // rewrite rules; null for derivation rules
  FormulaPtr fact;   // derivation rules; null for rewrite rules
};

const std::vector<LemmaRule>& shipped_lemmas();

// The rule restated as one closed formula: premises imply the conclusion
// (for rewrite rules, equality of lhs and rhs), universally closed over the
// pattern variables.
FormulaPtr lemma_statement(const LemmaRule& rule);

// Exhaustively checks the rule on every interpretation with up to max_atoms
// atoms, enumerating pattern variables premise-first so that failed premises
// prune the search. Returns false with an explanation on a counterexample.
bool lemma_holds_finitely(const LemmaRule& rule, int max_atoms, std::string* why = nullptr);

// Simplification under hypotheses: rewrites redexes bottom-up with the
// shipped rules, replaces membership and containment atoms that follow from
// the hypotheses by true, and folds boolean constants. Runs to a fixpoint or
// until `budget` rule applications, whichever comes first; when the budget
// runs out the best simplification so far is returned with the flag set.
struct RewriteResult {
  FormulaPtr formula;
  int steps = 0;
  bool budget_exhausted = false;
};
struct TermRewriteResult {
  TermPtr term;
  int steps = 0;
  bool budget_exhausted = false;
};
RewriteResult rewrite_with_lemmas(const FormulaPtr& f,
                                  const std::vector<FormulaPtr>& hypotheses,
                                  int budget);
TermRewriteResult rewrite_with_lemmas(const TermPtr& t,
                                      const std::vector<FormulaPtr>& hypotheses,
                                      int budget);

// ---------------------------------------------------------------------------
// Induction schema for transitive closure, instantiated for one property.
// `phi` is a formula with two free atom-variable placeholders (`params`);
// the instance does not prove the premises, it only states them.
// ---------------------------------------------------------------------------

struct ClosureInduction {
  FormulaPtr base;        // steps of r satisfy the property
  FormulaPtr step;        // the property extends along one more step
  FormulaPtr conclusion;  // the property holds on the whole closure
};

ClosureInduction closure_induction(const FormulaPtr& phi,
                                   const std::vector<TermPtr>& params,
                                   const TermPtr& r);

// ---------------------------------------------------------------------------
// Proof obligations.
// ---------------------------------------------------------------------------

struct ObligationOptions {
  // When set, the ordering bijection runs over [0, N) instead of all
  // non-negative integers, finitizing the ordered signature.
  std::optional<long long> finite_ordering;
};

// Link from one lowered-model node to the root of its translation. Exactly
// one of formula/term is set.
struct NodeLink {
  const CoreExpr* source = nullptr;
  const Formula* formula = nullptr;
  const Term* term = nullptr;
};

struct Obligation {
  std::string assertion_name;
  Theory theory;
  std::vector<TheoryDecl> constants;    // signatures, fields, ordering symbols
  std::vector<Axiom> model_axioms;      // hierarchy, disjointness, abstractness,
                                        // typing, multiplicity
  std::vector<Axiom> ordering_axioms;   // bijection and ordering-set definitions
  std::vector<Axiom> hypotheses;        // translated facts
  FormulaPtr assertion_body;            // structure-preserving translation
  FormulaPtr goal;                      // hypotheses => assertion_body, closed
  std::vector<NodeLink> assertion_links;  // node map for assertion_body
};

// Renders the model and the named assertion in the relational theory. Tiers
// are generated up to the model's maximum declared arity; an expression whose
// arity exceeds that throws Error(UnsupportedArity). Unknown assertion names
// throw Error(Name).
Obligation export_obligation(const Model& m, const std::string& assertion_name,
                             const ObligationOptions& opts = {});

// Deterministic plain-text rendering of the whole obligation.
std::string obligation_to_text(const Obligation& ob);

// Checks that assertion_links embeds the assertion's operator tree into
// assertion_body: every node mapped, images distinct, the roots aligned, and
// every child's image inside its parent's image.
bool structure_preserved(const CoreExpr& assertion, const Obligation& ob,
                         std::string* why = nullptr);

}  // namespace relcheck::fol
