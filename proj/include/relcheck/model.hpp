#pragma once
// Typed core representation: signature hierarchy, fields, and lowered
// formulas. Produced from the surface syntax by typecheck(); consumed by the
// evaluator, both solver backends, and the proof-obligation exporter.
//
// Lowering performed here, once, so every consumer sees a small calculus:
//   - names resolved; let bindings and predicate/function calls expanded
//   - multi-variable quantifiers split into single-binder quantifiers
//   - `no/lone/one x: D | P` rewritten with all/some and equalities
//   - cardinality prefixes (no/some/lone/one e) rewritten as quantifiers
//   - `a != b` rewritten as `not a = b`

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "relcheck/ast.hpp"
#include "relcheck/diag.hpp"

namespace relcheck {

using SigId = int;
using FieldId = int;

struct Signature {
  std::string name;
  bool is_abstract = false;
  std::optional<SigId> parent;
  std::vector<SigId> children;
  SigId top = 0;   // root of this signature's extends-tree
  int depth = 0;   // 0 for top-level signatures
};

enum class Mult { Set, Some, One, Lone };

// Field declared in a signature. cols[0] is the owning signature. If
// `restriction` is set, the field's tuples are constrained to extend tuples of
// that field (written `f: g -> m T`), and the multiplicity is per g-tuple.
struct Field {
  std::string name;
  SigId owner = 0;
  std::vector<SigId> cols;
  Mult mult = Mult::Set;
  std::optional<FieldId> restriction;
};

// Static type of one relation column: the set of signatures values may come
// from, all within a single extends-tree rooted at `top`. A column with
// top < 0 is the bottom type (only `none` has it).
struct ColType {
  SigId top = -1;
  std::vector<SigId> sigs;  // sorted, deduplicated

  bool is_bottom() const { return top < 0; }
  bool operator==(const ColType&) const = default;
};

struct RelType {
  std::vector<ColType> cols;
  int arity() const { return static_cast<int>(cols.size()); }
  bool operator==(const RelType&) const = default;
};

enum class ExprSort { Rel, Formula, Int };

enum class CoreKind {
  // relational terms
  SigRef, FieldRef, VarRef, NoneSet,
  Union, Diff, Inter, Product, Join,
  TransClose, ReflClose,
  OrdFirst, OrdLast, OrdNext, OrdPrev,
  // formulas
  BoolLit, Not, And, Or, Implies, Iff, Quant, InRel, EqRel, IntCmp,
  // integer terms
  IntLit, IntAdd, IntSub,
};

enum class QuantKind { All, Some };
enum class CmpOp { Eq, Lt, Le, Gt, Ge };

struct CoreExpr;
using CoreExprPtr = std::shared_ptr<const CoreExpr>;

// A quantified variable. Ids are unique within one Model; is_int variables
// range over the integer window instead of a signature extent.
struct VarDecl {
  int id = -1;
  std::string name;
  bool is_int = false;
  ColType col;  // meaningful when !is_int
};

struct CoreExpr {
  CoreKind kind{};
  ExprSort sort = ExprSort::Formula;
  RelType type;  // meaningful when sort == Rel

  std::vector<CoreExprPtr> kids;

  SigId sig = -1;      // SigRef; Ord*: the ordered signature; ReflClose: shared top
  FieldId field = -1;  // FieldRef
  VarDecl var;         // VarRef (id/name/is_int/col), Quant (the binder)
  bool bval = false;   // BoolLit
  long long ival = 0;  // IntLit
  QuantKind quant{};   // Quant; kids = {domain, body}, domain absent for Int binders
  CmpOp cmp{};         // IntCmp

  // Quant accessors.
  const CoreExprPtr& quant_body() const { return kids.back(); }
  const CoreExprPtr& quant_domain() const { return kids.front(); }  // only if !var.is_int
};

// Named formula container for facts and assertions.
struct NamedFormula {
  std::string name;  // empty for anonymous facts
  CoreExprPtr body;
};

// Predicate or function kept in template form for explicit instantiation.
// Bodies are fully lowered except that parameters appear as VarRefs.
struct Template {
  std::string name;
  bool is_pred = true;
  std::vector<VarDecl> params;
  CoreExprPtr body;           // formula for preds, relational term for funs
  ColType result;             // funs only
};

struct CheckDirective {
  std::string assertion;
  std::optional<long long> scope;
};

struct Model {
  std::vector<Signature> sigs;
  std::vector<Field> fields;
  std::vector<NamedFormula> facts;
  std::vector<Template> templates;
  std::vector<NamedFormula> asserts;
  std::vector<CheckDirective> checks;

  // util/ordering instantiation, if any.
  std::optional<SigId> ordered_sig;
  std::string ordering_alias;

  int var_counter = 0;  // next fresh variable id

  const Signature& sig(SigId id) const { return sigs[static_cast<size_t>(id)]; }
  const Field& field(FieldId id) const { return fields[static_cast<size_t>(id)]; }

  std::optional<SigId> sig_by_name(const std::string& name) const;
  std::optional<FieldId> field_by_name(const std::string& name) const;
  const NamedFormula* assert_by_name(const std::string& name) const;

  // True when `a` equals `b` or lies below it in the extends-tree.
  bool sig_le(SigId a, SigId b) const;
  std::vector<SigId> top_sigs() const;
  // All signatures in the subtree rooted at s (including s).
  std::vector<SigId> subtree(SigId s) const;
};

// Build the typed model from parsed syntax. Throws Error on name, arity,
// type, or multiplicity problems.
Model typecheck(const ast::Spec& spec);

// Substitute `args` for the parameters of `t` in its body, capture-avoiding.
// Arguments must be expressions typed against the same model. Throws
// Error(Arity) on a parameter-count mismatch and Error(Type) when an argument
// does not fit the parameter's column type.
CoreExprPtr instantiate_template(const Model& m, const Template& t,
                                 const std::vector<CoreExprPtr>& args);

// Replace every free occurrence of variable `var_id` with `value`.
CoreExprPtr replace_var(const CoreExprPtr& e, int var_id, const CoreExprPtr& value);

// The implicit constraint a field declaration imposes (typing plus
// multiplicity), as a plain formula. Counterexample validation and the
// encoder cross-checks rely on this single desugaring.
CoreExprPtr field_constraint(const Model& m, FieldId f);

// Pretty-print a lowered expression (for diagnostics and golden tests).
std::string core_to_string(const Model& m, const CoreExpr& e);

// Free relational variables of an expression, in first-occurrence order.
std::vector<VarDecl> free_vars(const CoreExpr& e);

// Constructors for lowered expressions. They apply the safe constant folds
// (see typecheck.cpp) so that trivial formulas collapse to BoolLit.
namespace core {
CoreExprPtr mk_bool(bool v);
CoreExprPtr mk_not(CoreExprPtr a);
CoreExprPtr mk_and(CoreExprPtr a, CoreExprPtr b);
CoreExprPtr mk_implies(CoreExprPtr a, CoreExprPtr b);
CoreExprPtr mk_bin_formula(CoreKind k, CoreExprPtr a, CoreExprPtr b);
CoreExprPtr mk_var_ref(const VarDecl& v);
CoreExprPtr mk_sig_ref(const Model& m, SigId s);
CoreExprPtr mk_quant(QuantKind q, const VarDecl& v, CoreExprPtr domain, CoreExprPtr body);
CoreExprPtr mk_in(CoreExprPtr a, CoreExprPtr b);
CoreExprPtr mk_product(CoreExprPtr a, CoreExprPtr b);
CoreExprPtr mk_eq_atoms(const VarDecl& a, const VarDecl& b);
bool statically_empty(const CoreExpr& rel);
}  // namespace core

}  // namespace relcheck
