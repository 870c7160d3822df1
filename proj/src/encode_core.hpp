#pragma once
// Shared compilation from lowered formulas to SMT terms. A relational
// expression is never materialized; instead mem(e, ts) produces the formula
// "tuple ts is a member of e", recursing over the expression structure.
// Subclasses pick the atom representation (bit-vectors vs free sorts) and
// supply closure, ordering, and integer encodings through the hooks below.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "relcheck/encode.hpp"
#include "relcheck/model.hpp"
#include "relcheck/smt/smt.hpp"

namespace relcheck {

class EncoderBase {
 public:
  explicit EncoderBase(const Model& m);
  virtual ~EncoderBase() = default;

  // Emits the whole script: header, signature tree, ordering, fields, facts,
  // and the negated assertion, followed by (check-sat) and (get-model).
  Encoded run(const CoreExpr& assertion);

 protected:
  // --- customization points -----------------------------------------------
  virtual void begin(bool ints_used) = 0;  // logic, header comments, sorts
  virtual smt::Sort atom_sort(SigId top) const = 0;
  virtual void emit_top(SigId top) = 0;  // is-function of a top-level signature
  virtual void emit_ordering() = 0;
  virtual smt::TermPtr ord_mem(CoreKind k, const std::vector<smt::TermPtr>& ts) = 0;
  virtual smt::TermPtr ord_const(CoreKind k) = 0;  // OrdFirst / OrdLast value
  // Emits whatever definitions the closure of `operand` needs and returns the
  // name of a boolean function over (a, b, free variables of the operand).
  virtual std::string define_closure(const std::string& base, const CoreExpr& operand,
                                     const std::vector<VarDecl>& fvs, SigId top) = 0;
  virtual smt::Sort int_sort() const = 0;
  virtual smt::TermPtr int_literal(long long v) const = 0;
  virtual smt::TermPtr int_binop(CoreKind k, smt::TermPtr a, smt::TermPtr b) const = 0;
  virtual smt::TermPtr int_compare(CmpOp c, smt::TermPtr a, smt::TermPtr b) const = 0;

  // --- shared machinery ----------------------------------------------------
  smt::TermPtr compile(const CoreExpr& f);                            // formula
  smt::TermPtr mem(const CoreExpr& rel, std::vector<smt::TermPtr> ts);  // membership
  smt::TermPtr int_term(const CoreExpr& e);
  smt::TermPtr is_sig(SigId s, smt::TermPtr x);
  static std::string var_name(int id);
  smt::TermPtr var_term(int id) const;
  std::string fresh_name();
  // Terms denoting e when it is a single tuple (variables, ordering
  // endpoints, and products of those); enables direct function application
  // instead of a quantified membership test.
  std::optional<std::vector<smt::TermPtr>> tuple_repr(const CoreExpr& e);
  smt::TermPtr closure_mem(const CoreExprPtr& operand, SigId top, smt::TermPtr a,
                           smt::TermPtr b);

  void emit_sig_section();
  void emit_field_section();

  const Model& m_;
  smt::Script s_;
  EncodeMeta meta_;
  int next_var_ = 0;  // fresh bound-variable counter, starts above model ids
  int tc_count_ = 0;
  std::map<std::string, std::string> tc_cache_;  // normalized operand -> function
};

// True when the assertion or any fact mentions integers.
bool uses_integers(const Model& m, const CoreExpr& assertion);

}  // namespace relcheck
