#pragma once
// Translation of a typed model plus one assertion into SMT scripts, in two
// styles that differ only in how atoms and closure are represented:
//
//   bounded   - atoms are bit-vectors, signature extents are subsets of the
//               first `scope` values, transitive closure unrolls by iterative
//               squaring. sat answers are candidate counterexamples; unsat
//               is conclusive for that scope.
//
//   unbounded - atoms live in free sorts, closure is an uninterpreted
//               relation constrained from below (base, transitivity, and
//               step composition), so it over-approximates the real closure:
//               unsat proves the assertion for all finite and infinite
//               instances, while sat may be spurious and must be validated.
//
// Both produce metadata that the decoder uses to read models back.

#include <map>
#include <optional>
#include <string>

#include "relcheck/model.hpp"
#include "relcheck/smt/smt.hpp"

namespace relcheck {

struct EncodeMeta {
  bool bounded = true;
  int scope = 0;  // bounded: atoms per top-level signature
  int width = 0;  // bounded: bit width of atom values and integers

  std::map<SigId, std::string> is_fun;    // membership function per signature
  std::map<FieldId, std::string> rel_fun; // relation function per field
  std::map<SigId, std::string> sort_name; // unbounded: sort per top signature
  std::optional<SigId> ordered_sig;
  std::string lte_fun;  // unbounded ordering order relation
};

struct Encoded {
  smt::Script script;
  EncodeMeta meta;
};

// Encodes facts, field constraints, and the negation of `assertion`.
// `scope` must be at least 1.
Encoded encode_bounded(const Model& m, const CoreExpr& assertion, int scope);
Encoded encode_unbounded(const Model& m, const CoreExpr& assertion);

}  // namespace relcheck
