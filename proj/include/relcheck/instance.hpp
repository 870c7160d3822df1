#pragma once
// Explicit finite instances: named atoms placed at concrete signatures plus
// relation tables. The reference evaluator interprets lowered formulas over
// these directly; solver models are decoded into this form before being
// trusted.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "relcheck/model.hpp"

namespace relcheck {

using Tuple = std::vector<int>;
using TupleSet = std::set<Tuple>;

struct Instance {
  // Atom ids index these two vectors. Placement is the most specific
  // signature an atom belongs to.
  std::vector<std::string> atom_names;
  std::vector<SigId> atom_sig;

  std::map<FieldId, TupleSet> rel_extent;

  // Width of the integer representation this instance was decoded from.
  // Positive: integer terms wrap to that signed width and quantified integers
  // range over it. Zero: exact arithmetic over the default window.
  int int_width = 0;

  // If the model opens an ordering, the ordered signature's atoms are ordered
  // by ascending atom id; decoding is responsible for arranging this.

  // Atoms of sig `s` or any of its descendants, ascending.
  std::vector<int> extent(const Model& m, SigId s) const;

  int atom_count() const { return static_cast<int>(atom_names.size()); }
};

// Structural sanity: placements exist and are non-abstract, relation tables
// have the right arities and in-range atom ids. Returns a description of the
// first problem, or nullopt when well-formed.
std::optional<std::string> ill_formed_reason(const Model& m, const Instance& inst);

// JSON round-trip for reports and test fixtures.
std::string instance_to_json(const Model& m, const Instance& inst);
Instance instance_from_json(const Model& m, const std::string& json_text);

}  // namespace relcheck
