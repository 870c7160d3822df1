#pragma once
// Reference evaluation of lowered formulas over explicit instances, plus the
// exhaustive small-instance search used to cross-check solver verdicts.

#include <functional>
#include <map>
#include <optional>

#include "relcheck/instance.hpp"
#include "relcheck/model.hpp"

namespace relcheck {

// Binding of quantified variables during evaluation.
struct EvalBinding {
  bool is_int = false;
  int atom = -1;
  long long ival = 0;
};
using EvalEnv = std::map<int, EvalBinding>;

// Inclusive range of integers quantified variables run over: the signed
// window of inst.int_width, or [-4, 4] when the instance carries no width.
std::pair<long long, long long> int_window(const Instance& inst);

bool eval_formula(const Model& m, const Instance& inst, const CoreExpr& e, EvalEnv& env);
TupleSet eval_rel(const Model& m, const Instance& inst, const CoreExpr& e, EvalEnv& env);
long long eval_int(const Model& m, const Instance& inst, const CoreExpr& e, EvalEnv& env);

// A genuine counterexample must be well-formed, satisfy every fact and every
// field's implicit constraints, and falsify the assertion. On failure, `why`
// (if non-null) receives the reason.
bool validate_counterexample(const Model& m, const Instance& inst, const CoreExpr& assertion,
                             std::string* why = nullptr);

struct EnumLimits {
  int max_atoms_per_top = 4;
  long long max_instances = 2000000;  // throw Error(Budget) beyond this
};

// Visit instances over the given per-top-signature sizes (aligned with
// m.top_sigs()). Field tables are generated multiplicity-consistent, so
// every visited instance already satisfies the implicit field constraints.
// The callback returns false to stop early; the return value reports whether
// iteration ran to completion.
bool for_each_instance(const Model& m, const std::vector<int>& sizes,
                       const std::function<bool(const Instance&)>& fn);

// Exhaustively search all instances with at most `limits.max_atoms_per_top`
// atoms per top-level signature for one that satisfies the facts and
// falsifies the assertion. Sizes are visited in ascending total-atom order,
// so the returned counterexample is minimal in that measure.
std::optional<Instance> enumerate_check(const Model& m, const CoreExpr& assertion,
                                        const EnumLimits& limits = {});

}  // namespace relcheck
