#pragma once
// Reading a solver model back into an explicit instance, using the encoding
// metadata to know which functions describe signatures and fields. Anything
// structurally unexpected throws Error(Decode); callers must report such a
// result as unknown, never as a counterexample.

#include "relcheck/encode.hpp"
#include "relcheck/instance.hpp"
#include "relcheck/smt/solver.hpp"

namespace relcheck {

Instance decode_instance(const Model& m, const EncodeMeta& meta, const smt::SolverModel& sm);

}  // namespace relcheck
