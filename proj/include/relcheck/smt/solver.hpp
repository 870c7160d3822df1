#pragma once
// Solver subprocess driver and model reading. The driver runs an external
// SMT-LIB solver on a serialized script with a wall-clock timeout; the model
// reader turns `(get-model)` output into callable function tables.

#include <map>
#include <string>
#include <vector>

#include "relcheck/smt/sexpr.hpp"

namespace relcheck::smt {

enum class SolveStatus { Sat, Unsat, Unknown };

struct SolveResult {
  SolveStatus status = SolveStatus::Unknown;
  bool timed_out = false;
  std::string model_text;  // raw text after the status line (the model, if any)
};

// Picks the solver binary: the explicit preference, then the RELCHECK_SOLVER
// environment variable, then `z3` on PATH, then a `z3js` script next to the
// running executable. Throws Error(SolverNotFound) if nothing is runnable.
std::string resolve_solver(const std::string& preferred = "");

// Runs `solver <script-file>` in its own process group, killing the whole
// group at the timeout (status Unknown, timed_out set). Throws
// Error(SolverCrashed) when the process produces no sat/unsat/unknown verdict.
SolveResult run_solver(const std::string& solver, const std::string& script_text,
                       double timeout_seconds);

// ---- model reading ----

struct ModelFun {
  std::vector<std::string> param_names;
  std::vector<std::string> param_sorts;  // sort spellings, e.g. "(_ BitVec 3)" or "S"
  SExpr body;
};

struct SolverModel {
  std::map<std::string, ModelFun> funs;
  // Free-sort universes: sort name -> member symbols, in printed order.
  std::map<std::string, std::vector<std::string>> universes;
};

// Parses `(get-model)` output. Universe members come from the solver's
// `;; universe for S:` comments and from the member declare-funs inside the
// model. Throws Error(Decode) on anything structurally unexpected.
SolverModel parse_model(const std::string& model_text);

// A concrete value during model-term evaluation.
struct Value {
  enum class Kind { Bool, Bits, Int, Sym };
  Kind kind = Kind::Bool;
  bool b = false;
  unsigned long long bits = 0;
  int width = 0;
  long long i = 0;
  std::string sym;

  static Value of_bool(bool v) { return {Kind::Bool, v, 0, 0, 0, ""}; }
  static Value of_bits(unsigned long long v, int w) { return {Kind::Bits, false, v, w, 0, ""}; }
  static Value of_int(long long v) { return {Kind::Int, false, 0, 0, v, ""}; }
  static Value of_sym(std::string s) { return {Kind::Sym, false, 0, 0, 0, std::move(s)}; }

  bool operator==(const Value&) const = default;
};

// Evaluates a defined function at concrete arguments, resolving references to
// other defined functions in the same model. Throws Error(Decode) for
// missing functions, arity mismatches, or constructs the evaluator does not
// recognize (which a verdict must then treat as unknown, never as a
// counterexample).
Value eval_model_fun(const SolverModel& m, const std::string& fun,
                     const std::vector<Value>& args);

}  // namespace relcheck::smt
