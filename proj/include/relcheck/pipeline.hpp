#pragma once
// The three-stage verification strategy behind the CLI: bounded search for a
// counterexample at increasing scopes, then (in full mode) an unbounded proof
// attempt, then obligation export for an interactive prover when automation
// gives up. Reports never fabricate verdicts: CE always carries a decoded,
// evaluator-validated instance, and solver failures surface as errors.

#include <optional>
#include <string>
#include <vector>

#include "relcheck/instance.hpp"
#include "relcheck/model.hpp"

namespace relcheck {

// CE: counterexample found. BV: valid within the checked scopes.
// FV: valid in all instances. UK: undecided.
enum class Verdict { CE, BV, FV, UK };
std::string verdict_name(Verdict v);

// One solver call or export action, in execution order.
struct StageTrace {
  std::string stage;     // "bounded" | "unbounded" | "export"
  int scope = 0;         // bounded stages
  std::string status;    // "sat" | "unsat" | "unknown" | "timeout" | "written" | "error"
  double seconds = 0.0;
  std::string note;      // rejection reason, error text, or obligation path
  std::string smt_path;  // transcript file when keep_smt_dir is set
};

struct PipelineConfig {
  std::vector<int> scopes;          // checked in ascending order; default {4, 8, 16}
  bool full = false;                // continue into the unbounded stage after BV
  double timeout_seconds = 60.0;    // wall clock per solver call
  std::string solver;               // preferred solver command (else env/path lookup)
  std::string keep_smt_dir;         // when set, keep every generated script here
  std::string obligation_dir;       // when set, stage 3 writes the obligation here
  std::optional<long long> finite_ordering;  // forwarded to obligation export
};

struct VerdictReport {
  std::string file;       // model path, as given on the command line
  std::string assertion;
  Verdict verdict = Verdict::UK;
  std::string stage;      // "bounded" | "unbounded" | "exported"
  int scope = 0;          // deciding scope for bounded verdicts
  std::optional<Instance> counterexample;
  bool counterexample_validated = false;
  // Set when the unbounded stage found a real counterexample the bounded
  // scopes were too small to contain.
  bool scope_insufficiency = false;
  std::string obligation_path;
  std::vector<StageTrace> stages;
  std::string error;      // tool-level failure (solver missing/crashed, IO)
};

// Runs the stages for one assertion. Throws Error(Name) when the assertion
// does not exist; solver and IO failures are recorded in the report instead.
VerdictReport run_pipeline(const Model& m, const std::string& assertion,
                           const PipelineConfig& cfg);

// 0 = BV/FV, 1 = CE, 2 = UK, 3 = tool error.
int exit_code(const VerdictReport& r);

// Rendering (report.cpp). JSON schema documented in docs/report-schema.md.
std::string report_to_json(const Model& m, const VerdictReport& r);
std::string report_to_text(const Model& m, const VerdictReport& r);

}  // namespace relcheck
