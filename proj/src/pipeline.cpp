// Stage orchestration: bounded scopes in ascending order, then the unbounded
// proof attempt, then obligation export. Every solver call is traced; a
// counterexample verdict is only ever produced from a decoded instance the
// reference evaluator accepts.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>

#include "relcheck/decode.hpp"
#include "relcheck/diag.hpp"
#include "relcheck/encode.hpp"
#include "relcheck/eval.hpp"
#include "relcheck/fol.hpp"
#include "relcheck/pipeline.hpp"
#include "relcheck/smt/solver.hpp"

namespace relcheck {

namespace {

namespace fs = std::filesystem;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string write_artifact(const std::string& dir, const std::string& name,
                           const std::string& text) {
  fs::create_directories(dir);
  fs::path path = fs::path(dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Internal, "cannot write " + path.string());
  out << text;
  return path.string();
}

// One bounded or unbounded solver call with tracing. Throws Error for solver
// setup/crash problems; the caller turns those into a reported error.
smt::SolveResult solve_stage(const std::string& solver, const Encoded& enc,
                             const PipelineConfig& cfg, const std::string& label,
                             StageTrace& trace) {
  std::string text = smt::serialize(enc.script);
  if (!cfg.keep_smt_dir.empty())
    trace.smt_path = write_artifact(cfg.keep_smt_dir, label + ".smt2", text);
  auto t0 = std::chrono::steady_clock::now();
  smt::SolveResult res = smt::run_solver(solver, text, cfg.timeout_seconds);
  trace.seconds = seconds_since(t0);
  if (res.timed_out)
    trace.status = "timeout";
  else
    switch (res.status) {
      case smt::SolveStatus::Sat: trace.status = "sat"; break;
      case smt::SolveStatus::Unsat: trace.status = "unsat"; break;
      case smt::SolveStatus::Unknown: trace.status = "unknown"; break;
    }
  return res;
}

// Decodes and validates a sat model. Returns true with the instance stored
// in the report only for a genuine counterexample; otherwise records why the
// model was rejected.
bool accept_model(const Model& m, const CoreExpr& assertion, const EncodeMeta& meta,
                  const std::string& model_text, VerdictReport& report,
                  StageTrace& trace) {
  try {
    smt::SolverModel sm = smt::parse_model(model_text);
    Instance inst = decode_instance(m, meta, sm);
    std::string why;
    if (validate_counterexample(m, inst, assertion, &why)) {
      report.counterexample = std::move(inst);
      report.counterexample_validated = true;
      return true;
    }
    trace.note = "model rejected: " + why;
  } catch (const Error& e) {
    trace.note = std::string("model rejected: ") + e.what();
  }
  return false;
}

void export_obligation_stage(const Model& m, const std::string& assertion,
                             const PipelineConfig& cfg, VerdictReport& report) {
  if (cfg.obligation_dir.empty()) return;
  StageTrace trace;
  trace.stage = "export";
  auto t0 = std::chrono::steady_clock::now();
  try {
    fol::ObligationOptions opts;
    opts.finite_ordering = cfg.finite_ordering;
    fol::Obligation ob = fol::export_obligation(m, assertion, opts);
    report.obligation_path = write_artifact(cfg.obligation_dir, assertion + ".fol.txt",
                                            fol::obligation_to_text(ob));
    trace.status = "written";
    trace.note = report.obligation_path;
    report.stage = "exported";
  } catch (const Error& e) {
    trace.status = "error";
    trace.note = e.what();
    report.error = std::string("obligation export failed: ") + e.what();
  }
  trace.seconds = seconds_since(t0);
  report.stages.push_back(std::move(trace));
}

}  // namespace

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::CE: return "CE";
    case Verdict::BV: return "BV";
    case Verdict::FV: return "FV";
    case Verdict::UK: return "UK";
  }
  return "UK";
}

int exit_code(const VerdictReport& r) {
  if (!r.error.empty()) return 3;
  switch (r.verdict) {
    case Verdict::BV:
    case Verdict::FV: return 0;
    case Verdict::CE: return 1;
    case Verdict::UK: return 2;
  }
  return 3;
}

VerdictReport run_pipeline(const Model& m, const std::string& assertion,
                           const PipelineConfig& cfg) {
  const NamedFormula* target = m.assert_by_name(assertion);
  if (!target) throw Error(ErrorKind::Name, "no assertion named '" + assertion + "'");

  VerdictReport report;
  report.assertion = assertion;

  std::string solver;
  try {
    solver = smt::resolve_solver(cfg.solver);
  } catch (const Error& e) {
    report.error = e.what();
    report.stage = "bounded";
    return report;
  }

  std::vector<int> scopes = cfg.scopes.empty() ? std::vector<int>{4, 8, 16} : cfg.scopes;
  std::sort(scopes.begin(), scopes.end());

  // Stage 1: look for a counterexample at each scope.
  for (int scope : scopes) {
    StageTrace trace;
    trace.stage = "bounded";
    trace.scope = scope;
    smt::SolveResult res;
    try {
      Encoded enc = encode_bounded(m, *target->body, scope);
      res = solve_stage(solver, enc, cfg,
                        assertion + "_bounded_" + std::to_string(scope), trace);
      if (res.status == smt::SolveStatus::Sat && !res.timed_out &&
          accept_model(m, *target->body, enc.meta, res.model_text, report, trace)) {
        report.stages.push_back(std::move(trace));
        report.verdict = Verdict::CE;
        report.stage = "bounded";
        report.scope = scope;
        return report;
      }
    } catch (const Error& e) {
      trace.status = "error";
      trace.note = e.what();
      report.stages.push_back(std::move(trace));
      report.error = e.what();
      report.stage = "bounded";
      report.scope = scope;
      return report;
    }
    bool conclusive = res.status == smt::SolveStatus::Unsat && !res.timed_out;
    report.stages.push_back(std::move(trace));
    if (!conclusive) {
      // Timeout, unknown, or a sat model the evaluator rejected (the latter
      // would be an encoder defect — surfaced, never upgraded to CE).
      report.verdict = Verdict::UK;
      report.stage = "bounded";
      report.scope = scope;
      return report;
    }
  }

  report.verdict = Verdict::BV;
  report.stage = "bounded";
  report.scope = scopes.back();
  if (!cfg.full) return report;

  // Stage 2: unbounded proof attempt.
  StageTrace trace;
  trace.stage = "unbounded";
  try {
    Encoded enc = encode_unbounded(m, *target->body);
    smt::SolveResult res = solve_stage(solver, enc, cfg, assertion + "_unbounded", trace);
    if (res.status == smt::SolveStatus::Unsat && !res.timed_out) {
      report.stages.push_back(std::move(trace));
      report.verdict = Verdict::FV;
      report.stage = "unbounded";
      return report;
    }
    if (res.status == smt::SolveStatus::Sat && !res.timed_out &&
        accept_model(m, *target->body, enc.meta, res.model_text, report, trace)) {
      report.stages.push_back(std::move(trace));
      report.verdict = Verdict::CE;
      report.stage = "unbounded";
      report.scope_insufficiency = true;
      return report;
    }
  } catch (const Error& e) {
    trace.status = "error";
    trace.note = e.what();
    report.stages.push_back(std::move(trace));
    report.error = e.what();
    report.stage = "unbounded";
    return report;
  }
  report.stages.push_back(std::move(trace));

  // Stage 3: automation failed (timeout, unknown, or a spurious model);
  // leave the verdict undecided and hand the assertion to a prover.
  report.verdict = Verdict::UK;
  report.stage = "unbounded";
  export_obligation_stage(m, assertion, cfg, report);
  return report;
}

}  // namespace relcheck
