// relcheck command line: parse and typecheck a model, run the staged
// verification pipeline for one assertion, print a report, and exit with
// 0 = valid (BV/FV), 1 = counterexample, 2 = undecided, 3 = tool error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "relcheck/ast.hpp"
#include "relcheck/diag.hpp"
#include "relcheck/model.hpp"
#include "relcheck/pipeline.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"relcheck - bounded and unbounded checking of relational models"};
  app.get_formatter()->column_width(28);

  std::string file;
  std::string assertion;
  std::vector<int> scopes;
  std::string mode = "bounded";
  double timeout = 60.0;
  std::string solver;
  std::string keep_smt;
  std::string obligation_dir;
  long long finite_ordering = 0;
  std::string report_format = "text";

  app.add_option("file", file, "model source file")->required();
  app.add_option("--assert", assertion, "assertion to check")->required();
  app.add_option("--scope", scopes, "bounded scopes, ascending (default: check directive or 4 8 16)")
      ->check(CLI::PositiveNumber);
  app.add_option("--mode", mode, "bounded: scopes only; full: also attempt an unbounded proof")
      ->check(CLI::IsMember({"bounded", "full"}));
  app.add_option("--timeout", timeout, "per-solver-call wall clock limit in seconds (default 60)")
      ->check(CLI::PositiveNumber);
  app.add_option("--solver", solver, "solver command (default: RELCHECK_SOLVER, then z3)");
  app.add_option("--keep-smt", keep_smt, "directory to keep generated SMT-LIB scripts in");
  app.add_option("--export-obligation", obligation_dir,
                 "directory for proof obligations when automation fails");
  app.add_option("--finite-ordering", finite_ordering,
                 "bound exported ordering axioms to this many atoms")
      ->check(CLI::PositiveNumber);
  app.add_option("--report", report_format, "report format: text or json (default text)")
      ->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // 0 is --help/--version; anything else is a usage problem → tool error.
    return app.exit(e) == 0 ? 0 : 3;
  }

  try {
    relcheck::Model model = relcheck::typecheck(relcheck::ast::parse(read_file(file)));

    relcheck::PipelineConfig cfg;
    cfg.scopes = scopes;
    if (cfg.scopes.empty())
      for (const relcheck::CheckDirective& c : model.checks)
        if (c.assertion == assertion && c.scope) {
          cfg.scopes = {static_cast<int>(*c.scope)};
          break;
        }
    cfg.full = mode == "full";
    cfg.timeout_seconds = timeout;
    cfg.solver = solver;
    cfg.keep_smt_dir = keep_smt;
    cfg.obligation_dir = obligation_dir;
    if (finite_ordering > 0) cfg.finite_ordering = finite_ordering;

    relcheck::VerdictReport report = relcheck::run_pipeline(model, assertion, cfg);
    report.file = file;

    if (report_format == "json")
      std::cout << relcheck::report_to_json(model, report);
    else
      std::cout << relcheck::report_to_text(model, report);
    if (!report.error.empty()) std::cerr << "relcheck: " << report.error << "\n";
    return relcheck::exit_code(report);
  } catch (const relcheck::Error& e) {
    if (e.kind() == relcheck::ErrorKind::Syntax)
      std::cerr << file << ":" << e.span().line << ":" << e.span().col << ": " << e.what()
                << "\n";
    else
      std::cerr << "relcheck: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "relcheck: " << e.what() << "\n";
    return 3;
  }
}
