// Report rendering: a machine-readable JSON document (schema in
// docs/report-schema.md) and a human-readable text form.

#include <sstream>

#include "relcheck/instance.hpp"
#include "relcheck/pipeline.hpp"

#include "json.hpp"

namespace relcheck {

std::string report_to_json(const Model& m, const VerdictReport& r) {
  nlohmann::json doc;
  if (!r.file.empty()) doc["file"] = r.file;
  doc["assertion"] = r.assertion;
  doc["verdict"] = verdict_name(r.verdict);
  doc["stage"] = r.stage;
  if (r.scope > 0) doc["scope"] = r.scope;
  if (r.counterexample) {
    doc["counterexample"] = nlohmann::json::parse(instance_to_json(m, *r.counterexample));
    doc["counterexample_validated"] = r.counterexample_validated;
  }
  if (r.scope_insufficiency) doc["scope_insufficiency"] = true;
  if (!r.obligation_path.empty()) doc["obligation"] = r.obligation_path;
  if (!r.error.empty()) doc["error"] = r.error;
  doc["stages"] = nlohmann::json::array();
  for (const StageTrace& t : r.stages) {
    nlohmann::json st;
    st["stage"] = t.stage;
    if (t.scope > 0) st["scope"] = t.scope;
    st["status"] = t.status;
    st["seconds"] = t.seconds;
    if (!t.note.empty()) st["note"] = t.note;
    if (!t.smt_path.empty()) st["smt"] = t.smt_path;
    doc["stages"].push_back(std::move(st));
  }
  return doc.dump(2) + "\n";
}

namespace {

const char* verdict_sentence(const VerdictReport& r) {
  switch (r.verdict) {
    case Verdict::CE:
      return r.scope_insufficiency
                 ? "counterexample found beyond the bounded scopes"
                 : "counterexample found";
    case Verdict::BV: return "no counterexample within the checked scopes";
    case Verdict::FV: return "proved for all instances";
    case Verdict::UK: return "undecided";
  }
  return "undecided";
}

void render_instance(std::ostream& out, const Model& m, const Instance& inst) {
  out << "  atoms:";
  for (size_t i = 0; i < inst.atom_names.size(); ++i)
    out << " " << inst.atom_names[i] << ":" << m.sig(inst.atom_sig[i]).name;
  out << "\n";
  for (size_t f = 0; f < m.fields.size(); ++f) {
    out << "  " << m.fields[f].name << " = {";
    auto it = inst.rel_extent.find(static_cast<FieldId>(f));
    bool first = true;
    if (it != inst.rel_extent.end())
      for (const Tuple& row : it->second) {
        out << (first ? "" : ", ") << "(";
        first = false;
        for (size_t j = 0; j < row.size(); ++j)
          out << (j ? "," : "") << inst.atom_names[static_cast<size_t>(row[j])];
        out << ")";
      }
    out << "}\n";
  }
}

}  // namespace

std::string report_to_text(const Model& m, const VerdictReport& r) {
  std::ostringstream out;
  out << r.assertion << ": " << verdict_name(r.verdict) << " — " << verdict_sentence(r);
  if (r.verdict == Verdict::BV) out << " (up to scope " << r.scope << ")";
  if (r.verdict == Verdict::CE && r.stage == "bounded")
    out << " (scope " << r.scope << ")";
  out << "\n";
  if (!r.error.empty()) out << "error: " << r.error << "\n";
  if (r.counterexample) {
    out << "counterexample ("
        << (r.counterexample_validated ? "validated" : "NOT validated") << "):\n";
    render_instance(out, m, *r.counterexample);
  }
  if (!r.obligation_path.empty())
    out << "obligation exported to " << r.obligation_path << "\n";
  out << "stages:\n";
  for (const StageTrace& t : r.stages) {
    out << "  " << t.stage;
    if (t.scope > 0) out << " scope " << t.scope;
    out << ": " << t.status;
    std::ostringstream secs;
    secs.precision(2);
    secs << std::fixed << t.seconds;
    out << " (" << secs.str() << "s)";
    if (!t.note.empty()) out << " — " << t.note;
    out << "\n";
  }
  return out.str();
}

}  // namespace relcheck
