#include "relcheck/decode.hpp"

#include <algorithm>

#include "relcheck/diag.hpp"

namespace relcheck {

namespace {

using smt::Value;

bool truth(const smt::SolverModel& sm, const std::string& fun, const std::vector<Value>& args) {
  Value r = smt::eval_model_fun(sm, fun, args);
  if (r.kind != Value::Kind::Bool)
    throw Error(ErrorKind::Decode, "'" + fun + "' did not evaluate to a boolean");
  return r.b;
}

// Most specific signature a value belongs to: walk down the extends-tree
// following whichever child claims the value. Sibling disjointness is an
// axiom of the encoding, so in a coherent model at most one child does.
SigId place(const Model& m, const EncodeMeta& meta, const smt::SolverModel& sm, SigId top,
            const Value& v) {
  SigId cur = top;
  for (;;) {
    SigId next = -1;
    for (SigId c : m.sig(cur).children) {
      if (truth(sm, meta.is_fun.at(c), {v})) {
        next = c;
        break;
      }
    }
    if (next < 0) return cur;
    cur = next;
  }
}

// Orders free-sort universe members by the model's order relation. Selection
// by minimum keeps a dishonest (non-total) order from invoking undefined
// comparator behavior; it surfaces as a decode error instead.
std::vector<std::string> sort_by_lte(const smt::SolverModel& sm, const std::string& lte,
                                     std::vector<std::string> members) {
  std::vector<std::string> out;
  while (!members.empty()) {
    size_t best = members.size();
    for (size_t i = 0; i < members.size(); i++) {
      bool minimal = true;
      for (size_t j = 0; j < members.size() && minimal; j++) {
        if (i == j) continue;
        if (!truth(sm, lte, {Value::of_sym(members[i]), Value::of_sym(members[j])}))
          minimal = false;
      }
      if (minimal) {
        best = i;
        break;
      }
    }
    if (best == members.size())
      throw Error(ErrorKind::Decode, "ordering relation in the model is not total");
    out.push_back(members[best]);
    members.erase(members.begin() + static_cast<long>(best));
  }
  return out;
}

}  // namespace

Instance decode_instance(const Model& m, const EncodeMeta& meta, const smt::SolverModel& sm) {
  Instance inst;
  inst.int_width = meta.bounded ? meta.width : 0;

  // Per top-level signature: the model values that are atoms, aligned with
  // the atom ids they were assigned.
  std::map<SigId, std::vector<Value>> vals_of;
  std::map<SigId, std::vector<int>> ids_of;

  for (SigId top : m.top_sigs()) {
    const bool ordered = meta.ordered_sig && *meta.ordered_sig == top;
    std::vector<Value> vals;
    if (meta.bounded) {
      for (int v = 0; v < meta.scope; v++) {
        Value val = Value::of_bits(static_cast<unsigned long long>(v), meta.width);
        // An ordered signature's extent is pinned to the whole scope; other
        // extents are whatever the model put into the membership function.
        if (ordered || truth(sm, meta.is_fun.at(top), {val})) vals.push_back(val);
      }
    } else {
      const std::string& sort = meta.sort_name.at(top);
      std::vector<std::string> members;
      auto it = sm.universes.find(sort);
      if (it != sm.universes.end() && !it->second.empty()) {
        members = it->second;
      } else {
        // The sort never appears in the model output, so any single atom
        // realizes it (sorts are never empty).
        members = {sort + "!val!0"};
      }
      if (ordered && !meta.lte_fun.empty())
        members = sort_by_lte(sm, meta.lte_fun, std::move(members));
      for (const std::string& s : members) vals.push_back(Value::of_sym(s));
    }
    for (size_t i = 0; i < vals.size(); i++) {
      std::string label = meta.bounded ? std::to_string(vals[i].bits) : std::to_string(i);
      int id = inst.atom_count();
      inst.atom_names.push_back(m.sig(top).name + "$" + label);
      inst.atom_sig.push_back(place(m, meta, sm, top, vals[i]));
      vals_of[top].push_back(vals[i]);
      ids_of[top].push_back(id);
    }
  }

  for (size_t fi = 0; fi < m.fields.size(); fi++) {
    const Field& f = m.fields[fi];
    const FieldId fid = static_cast<FieldId>(fi);
    TupleSet& table = inst.rel_extent[fid];
    std::vector<const std::vector<Value>*> cols;
    std::vector<const std::vector<int>*> colids;
    bool empty = false;
    for (SigId c : f.cols) {
      SigId top = m.sig(c).top;
      cols.push_back(&vals_of[top]);
      colids.push_back(&ids_of[top]);
      empty = empty || vals_of[top].empty();
    }
    if (empty) continue;

    std::vector<size_t> idx(f.cols.size(), 0);
    bool running = true;
    while (running) {
      std::vector<Value> args;
      Tuple t;
      for (size_t c = 0; c < idx.size(); c++) {
        args.push_back((*cols[c])[idx[c]]);
        t.push_back((*colids[c])[idx[c]]);
      }
      if (truth(sm, meta.rel_fun.at(fid), args)) table.insert(t);
      running = false;
      for (size_t c = idx.size(); c-- > 0;) {
        if (++idx[c] < cols[c]->size()) {
          running = true;
          break;
        }
        idx[c] = 0;
      }
    }
  }

  return inst;
}

}  // namespace relcheck
