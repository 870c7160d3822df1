#include "relcheck/instance.hpp"

#include <algorithm>

#include "json.hpp"

namespace relcheck {

std::vector<int> Instance::extent(const Model& m, SigId s) const {
  std::vector<int> out;
  for (int a = 0; a < atom_count(); a++)
    if (m.sig_le(atom_sig[static_cast<size_t>(a)], s)) out.push_back(a);
  return out;
}

std::optional<std::string> ill_formed_reason(const Model& m, const Instance& inst) {
  if (inst.atom_names.size() != inst.atom_sig.size())
    return "atom name and placement lists differ in length";
  for (size_t a = 0; a < inst.atom_sig.size(); a++) {
    SigId s = inst.atom_sig[a];
    if (s < 0 || static_cast<size_t>(s) >= m.sigs.size())
      return "atom '" + inst.atom_names[a] + "' placed at an unknown signature";
    if (m.sig(s).is_abstract)
      return "atom '" + inst.atom_names[a] + "' placed at abstract signature '" +
             m.sig(s).name + "'";
  }
  for (const auto& [fid, tuples] : inst.rel_extent) {
    if (fid < 0 || static_cast<size_t>(fid) >= m.fields.size())
      return "relation table for an unknown field";
    const Field& f = m.field(fid);
    for (const auto& t : tuples) {
      if (t.size() != f.cols.size())
        return "tuple of arity " + std::to_string(t.size()) + " in field '" + f.name +
               "' of arity " + std::to_string(f.cols.size());
      for (int a : t)
        if (a < 0 || a >= inst.atom_count())
          return "tuple in field '" + f.name + "' mentions an unknown atom";
    }
  }
  if (inst.int_width < 0 || inst.int_width > 62) return "unusable integer width";
  return std::nullopt;
}

std::string instance_to_json(const Model& m, const Instance& inst) {
  nlohmann::json j;
  j["atoms"] = nlohmann::json::array();
  for (int a = 0; a < inst.atom_count(); a++) {
    j["atoms"].push_back({{"name", inst.atom_names[static_cast<size_t>(a)]},
                          {"sig", m.sig(inst.atom_sig[static_cast<size_t>(a)]).name}});
  }
  auto rels = nlohmann::json::object();
  for (const auto& [fid, tuples] : inst.rel_extent) {
    auto arr = nlohmann::json::array();
    for (const auto& t : tuples) arr.push_back(t);
    rels[m.field(fid).name] = std::move(arr);
  }
  j["relations"] = std::move(rels);
  j["int_width"] = inst.int_width;
  return j.dump(2);
}

Instance instance_from_json(const Model& m, const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::Decode, std::string("bad instance JSON: ") + e.what());
  }
  Instance inst;
  try {
    for (const auto& atom : j.at("atoms")) {
      std::string sig_name = atom.at("sig").get<std::string>();
      auto s = m.sig_by_name(sig_name);
      if (!s) throw Error(ErrorKind::Decode, "unknown signature '" + sig_name + "'");
      inst.atom_names.push_back(atom.at("name").get<std::string>());
      inst.atom_sig.push_back(*s);
    }
    for (const auto& [name, arr] : j.at("relations").items()) {
      auto f = m.field_by_name(name);
      if (!f) throw Error(ErrorKind::Decode, "unknown field '" + name + "'");
      TupleSet tuples;
      for (const auto& t : arr) tuples.insert(t.get<Tuple>());
      inst.rel_extent[*f] = std::move(tuples);
    }
    if (j.contains("int_width")) inst.int_width = j.at("int_width").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Decode, std::string("bad instance JSON: ") + e.what());
  }
  if (auto why = ill_formed_reason(m, inst))
    throw Error(ErrorKind::Decode, "ill-formed instance: " + *why);
  return inst;
}

}  // namespace relcheck
