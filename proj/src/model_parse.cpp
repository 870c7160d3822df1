#include <algorithm>
#include <sstream>

#include "relcheck/diag.hpp"
#include "relcheck/smt/solver.hpp"

namespace relcheck::smt {

namespace {

// Universe members are announced in comments ahead of the model body:
//   ;; universe for S:
//   ;;   S!val!0 S!val!1
//   ;; -----------
void scan_universes(const std::string& text,
                    std::map<std::string, std::vector<std::string>>& out) {
  std::istringstream is(text);
  std::string line, current;
  while (std::getline(is, line)) {
    size_t c = line.find(";;");
    if (c == std::string::npos) {
      current.clear();
      continue;
    }
    std::istringstream ls(line.substr(c + 2));
    std::vector<std::string> words;
    std::string w;
    while (ls >> w) words.push_back(w);
    if (words.size() == 3 && words[0] == "universe" && words[1] == "for" &&
        !words[2].empty() && words[2].back() == ':') {
      current = words[2].substr(0, words[2].size() - 1);
      out[current];  // an announced universe may still be empty
      continue;
    }
    if (!current.empty()) {
      if (!words.empty() && words[0].find("---") != std::string::npos) {
        current.clear();
        continue;
      }
      for (const std::string& atom : words) out[current].push_back(atom);
    }
  }
}

std::string sort_spelling(const SExpr& s) { return sexpr_text(s); }

}  // namespace

SolverModel parse_model(const std::string& model_text) {
  SolverModel model;
  scan_universes(model_text, model.universes);

  std::vector<SExpr> top = parse_sexprs(model_text);
  if (top.size() != 1 || top[0].is_atom)
    throw Error(ErrorKind::Decode, "expected a single parenthesized model");

  const std::vector<SExpr>& items = top[0].items;
  size_t start = 0;
  if (!items.empty() && items[0].is("model")) start = 1;  // older solvers label it

  for (size_t i = start; i < items.size(); i++) {
    const SExpr& it = items[i];
    if (it.is_atom)
      throw Error(ErrorKind::Decode, "unexpected atom in model: " + it.atom);
    std::string h = it.head();
    if (h == "define-fun") {
      if (it.items.size() != 5 || !it.items[1].is_atom || it.items[2].is_atom)
        throw Error(ErrorKind::Decode, "malformed define-fun in model");
      ModelFun f;
      for (const SExpr& p : it.items[2].items) {
        if (p.is_atom || p.items.size() != 2 || !p.items[0].is_atom)
          throw Error(ErrorKind::Decode, "malformed define-fun parameter in model");
        f.param_names.push_back(p.items[0].atom);
        f.param_sorts.push_back(sort_spelling(p.items[1]));
      }
      f.body = it.items[4];
      model.funs[it.items[1].atom] = std::move(f);
      continue;
    }
    if (h == "declare-fun") {
      // Universe element declarations: (declare-fun S!val!0 () S).
      if (it.items.size() == 4 && it.items[1].is_atom && !it.items[2].is_atom &&
          it.items[2].items.empty() && it.items[3].is_atom) {
        auto& members = model.universes[it.items[3].atom];
        if (std::find(members.begin(), members.end(), it.items[1].atom) == members.end())
          members.push_back(it.items[1].atom);
      }
      continue;
    }
    if (h == "forall" || h == "declare-sort" || h == "declare-datatypes") continue;
    throw Error(ErrorKind::Decode, "unexpected model item: " + sexpr_text(it));
  }
  return model;
}

}  // namespace relcheck::smt
