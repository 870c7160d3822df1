#include <sstream>

#include "relcheck/smt/smt.hpp"

namespace relcheck::smt {

namespace {

void print_term(std::ostream& os, const Term& t) {
  switch (t.kind) {
    case Term::Kind::Sym: os << t.sym; return;
    case Term::Kind::BoolLit: os << (t.bval ? "true" : "false"); return;
    case Term::Kind::IntLit:
      if (t.ival < 0)
        os << "(- " << -t.ival << ")";
      else
        os << t.ival;
      return;
    case Term::Kind::BvLit: {
      os << "#b";
      for (int i = t.width - 1; i >= 0; i--) os << ((t.bits >> i) & 1u);
      return;
    }
    case Term::Kind::App: {
      if (t.args.empty()) {
        os << t.sym;
        return;
      }
      os << "(" << t.sym;
      for (const auto& a : t.args) {
        os << " ";
        print_term(os, *a);
      }
      os << ")";
      return;
    }
    case Term::Kind::Quant: {
      os << "(" << (t.bval ? "forall" : "exists") << " (";
      for (size_t i = 0; i < t.binders.size(); i++) {
        if (i) os << " ";
        os << "(" << t.binders[i].first << " " << t.binders[i].second.text() << ")";
      }
      os << ") ";
      print_term(os, *t.args[0]);
      os << ")";
      return;
    }
  }
}

}  // namespace

std::string term_text(const Term& t) {
  std::ostringstream os;
  print_term(os, t);
  return os.str();
}

std::string serialize(const Script& s) {
  std::ostringstream os;
  os << "(set-option :produce-models true)\n";
  if (!s.logic.empty()) os << "(set-logic " << s.logic << ")\n";
  for (const auto& it : s.items) {
    switch (it.kind) {
      case ScriptItem::Kind::Comment:
        os << "; " << it.name << "\n";
        break;
      case ScriptItem::Kind::SetOption:
        os << "(set-option " << it.name << ")\n";
        break;
      case ScriptItem::Kind::DeclareSort:
        os << "(declare-sort " << it.name << " 0)\n";
        break;
      case ScriptItem::Kind::DeclareFun: {
        os << "(declare-fun " << it.name << " (";
        for (size_t i = 0; i < it.arg_sorts.size(); i++) {
          if (i) os << " ";
          os << it.arg_sorts[i].text();
        }
        os << ") " << it.ret.text() << ")\n";
        break;
      }
      case ScriptItem::Kind::DefineFun: {
        os << "(define-fun " << it.name << " (";
        for (size_t i = 0; i < it.params.size(); i++) {
          if (i) os << " ";
          os << "(" << it.params[i].first << " " << it.params[i].second.text() << ")";
        }
        os << ") " << it.ret.text() << " " << term_text(*it.body) << ")\n";
        break;
      }
      case ScriptItem::Kind::Assert:
        if (!it.name.empty()) os << "; " << it.name << "\n";
        os << "(assert " << term_text(*it.body) << ")\n";
        break;
      case ScriptItem::Kind::CheckSat:
        os << "(check-sat)\n";
        break;
      case ScriptItem::Kind::GetModel:
        os << "(get-model)\n";
        break;
    }
  }
  return os.str();
}

}  // namespace relcheck::smt
