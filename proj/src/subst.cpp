#include <set>
#include <sstream>

#include "relcheck/model.hpp"

namespace relcheck {

namespace {

// Rebuild a node with new children, sharing the original when nothing changed.
CoreExprPtr with_kids(const CoreExprPtr& e, std::vector<CoreExprPtr> kids, bool changed) {
  if (!changed) return e;
  auto out = std::make_shared<CoreExpr>(*e);
  out->kids = std::move(kids);
  return out;
}

}  // namespace

CoreExprPtr replace_var(const CoreExprPtr& e, int var_id, const CoreExprPtr& value) {
  if (e->kind == CoreKind::VarRef) return e->var.id == var_id ? value : e;
  // Binder ids are unique per model, so shadowing cannot occur; stop anyway
  // if it ever did rather than substitute under a re-binding.
  if (e->kind == CoreKind::Quant && e->var.id == var_id) return e;
  std::vector<CoreExprPtr> kids;
  kids.reserve(e->kids.size());
  bool changed = false;
  for (const auto& k : e->kids) {
    CoreExprPtr nk = replace_var(k, var_id, value);
    changed = changed || nk != k;
    kids.push_back(std::move(nk));
  }
  return with_kids(e, std::move(kids), changed);
}

CoreExprPtr instantiate_template(const Model& m, const Template& t,
                                 const std::vector<CoreExprPtr>& args) {
  if (args.size() != t.params.size())
    throw Error(ErrorKind::Arity, "'" + t.name + "' takes " +
                                      std::to_string(t.params.size()) + " argument(s), got " +
                                      std::to_string(args.size()));
  for (size_t i = 0; i < args.size(); i++) {
    const CoreExpr& a = *args[i];
    if (a.sort != ExprSort::Rel || a.type.arity() != 1)
      throw Error(ErrorKind::Type, "argument " + std::to_string(i + 1) + " of '" + t.name +
                                       "' must be a unary relational expression");
    if (!a.type.cols[0].sigs.empty() && a.type.cols[0].top != t.params[i].col.top)
      throw Error(ErrorKind::Type, "argument " + std::to_string(i + 1) + " of '" + t.name +
                                       "' has the wrong signature");
  }
  CoreExprPtr body = t.body;
  for (size_t i = 0; i < args.size(); i++) body = replace_var(body, t.params[i].id, args[i]);
  return body;
}

namespace {

void collect_free(const CoreExpr& e, std::set<int>& bound, std::vector<VarDecl>& out,
                  std::set<int>& seen) {
  if (e.kind == CoreKind::VarRef) {
    if (!bound.count(e.var.id) && seen.insert(e.var.id).second) out.push_back(e.var);
    return;
  }
  if (e.kind == CoreKind::Quant) {
    if (!e.var.is_int) collect_free(*e.quant_domain(), bound, out, seen);
    bool newly = bound.insert(e.var.id).second;
    collect_free(*e.quant_body(), bound, out, seen);
    if (newly) bound.erase(e.var.id);
    return;
  }
  for (const auto& k : e.kids) collect_free(*k, bound, out, seen);
}

}  // namespace

std::vector<VarDecl> free_vars(const CoreExpr& e) {
  std::set<int> bound, seen;
  std::vector<VarDecl> out;
  collect_free(e, bound, out, seen);
  return out;
}

namespace {

void print_core(std::ostream& os, const Model& m, const CoreExpr& e) {
  auto bin = [&](const char* op) {
    os << "(" << op << " ";
    print_core(os, m, *e.kids[0]);
    os << " ";
    print_core(os, m, *e.kids[1]);
    os << ")";
  };
  switch (e.kind) {
    case CoreKind::SigRef: os << m.sig(e.sig).name; return;
    case CoreKind::FieldRef: os << m.field(e.field).name; return;
    case CoreKind::VarRef: os << e.var.name << "@" << e.var.id; return;
    case CoreKind::NoneSet: os << "none"; return;
    case CoreKind::Union: bin("+"); return;
    case CoreKind::Diff: bin("-"); return;
    case CoreKind::Inter: bin("&"); return;
    case CoreKind::Product: bin("->"); return;
    case CoreKind::Join: bin("."); return;
    case CoreKind::TransClose:
      os << "(^ ";
      print_core(os, m, *e.kids[0]);
      os << ")";
      return;
    case CoreKind::ReflClose:
      os << "(* ";
      print_core(os, m, *e.kids[0]);
      os << ")";
      return;
    case CoreKind::OrdFirst: os << "first[" << m.sig(e.sig).name << "]"; return;
    case CoreKind::OrdLast: os << "last[" << m.sig(e.sig).name << "]"; return;
    case CoreKind::OrdNext: os << "next[" << m.sig(e.sig).name << "]"; return;
    case CoreKind::OrdPrev: os << "prev[" << m.sig(e.sig).name << "]"; return;
    case CoreKind::BoolLit: os << (e.bval ? "true" : "false"); return;
    case CoreKind::Not:
      os << "(not ";
      print_core(os, m, *e.kids[0]);
      os << ")";
      return;
    case CoreKind::And: bin("and"); return;
    case CoreKind::Or: bin("or"); return;
    case CoreKind::Implies: bin("implies"); return;
    case CoreKind::Iff: bin("iff"); return;
    case CoreKind::Quant:
      os << "(" << (e.quant == QuantKind::All ? "all" : "some") << " " << e.var.name << "@"
         << e.var.id << ": ";
      if (e.var.is_int) {
        os << "Int";
      } else {
        print_core(os, m, *e.quant_domain());
      }
      os << " | ";
      print_core(os, m, *e.quant_body());
      os << ")";
      return;
    case CoreKind::InRel: bin("in"); return;
    case CoreKind::EqRel: bin("="); return;
    case CoreKind::IntCmp:
      switch (e.cmp) {
        case CmpOp::Eq: bin("=i"); return;
        case CmpOp::Lt: bin("<"); return;
        case CmpOp::Le: bin("<="); return;
        case CmpOp::Gt: bin(">"); return;
        case CmpOp::Ge: bin(">="); return;
      }
      return;
    case CoreKind::IntLit: os << e.ival; return;
    case CoreKind::IntAdd: bin("iadd"); return;
    case CoreKind::IntSub: bin("isub"); return;
  }
}

}  // namespace

std::string core_to_string(const Model& m, const CoreExpr& e) {
  std::ostringstream os;
  print_core(os, m, e);
  return os.str();
}

}  // namespace relcheck
