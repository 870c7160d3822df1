#include <sstream>

#include "relcheck/ast.hpp"

namespace relcheck::ast {

const char* mult_name(Mult m) {
  switch (m) {
    case Mult::Set: return "set";
    case Mult::Some: return "some";
    case Mult::One: return "one";
    case Mult::Lone: return "lone";
  }
  return "?";
}

const char* quant_name(QuantKind q) {
  switch (q) {
    case QuantKind::All: return "all";
    case QuantKind::Some: return "some";
    case QuantKind::No: return "no";
    case QuantKind::Lone: return "lone";
    case QuantKind::One: return "one";
  }
  return "?";
}

namespace {

// Precedence levels; higher binds tighter. Mirrors the parser's ladder.
int prec(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Quant:
    case ExprKind::Let: return 0;
    case ExprKind::Binary:
      switch (e.bop) {
        case BinOp::Iff: return 1;
        case BinOp::Implies: return 2;
        case BinOp::Or: return 3;
        case BinOp::And: return 4;
        case BinOp::In:
        case BinOp::Eq:
        case BinOp::Neq:
        case BinOp::Lt:
        case BinOp::Le:
        case BinOp::Gt:
        case BinOp::Ge: return 6;
        case BinOp::Plus:
        case BinOp::Minus: return 8;
        case BinOp::Inter: return 9;
        case BinOp::Arrow: return 10;
        case BinOp::Join: return 11;
      }
      return 6;
    case ExprKind::Unary:
      switch (e.uop) {
        case UnOp::Not: return 5;
        case UnOp::CardNo:
        case UnOp::CardSome:
        case UnOp::CardLone:
        case UnOp::CardOne: return 7;
        case UnOp::TransClose:
        case UnOp::ReflClose: return 12;
      }
      return 5;
    case ExprKind::BoxJoin: return 11;
    case ExprKind::Name:
    case ExprKind::NoneSet:
    case ExprKind::IntLit: return 13;
  }
  return 13;
}

const char* binop_text(BinOp op) {
  switch (op) {
    case BinOp::Plus: return "+";
    case BinOp::Minus: return "-";
    case BinOp::Inter: return "&";
    case BinOp::Arrow: return "->";
    case BinOp::Join: return ".";
    case BinOp::In: return "in";
    case BinOp::Eq: return "=";
    case BinOp::Neq: return "!=";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::And: return "and";
    case BinOp::Or: return "or";
    case BinOp::Implies: return "implies";
    case BinOp::Iff: return "iff";
  }
  return "?";
}

void print_expr(std::ostream& os, const Expr& e, int min_prec);

void print_at(std::ostream& os, const Expr& e, int min_prec) {
  bool parens = prec(e) < min_prec;
  if (parens) os << "(";
  print_expr(os, e, 0);
  if (parens) os << ")";
}

void print_expr(std::ostream& os, const Expr& e, int) {
  switch (e.kind) {
    case ExprKind::Name:
      if (!e.qualifier.empty()) os << e.qualifier << "/";
      os << e.name;
      return;
    case ExprKind::NoneSet: os << "none"; return;
    case ExprKind::IntLit: os << e.int_val; return;
    case ExprKind::Unary:
      switch (e.uop) {
        case UnOp::Not:
          os << "not ";
          print_at(os, *e.kids[0], 5);
          return;
        case UnOp::CardNo: os << "no "; break;
        case UnOp::CardSome: os << "some "; break;
        case UnOp::CardLone: os << "lone "; break;
        case UnOp::CardOne: os << "one "; break;
        case UnOp::TransClose:
          os << "^";
          print_at(os, *e.kids[0], 12);
          return;
        case UnOp::ReflClose:
          os << "*";
          print_at(os, *e.kids[0], 12);
          return;
      }
      print_at(os, *e.kids[0], 8);
      return;
    case ExprKind::Binary: {
      int level = prec(e);
      switch (e.bop) {
        case BinOp::Implies:  // right-associative
          print_at(os, *e.kids[0], level + 1);
          os << " " << binop_text(e.bop) << " ";
          print_at(os, *e.kids[1], level);
          return;
        case BinOp::In:
        case BinOp::Eq:
        case BinOp::Neq:
        case BinOp::Lt:
        case BinOp::Le:
        case BinOp::Gt:
        case BinOp::Ge:  // non-associative
          print_at(os, *e.kids[0], level + 1);
          os << " " << binop_text(e.bop) << " ";
          print_at(os, *e.kids[1], level + 1);
          return;
        case BinOp::Join:
          print_at(os, *e.kids[0], level);
          os << ".";
          print_at(os, *e.kids[1], level + 1);
          return;
        default:  // left-associative
          print_at(os, *e.kids[0], level);
          os << " " << binop_text(e.bop) << " ";
          print_at(os, *e.kids[1], level + 1);
          return;
      }
    }
    case ExprKind::Quant: {
      os << quant_name(e.quant) << " ";
      bool first_group = true;
      for (const auto& d : e.decls) {
        if (!first_group) os << ", ";
        first_group = false;
        bool first = true;
        for (const auto& n : d.names) {
          if (!first) os << ", ";
          first = false;
          os << n.name;
        }
        os << ": ";
        print_at(os, *d.domain, 8);
      }
      os << " | ";
      print_at(os, *e.kids[0], 0);
      return;
    }
    case ExprKind::Let:
      os << "let " << e.let_name << " = ";
      print_at(os, *e.kids[0], 8);
      os << " | ";
      print_at(os, *e.kids[1], 0);
      return;
    case ExprKind::BoxJoin:
      print_at(os, *e.kids[0], 11);
      os << "[";
      for (size_t i = 1; i < e.kids.size(); i++) {
        if (i > 1) os << ", ";
        print_at(os, *e.kids[i], 0);
      }
      os << "]";
      return;
  }
}

void print_params(std::ostream& os, const std::vector<ParamDecl>& params) {
  if (params.empty()) return;
  os << " [";
  for (size_t i = 0; i < params.size(); i++) {
    if (i) os << ", ";
    os << params[i].name.name << ": " << params[i].type.name;
  }
  os << "]";
}

}  // namespace

std::string pretty(const Expr& e) {
  std::ostringstream os;
  print_at(os, e, 0);
  return os.str();
}

std::string pretty(const Spec& s) {
  std::ostringstream os;
  for (const auto& o : s.opens) {
    os << "open ";
    for (size_t i = 0; i < o.path.size(); i++) {
      if (i) os << "/";
      os << o.path[i];
    }
    os << "[" << o.arg.name << "]";
    if (o.alias) os << " as " << o.alias->name;
    os << "\n";
  }
  if (!s.opens.empty()) os << "\n";
  for (const auto& sig : s.sigs) {
    if (sig.is_abstract) os << "abstract ";
    os << "sig " << sig.name.name;
    if (sig.parent) os << " extends " << sig.parent->name;
    os << " {";
    if (!sig.fields.empty()) {
      os << "\n";
      for (size_t i = 0; i < sig.fields.size(); i++) {
        const auto& f = sig.fields[i];
        os << "  " << f.name.name << ": ";
        for (size_t k = 0; k < f.parts.size(); k++) {
          if (k) os << " -> ";
          if (k + 1 == f.parts.size() && f.mult) os << mult_name(*f.mult) << " ";
          os << f.parts[k].name;
        }
        if (i + 1 < sig.fields.size()) os << ",";
        os << "\n";
      }
    }
    os << "}\n\n";
  }
  for (const auto& f : s.facts) {
    os << "fact";
    if (f.name) os << " " << f.name->name;
    os << " {\n  " << pretty(*f.body) << "\n}\n\n";
  }
  for (const auto& p : s.preds) {
    os << "pred " << p.name.name;
    print_params(os, p.params);
    os << " {\n  " << pretty(*p.body) << "\n}\n\n";
  }
  for (const auto& f : s.funs) {
    os << "fun " << f.name.name;
    print_params(os, f.params);
    os << " : ";
    if (f.result_mult) os << mult_name(*f.result_mult) << " ";
    os << f.result_type.name;
    os << " {\n  " << pretty(*f.body) << "\n}\n\n";
  }
  for (const auto& a : s.asserts) {
    os << "assert " << a.name.name << " {\n  " << pretty(*a.body) << "\n}\n\n";
  }
  for (const auto& c : s.checks) {
    os << "check " << c.assertion.name;
    if (c.scope) os << " for " << *c.scope;
    os << "\n";
  }
  return os.str();
}

bool equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprKind::Name:
      if (a.qualifier != b.qualifier || a.name != b.name) return false;
      break;
    case ExprKind::NoneSet: break;
    case ExprKind::IntLit:
      if (a.int_val != b.int_val) return false;
      break;
    case ExprKind::Unary:
      if (a.uop != b.uop) return false;
      break;
    case ExprKind::Binary:
      if (a.bop != b.bop) return false;
      break;
    case ExprKind::Quant: {
      if (a.quant != b.quant || a.decls.size() != b.decls.size()) return false;
      for (size_t i = 0; i < a.decls.size(); i++) {
        const auto& da = a.decls[i];
        const auto& db = b.decls[i];
        if (da.names.size() != db.names.size()) return false;
        for (size_t k = 0; k < da.names.size(); k++)
          if (da.names[k].name != db.names[k].name) return false;
        if (!equal(*da.domain, *db.domain)) return false;
      }
      break;
    }
    case ExprKind::Let:
      if (a.let_name != b.let_name) return false;
      break;
    case ExprKind::BoxJoin: break;
  }
  if (a.kids.size() != b.kids.size()) return false;
  for (size_t i = 0; i < a.kids.size(); i++)
    if (!equal(*a.kids[i], *b.kids[i])) return false;
  return true;
}

namespace {

bool ident_equal(const Ident& a, const Ident& b) { return a.name == b.name; }

bool opt_ident_equal(const std::optional<Ident>& a, const std::optional<Ident>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || ident_equal(*a, *b);
}

}  // namespace

bool equal(const Spec& a, const Spec& b) {
  if (a.opens.size() != b.opens.size() || a.sigs.size() != b.sigs.size() ||
      a.facts.size() != b.facts.size() || a.preds.size() != b.preds.size() ||
      a.funs.size() != b.funs.size() || a.asserts.size() != b.asserts.size() ||
      a.checks.size() != b.checks.size())
    return false;
  for (size_t i = 0; i < a.opens.size(); i++) {
    const auto& x = a.opens[i];
    const auto& y = b.opens[i];
    if (x.path != y.path || !ident_equal(x.arg, y.arg) || !opt_ident_equal(x.alias, y.alias))
      return false;
  }
  for (size_t i = 0; i < a.sigs.size(); i++) {
    const auto& x = a.sigs[i];
    const auto& y = b.sigs[i];
    if (!ident_equal(x.name, y.name) || x.is_abstract != y.is_abstract ||
        !opt_ident_equal(x.parent, y.parent) || x.fields.size() != y.fields.size())
      return false;
    for (size_t k = 0; k < x.fields.size(); k++) {
      const auto& fx = x.fields[k];
      const auto& fy = y.fields[k];
      if (!ident_equal(fx.name, fy.name) || fx.mult != fy.mult ||
          fx.parts.size() != fy.parts.size())
        return false;
      for (size_t j = 0; j < fx.parts.size(); j++)
        if (!ident_equal(fx.parts[j], fy.parts[j])) return false;
    }
  }
  for (size_t i = 0; i < a.facts.size(); i++) {
    if (!opt_ident_equal(a.facts[i].name, b.facts[i].name) ||
        !equal(*a.facts[i].body, *b.facts[i].body))
      return false;
  }
  auto params_equal = [](const std::vector<ParamDecl>& x, const std::vector<ParamDecl>& y) {
    if (x.size() != y.size()) return false;
    for (size_t i = 0; i < x.size(); i++)
      if (!ident_equal(x[i].name, y[i].name) || !ident_equal(x[i].type, y[i].type)) return false;
    return true;
  };
  for (size_t i = 0; i < a.preds.size(); i++) {
    if (!ident_equal(a.preds[i].name, b.preds[i].name) ||
        !params_equal(a.preds[i].params, b.preds[i].params) ||
        !equal(*a.preds[i].body, *b.preds[i].body))
      return false;
  }
  for (size_t i = 0; i < a.funs.size(); i++) {
    const auto& x = a.funs[i];
    const auto& y = b.funs[i];
    if (!ident_equal(x.name, y.name) || !params_equal(x.params, y.params) ||
        x.result_mult != y.result_mult || !ident_equal(x.result_type, y.result_type) ||
        !equal(*x.body, *y.body))
      return false;
  }
  for (size_t i = 0; i < a.asserts.size(); i++) {
    if (!ident_equal(a.asserts[i].name, b.asserts[i].name) ||
        !equal(*a.asserts[i].body, *b.asserts[i].body))
      return false;
  }
  for (size_t i = 0; i < a.checks.size(); i++) {
    if (!ident_equal(a.checks[i].assertion, b.checks[i].assertion) ||
        a.checks[i].scope != b.checks[i].scope)
      return false;
  }
  return true;
}

}  // namespace relcheck::ast
