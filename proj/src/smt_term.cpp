#include "relcheck/smt/smt.hpp"

namespace relcheck::smt {

std::string Sort::text() const {
  switch (kind) {
    case Kind::Bool: return "Bool";
    case Kind::Int: return "Int";
    case Kind::BitVec: return "(_ BitVec " + std::to_string(width) + ")";
    case Kind::Named: return name;
  }
  return "Bool";
}

TermPtr sym(std::string name) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Sym;
  t->sym = std::move(name);
  return t;
}

TermPtr bool_lit(bool v) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::BoolLit;
  t->bval = v;
  return t;
}

TermPtr int_lit(long long v) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::IntLit;
  t->ival = v;
  return t;
}

TermPtr bv_lit(unsigned long long value, int width) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::BvLit;
  t->bits = width >= 64 ? value : (value & ((1ULL << width) - 1));
  t->width = width;
  return t;
}

TermPtr app(std::string head, std::vector<TermPtr> args) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::App;
  t->sym = std::move(head);
  t->args = std::move(args);
  return t;
}

TermPtr app(std::string head, TermPtr a) { return app(std::move(head), std::vector{std::move(a)}); }
TermPtr app(std::string head, TermPtr a, TermPtr b) {
  return app(std::move(head), std::vector{std::move(a), std::move(b)});
}
TermPtr app(std::string head, TermPtr a, TermPtr b, TermPtr c) {
  return app(std::move(head), std::vector{std::move(a), std::move(b), std::move(c)});
}

static TermPtr quant(bool is_forall, std::vector<std::pair<std::string, Sort>> binders,
                     TermPtr body) {
  if (binders.empty()) return body;
  // A constant body makes the quantifier trivial.
  if (body->kind == Term::Kind::BoolLit) return body;
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Quant;
  t->bval = is_forall;
  t->binders = std::move(binders);
  t->args = {std::move(body)};
  return t;
}

TermPtr forall(std::vector<std::pair<std::string, Sort>> binders, TermPtr body) {
  return quant(true, std::move(binders), std::move(body));
}
TermPtr exists(std::vector<std::pair<std::string, Sort>> binders, TermPtr body) {
  return quant(false, std::move(binders), std::move(body));
}

TermPtr conj(std::vector<TermPtr> ts) {
  std::vector<TermPtr> kept;
  for (auto& t : ts) {
    if (t->kind == Term::Kind::BoolLit) {
      if (!t->bval) return bool_lit(false);
      continue;
    }
    kept.push_back(std::move(t));
  }
  if (kept.empty()) return bool_lit(true);
  if (kept.size() == 1) return kept[0];
  return app("and", std::move(kept));
}

TermPtr disj(std::vector<TermPtr> ts) {
  std::vector<TermPtr> kept;
  for (auto& t : ts) {
    if (t->kind == Term::Kind::BoolLit) {
      if (t->bval) return bool_lit(true);
      continue;
    }
    kept.push_back(std::move(t));
  }
  if (kept.empty()) return bool_lit(false);
  if (kept.size() == 1) return kept[0];
  return app("or", std::move(kept));
}

TermPtr negate(TermPtr t) {
  if (t->kind == Term::Kind::BoolLit) return bool_lit(!t->bval);
  if (t->kind == Term::Kind::App && t->sym == "not" && t->args.size() == 1) return t->args[0];
  return app("not", std::move(t));
}

TermPtr implies(TermPtr a, TermPtr b) {
  if (a->kind == Term::Kind::BoolLit) return a->bval ? b : bool_lit(true);
  if (b->kind == Term::Kind::BoolLit && b->bval) return bool_lit(true);
  return app("=>", std::move(a), std::move(b));
}

TermPtr eq(TermPtr a, TermPtr b) { return app("=", std::move(a), std::move(b)); }

void Script::comment(std::string text) {
  ScriptItem it;
  it.kind = ScriptItem::Kind::Comment;
  it.name = std::move(text);
  items.push_back(std::move(it));
}

void Script::set_option(std::string option) {
  ScriptItem it;
  it.kind = ScriptItem::Kind::SetOption;
  it.name = std::move(option);
  items.push_back(std::move(it));
}

void Script::declare_sort(std::string name) {
  ScriptItem it;
  it.kind = ScriptItem::Kind::DeclareSort;
  it.name = std::move(name);
  items.push_back(std::move(it));
}

void Script::declare_fun(std::string name, std::vector<Sort> args, Sort ret) {
  ScriptItem it;
  it.kind = ScriptItem::Kind::DeclareFun;
  it.name = std::move(name);
  it.arg_sorts = std::move(args);
  it.ret = std::move(ret);
  items.push_back(std::move(it));
}

void Script::define_fun(std::string name, std::vector<std::pair<std::string, Sort>> params,
                        Sort ret, TermPtr body) {
  ScriptItem it;
  it.kind = ScriptItem::Kind::DefineFun;
  it.name = std::move(name);
  it.params = std::move(params);
  it.ret = std::move(ret);
  it.body = std::move(body);
  items.push_back(std::move(it));
}

void Script::assert_term(TermPtr t, std::string comment) {
  ScriptItem it;
  it.kind = ScriptItem::Kind::Assert;
  it.body = std::move(t);
  it.name = std::move(comment);
  items.push_back(std::move(it));
}

void Script::check_sat() {
  ScriptItem it;
  it.kind = ScriptItem::Kind::CheckSat;
  items.push_back(std::move(it));
}

void Script::get_model() {
  ScriptItem it;
  it.kind = ScriptItem::Kind::GetModel;
  items.push_back(std::move(it));
}

}  // namespace relcheck::smt
