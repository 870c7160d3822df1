#include <algorithm>
#include <set>

#include "relcheck/model.hpp"

namespace relcheck {

// ---- Model helpers ----

std::optional<SigId> Model::sig_by_name(const std::string& name) const {
  for (size_t i = 0; i < sigs.size(); i++)
    if (sigs[i].name == name) return static_cast<SigId>(i);
  return std::nullopt;
}

std::optional<FieldId> Model::field_by_name(const std::string& name) const {
  for (size_t i = 0; i < fields.size(); i++)
    if (fields[i].name == name) return static_cast<FieldId>(i);
  return std::nullopt;
}

const NamedFormula* Model::assert_by_name(const std::string& name) const {
  for (const auto& a : asserts)
    if (a.name == name) return &a;
  return nullptr;
}

bool Model::sig_le(SigId a, SigId b) const {
  while (true) {
    if (a == b) return true;
    if (!sigs[static_cast<size_t>(a)].parent) return false;
    a = *sigs[static_cast<size_t>(a)].parent;
  }
}

std::vector<SigId> Model::top_sigs() const {
  std::vector<SigId> out;
  for (size_t i = 0; i < sigs.size(); i++)
    if (!sigs[i].parent) out.push_back(static_cast<SigId>(i));
  return out;
}

std::vector<SigId> Model::subtree(SigId s) const {
  std::vector<SigId> out{s};
  for (size_t i = 0; i < out.size(); i++)
    for (SigId c : sigs[static_cast<size_t>(out[i])].children) out.push_back(c);
  std::sort(out.begin(), out.end());
  return out;
}

// ---- Expression construction helpers ----

namespace core {

CoreExprPtr mk_bool(bool v) {
  auto e = std::make_shared<CoreExpr>();
  e->kind = CoreKind::BoolLit;
  e->sort = ExprSort::Formula;
  e->bval = v;
  return e;
}

CoreExprPtr mk_not(CoreExprPtr a) {
  if (a->kind == CoreKind::BoolLit) return mk_bool(!a->bval);
  auto e = std::make_shared<CoreExpr>();
  e->kind = CoreKind::Not;
  e->sort = ExprSort::Formula;
  e->kids = {std::move(a)};
  return e;
}

CoreExprPtr mk_bin_formula(CoreKind k, CoreExprPtr a, CoreExprPtr b) {
  if (k == CoreKind::And) {
    if (a->kind == CoreKind::BoolLit) return a->bval ? b : a;
    if (b->kind == CoreKind::BoolLit) return b->bval ? a : b;
  }
  if (k == CoreKind::Or) {
    if (a->kind == CoreKind::BoolLit) return a->bval ? a : b;
    if (b->kind == CoreKind::BoolLit) return b->bval ? b : a;
  }
  if (k == CoreKind::Implies) {
    if (a->kind == CoreKind::BoolLit) return a->bval ? b : mk_bool(true);
    if (b->kind == CoreKind::BoolLit && b->bval) return b;
  }
  auto e = std::make_shared<CoreExpr>();
  e->kind = k;
  e->sort = ExprSort::Formula;
  e->kids = {std::move(a), std::move(b)};
  return e;
}

CoreExprPtr mk_and(CoreExprPtr a, CoreExprPtr b) {
  return mk_bin_formula(CoreKind::And, std::move(a), std::move(b));
}
CoreExprPtr mk_implies(CoreExprPtr a, CoreExprPtr b) {
  return mk_bin_formula(CoreKind::Implies, std::move(a), std::move(b));
}

CoreExprPtr mk_var_ref(const VarDecl& v) {
  auto e = std::make_shared<CoreExpr>();
  e->kind = CoreKind::VarRef;
  e->var = v;
  if (v.is_int) {
    e->sort = ExprSort::Int;
  } else {
    e->sort = ExprSort::Rel;
    e->type.cols = {v.col};
  }
  return e;
}

CoreExprPtr mk_sig_ref(const Model& m, SigId s) {
  auto e = std::make_shared<CoreExpr>();
  e->kind = CoreKind::SigRef;
  e->sort = ExprSort::Rel;
  e->sig = s;
  e->type.cols = {ColType{m.sig(s).top, {s}}};
  return e;
}

// Universal or existential quantifier over a signature domain (domain null
// means an integer binder). Folds the two always-safe constant bodies; the
// duals are not safe because domains may be empty.
CoreExprPtr mk_quant(QuantKind q, const VarDecl& v, CoreExprPtr domain, CoreExprPtr body) {
  if (body->kind == CoreKind::BoolLit) {
    if (q == QuantKind::All && body->bval) return body;
    if (q == QuantKind::Some && !body->bval) return body;
  }
  // Over a statically empty domain, `all` holds vacuously and `some` fails.
  if (domain && statically_empty(*domain)) return mk_bool(q == QuantKind::All);
  auto e = std::make_shared<CoreExpr>();
  e->kind = CoreKind::Quant;
  e->sort = ExprSort::Formula;
  e->quant = q;
  e->var = v;
  if (domain) e->kids.push_back(std::move(domain));
  e->kids.push_back(std::move(body));
  return e;
}

bool statically_empty(const CoreExpr& rel) {
  for (const auto& c : rel.type.cols)
    if (c.sigs.empty()) return true;
  return false;
}

CoreExprPtr mk_in(CoreExprPtr a, CoreExprPtr b) {
  if (statically_empty(*a)) return mk_bool(true);
  auto e = std::make_shared<CoreExpr>();
  e->kind = CoreKind::InRel;
  e->sort = ExprSort::Formula;
  e->kids = {std::move(a), std::move(b)};
  return e;
}

CoreExprPtr mk_product(CoreExprPtr a, CoreExprPtr b) {
  auto e = std::make_shared<CoreExpr>();
  e->kind = CoreKind::Product;
  e->sort = ExprSort::Rel;
  e->type.cols = a->type.cols;
  for (const auto& c : b->type.cols) e->type.cols.push_back(c);
  e->kids = {std::move(a), std::move(b)};
  return e;
}

CoreExprPtr mk_eq_atoms(const VarDecl& a, const VarDecl& b) {
  auto e = std::make_shared<CoreExpr>();
  e->kind = CoreKind::EqRel;
  e->sort = ExprSort::Formula;
  e->kids = {mk_var_ref(a), mk_var_ref(b)};
  return e;
}

}  // namespace core

namespace {

using namespace core;

class Typechecker {
 public:
  Model run(const ast::Spec& spec) {
    spec_ = &spec;
    declare_sigs(spec);
    resolve_hierarchy(spec);
    apply_opens(spec);
    declare_fields(spec);
    register_templates(spec);
    for (const auto& name : template_order_) ensure_template(name);
    for (const auto& f : spec.facts) {
      NamedFormula fact;
      if (f.name) fact.name = f.name->name;
      fact.body = require_formula(type_expr(*f.body), f.body->span);
      m_.facts.push_back(std::move(fact));
    }
    for (const auto& a : spec.asserts) {
      check_unique(a.name.name, a.name.span);
      names_.insert(a.name.name);
      m_.asserts.push_back(
          NamedFormula{a.name.name, require_formula(type_expr(*a.body), a.body->span)});
    }
    for (const auto& c : spec.checks) {
      if (!m_.assert_by_name(c.assertion.name))
        throw Error(ErrorKind::Name, "unknown assertion '" + c.assertion.name + "'",
                    c.assertion.span);
      if (c.scope && *c.scope < 1)
        throw Error(ErrorKind::Scope, "scope bound must be at least 1", c.span);
      m_.checks.push_back(CheckDirective{c.assertion.name, c.scope});
    }
    return std::move(m_);
  }

 private:
  Model m_;
  const ast::Spec* spec_ = nullptr;
  std::set<std::string> names_;  // one global namespace; duplicates rejected
  std::vector<std::string> template_order_;
  std::map<std::string, const ast::PredDecl*> pending_preds_;
  std::map<std::string, const ast::FunDecl*> pending_funs_;
  std::set<std::string> typing_now_;  // recursion detection
  std::map<std::string, size_t> template_index_;
  std::vector<std::pair<std::string, CoreExprPtr>> scope_;

  void check_unique(const std::string& name, Span span) {
    if (names_.count(name))
      throw Error(ErrorKind::Name, "the name '" + name + "' is already defined", span);
  }

  VarDecl fresh_var(const std::string& name, const ColType& col) {
    VarDecl v;
    v.id = m_.var_counter++;
    v.name = name;
    v.col = col;
    return v;
  }

  VarDecl fresh_int_var(const std::string& name) {
    VarDecl v;
    v.id = m_.var_counter++;
    v.name = name;
    v.is_int = true;
    return v;
  }

  // ---- declarations ----

  void declare_sigs(const ast::Spec& spec) {
    for (const auto& s : spec.sigs) {
      check_unique(s.name.name, s.name.span);
      if (s.name.name == "Int")
        throw Error(ErrorKind::Name, "'Int' is a built-in name", s.name.span);
      names_.insert(s.name.name);
      Signature sig;
      sig.name = s.name.name;
      sig.is_abstract = s.is_abstract;
      m_.sigs.push_back(std::move(sig));
    }
  }

  void resolve_hierarchy(const ast::Spec& spec) {
    for (size_t i = 0; i < spec.sigs.size(); i++) {
      if (!spec.sigs[i].parent) continue;
      auto p = m_.sig_by_name(spec.sigs[i].parent->name);
      if (!p)
        throw Error(ErrorKind::Name, "unknown signature '" + spec.sigs[i].parent->name + "'",
                    spec.sigs[i].parent->span);
      m_.sigs[i].parent = *p;
      m_.sigs[static_cast<size_t>(*p)].children.push_back(static_cast<SigId>(i));
    }
    // Detect cycles and fill top/depth.
    for (size_t i = 0; i < m_.sigs.size(); i++) {
      SigId cur = static_cast<SigId>(i);
      int depth = 0;
      std::set<SigId> seen{cur};
      while (m_.sigs[static_cast<size_t>(cur)].parent) {
        cur = *m_.sigs[static_cast<size_t>(cur)].parent;
        depth++;
        if (!seen.insert(cur).second)
          throw Error(ErrorKind::Name,
                      "cyclic extends chain involving '" + m_.sigs[i].name + "'",
                      spec.sigs[i].span);
      }
      m_.sigs[i].top = cur;
      m_.sigs[i].depth = depth;
    }
  }

  void apply_opens(const ast::Spec& spec) {
    for (const auto& o : spec.opens) {
      if (m_.ordered_sig)
        throw Error(ErrorKind::UnsupportedConstruct, "at most one ordering can be opened",
                    o.span);
      auto s = m_.sig_by_name(o.arg.name);
      if (!s) throw Error(ErrorKind::Name, "unknown signature '" + o.arg.name + "'", o.arg.span);
      const Signature& sig = m_.sig(*s);
      if (sig.parent || sig.is_abstract)
        throw Error(ErrorKind::UnsupportedConstruct,
                    "ordering is only supported over top-level non-abstract signatures",
                    o.arg.span);
      m_.ordered_sig = *s;
      m_.ordering_alias = o.alias ? o.alias->name : "ordering";
    }
  }

  void declare_fields(const ast::Spec& spec) {
    for (size_t i = 0; i < spec.sigs.size(); i++) {
      SigId owner = static_cast<SigId>(i);
      for (const auto& fd : spec.sigs[i].fields) {
        check_unique(fd.name.name, fd.name.span);
        Field field;
        field.name = fd.name.name;
        field.owner = owner;
        field.cols.push_back(owner);
        for (size_t k = 0; k < fd.parts.size(); k++) {
          const ast::Ident& part = fd.parts[k];
          if (k == 0) {
            if (auto restr = m_.field_by_name(part.name)) {
              if (m_.field(*restr).owner != owner)
                throw Error(ErrorKind::Name,
                            "'" + part.name + "' is a field of another signature", part.span);
              field.restriction = *restr;
              // The restricted field contributes all of its columns but the
              // leading owner column, which this field shares.
              const auto& rcols = m_.field(*restr).cols;
              field.cols.assign(rcols.begin(), rcols.end());
              continue;
            }
          }
          auto s = m_.sig_by_name(part.name);
          if (!s) {
            if (part.name == "Int")
              throw Error(ErrorKind::UnsupportedConstruct,
                          "integer-valued fields are not supported", part.span);
            throw Error(ErrorKind::Name, "unknown signature '" + part.name + "'", part.span);
          }
          if (k + 1 < fd.parts.size() && field.restriction)
            throw Error(ErrorKind::UnsupportedConstruct,
                        "domain restrictions may only appear as the first column", part.span);
          field.cols.push_back(*s);
        }
        if (field.restriction && fd.parts.size() != 2)
          throw Error(ErrorKind::UnsupportedConstruct,
                      "a restricted field takes exactly one range column", fd.span);
        field.mult = fd.mult ? to_mult(*fd.mult)
                             : (field.cols.size() == 2 ? Mult::One : Mult::Set);
        names_.insert(field.name);
        m_.fields.push_back(std::move(field));
      }
    }
  }

  static Mult to_mult(ast::Mult m) {
    switch (m) {
      case ast::Mult::Set: return Mult::Set;
      case ast::Mult::Some: return Mult::Some;
      case ast::Mult::One: return Mult::One;
      case ast::Mult::Lone: return Mult::Lone;
    }
    return Mult::Set;
  }

  void register_templates(const ast::Spec& spec) {
    for (const auto& p : spec.preds) {
      check_unique(p.name.name, p.name.span);
      names_.insert(p.name.name);
      pending_preds_[p.name.name] = &p;
      template_order_.push_back(p.name.name);
    }
    for (const auto& f : spec.funs) {
      check_unique(f.name.name, f.name.span);
      names_.insert(f.name.name);
      pending_funs_[f.name.name] = &f;
      template_order_.push_back(f.name.name);
    }
  }

  const Template* find_template(const std::string& name) {
    auto it = template_index_.find(name);
    if (it != template_index_.end()) return &m_.templates[it->second];
    return nullptr;
  }

  bool is_template_name(const std::string& name) const {
    return pending_preds_.count(name) || pending_funs_.count(name);
  }

  const Template& ensure_template(const std::string& name) {
    if (const Template* t = find_template(name)) return *t;
    if (typing_now_.count(name))
      throw Error(ErrorKind::UnsupportedConstruct,
                  "recursive use of '" + name + "' is not supported");
    typing_now_.insert(name);

    Template tmpl;
    tmpl.name = name;
    std::vector<std::pair<std::string, CoreExprPtr>> saved;
    saved.swap(scope_);  // templates close over nothing

    auto type_params = [&](const std::vector<ast::ParamDecl>& params) {
      for (const auto& p : params) {
        auto s = m_.sig_by_name(p.type.name);
        if (!s)
          throw Error(ErrorKind::Name, "unknown signature '" + p.type.name + "'", p.type.span);
        VarDecl v = fresh_var(p.name.name, ColType{m_.sig(*s).top, {*s}});
        tmpl.params.push_back(v);
        scope_.emplace_back(p.name.name, mk_var_ref(v));
      }
    };

    if (auto it = pending_preds_.find(name); it != pending_preds_.end()) {
      const ast::PredDecl& p = *it->second;
      tmpl.is_pred = true;
      type_params(p.params);
      tmpl.body = require_formula(type_expr(*p.body), p.body->span);
    } else {
      const ast::FunDecl& f = *pending_funs_.at(name);
      tmpl.is_pred = false;
      type_params(f.params);
      auto rs = m_.sig_by_name(f.result_type.name);
      if (!rs)
        throw Error(ErrorKind::Name, "unknown signature '" + f.result_type.name + "'",
                    f.result_type.span);
      tmpl.result = ColType{m_.sig(*rs).top, {*rs}};
      CoreExprPtr body = type_expr(*f.body);
      if (body->sort != ExprSort::Rel)
        throw Error(ErrorKind::Type, "function body must be a relational expression",
                    f.body->span);
      if (body->type.arity() != 1)
        throw Error(ErrorKind::Arity, "function body must be a unary relation", f.body->span);
      if (!body->type.cols[0].sigs.empty() && body->type.cols[0].top != tmpl.result.top)
        throw Error(ErrorKind::Type,
                    "function body does not match the declared result signature",
                    f.body->span);
      tmpl.body = body;
    }

    scope_.swap(saved);
    typing_now_.erase(name);
    template_index_[name] = m_.templates.size();
    m_.templates.push_back(std::move(tmpl));
    return m_.templates.back();
  }

  // ---- typing of expressions ----

  CoreExprPtr require_formula(CoreExprPtr e, Span span) {
    if (e->sort != ExprSort::Formula)
      throw Error(ErrorKind::Type, "expected a formula", span);
    return e;
  }

  CoreExprPtr require_rel(CoreExprPtr e, Span span) {
    if (e->sort != ExprSort::Rel)
      throw Error(ErrorKind::Type, "expected a relational expression", span);
    return e;
  }

  bool related(SigId a, SigId b) const { return m_.sig_le(a, b) || m_.sig_le(b, a); }

  // Columns are compatible when they range over the same extends-tree; the
  // bottom column (from `none`) is compatible with anything.
  void require_same_top(const ColType& a, const ColType& b, Span span) {
    if (a.top < 0 || b.top < 0) return;
    if (a.top != b.top)
      throw Error(ErrorKind::Type,
                  "columns range over different top-level signatures ('" +
                      m_.sig(a.top).name + "' vs '" + m_.sig(b.top).name + "')",
                  span);
  }

  ColType col_union(const ColType& a, const ColType& b, Span span) {
    require_same_top(a, b, span);
    if (a.sigs.empty()) return b;
    if (b.sigs.empty()) return a;
    ColType out{a.top, a.sigs};
    for (SigId s : b.sigs)
      if (!std::count(out.sigs.begin(), out.sigs.end(), s)) out.sigs.push_back(s);
    std::sort(out.sigs.begin(), out.sigs.end());
    return out;
  }

  ColType col_inter(const ColType& a, const ColType& b, Span span) {
    require_same_top(a, b, span);
    ColType out{a.top < 0 ? b.top : a.top, {}};
    auto keep = [&](SigId s, const std::vector<SigId>& other) {
      for (SigId t : other)
        if (related(s, t)) return true;
      return false;
    };
    for (SigId s : a.sigs)
      if (keep(s, b.sigs)) out.sigs.push_back(s);
    for (SigId s : b.sigs)
      if (keep(s, a.sigs) && !std::count(out.sigs.begin(), out.sigs.end(), s))
        out.sigs.push_back(s);
    std::sort(out.sigs.begin(), out.sigs.end());
    return out;
  }

  void require_comparable(const CoreExpr& a, const CoreExpr& b, Span span) {
    if (a.type.arity() != b.type.arity())
      throw Error(ErrorKind::Arity,
                  "relations of arity " + std::to_string(a.type.arity()) + " and " +
                      std::to_string(b.type.arity()) + " cannot be compared",
                  span);
    for (int i = 0; i < a.type.arity(); i++)
      require_same_top(a.type.cols[i], b.type.cols[i], span);
  }

  CoreExprPtr lookup_name(const std::string& name, Span span) {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->first == name) return it->second;
    if (auto s = m_.sig_by_name(name)) return mk_sig_ref(m_, *s);
    if (auto f = m_.field_by_name(name)) {
      auto e = std::make_shared<CoreExpr>();
      e->kind = CoreKind::FieldRef;
      e->sort = ExprSort::Rel;
      e->field = *f;
      for (SigId c : m_.field(*f).cols) e->type.cols.push_back(ColType{m_.sig(c).top, {c}});
      return e;
    }
    if (is_template_name(name)) return call_template(name, {}, span);
    if (name == "Int")
      throw Error(ErrorKind::UnsupportedConstruct,
                  "'Int' can only be used as a quantifier domain", span);
    throw Error(ErrorKind::Name, "unknown name '" + name + "'", span);
  }

  CoreExprPtr ordering_ref(const std::string& qualifier, const std::string& name, Span span) {
    if (!m_.ordered_sig || qualifier != m_.ordering_alias)
      throw Error(ErrorKind::Name, "unknown module alias '" + qualifier + "'", span);
    SigId s = *m_.ordered_sig;
    auto e = std::make_shared<CoreExpr>();
    e->sort = ExprSort::Rel;
    e->sig = s;
    ColType col{m_.sig(s).top, {s}};
    if (name == "first" || name == "last") {
      e->kind = name == "first" ? CoreKind::OrdFirst : CoreKind::OrdLast;
      e->type.cols = {col};
    } else if (name == "next" || name == "prev") {
      e->kind = name == "next" ? CoreKind::OrdNext : CoreKind::OrdPrev;
      e->type.cols = {col, col};
    } else {
      throw Error(ErrorKind::Name,
                  "unknown ordering member '" + name + "' (expected first, last, next, prev)",
                  span);
    }
    return e;
  }

  CoreExprPtr call_template(const std::string& name, const std::vector<CoreExprPtr>& args,
                            Span span) {
    const Template& t = ensure_template(name);
    if (args.size() != t.params.size())
      throw Error(ErrorKind::Arity,
                  "'" + name + "' takes " + std::to_string(t.params.size()) +
                      " argument(s), got " + std::to_string(args.size()),
                  span);
    for (size_t i = 0; i < args.size(); i++) {
      const CoreExpr& a = *args[i];
      if (a.sort != ExprSort::Rel || a.type.arity() != 1)
        throw Error(ErrorKind::Type, "argument " + std::to_string(i + 1) + " of '" + name +
                                          "' must be a unary relational expression",
                    span);
      const ColType& pc = t.params[i].col;
      const ColType& ac = a.type.cols[0];
      if (ac.sigs.empty()) continue;
      if (ac.top != pc.top)
        throw Error(ErrorKind::Type,
                    "argument " + std::to_string(i + 1) + " of '" + name +
                        "' has the wrong signature",
                    span);
      for (SigId s : ac.sigs)
        if (!related(s, pc.sigs[0]))
          throw Error(ErrorKind::Type,
                      "argument " + std::to_string(i + 1) + " of '" + name +
                          "' has the wrong signature",
                      span);
    }
    return instantiate_template(m_, t, args);
  }

  // Membership of the tuple of variables `vars` in `rel`.
  CoreExprPtr tuple_in(const std::vector<VarDecl>& vars, CoreExprPtr rel) {
    CoreExprPtr tuple = mk_var_ref(vars[0]);
    for (size_t i = 1; i < vars.size(); i++) tuple = mk_product(tuple, mk_var_ref(vars[i]));
    return mk_in(std::move(tuple), std::move(rel));
  }

  std::vector<VarDecl> tuple_vars(const CoreExpr& rel, const std::string& stem) {
    std::vector<VarDecl> vars;
    for (int i = 0; i < rel.type.arity(); i++) {
      const ColType& c = rel.type.cols[i];
      vars.push_back(fresh_var(stem + std::to_string(i), ColType{c.top, {c.top}}));
    }
    return vars;
  }

  CoreExprPtr quantify(QuantKind q, const std::vector<VarDecl>& vars, CoreExprPtr body) {
    for (auto it = vars.rbegin(); it != vars.rend(); ++it)
      body = mk_quant(q, *it, mk_sig_ref(m_, it->col.sigs[0]), std::move(body));
    return body;
  }

  // some/no/lone/one applied to a relational expression.
  CoreExprPtr cardinality_formula(ast::UnOp op, CoreExprPtr rel, Span span) {
    if (statically_empty(*rel)) {
      switch (op) {
        case ast::UnOp::CardSome: return mk_bool(false);
        case ast::UnOp::CardNo: return mk_bool(true);
        case ast::UnOp::CardLone: return mk_bool(true);
        case ast::UnOp::CardOne: return mk_bool(false);
        default: break;
      }
    }
    switch (op) {
      case ast::UnOp::CardSome: {
        auto vars = tuple_vars(*rel, "t");
        return quantify(QuantKind::Some, vars, tuple_in(vars, rel));
      }
      case ast::UnOp::CardNo: {
        auto vars = tuple_vars(*rel, "t");
        return quantify(QuantKind::All, vars, mk_not(tuple_in(vars, rel)));
      }
      case ast::UnOp::CardLone: {
        auto xs = tuple_vars(*rel, "u");
        auto ys = tuple_vars(*rel, "v");
        CoreExprPtr eq = mk_eq_atoms(xs[0], ys[0]);
        for (size_t i = 1; i < xs.size(); i++) eq = mk_and(eq, mk_eq_atoms(xs[i], ys[i]));
        CoreExprPtr body =
            mk_implies(mk_and(tuple_in(xs, rel), tuple_in(ys, rel)), std::move(eq));
        return quantify(QuantKind::All, xs, quantify(QuantKind::All, ys, std::move(body)));
      }
      case ast::UnOp::CardOne:
        return mk_and(cardinality_formula(ast::UnOp::CardSome, rel, span),
                      cardinality_formula(ast::UnOp::CardLone, rel, span));
      default:
        throw Error(ErrorKind::Internal, "not a cardinality prefix");
    }
  }

  CoreExprPtr type_quant(const ast::Expr& e) {
    // Collect all binders in order, then build the lowered nest inside-out.
    struct Binder {
      std::string name;
      VarDecl var;
      CoreExprPtr domain;  // null for Int
    };
    std::vector<Binder> binders;
    size_t scope_base = scope_.size();
    for (const auto& d : e.decls) {
      // Earlier binders are already in scope here, so a later domain may
      // depend on them (`all b: Book, n: b.names | ...`).
      CoreExprPtr domain;
      bool is_int = d.domain->kind == ast::ExprKind::Name && d.domain->qualifier.empty() &&
                    d.domain->name == "Int";
      if (!is_int) {
        domain = require_rel(type_expr(*d.domain), d.domain->span);
        if (domain->type.arity() != 1)
          throw Error(ErrorKind::Arity, "quantifier domain must be a unary relation",
                      d.domain->span);
      }
      for (const auto& n : d.names) {
        Binder b;
        b.name = n.name;
        b.var = is_int ? fresh_int_var(n.name)
                       : fresh_var(n.name, domain->type.cols[0]);
        b.domain = domain;
        scope_.emplace_back(b.name, mk_var_ref(b.var));
        binders.push_back(std::move(b));
      }
    }

    CoreExprPtr body = require_formula(type_expr(*e.kids[0]), e.kids[0]->span);
    scope_.resize(scope_base);

    auto nest = [&](QuantKind q, CoreExprPtr inner) {
      for (auto it = binders.rbegin(); it != binders.rend(); ++it)
        inner = mk_quant(q, it->var, it->domain, std::move(inner));
      return inner;
    };

    switch (e.quant) {
      case ast::QuantKind::All: return nest(QuantKind::All, body);
      case ast::QuantKind::Some: return nest(QuantKind::Some, body);
      case ast::QuantKind::No: return nest(QuantKind::All, mk_not(body));
      case ast::QuantKind::Lone:
      case ast::QuantKind::One: {
        // lone B | P  ==  all B, B' | P and P' implies B = B'
        std::vector<Binder> copies;
        CoreExprPtr body2 = body;
        CoreExprPtr eq;
        for (const auto& b : binders) {
          Binder c = b;
          c.var = b.var.is_int ? fresh_int_var(b.name + "_") : fresh_var(b.name + "_", b.var.col);
          // Dependent domains must follow the renaming too: in the duplicate
          // nest, a domain mentioning an earlier binder refers to its copy.
          for (size_t i = 0; i < copies.size(); i++)
            if (c.domain)
              c.domain = replace_var(c.domain, binders[i].var.id, mk_var_ref(copies[i].var));
          body2 = replace_var(body2, b.var.id, mk_var_ref(c.var));
          CoreExprPtr pair_eq;
          if (b.var.is_int) {
            auto cmp = std::make_shared<CoreExpr>();
            cmp->kind = CoreKind::IntCmp;
            cmp->sort = ExprSort::Formula;
            cmp->cmp = CmpOp::Eq;
            cmp->kids = {mk_var_ref(b.var), mk_var_ref(c.var)};
            pair_eq = cmp;
          } else {
            pair_eq = mk_eq_atoms(b.var, c.var);
          }
          eq = eq ? mk_and(eq, pair_eq) : pair_eq;
          copies.push_back(std::move(c));
        }
        CoreExprPtr lone_body = mk_implies(mk_and(body, body2), eq);
        for (auto it = copies.rbegin(); it != copies.rend(); ++it)
          lone_body = mk_quant(QuantKind::All, it->var, it->domain, std::move(lone_body));
        CoreExprPtr lone = nest(QuantKind::All, lone_body);
        if (e.quant == ast::QuantKind::Lone) return lone;
        return mk_and(nest(QuantKind::Some, body), lone);
      }
    }
    throw Error(ErrorKind::Internal, "unhandled quantifier");
  }

  CoreExprPtr type_binary(const ast::Expr& e) {
    Span span = e.span;
    switch (e.bop) {
      case ast::BinOp::And:
      case ast::BinOp::Or:
      case ast::BinOp::Implies:
      case ast::BinOp::Iff: {
        CoreExprPtr a = require_formula(type_expr(*e.kids[0]), e.kids[0]->span);
        CoreExprPtr b = require_formula(type_expr(*e.kids[1]), e.kids[1]->span);
        CoreKind k = e.bop == ast::BinOp::And       ? CoreKind::And
                     : e.bop == ast::BinOp::Or      ? CoreKind::Or
                     : e.bop == ast::BinOp::Implies ? CoreKind::Implies
                                                    : CoreKind::Iff;
        return mk_bin_formula(k, std::move(a), std::move(b));
      }
      case ast::BinOp::Plus:
      case ast::BinOp::Minus: {
        CoreExprPtr a = type_expr(*e.kids[0]);
        CoreExprPtr b = type_expr(*e.kids[1]);
        if (a->sort == ExprSort::Int && b->sort == ExprSort::Int) {
          auto out = std::make_shared<CoreExpr>();
          out->kind = e.bop == ast::BinOp::Plus ? CoreKind::IntAdd : CoreKind::IntSub;
          out->sort = ExprSort::Int;
          out->kids = {std::move(a), std::move(b)};
          return out;
        }
        if (a->sort != ExprSort::Rel || b->sort != ExprSort::Rel)
          throw Error(ErrorKind::Type, "operands of +/- must both be relations or both integers",
                      span);
        require_comparable(*a, *b, span);
        auto out = std::make_shared<CoreExpr>();
        out->kind = e.bop == ast::BinOp::Plus ? CoreKind::Union : CoreKind::Diff;
        out->sort = ExprSort::Rel;
        for (int i = 0; i < a->type.arity(); i++) {
          out->type.cols.push_back(e.bop == ast::BinOp::Plus
                                       ? col_union(a->type.cols[i], b->type.cols[i], span)
                                       : a->type.cols[i]);
        }
        if (e.bop == ast::BinOp::Minus && statically_empty(*a)) return a;  // none - e
        out->kids = {std::move(a), std::move(b)};
        return out;
      }
      case ast::BinOp::Inter: {
        CoreExprPtr a = require_rel(type_expr(*e.kids[0]), e.kids[0]->span);
        CoreExprPtr b = require_rel(type_expr(*e.kids[1]), e.kids[1]->span);
        require_comparable(*a, *b, span);
        auto out = std::make_shared<CoreExpr>();
        out->kind = CoreKind::Inter;
        out->sort = ExprSort::Rel;
        for (int i = 0; i < a->type.arity(); i++)
          out->type.cols.push_back(col_inter(a->type.cols[i], b->type.cols[i], span));
        out->kids = {std::move(a), std::move(b)};
        return out;
      }
      case ast::BinOp::Arrow: {
        CoreExprPtr a = require_rel(type_expr(*e.kids[0]), e.kids[0]->span);
        CoreExprPtr b = require_rel(type_expr(*e.kids[1]), e.kids[1]->span);
        return mk_product(std::move(a), std::move(b));
      }
      case ast::BinOp::Join: {
        CoreExprPtr a = require_rel(type_expr(*e.kids[0]), e.kids[0]->span);
        CoreExprPtr b = require_rel(type_expr(*e.kids[1]), e.kids[1]->span);
        return join(std::move(a), std::move(b), span);
      }
      case ast::BinOp::In: {
        CoreExprPtr a = require_rel(type_expr(*e.kids[0]), e.kids[0]->span);
        CoreExprPtr b = require_rel(type_expr(*e.kids[1]), e.kids[1]->span);
        require_comparable(*a, *b, span);
        if (statically_empty(*b) && !statically_empty(*a))
          return cardinality_formula(ast::UnOp::CardNo, a, span);
        return mk_in(std::move(a), std::move(b));
      }
      case ast::BinOp::Eq:
      case ast::BinOp::Neq: {
        CoreExprPtr a = type_expr(*e.kids[0]);
        CoreExprPtr b = type_expr(*e.kids[1]);
        CoreExprPtr eq;
        if (a->sort == ExprSort::Int && b->sort == ExprSort::Int) {
          auto cmp = std::make_shared<CoreExpr>();
          cmp->kind = CoreKind::IntCmp;
          cmp->sort = ExprSort::Formula;
          cmp->cmp = CmpOp::Eq;
          cmp->kids = {std::move(a), std::move(b)};
          eq = cmp;
        } else if (a->sort == ExprSort::Rel && b->sort == ExprSort::Rel) {
          require_comparable(*a, *b, span);
          if (statically_empty(*a) && statically_empty(*b)) {
            eq = mk_bool(true);
          } else if (statically_empty(*b)) {
            eq = cardinality_formula(ast::UnOp::CardNo, a, span);
          } else if (statically_empty(*a)) {
            eq = cardinality_formula(ast::UnOp::CardNo, b, span);
          } else {
            auto out = std::make_shared<CoreExpr>();
            out->kind = CoreKind::EqRel;
            out->sort = ExprSort::Formula;
            out->kids = {std::move(a), std::move(b)};
            eq = out;
          }
        } else {
          throw Error(ErrorKind::Type, "'=' expects two relations or two integers", span);
        }
        return e.bop == ast::BinOp::Eq ? eq : mk_not(eq);
      }
      case ast::BinOp::Lt:
      case ast::BinOp::Le:
      case ast::BinOp::Gt:
      case ast::BinOp::Ge: {
        CoreExprPtr a = type_expr(*e.kids[0]);
        CoreExprPtr b = type_expr(*e.kids[1]);
        if (a->sort != ExprSort::Int || b->sort != ExprSort::Int)
          throw Error(ErrorKind::Type, "integer comparison expects integer operands", span);
        auto cmp = std::make_shared<CoreExpr>();
        cmp->kind = CoreKind::IntCmp;
        cmp->sort = ExprSort::Formula;
        cmp->cmp = e.bop == ast::BinOp::Lt   ? CmpOp::Lt
                   : e.bop == ast::BinOp::Le ? CmpOp::Le
                   : e.bop == ast::BinOp::Gt ? CmpOp::Gt
                                             : CmpOp::Ge;
        cmp->kids = {std::move(a), std::move(b)};
        return cmp;
      }
    }
    throw Error(ErrorKind::Internal, "unhandled binary operator");
  }

  CoreExprPtr join(CoreExprPtr a, CoreExprPtr b, Span span) {
    int m = a->type.arity();
    int n = b->type.arity();
    if (m + n - 2 < 1)
      throw Error(ErrorKind::Arity, "join of two unary relations has arity 0", span);
    const ColType& ca = a->type.cols[static_cast<size_t>(m - 1)];
    const ColType& cb = b->type.cols[0];
    require_same_top(ca, cb, span);
    // The join is statically empty unless some column signatures can overlap.
    bool overlap = ca.sigs.empty() || cb.sigs.empty();
    for (SigId x : ca.sigs)
      for (SigId y : cb.sigs)
        if (related(x, y)) overlap = true;
    if (!overlap)
      throw Error(ErrorKind::Type, "join can never match: column signatures are disjoint",
                  span);
    auto out = std::make_shared<CoreExpr>();
    out->kind = CoreKind::Join;
    out->sort = ExprSort::Rel;
    for (int i = 0; i < m - 1; i++) out->type.cols.push_back(a->type.cols[static_cast<size_t>(i)]);
    for (int i = 1; i < n; i++) out->type.cols.push_back(b->type.cols[static_cast<size_t>(i)]);
    out->kids = {std::move(a), std::move(b)};
    return out;
  }

  CoreExprPtr type_expr(const ast::Expr& e) {
    switch (e.kind) {
      case ast::ExprKind::Name:
        if (!e.qualifier.empty()) return ordering_ref(e.qualifier, e.name, e.span);
        return lookup_name(e.name, e.span);
      case ast::ExprKind::NoneSet: {
        auto out = std::make_shared<CoreExpr>();
        out->kind = CoreKind::NoneSet;
        out->sort = ExprSort::Rel;
        out->type.cols = {ColType{}};
        return out;
      }
      case ast::ExprKind::IntLit: {
        auto out = std::make_shared<CoreExpr>();
        out->kind = CoreKind::IntLit;
        out->sort = ExprSort::Int;
        out->ival = e.int_val;
        return out;
      }
      case ast::ExprKind::Unary:
        switch (e.uop) {
          case ast::UnOp::Not:
            return mk_not(require_formula(type_expr(*e.kids[0]), e.kids[0]->span));
          case ast::UnOp::CardNo:
          case ast::UnOp::CardSome:
          case ast::UnOp::CardLone:
          case ast::UnOp::CardOne:
            return cardinality_formula(
                e.uop, require_rel(type_expr(*e.kids[0]), e.kids[0]->span), e.span);
          case ast::UnOp::TransClose:
          case ast::UnOp::ReflClose: {
            CoreExprPtr a = require_rel(type_expr(*e.kids[0]), e.kids[0]->span);
            if (a->type.arity() != 2)
              throw Error(ErrorKind::Arity, "closure applies to binary relations only",
                          e.span);
            require_same_top(a->type.cols[0], a->type.cols[1], e.span);
            auto out = std::make_shared<CoreExpr>();
            out->sort = ExprSort::Rel;
            if (e.uop == ast::UnOp::TransClose) {
              out->kind = CoreKind::TransClose;
              out->type = a->type;
            } else {
              // Reflexive-transitive closure includes (x, x) for every atom of
              // the columns' shared top-level signature.
              SigId top = a->type.cols[0].top;
              if (top < 0) top = a->type.cols[1].top;
              if (top < 0)
                throw Error(ErrorKind::Type, "cannot determine the signature of '*'",
                            e.span);
              out->kind = CoreKind::ReflClose;
              out->sig = top;
              out->type.cols = {ColType{top, {top}}, ColType{top, {top}}};
            }
            out->kids = {std::move(a)};
            return out;
          }
        }
        throw Error(ErrorKind::Internal, "unhandled unary operator");
      case ast::ExprKind::Binary: return type_binary(e);
      case ast::ExprKind::Quant: return type_quant(e);
      case ast::ExprKind::Let: {
        CoreExprPtr value = type_expr(*e.kids[0]);
        scope_.emplace_back(e.let_name, value);
        CoreExprPtr body = type_expr(*e.kids[1]);
        scope_.pop_back();
        return body;
      }
      case ast::ExprKind::BoxJoin: {
        const ast::Expr& target = *e.kids[0];
        std::vector<CoreExprPtr> args;
        for (size_t i = 1; i < e.kids.size(); i++) args.push_back(type_expr(*e.kids[i]));
        bool shadowed = false;
        if (target.kind == ast::ExprKind::Name && target.qualifier.empty()) {
          for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
            if (it->first == target.name) shadowed = true;
          if (!shadowed && is_template_name(target.name))
            return call_template(target.name, args, e.span);
        }
        // Relational box join: f[a, b] is b.(a.f).
        CoreExprPtr acc = require_rel(type_expr(target), target.span);
        for (size_t i = 0; i < args.size(); i++) {
          if (args[i]->sort != ExprSort::Rel)
            throw Error(ErrorKind::Type, "box-join arguments must be relational",
                        e.kids[i + 1]->span);
          acc = join(args[i], std::move(acc), e.span);
        }
        return acc;
      }
    }
    throw Error(ErrorKind::Internal, "unhandled expression kind");
  }
};

}  // namespace

Model typecheck(const ast::Spec& spec) {
  Typechecker tc;
  return tc.run(spec);
}

// ---- field constraints ----

namespace {

using namespace core;

// Builds quantified formulas with ids outside the model's allocated range;
// see header comment on field_constraint.
class ConstraintBuilder {
 public:
  explicit ConstraintBuilder(const Model& m) : m_(m), counter_(m.var_counter) {}

  CoreExprPtr build(FieldId fid) {
    const Field& f = m_.field(fid);
    auto field_ref = std::make_shared<CoreExpr>();
    field_ref->kind = CoreKind::FieldRef;
    field_ref->sort = ExprSort::Rel;
    field_ref->field = fid;
    for (SigId c : f.cols) field_ref->type.cols.push_back(ColType{m_.sig(c).top, {c}});

    // Containment: the field lies inside its declared bounds.
    CoreExprPtr bounds;
    if (f.restriction) {
      auto restr_ref = std::make_shared<CoreExpr>();
      restr_ref->kind = CoreKind::FieldRef;
      restr_ref->sort = ExprSort::Rel;
      restr_ref->field = *f.restriction;
      for (SigId c : m_.field(*f.restriction).cols)
        restr_ref->type.cols.push_back(ColType{m_.sig(c).top, {c}});
      bounds = mk_product(restr_ref, mk_sig_ref(m_, f.cols.back()));
    } else {
      bounds = mk_sig_ref(m_, f.cols[0]);
      for (size_t i = 1; i < f.cols.size(); i++)
        bounds = mk_product(bounds, mk_sig_ref(m_, f.cols[i]));
    }
    CoreExprPtr constraint = mk_in(field_ref, bounds);

    if (f.mult == Mult::Set) return constraint;

    // Multiplicity: for every admissible domain tuple, the set of range
    // values it maps to satisfies the annotation.
    size_t prefix = f.cols.size() - 1;
    std::vector<VarDecl> xs;
    for (size_t i = 0; i < prefix; i++) xs.push_back(fresh(f.cols[i]));

    auto prefix_tuple = [&]() {
      CoreExprPtr t = mk_var_ref(xs[0]);
      for (size_t i = 1; i < xs.size(); i++) t = mk_product(t, mk_var_ref(xs[i]));
      return t;
    };

    auto with_y = [&](const VarDecl& y) {
      CoreExprPtr t = mk_var_ref(xs[0]);
      for (size_t i = 1; i < xs.size(); i++) t = mk_product(t, mk_var_ref(xs[i]));
      t = mk_product(t, mk_var_ref(y));
      return mk_in(t, field_ref);
    };

    VarDecl y1 = fresh(f.cols.back());
    VarDecl y2 = fresh(f.cols.back());

    CoreExprPtr some_part = mk_quant(QuantKind::Some, y1, mk_sig_ref(m_, f.cols.back()),
                                     with_y(y1));
    CoreExprPtr lone_part =
        mk_quant(QuantKind::All, y1, mk_sig_ref(m_, f.cols.back()),
                 mk_quant(QuantKind::All, y2, mk_sig_ref(m_, f.cols.back()),
                          mk_implies(mk_and(with_y(y1), with_y(y2)),
                                     mk_eq_atoms(y1, y2))));

    CoreExprPtr mult_body;
    switch (f.mult) {
      case Mult::Some: mult_body = some_part; break;
      case Mult::Lone: mult_body = lone_part; break;
      case Mult::One: mult_body = mk_and(some_part, lone_part); break;
      case Mult::Set: break;
    }

    if (f.restriction) {
      auto restr_ref = std::make_shared<CoreExpr>();
      restr_ref->kind = CoreKind::FieldRef;
      restr_ref->sort = ExprSort::Rel;
      restr_ref->field = *f.restriction;
      for (SigId c : m_.field(*f.restriction).cols)
        restr_ref->type.cols.push_back(ColType{m_.sig(c).top, {c}});
      mult_body = mk_implies(mk_in(prefix_tuple(), restr_ref), mult_body);
    }
    for (auto it = xs.rbegin(); it != xs.rend(); ++it)
      mult_body = mk_quant(QuantKind::All, *it, mk_sig_ref(m_, it->col.sigs[0]), mult_body);

    return mk_and(constraint, mult_body);
  }

 private:
  const Model& m_;
  int counter_;

  VarDecl fresh(SigId s) {
    VarDecl v;
    v.id = counter_++;
    v.name = "q" + std::to_string(counter_);
    v.col = ColType{m_.sig(s).top, {s}};
    return v;
  }
};

}  // namespace

CoreExprPtr field_constraint(const Model& m, FieldId f) {
  return ConstraintBuilder(m).build(f);
}

}  // namespace relcheck
