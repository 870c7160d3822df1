#include "encode_core.hpp"

#include <algorithm>

#include "relcheck/diag.hpp"

namespace relcheck {

namespace {

bool mentions_integers(const CoreExpr& e) {
  switch (e.kind) {
    case CoreKind::IntLit:
    case CoreKind::IntAdd:
    case CoreKind::IntSub:
    case CoreKind::IntCmp:
      return true;
    case CoreKind::VarRef:
      return e.var.is_int;
    case CoreKind::Quant:
      if (e.var.is_int) return true;
      break;
    default:
      break;
  }
  for (const auto& k : e.kids)
    if (mentions_integers(*k)) return true;
  return false;
}

std::string mult_word(Mult m) {
  switch (m) {
    case Mult::Set: return "set";
    case Mult::Some: return "some";
    case Mult::One: return "one";
    case Mult::Lone: return "lone";
  }
  return "set";
}

}  // namespace

bool uses_integers(const Model& m, const CoreExpr& assertion) {
  if (mentions_integers(assertion)) return true;
  for (const auto& f : m.facts)
    if (mentions_integers(*f.body)) return true;
  return false;
}

EncoderBase::EncoderBase(const Model& m) : m_(m) {
  meta_.ordered_sig = m.ordered_sig;
  for (size_t i = 0; i < m.sigs.size(); i++)
    meta_.is_fun[static_cast<SigId>(i)] = "is_" + m.sigs[i].name;
  std::map<std::string, int> uses;
  for (const Field& f : m.fields) uses[f.name]++;
  for (size_t i = 0; i < m.fields.size(); i++) {
    const std::string& n = m.fields[i].name;
    std::string fn = "f_" + n;
    if (uses[n] > 1) fn += "_" + std::to_string(i);
    meta_.rel_fun[static_cast<FieldId>(i)] = fn;
  }
}

std::string EncoderBase::var_name(int id) { return "v" + std::to_string(id); }

smt::TermPtr EncoderBase::var_term(int id) const { return smt::sym(var_name(id)); }

std::string EncoderBase::fresh_name() { return var_name(next_var_++); }

smt::TermPtr EncoderBase::is_sig(SigId s, smt::TermPtr x) {
  return smt::app(meta_.is_fun.at(s), std::move(x));
}

Encoded EncoderBase::run(const CoreExpr& assertion) {
  next_var_ = m_.var_counter;
  begin(uses_integers(m_, assertion));
  emit_sig_section();
  if (m_.ordered_sig) emit_ordering();
  emit_field_section();
  for (const auto& fact : m_.facts)
    s_.assert_term(compile(*fact.body), fact.name.empty() ? "fact" : "fact " + fact.name);
  s_.assert_term(smt::negate(compile(assertion)), "negated assertion");
  s_.check_sat();
  s_.get_model();
  Encoded out;
  out.script = std::move(s_);
  out.meta = meta_;
  return out;
}

void EncoderBase::emit_sig_section() {
  for (SigId top : m_.top_sigs()) {
    const auto subs = m_.subtree(top);
    std::string head = "signature " + m_.sig(top).name;
    if (subs.size() > 1) head += " and its extensions";
    s_.comment(head);
    emit_top(top);
    for (SigId s : subs)
      if (s != top)
        s_.declare_fun(meta_.is_fun.at(s), {atom_sort(top)}, smt::Sort::boolean());
    for (SigId s : subs) {
      const Signature& sg = m_.sig(s);
      if (!sg.parent) continue;
      std::string x = fresh_name();
      s_.assert_term(
          smt::forall({{x, atom_sort(top)}},
                      smt::implies(is_sig(s, smt::sym(x)), is_sig(*sg.parent, smt::sym(x)))),
          sg.name + " extends " + m_.sig(*sg.parent).name);
    }
    for (SigId s : subs) {
      const Signature& sg = m_.sig(s);
      for (size_t i = 0; i < sg.children.size(); i++)
        for (size_t j = i + 1; j < sg.children.size(); j++) {
          SigId a = sg.children[i], b = sg.children[j];
          std::string x = fresh_name();
          s_.assert_term(
              smt::forall({{x, atom_sort(top)}},
                          smt::negate(smt::conj({is_sig(a, smt::sym(x)), is_sig(b, smt::sym(x))}))),
              m_.sig(a).name + " and " + m_.sig(b).name + " are disjoint");
        }
    }
    for (SigId s : subs) {
      const Signature& sg = m_.sig(s);
      if (!sg.is_abstract) continue;
      std::string x = fresh_name();
      std::vector<smt::TermPtr> cases;
      for (SigId c : sg.children) cases.push_back(is_sig(c, smt::sym(x)));
      s_.assert_term(smt::forall({{x, atom_sort(top)}},
                                 smt::implies(is_sig(s, smt::sym(x)), smt::disj(cases))),
                     "abstract " + sg.name + " is covered by its extensions");
    }
  }
}

void EncoderBase::emit_field_section() {
  for (size_t i = 0; i < m_.fields.size(); i++) {
    const Field& f = m_.fields[i];
    const FieldId fid = static_cast<FieldId>(i);
    const std::string& fn = meta_.rel_fun.at(fid);

    std::string desc = m_.sig(f.owner).name + "." + f.name + ":";
    for (size_t c = 1; c < f.cols.size(); c++) {
      desc += c == 1 ? " " : " -> ";
      if (c + 1 == f.cols.size()) desc += mult_word(f.mult) + " ";
      desc += m_.sig(f.cols[c]).name;
    }
    if (f.restriction)
      desc += " (restricted to tuples of " + m_.field(*f.restriction).name + ")";
    s_.comment("field " + desc);

    std::vector<smt::Sort> argsorts;
    for (SigId c : f.cols) argsorts.push_back(atom_sort(m_.sig(c).top));
    s_.declare_fun(fn, argsorts, smt::Sort::boolean());

    // Typing: every tuple of the relation lies in the declared column
    // signatures (and extends a tuple of the restricting field, if any).
    std::vector<std::pair<std::string, smt::Sort>> xs;
    std::vector<smt::TermPtr> xt;
    for (size_t c = 0; c < f.cols.size(); c++) {
      xs.push_back({fresh_name(), argsorts[c]});
      xt.push_back(smt::sym(xs.back().first));
    }
    std::vector<smt::TermPtr> typing;
    for (size_t c = 0; c < f.cols.size(); c++) typing.push_back(is_sig(f.cols[c], xt[c]));
    if (f.restriction) {
      std::vector<smt::TermPtr> prefix(xt.begin(), xt.end() - 1);
      typing.push_back(smt::app(meta_.rel_fun.at(*f.restriction), prefix));
    }
    s_.assert_term(smt::forall(xs, smt::implies(smt::app(fn, xt), smt::conj(typing))),
                   "field " + f.name + " typing");

    const size_t np = f.cols.size() - 1;  // domain-prefix length
    const bool covers = f.mult == Mult::Some || f.mult == Mult::One;
    const bool unique = f.mult == Mult::Lone || f.mult == Mult::One;

    if (covers) {
      // Skolem witness: a value for every tuple of the field's domain.
      std::string sk = "sk_" + fn.substr(2);
      std::vector<smt::Sort> psorts(argsorts.begin(), argsorts.end() - 1);
      s_.declare_fun(sk, psorts, argsorts.back());
      std::vector<std::pair<std::string, smt::Sort>> ps;
      std::vector<smt::TermPtr> pt;
      for (size_t c = 0; c < np; c++) {
        ps.push_back({fresh_name(), psorts[c]});
        pt.push_back(smt::sym(ps.back().first));
      }
      smt::TermPtr guard;
      if (f.restriction) {
        guard = smt::app(meta_.rel_fun.at(*f.restriction), pt);
      } else {
        std::vector<smt::TermPtr> dom;
        for (size_t c = 0; c < np; c++) dom.push_back(is_sig(f.cols[c], pt[c]));
        guard = smt::conj(dom);
      }
      std::vector<smt::TermPtr> tup = pt;
      tup.push_back(smt::app(sk, pt));
      s_.assert_term(smt::forall(ps, smt::implies(guard, smt::app(fn, tup))),
                     "field " + f.name + " has a value for every domain tuple");
    }

    if (unique) {
      std::vector<std::pair<std::string, smt::Sort>> ps;
      std::vector<smt::TermPtr> pt;
      for (size_t c = 0; c < np; c++) {
        ps.push_back({fresh_name(), argsorts[c]});
        pt.push_back(smt::sym(ps.back().first));
      }
      std::string yn = fresh_name(), zn = fresh_name();
      ps.push_back({yn, argsorts.back()});
      ps.push_back({zn, argsorts.back()});
      std::vector<smt::TermPtr> ty = pt, tz = pt;
      ty.push_back(smt::sym(yn));
      tz.push_back(smt::sym(zn));
      s_.assert_term(
          smt::forall(ps, smt::implies(smt::conj({smt::app(fn, ty), smt::app(fn, tz)}),
                                       smt::eq(smt::sym(yn), smt::sym(zn)))),
          "field " + f.name + " maps each domain tuple to at most one value");
    }
  }
}

smt::TermPtr EncoderBase::compile(const CoreExpr& f) {
  switch (f.kind) {
    case CoreKind::BoolLit:
      return smt::bool_lit(f.bval);
    case CoreKind::Not:
      return smt::negate(compile(*f.kids[0]));
    case CoreKind::And:
      return smt::conj({compile(*f.kids[0]), compile(*f.kids[1])});
    case CoreKind::Or:
      return smt::disj({compile(*f.kids[0]), compile(*f.kids[1])});
    case CoreKind::Implies:
      return smt::implies(compile(*f.kids[0]), compile(*f.kids[1]));
    case CoreKind::Iff:
      return smt::eq(compile(*f.kids[0]), compile(*f.kids[1]));
    case CoreKind::IntCmp:
      return int_compare(f.cmp, int_term(*f.kids[0]), int_term(*f.kids[1]));
    case CoreKind::Quant: {
      const VarDecl& v = f.var;
      const std::string vn = var_name(v.id);
      if (v.is_int) {
        auto body = compile(*f.quant_body());
        return f.quant == QuantKind::All ? smt::forall({{vn, int_sort()}}, body)
                                         : smt::exists({{vn, int_sort()}}, body);
      }
      smt::Sort srt = atom_sort(v.col.top);
      auto guard = mem(*f.quant_domain(), {var_term(v.id)});
      auto body = compile(*f.quant_body());
      if (f.quant == QuantKind::All)
        return smt::forall({{vn, srt}}, smt::implies(guard, body));
      return smt::exists({{vn, srt}}, smt::conj({guard, body}));
    }
    case CoreKind::InRel: {
      const CoreExpr& a = *f.kids[0];
      const CoreExpr& b = *f.kids[1];
      if (auto ra = tuple_repr(a)) return mem(b, *ra);
      if (core::statically_empty(a)) return smt::bool_lit(true);
      std::vector<std::pair<std::string, smt::Sort>> xs;
      std::vector<smt::TermPtr> xt, guards;
      for (int c = 0; c < a.type.arity(); c++) {
        SigId top = a.type.cols[c].top;
        if (top < 0) top = b.type.cols[c].top;
        if (top < 0) return smt::bool_lit(true);  // no tuple can inhabit this column
        xs.push_back({fresh_name(), atom_sort(top)});
        xt.push_back(smt::sym(xs.back().first));
        guards.push_back(is_sig(top, xt.back()));
      }
      guards.push_back(mem(a, xt));
      return smt::forall(xs, smt::implies(smt::conj(guards), mem(b, xt)));
    }
    case CoreKind::EqRel: {
      const CoreExpr& a = *f.kids[0];
      const CoreExpr& b = *f.kids[1];
      auto ra = tuple_repr(a);
      auto rb = tuple_repr(b);
      if (ra && rb) {
        std::vector<smt::TermPtr> eqs;
        for (size_t c = 0; c < ra->size(); c++) eqs.push_back(smt::eq((*ra)[c], (*rb)[c]));
        return smt::conj(eqs);
      }
      std::vector<std::pair<std::string, smt::Sort>> xs;
      std::vector<smt::TermPtr> xt, guards;
      for (int c = 0; c < a.type.arity(); c++) {
        SigId top = a.type.cols[c].top;
        if (top < 0) top = b.type.cols[c].top;
        if (top < 0) return smt::bool_lit(true);  // both sides empty at this column
        xs.push_back({fresh_name(), atom_sort(top)});
        xt.push_back(smt::sym(xs.back().first));
        guards.push_back(is_sig(top, xt.back()));
      }
      return smt::forall(xs, smt::implies(smt::conj(guards), smt::eq(mem(a, xt), mem(b, xt))));
    }
    default:
      throw Error(ErrorKind::Internal, "encoder: expected a formula");
  }
}

smt::TermPtr EncoderBase::mem(const CoreExpr& e, std::vector<smt::TermPtr> ts) {
  switch (e.kind) {
    case CoreKind::SigRef:
      return is_sig(e.sig, ts[0]);
    case CoreKind::FieldRef:
      return smt::app(meta_.rel_fun.at(e.field), std::move(ts));
    case CoreKind::VarRef:
      return smt::eq(ts[0], var_term(e.var.id));
    case CoreKind::NoneSet:
      return smt::bool_lit(false);
    case CoreKind::Union:
      return smt::disj({mem(*e.kids[0], ts), mem(*e.kids[1], ts)});
    case CoreKind::Diff:
      return smt::conj({mem(*e.kids[0], ts), smt::negate(mem(*e.kids[1], ts))});
    case CoreKind::Inter:
      return smt::conj({mem(*e.kids[0], ts), mem(*e.kids[1], ts)});
    case CoreKind::Product: {
      const size_t la = static_cast<size_t>(e.kids[0]->type.arity());
      std::vector<smt::TermPtr> left(ts.begin(), ts.begin() + la);
      std::vector<smt::TermPtr> right(ts.begin() + la, ts.end());
      return smt::conj({mem(*e.kids[0], left), mem(*e.kids[1], right)});
    }
    case CoreKind::Join: {
      const CoreExpr& a = *e.kids[0];
      const CoreExpr& b = *e.kids[1];
      const size_t la = static_cast<size_t>(a.type.arity());
      std::vector<smt::TermPtr> left(ts.begin(), ts.begin() + (la - 1));
      std::vector<smt::TermPtr> right(ts.begin() + (la - 1), ts.end());
      if (auto ra = tuple_repr(a)) {
        // The left side is a single tuple: match its prefix and look its
        // last component up in b, with no quantifier.
        std::vector<smt::TermPtr> parts;
        for (size_t c = 0; c + 1 < la; c++) parts.push_back(smt::eq(left[c], (*ra)[c]));
        std::vector<smt::TermPtr> args{ra->back()};
        args.insert(args.end(), right.begin(), right.end());
        parts.push_back(mem(b, args));
        return smt::conj(parts);
      }
      if (auto rb = tuple_repr(b)) {
        std::vector<smt::TermPtr> parts;
        std::vector<smt::TermPtr> args = left;
        args.push_back((*rb)[0]);
        parts.push_back(mem(a, args));
        for (size_t c = 1; c < rb->size(); c++)
          parts.push_back(smt::eq(right[c - 1], (*rb)[c]));
        return smt::conj(parts);
      }
      SigId jt = a.type.cols.back().top;
      if (jt < 0) return smt::bool_lit(false);  // joining on an empty column
      std::string zn = fresh_name();
      auto z = smt::sym(zn);
      std::vector<smt::TermPtr> largs = left;
      largs.push_back(z);
      std::vector<smt::TermPtr> rargs{z};
      rargs.insert(rargs.end(), right.begin(), right.end());
      return smt::exists({{zn, atom_sort(jt)}},
                         smt::conj({is_sig(jt, z), mem(a, largs), mem(b, rargs)}));
    }
    case CoreKind::TransClose:
      return closure_mem(e.kids[0], e.type.cols[0].top, ts[0], ts[1]);
    case CoreKind::ReflClose: {
      auto ident = smt::conj({smt::eq(ts[0], ts[1]), is_sig(e.sig, ts[0])});
      return smt::disj({ident, closure_mem(e.kids[0], e.sig, ts[0], ts[1])});
    }
    case CoreKind::OrdFirst:
    case CoreKind::OrdLast:
    case CoreKind::OrdNext:
    case CoreKind::OrdPrev:
      return ord_mem(e.kind, ts);
    default:
      throw Error(ErrorKind::Internal, "encoder: expected a relational expression");
  }
}

smt::TermPtr EncoderBase::int_term(const CoreExpr& e) {
  switch (e.kind) {
    case CoreKind::IntLit:
      return int_literal(e.ival);
    case CoreKind::IntAdd:
    case CoreKind::IntSub:
      return int_binop(e.kind, int_term(*e.kids[0]), int_term(*e.kids[1]));
    case CoreKind::VarRef:
      return var_term(e.var.id);
    default:
      throw Error(ErrorKind::Internal, "encoder: expected an integer term");
  }
}

std::optional<std::vector<smt::TermPtr>> EncoderBase::tuple_repr(const CoreExpr& e) {
  switch (e.kind) {
    case CoreKind::VarRef:
      if (e.var.is_int) return std::nullopt;
      return std::vector<smt::TermPtr>{var_term(e.var.id)};
    case CoreKind::OrdFirst:
    case CoreKind::OrdLast:
      return std::vector<smt::TermPtr>{ord_const(e.kind)};
    case CoreKind::Product: {
      auto a = tuple_repr(*e.kids[0]);
      if (!a) return std::nullopt;
      auto b = tuple_repr(*e.kids[1]);
      if (!b) return std::nullopt;
      a->insert(a->end(), b->begin(), b->end());
      return a;
    }
    default:
      return std::nullopt;
  }
}

smt::TermPtr EncoderBase::closure_mem(const CoreExprPtr& operand, SigId top, smt::TermPtr a,
                                      smt::TermPtr b) {
  auto fvs = free_vars(*operand);
  for (const VarDecl& v : fvs)
    if (v.is_int)
      throw Error(ErrorKind::Internal, "encoder: integer variable under closure");

  // Key closures by their shape so that alpha-equivalent occurrences (the
  // same expression under different binders) share one set of definitions.
  CoreExprPtr norm = operand;
  for (size_t i = 0; i < fvs.size(); i++) {
    VarDecl ph;
    ph.id = -1 - static_cast<int>(i);
    ph.name = "_";
    ph.col = fvs[i].col;
    norm = replace_var(norm, fvs[i].id, core::mk_var_ref(ph));
  }
  std::string key = std::to_string(top) + "|" + core_to_string(m_, *norm);

  std::string fun;
  auto it = tc_cache_.find(key);
  if (it != tc_cache_.end()) {
    fun = it->second;
  } else {
    std::string base = "tc_" + std::to_string(tc_count_++);
    s_.comment("transitive closure of " + core_to_string(m_, *operand));
    fun = define_closure(base, *operand, fvs, top);
    tc_cache_[key] = fun;
  }

  std::vector<smt::TermPtr> args{std::move(a), std::move(b)};
  for (const VarDecl& v : fvs) args.push_back(var_term(v.id));
  return smt::app(fun, std::move(args));
}

}  // namespace relcheck
