#include "relcheck/eval.hpp"

#include <algorithm>

namespace relcheck {

namespace {

long long wrap_signed(long long v, int width) {
  if (width <= 0) return v;
  unsigned long long mod = 1ull << width;
  unsigned long long u = static_cast<unsigned long long>(v) & (mod - 1);
  long long half = 1ll << (width - 1);
  long long r = static_cast<long long>(u);
  return r >= half ? r - static_cast<long long>(mod) : r;
}

TupleSet closure(const TupleSet& base) {
  // Iterate joins to a fixpoint; relations here are tiny.
  TupleSet tc = base;
  bool grew = true;
  while (grew) {
    grew = false;
    TupleSet next = tc;
    for (const auto& a : tc)
      for (const auto& b : tc)
        if (a[1] == b[0] && next.insert({a[0], b[1]}).second) grew = true;
    tc.swap(next);
  }
  return tc;
}

}  // namespace

std::pair<long long, long long> int_window(const Instance& inst) {
  if (inst.int_width > 0) {
    long long half = 1ll << (inst.int_width - 1);
    return {-half, half - 1};
  }
  return {-4, 4};
}

long long eval_int(const Model& m, const Instance& inst, const CoreExpr& e, EvalEnv& env) {
  int w = inst.int_width;
  switch (e.kind) {
    case CoreKind::IntLit: return wrap_signed(e.ival, w);
    case CoreKind::VarRef: {
      auto it = env.find(e.var.id);
      if (it == env.end() || !it->second.is_int)
        throw Error(ErrorKind::Internal, "unbound integer variable '" + e.var.name + "'");
      return it->second.ival;
    }
    case CoreKind::IntAdd:
      return wrap_signed(eval_int(m, inst, *e.kids[0], env) + eval_int(m, inst, *e.kids[1], env),
                         w);
    case CoreKind::IntSub:
      return wrap_signed(eval_int(m, inst, *e.kids[0], env) - eval_int(m, inst, *e.kids[1], env),
                         w);
    default:
      throw Error(ErrorKind::Internal, "expected an integer term");
  }
}

TupleSet eval_rel(const Model& m, const Instance& inst, const CoreExpr& e, EvalEnv& env) {
  switch (e.kind) {
    case CoreKind::SigRef: {
      TupleSet out;
      for (int a : inst.extent(m, e.sig)) out.insert({a});
      return out;
    }
    case CoreKind::FieldRef: {
      auto it = inst.rel_extent.find(e.field);
      return it == inst.rel_extent.end() ? TupleSet{} : it->second;
    }
    case CoreKind::VarRef: {
      auto it = env.find(e.var.id);
      if (it == env.end() || it->second.is_int)
        throw Error(ErrorKind::Internal, "unbound variable '" + e.var.name + "'");
      return {{it->second.atom}};
    }
    case CoreKind::NoneSet: return {};
    case CoreKind::Union: {
      TupleSet out = eval_rel(m, inst, *e.kids[0], env);
      TupleSet rhs = eval_rel(m, inst, *e.kids[1], env);
      out.insert(rhs.begin(), rhs.end());
      return out;
    }
    case CoreKind::Diff: {
      TupleSet lhs = eval_rel(m, inst, *e.kids[0], env);
      TupleSet rhs = eval_rel(m, inst, *e.kids[1], env);
      TupleSet out;
      std::set_difference(lhs.begin(), lhs.end(), rhs.begin(), rhs.end(),
                          std::inserter(out, out.end()));
      return out;
    }
    case CoreKind::Inter: {
      TupleSet lhs = eval_rel(m, inst, *e.kids[0], env);
      TupleSet rhs = eval_rel(m, inst, *e.kids[1], env);
      TupleSet out;
      std::set_intersection(lhs.begin(), lhs.end(), rhs.begin(), rhs.end(),
                            std::inserter(out, out.end()));
      return out;
    }
    case CoreKind::Product: {
      TupleSet lhs = eval_rel(m, inst, *e.kids[0], env);
      TupleSet rhs = eval_rel(m, inst, *e.kids[1], env);
      TupleSet out;
      for (const auto& a : lhs)
        for (const auto& b : rhs) {
          Tuple t = a;
          t.insert(t.end(), b.begin(), b.end());
          out.insert(std::move(t));
        }
      return out;
    }
    case CoreKind::Join: {
      TupleSet lhs = eval_rel(m, inst, *e.kids[0], env);
      TupleSet rhs = eval_rel(m, inst, *e.kids[1], env);
      TupleSet out;
      for (const auto& a : lhs)
        for (const auto& b : rhs) {
          if (a.back() != b.front()) continue;
          Tuple t(a.begin(), a.end() - 1);
          t.insert(t.end(), b.begin() + 1, b.end());
          out.insert(std::move(t));
        }
      return out;
    }
    case CoreKind::TransClose: return closure(eval_rel(m, inst, *e.kids[0], env));
    case CoreKind::ReflClose: {
      TupleSet out = closure(eval_rel(m, inst, *e.kids[0], env));
      for (int a : inst.extent(m, e.sig)) out.insert({a, a});
      return out;
    }
    case CoreKind::OrdFirst: {
      auto ext = inst.extent(m, e.sig);
      return ext.empty() ? TupleSet{} : TupleSet{{ext.front()}};
    }
    case CoreKind::OrdLast: {
      auto ext = inst.extent(m, e.sig);
      return ext.empty() ? TupleSet{} : TupleSet{{ext.back()}};
    }
    case CoreKind::OrdNext:
    case CoreKind::OrdPrev: {
      auto ext = inst.extent(m, e.sig);
      TupleSet out;
      for (size_t i = 0; i + 1 < ext.size(); i++) {
        if (e.kind == CoreKind::OrdNext)
          out.insert({ext[i], ext[i + 1]});
        else
          out.insert({ext[i + 1], ext[i]});
      }
      return out;
    }
    default:
      throw Error(ErrorKind::Internal, "expected a relational term");
  }
}

bool eval_formula(const Model& m, const Instance& inst, const CoreExpr& e, EvalEnv& env) {
  switch (e.kind) {
    case CoreKind::BoolLit: return e.bval;
    case CoreKind::Not: return !eval_formula(m, inst, *e.kids[0], env);
    case CoreKind::And:
      return eval_formula(m, inst, *e.kids[0], env) && eval_formula(m, inst, *e.kids[1], env);
    case CoreKind::Or:
      return eval_formula(m, inst, *e.kids[0], env) || eval_formula(m, inst, *e.kids[1], env);
    case CoreKind::Implies:
      return !eval_formula(m, inst, *e.kids[0], env) || eval_formula(m, inst, *e.kids[1], env);
    case CoreKind::Iff:
      return eval_formula(m, inst, *e.kids[0], env) == eval_formula(m, inst, *e.kids[1], env);
    case CoreKind::InRel: {
      TupleSet lhs = eval_rel(m, inst, *e.kids[0], env);
      TupleSet rhs = eval_rel(m, inst, *e.kids[1], env);
      return std::includes(rhs.begin(), rhs.end(), lhs.begin(), lhs.end());
    }
    case CoreKind::EqRel:
      return eval_rel(m, inst, *e.kids[0], env) == eval_rel(m, inst, *e.kids[1], env);
    case CoreKind::IntCmp: {
      long long a = eval_int(m, inst, *e.kids[0], env);
      long long b = eval_int(m, inst, *e.kids[1], env);
      switch (e.cmp) {
        case CmpOp::Eq: return a == b;
        case CmpOp::Lt: return a < b;
        case CmpOp::Le: return a <= b;
        case CmpOp::Gt: return a > b;
        case CmpOp::Ge: return a >= b;
      }
      return false;
    }
    case CoreKind::Quant: {
      bool universal = e.quant == QuantKind::All;
      if (e.var.is_int) {
        auto [lo, hi] = int_window(inst);
        for (long long v = lo; v <= hi; v++) {
          env[e.var.id] = EvalBinding{true, -1, v};
          bool r = eval_formula(m, inst, *e.quant_body(), env);
          env.erase(e.var.id);
          if (universal && !r) return false;
          if (!universal && r) return true;
        }
        return universal;
      }
      TupleSet domain = eval_rel(m, inst, *e.quant_domain(), env);
      for (const auto& t : domain) {
        env[e.var.id] = EvalBinding{false, t[0], 0};
        bool r = eval_formula(m, inst, *e.quant_body(), env);
        env.erase(e.var.id);
        if (universal && !r) return false;
        if (!universal && r) return true;
      }
      return universal;
    }
    default:
      throw Error(ErrorKind::Internal, "expected a formula");
  }
}

bool validate_counterexample(const Model& m, const Instance& inst, const CoreExpr& assertion,
                             std::string* why) {
  auto fail = [&](const std::string& reason) {
    if (why) *why = reason;
    return false;
  };
  if (auto reason = ill_formed_reason(m, inst)) return fail(*reason);
  EvalEnv env;
  for (const auto& fact : m.facts) {
    if (!eval_formula(m, inst, *fact.body, env))
      return fail("fact '" + (fact.name.empty() ? std::string("<anonymous>") : fact.name) +
                  "' does not hold");
  }
  for (size_t f = 0; f < m.fields.size(); f++) {
    CoreExprPtr constraint = field_constraint(m, static_cast<FieldId>(f));
    if (!eval_formula(m, inst, *constraint, env))
      return fail("field '" + m.fields[f].name + "' violates its declaration");
  }
  if (eval_formula(m, inst, assertion, env))
    return fail("the assertion holds on this instance");
  if (why) why->clear();
  return true;
}

}  // namespace relcheck
