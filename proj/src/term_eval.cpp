// Evaluation of define-fun bodies from solver models: boolean structure,
// equalities, integer arithmetic, and literal forms, over concrete arguments.

#include <map>

#include "relcheck/diag.hpp"
#include "relcheck/smt/solver.hpp"

namespace relcheck::smt {

namespace {

using Env = std::map<std::string, Value>;

struct ModelEval {
  const SolverModel& model;
  int depth = 0;

  [[noreturn]] void fail(const std::string& what, const SExpr& e) {
    throw Error(ErrorKind::Decode, what + ": " + sexpr_text(e));
  }

  Value atom_value(const std::string& a, const Env& env, const SExpr& e) {
    if (a == "true") return Value::of_bool(true);
    if (a == "false") return Value::of_bool(false);
    if (a.size() > 2 && a[0] == '#' && a[1] == 'b') {
      unsigned long long bits = 0;
      for (size_t i = 2; i < a.size(); i++) {
        if (a[i] != '0' && a[i] != '1') fail("bad bit-vector literal", e);
        bits = (bits << 1) | static_cast<unsigned long long>(a[i] - '0');
      }
      return Value::of_bits(bits, static_cast<int>(a.size() - 2));
    }
    if (a.size() > 2 && a[0] == '#' && a[1] == 'x') {
      unsigned long long bits = 0;
      for (size_t i = 2; i < a.size(); i++) {
        int d;
        if (a[i] >= '0' && a[i] <= '9') d = a[i] - '0';
        else if (a[i] >= 'a' && a[i] <= 'f') d = a[i] - 'a' + 10;
        else if (a[i] >= 'A' && a[i] <= 'F') d = a[i] - 'A' + 10;
        else fail("bad hex literal", e);
        bits = (bits << 4) | static_cast<unsigned long long>(d);
      }
      return Value::of_bits(bits, static_cast<int>(4 * (a.size() - 2)));
    }
    if (!a.empty() && (std::isdigit(static_cast<unsigned char>(a[0])) ||
                       (a[0] == '-' && a.size() > 1))) {
      bool all_digits = true;
      for (size_t i = (a[0] == '-' ? 1 : 0); i < a.size(); i++)
        if (!std::isdigit(static_cast<unsigned char>(a[i]))) all_digits = false;
      if (all_digits) return Value::of_int(std::stoll(a));
    }
    if (auto it = env.find(a); it != env.end()) return it->second;
    if (auto fn = model.funs.find(a); fn != model.funs.end() && fn->second.param_names.empty())
      return eval(fn->second.body, Env{});
    // Universe members and uninterpreted constants denote themselves.
    return Value::of_sym(a);
  }

  long long int_of(const Value& v, const SExpr& e) {
    if (v.kind != Value::Kind::Int) fail("expected an integer value", e);
    return v.i;
  }

  bool bool_of(const Value& v, const SExpr& e) {
    if (v.kind != Value::Kind::Bool) fail("expected a boolean value", e);
    return v.b;
  }

  Value eval(const SExpr& e, const Env& env) {
    if (++depth > 100000) throw Error(ErrorKind::Decode, "model evaluation too deep");
    if (e.is_atom) return atom_value(e.atom, env, e);
    std::string h = e.head();
    if (h.empty()) fail("unexpected form in model", e);

    if (h == "let") {
      if (e.items.size() != 3 || e.items[1].is_atom) fail("malformed let", e);
      Env inner = env;  // SMT-LIB let is parallel: bind against the outer env
      for (const SExpr& b : e.items[1].items) {
        if (b.is_atom || b.items.size() != 2 || !b.items[0].is_atom) fail("malformed let", e);
        inner[b.items[0].atom] = eval(b.items[1], env);
      }
      return eval(e.items[2], inner);
    }
    if (h == "ite") {
      if (e.items.size() != 4) fail("malformed ite", e);
      return bool_of(eval(e.items[1], env), e) ? eval(e.items[2], env) : eval(e.items[3], env);
    }
    if (h == "=") {
      if (e.items.size() < 3) fail("malformed =", e);
      Value first = eval(e.items[1], env);
      for (size_t i = 2; i < e.items.size(); i++)
        if (!(eval(e.items[i], env) == first)) return Value::of_bool(false);
      return Value::of_bool(true);
    }
    if (h == "distinct") {
      std::vector<Value> vs;
      for (size_t i = 1; i < e.items.size(); i++) vs.push_back(eval(e.items[i], env));
      for (size_t i = 0; i < vs.size(); i++)
        for (size_t j = i + 1; j < vs.size(); j++)
          if (vs[i] == vs[j]) return Value::of_bool(false);
      return Value::of_bool(true);
    }
    if (h == "not") {
      if (e.items.size() != 2) fail("malformed not", e);
      return Value::of_bool(!bool_of(eval(e.items[1], env), e));
    }
    if (h == "and" || h == "or") {
      bool is_and = h == "and";
      for (size_t i = 1; i < e.items.size(); i++) {
        bool v = bool_of(eval(e.items[i], env), e);
        if (v != is_and) return Value::of_bool(v);
      }
      return Value::of_bool(is_and);
    }
    if (h == "=>") {
      if (e.items.size() < 3) fail("malformed =>", e);
      for (size_t i = 1; i + 1 < e.items.size(); i++)
        if (!bool_of(eval(e.items[i], env), e)) return Value::of_bool(true);
      return Value::of_bool(bool_of(eval(e.items.back(), env), e));
    }
    if (h == "+" || h == "-" || h == "*") {
      if (e.items.size() == 2 && h == "-")
        return Value::of_int(-int_of(eval(e.items[1], env), e));
      if (e.items.size() < 3) fail("malformed arithmetic", e);
      long long acc = int_of(eval(e.items[1], env), e);
      for (size_t i = 2; i < e.items.size(); i++) {
        long long v = int_of(eval(e.items[i], env), e);
        acc = h == "+" ? acc + v : h == "-" ? acc - v : acc * v;
      }
      return Value::of_int(acc);
    }
    if (h == "<" || h == "<=" || h == ">" || h == ">=") {
      if (e.items.size() != 3) fail("malformed comparison", e);
      long long a = int_of(eval(e.items[1], env), e);
      long long b = int_of(eval(e.items[2], env), e);
      bool r = h == "<" ? a < b : h == "<=" ? a <= b : h == ">" ? a > b : a >= b;
      return Value::of_bool(r);
    }
    if (h == "_") {
      // (_ bvN W)
      if (e.items.size() == 3 && e.items[1].is_atom && e.items[2].is_atom &&
          e.items[1].atom.rfind("bv", 0) == 0) {
        unsigned long long v = std::stoull(e.items[1].atom.substr(2));
        return Value::of_bits(v, std::stoi(e.items[2].atom));
      }
      fail("unrecognized indexed form", e);
    }
    if (h == "as") {
      if (e.items.size() != 3) fail("malformed as", e);
      return eval(e.items[1], env);
    }
    if (auto fn = model.funs.find(h); fn != model.funs.end()) {
      const ModelFun& f = fn->second;
      if (f.param_names.size() != e.items.size() - 1) fail("arity mismatch calling " + h, e);
      Env inner;
      for (size_t i = 0; i < f.param_names.size(); i++)
        inner[f.param_names[i]] = eval(e.items[i + 1], env);
      return eval(f.body, inner);
    }
    fail("unrecognized construct in model", e);
  }
};

}  // namespace

Value eval_model_fun(const SolverModel& m, const std::string& fun,
                     const std::vector<Value>& args) {
  auto it = m.funs.find(fun);
  if (it == m.funs.end())
    throw Error(ErrorKind::Decode, "the model does not define '" + fun + "'");
  const ModelFun& f = it->second;
  if (f.param_names.size() != args.size())
    throw Error(ErrorKind::Decode, "wrong argument count for '" + fun + "' (" +
                                       std::to_string(args.size()) + " given, " +
                                       std::to_string(f.param_names.size()) + " declared)");
  std::map<std::string, Value> env;
  for (size_t i = 0; i < args.size(); i++) env[f.param_names[i]] = args[i];
  ModelEval me{m};
  return me.eval(f.body, env);
}

}  // namespace relcheck::smt
