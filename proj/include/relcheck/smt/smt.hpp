#pragma once
// SMT-LIB v2 construction and serialization. Both solver backends build a
// Script of declarations and assertions; serialize() renders it
// deterministically so identical inputs produce byte-identical files.

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace relcheck::smt {

struct Sort {
  enum class Kind { Bool, Int, BitVec, Named };
  Kind kind = Kind::Bool;
  int width = 0;      // BitVec
  std::string name;   // Named

  static Sort boolean() { return {}; }
  static Sort integer() { return {Kind::Int, 0, ""}; }
  static Sort bitvec(int w) { return {Kind::BitVec, w, ""}; }
  static Sort named(std::string n) { return {Kind::Named, 0, std::move(n)}; }

  std::string text() const;
  bool operator==(const Sort&) const = default;
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { Sym, BoolLit, IntLit, BvLit, App, Quant };
  Kind kind = Kind::Sym;
  std::string sym;                  // Sym name; App head
  std::vector<TermPtr> args;        // App arguments; Quant body in args[0]
  bool bval = false;                // BoolLit value; Quant: true = forall
  long long ival = 0;               // IntLit
  unsigned long long bits = 0;      // BvLit value
  int width = 0;                    // BvLit width
  std::vector<std::pair<std::string, Sort>> binders;  // Quant
};

TermPtr sym(std::string name);
TermPtr bool_lit(bool v);
TermPtr int_lit(long long v);
TermPtr bv_lit(unsigned long long value, int width);
TermPtr app(std::string head, std::vector<TermPtr> args);
TermPtr app(std::string head, TermPtr a);
TermPtr app(std::string head, TermPtr a, TermPtr b);
TermPtr app(std::string head, TermPtr a, TermPtr b, TermPtr c);
TermPtr forall(std::vector<std::pair<std::string, Sort>> binders, TermPtr body);
TermPtr exists(std::vector<std::pair<std::string, Sort>> binders, TermPtr body);

// Connective builders with the obvious constant folds; conj({}) is true,
// disj({}) is false, and single-element lists collapse.
TermPtr conj(std::vector<TermPtr> ts);
TermPtr disj(std::vector<TermPtr> ts);
TermPtr negate(TermPtr t);
TermPtr implies(TermPtr a, TermPtr b);
TermPtr eq(TermPtr a, TermPtr b);

std::string term_text(const Term& t);

struct ScriptItem {
  enum class Kind {
    Comment,      // name = text
    SetOption,    // name = ":option value"
    DeclareSort,  // name
    DeclareFun,   // name, arg_sorts, ret
    DefineFun,    // name, params, ret, body
    Assert,       // body, name = optional comment above the assert
    CheckSat,
    GetModel,
  };
  Kind kind = Kind::Comment;
  std::string name;
  std::vector<Sort> arg_sorts;
  Sort ret;
  std::vector<std::pair<std::string, Sort>> params;
  TermPtr body;
};

struct Script {
  std::string logic;  // emitted as (set-logic ...) when non-empty
  std::vector<ScriptItem> items;

  void comment(std::string text);
  void set_option(std::string option);
  void declare_sort(std::string name);
  void declare_fun(std::string name, std::vector<Sort> args, Sort ret);
  void define_fun(std::string name, std::vector<std::pair<std::string, Sort>> params, Sort ret,
                  TermPtr body);
  void assert_term(TermPtr t, std::string comment = "");
  void check_sat();
  void get_model();
};

// Renders the script with (set-option :produce-models true) and the set-logic
// line first. Comments serialize as `; text` lines.
std::string serialize(const Script& s);

}  // namespace relcheck::smt
