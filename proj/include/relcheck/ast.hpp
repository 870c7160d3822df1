#pragma once
// Untyped surface syntax tree produced by the parser.
// Name resolution and typing happen later, in the core model builder.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "relcheck/diag.hpp"

namespace relcheck::ast {

struct Ident {
  std::string name;
  Span span;
};

enum class Mult { Set, Some, One, Lone };

const char* mult_name(Mult m);

enum class UnOp {
  Not,        // not F / ! F
  TransClose, // ^e
  ReflClose,  // *e
  CardNo,     // no e
  CardSome,   // some e
  CardLone,   // lone e
  CardOne,    // one e
};

enum class BinOp {
  Plus,   // set union or integer addition (disambiguated by typing)
  Minus,  // set difference or integer subtraction
  Inter,  // &
  Arrow,  // ->
  Join,   // .
  In,
  Eq,
  Neq,
  Lt,
  Le,
  Gt,
  Ge,
  And,
  Or,
  Implies,
  Iff,
};

enum class QuantKind { All, Some, No, Lone, One };

const char* quant_name(QuantKind q);

struct Expr;
using ExprPtr = std::shared_ptr<Expr>;

// One declaration group inside a quantifier: `a, b: domain`.
struct QuantDecl {
  std::vector<Ident> names;
  ExprPtr domain;
};

enum class ExprKind {
  Name,     // identifier, possibly qualified by a module alias (ord/first)
  NoneSet,  // none
  IntLit,
  Unary,
  Binary,
  Quant,   // all/some/no/lone/one decls | body
  Let,     // let x = value | body
  BoxJoin, // target[arg, ...] sugar for arg_n.( ... (arg_1.target))
};

struct Expr {
  ExprKind kind;
  Span span;

  // Name
  std::string qualifier;  // empty unless written as qualifier/name
  std::string name;

  long long int_val = 0;  // IntLit

  UnOp uop{};        // Unary
  BinOp bop{};       // Binary
  QuantKind quant{}; // Quant
  std::vector<QuantDecl> decls;

  std::string let_name;  // Let
  Span let_name_span;

  // Unary: kids[0]; Binary: kids[0], kids[1]; Quant/Let: body last;
  // Let: kids[0] = value, kids[1] = body; BoxJoin: kids[0] = target, rest args.
  std::vector<ExprPtr> kids;
};

// Field declaration inside a signature body:
//   name: part_1 -> part_2 -> ... -> [mult] part_n
// Each part is a signature name, except that part_1 may name a previously
// declared field of the same signature (a domain restriction).
struct FieldDecl {
  Ident name;
  std::vector<Ident> parts;
  std::optional<Mult> mult;  // multiplicity written before the last part
  Span span;
};

struct SigDecl {
  Ident name;
  bool is_abstract = false;
  std::optional<Ident> parent;  // extends clause
  std::vector<FieldDecl> fields;
  Span span;
};

struct FactDecl {
  std::optional<Ident> name;
  ExprPtr body;
  Span span;
};

struct ParamDecl {
  Ident name;
  Ident type;
};

struct PredDecl {
  Ident name;
  std::vector<ParamDecl> params;
  ExprPtr body;
  Span span;
};

struct FunDecl {
  Ident name;
  std::vector<ParamDecl> params;
  std::optional<Mult> result_mult;
  Ident result_type;
  ExprPtr body;
  Span span;
};

struct AssertDecl {
  Ident name;
  ExprPtr body;
  Span span;
};

struct CheckCmd {
  Ident assertion;
  std::optional<long long> scope;  // `for N`
  Span span;
};

// `open util/ordering[Sig] as alias`
struct OpenDecl {
  std::vector<std::string> path;
  Ident arg;
  std::optional<Ident> alias;
  Span span;
};

struct Spec {
  std::vector<OpenDecl> opens;
  std::vector<SigDecl> sigs;
  std::vector<FactDecl> facts;
  std::vector<PredDecl> preds;
  std::vector<FunDecl> funs;
  std::vector<AssertDecl> asserts;
  std::vector<CheckCmd> checks;
};

// Structural equality ignoring spans (used by round-trip tests).
bool equal(const Expr& a, const Expr& b);
bool equal(const Spec& a, const Spec& b);

// Parse a complete specification. Throws Error on bad input.
Spec parse(const std::string& source);

// Render a specification or expression back to concrete syntax.
// parse(pretty(s)) reproduces s up to spans.
std::string pretty(const Spec& s);
std::string pretty(const Expr& e);

}  // namespace relcheck::ast
