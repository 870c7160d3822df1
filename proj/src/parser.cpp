#include <optional>

#include "lexer.hpp"
#include "relcheck/ast.hpp"

namespace relcheck::ast {

using frontend::Tok;
using frontend::Token;

namespace {

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Spec parse_spec() {
    Spec spec;
    while (!at(Tok::End)) {
      switch (peek().type) {
        case Tok::KwOpen: spec.opens.push_back(parse_open()); break;
        case Tok::KwAbstract:
        case Tok::KwSig: spec.sigs.push_back(parse_sig()); break;
        case Tok::KwFact: spec.facts.push_back(parse_fact()); break;
        case Tok::KwPred: spec.preds.push_back(parse_pred()); break;
        case Tok::KwFun: spec.funs.push_back(parse_fun()); break;
        case Tok::KwAssert: spec.asserts.push_back(parse_assert()); break;
        case Tok::KwCheck: spec.checks.push_back(parse_check()); break;
        case Tok::KwOne:
        case Tok::KwSome:
        case Tok::KwLone:
          if (peek(1).type == Tok::KwSig)
            throw Error(ErrorKind::UnsupportedConstruct,
                        "signature multiplicities are not supported", peek().span);
          [[fallthrough]];
        default:
          if (at(Tok::KwReserved))
            throw Error(ErrorKind::UnsupportedConstruct,
                        "'" + peek().text + "' is not supported", peek().span);
          throw Error(ErrorKind::Syntax,
                      "expected one of: open, sig, fact, pred, fun, assert, check; found " +
                          describe(peek()),
                      peek().span);
      }
    }
    return spec;
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;

  const Token& peek(size_t ahead = 0) const {
    size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  bool at(Tok t) const { return peek().type == t; }
  const Token& advance() { return toks_[pos_++]; }
  bool accept(Tok t) {
    if (!at(t)) return false;
    pos_++;
    return true;
  }

  static std::string describe(const Token& t) {
    if (t.type == Tok::End) return "end of input";
    return "'" + t.text + "'";
  }

  const Token& expect(Tok t, const std::string& what) {
    if (!at(t)) {
      reject_reserved();
      throw Error(ErrorKind::Syntax, "expected " + what + ", found " + describe(peek()),
                  peek().span);
    }
    return advance();
  }

  void reject_reserved() {
    if (at(Tok::KwReserved))
      throw Error(ErrorKind::UnsupportedConstruct,
                  "'" + peek().text + "' is not supported", peek().span);
    if (at(Tok::ReservedOp))
      throw Error(ErrorKind::UnsupportedConstruct,
                  "operator '" + peek().text + "' is not supported", peek().span);
  }

  Ident parse_ident(const std::string& what) {
    reject_reserved();
    const Token& t = expect(Tok::Ident, what);
    return Ident{t.text, t.span};
  }

  // ---- declarations ----

  OpenDecl parse_open() {
    OpenDecl open;
    open.span = expect(Tok::KwOpen, "open").span;
    open.path.push_back(parse_ident("module path").name);
    while (accept(Tok::Slash)) open.path.push_back(parse_ident("module path").name);
    expect(Tok::LBrack, "'['");
    open.arg = parse_ident("signature name");
    expect(Tok::RBrack, "']'");
    if (accept(Tok::KwAs)) open.alias = parse_ident("module alias");
    if (open.path != std::vector<std::string>{"util", "ordering"})
      throw Error(ErrorKind::UnsupportedConstruct,
                  "only 'open util/ordering[Sig]' is supported", open.span);
    return open;
  }

  SigDecl parse_sig() {
    SigDecl sig;
    sig.span = peek().span;
    sig.is_abstract = accept(Tok::KwAbstract);
    expect(Tok::KwSig, "sig");
    sig.name = parse_ident("signature name");
    if (at(Tok::KwIn))
      throw Error(ErrorKind::UnsupportedConstruct, "subset signatures are not supported",
                  peek().span);
    if (at(Tok::Comma))
      throw Error(ErrorKind::UnsupportedConstruct,
                  "multiple signature names per declaration are not supported", peek().span);
    if (accept(Tok::KwExtends)) sig.parent = parse_ident("parent signature name");
    expect(Tok::LBrace, "'{'");
    while (!at(Tok::RBrace)) {
      sig.fields.push_back(parse_field());
      if (!accept(Tok::Comma)) break;
    }
    sig.span.end = expect(Tok::RBrace, "'}'").span.end;
    return sig;
  }

  FieldDecl parse_field() {
    FieldDecl field;
    field.name = parse_ident("field name");
    field.span = field.name.span;
    expect(Tok::Colon, "':'");
    while (true) {
      std::optional<Mult> mult = accept_mult();
      Ident part = parse_ident("column name");
      if (accept(Tok::Arrow)) {
        if (mult)
          throw Error(ErrorKind::Multiplicity,
                      "multiplicity annotations are only supported on the final column",
                      part.span);
        field.parts.push_back(part);
        continue;
      }
      field.mult = mult;
      field.parts.push_back(part);
      field.span.end = part.span.end;
      return field;
    }
  }

  std::optional<Mult> accept_mult() {
    switch (peek().type) {
      case Tok::KwSet: advance(); return Mult::Set;
      case Tok::KwSome:
        // Only a multiplicity when directly followed by a column name.
        if (peek(1).type == Tok::Ident) { advance(); return Mult::Some; }
        return std::nullopt;
      case Tok::KwOne:
        if (peek(1).type == Tok::Ident) { advance(); return Mult::One; }
        return std::nullopt;
      case Tok::KwLone:
        if (peek(1).type == Tok::Ident) { advance(); return Mult::Lone; }
        return std::nullopt;
      default: return std::nullopt;
    }
  }

  FactDecl parse_fact() {
    FactDecl fact;
    fact.span = expect(Tok::KwFact, "fact").span;
    if (at(Tok::Ident)) fact.name = parse_ident("fact name");
    fact.body = parse_block();
    return fact;
  }

  std::vector<ParamDecl> parse_params() {
    std::vector<ParamDecl> params;
    if (!accept(Tok::LBrack)) return params;
    if (!at(Tok::RBrack)) {
      while (true) {
        std::vector<Ident> names;
        names.push_back(parse_ident("parameter name"));
        while (accept(Tok::Comma)) {
          // A comma may either continue the current group or start a new one;
          // only a following ':' later decides. Groups share the type written
          // after the ':'.
          names.push_back(parse_ident("parameter name"));
          if (at(Tok::Colon)) break;
        }
        expect(Tok::Colon, "':'");
        Ident type = parse_ident("parameter type");
        for (auto& n : names) params.push_back(ParamDecl{n, type});
        if (!accept(Tok::Comma)) break;
      }
    }
    expect(Tok::RBrack, "']'");
    return params;
  }

  PredDecl parse_pred() {
    PredDecl pred;
    pred.span = expect(Tok::KwPred, "pred").span;
    pred.name = parse_ident("predicate name");
    pred.params = parse_params();
    pred.body = parse_block();
    return pred;
  }

  FunDecl parse_fun() {
    FunDecl fun;
    fun.span = expect(Tok::KwFun, "fun").span;
    fun.name = parse_ident("function name");
    fun.params = parse_params();
    expect(Tok::Colon, "':'");
    fun.result_mult = accept_mult();
    fun.result_type = parse_ident("result type");
    expect(Tok::LBrace, "'{'");
    fun.body = parse_expr();
    expect(Tok::RBrace, "'}'");
    return fun;
  }

  AssertDecl parse_assert() {
    AssertDecl asrt;
    asrt.span = expect(Tok::KwAssert, "assert").span;
    asrt.name = parse_ident("assertion name");
    asrt.body = parse_block();
    return asrt;
  }

  CheckCmd parse_check() {
    CheckCmd check;
    check.span = expect(Tok::KwCheck, "check").span;
    check.assertion = parse_ident("assertion name");
    if (accept(Tok::KwFor)) {
      const Token& n = expect(Tok::Number, "scope bound");
      check.scope = n.number;
      if (at(Tok::KwReserved) && peek().text == "but")
        throw Error(ErrorKind::UnsupportedConstruct,
                    "per-signature scope bounds are not supported", peek().span);
    }
    return check;
  }

  // A brace-delimited list of formulas, combined as a conjunction.
  ExprPtr parse_block() {
    Span start = expect(Tok::LBrace, "'{'").span;
    std::vector<ExprPtr> parts;
    while (!at(Tok::RBrace) && !at(Tok::End)) parts.push_back(parse_expr());
    Span end = expect(Tok::RBrace, "'}'").span;

    if (parts.empty()) {
      // An empty body is the trivially true constraint `no none`.
      auto none = std::make_shared<Expr>();
      none->kind = ExprKind::NoneSet;
      none->span = end;
      auto truth = std::make_shared<Expr>();
      truth->kind = ExprKind::Unary;
      truth->uop = UnOp::CardNo;
      truth->span = Span{start.begin, end.end, start.line, start.col};
      truth->kids.push_back(none);
      return truth;
    }
    ExprPtr acc = parts[0];
    for (size_t i = 1; i < parts.size(); i++) {
      auto conj = std::make_shared<Expr>();
      conj->kind = ExprKind::Binary;
      conj->bop = BinOp::And;
      conj->span = Span{acc->span.begin, parts[i]->span.end, acc->span.line, acc->span.col};
      conj->kids = {acc, parts[i]};
      acc = conj;
    }
    return acc;
  }

  // ---- expressions ----
  // One grammar covers formulas and relational expressions; typing separates
  // them later. Precedence, loosest first:
  //   let/quantifier | iff | implies | or | and | not | comparison |
  //   no/some/lone/one prefix | + - | & | -> | . and [] | ^ * | primary

  ExprPtr parse_expr() { return parse_quant_level(); }

  bool quantifier_ahead() const {
    // After all/some/no/lone/one: ident (',' ident)* ':' begins a declaration.
    if (peek(1).type != Tok::Ident) return false;
    size_t i = 2;
    while (peek(i).type == Tok::Comma && peek(i + 1).type == Tok::Ident) i += 2;
    return peek(i).type == Tok::Colon;
  }

  ExprPtr parse_quant_level() {
    if (at(Tok::KwLet)) return parse_let();
    QuantKind kind;
    switch (peek().type) {
      case Tok::KwAll: kind = QuantKind::All; break;
      case Tok::KwSome: kind = QuantKind::Some; break;
      case Tok::KwNo: kind = QuantKind::No; break;
      case Tok::KwLone: kind = QuantKind::Lone; break;
      case Tok::KwOne: kind = QuantKind::One; break;
      default: return parse_iff();
    }
    if (!quantifier_ahead() && peek().type != Tok::KwAll) return parse_iff();

    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Quant;
    e->quant = kind;
    e->span = advance().span;
    while (true) {
      QuantDecl decl;
      decl.names.push_back(parse_ident("bound variable"));
      while (peek().type == Tok::Comma && peek(1).type == Tok::Ident &&
             peek(2).type != Tok::Colon) {
        advance();
        decl.names.push_back(parse_ident("bound variable"));
      }
      if (accept(Tok::Comma)) {
        // Could be `a, b: X` (same group) or `a: X, b: Y`; the lookahead above
        // keeps names in one group until a new `name :` pattern starts.
        decl.names.push_back(parse_ident("bound variable"));
      }
      expect(Tok::Colon, "':'");
      decl.domain = parse_plus_level();
      e->decls.push_back(std::move(decl));
      if (!accept(Tok::Comma)) break;
    }
    ExprPtr body;
    if (at(Tok::LBrace)) {
      body = parse_block();
    } else {
      expect(Tok::Bar, "'|' or '{'");
      body = parse_expr();
    }
    e->kids.push_back(body);
    e->span.end = body->span.end;
    return e;
  }

  ExprPtr parse_let() {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Let;
    e->span = expect(Tok::KwLet, "let").span;
    Ident name = parse_ident("let-bound name");
    e->let_name = name.name;
    e->let_name_span = name.span;
    expect(Tok::Eq, "'='");
    e->kids.push_back(parse_plus_level());
    ExprPtr body;
    if (at(Tok::LBrace)) {
      body = parse_block();
    } else {
      expect(Tok::Bar, "'|' or '{'");
      body = parse_expr();
    }
    e->kids.push_back(body);
    e->span.end = body->span.end;
    return e;
  }

  ExprPtr mk_binary(BinOp op, ExprPtr lhs, ExprPtr rhs) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Binary;
    e->bop = op;
    e->span = Span{lhs->span.begin, rhs->span.end, lhs->span.line, lhs->span.col};
    e->kids = {lhs, rhs};
    return e;
  }

  ExprPtr parse_iff() {
    ExprPtr lhs = parse_implies();
    while (at(Tok::KwIff) || at(Tok::IffArrow)) {
      advance();
      lhs = mk_binary(BinOp::Iff, lhs, parse_implies());
    }
    return lhs;
  }

  ExprPtr parse_implies() {
    ExprPtr lhs = parse_or();
    if (at(Tok::KwImplies) || at(Tok::FatArrow)) {
      advance();
      return mk_binary(BinOp::Implies, lhs, parse_implies());
    }
    return lhs;
  }

  ExprPtr parse_or() {
    ExprPtr lhs = parse_and();
    while (at(Tok::KwOr) || at(Tok::OrOr)) {
      advance();
      lhs = mk_binary(BinOp::Or, lhs, parse_and());
    }
    return lhs;
  }

  ExprPtr parse_and() {
    ExprPtr lhs = parse_not();
    while (at(Tok::KwAnd) || at(Tok::AndAnd)) {
      advance();
      lhs = mk_binary(BinOp::And, lhs, parse_not());
    }
    return lhs;
  }

  ExprPtr parse_not() {
    if (at(Tok::KwNot) || at(Tok::Bang)) {
      Span start = advance().span;
      ExprPtr inner = parse_not();
      auto e = std::make_shared<Expr>();
      e->kind = ExprKind::Unary;
      e->uop = UnOp::Not;
      e->span = Span{start.begin, inner->span.end, start.line, start.col};
      e->kids.push_back(inner);
      return e;
    }
    return parse_compare();
  }

  ExprPtr parse_compare() {
    ExprPtr lhs = parse_card_prefix();
    BinOp op;
    switch (peek().type) {
      case Tok::KwIn: op = BinOp::In; break;
      case Tok::Eq: op = BinOp::Eq; break;
      case Tok::Neq: op = BinOp::Neq; break;
      case Tok::Lt: op = BinOp::Lt; break;
      case Tok::Le: op = BinOp::Le; break;
      case Tok::Gt: op = BinOp::Gt; break;
      case Tok::Ge: op = BinOp::Ge; break;
      default: return lhs;
    }
    advance();
    ExprPtr result = mk_binary(op, lhs, parse_card_prefix());
    switch (peek().type) {
      case Tok::KwIn:
      case Tok::Eq:
      case Tok::Neq:
      case Tok::Lt:
      case Tok::Le:
      case Tok::Gt:
      case Tok::Ge:
        throw Error(ErrorKind::Syntax, "comparison operators do not chain", peek().span);
      default: return result;
    }
  }

  ExprPtr parse_card_prefix() {
    UnOp op;
    switch (peek().type) {
      case Tok::KwNo: op = UnOp::CardNo; break;
      case Tok::KwSome: op = UnOp::CardSome; break;
      case Tok::KwLone: op = UnOp::CardLone; break;
      case Tok::KwOne: op = UnOp::CardOne; break;
      default: return parse_plus_level();
    }
    Span start = advance().span;
    ExprPtr inner = parse_plus_level();
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Unary;
    e->uop = op;
    e->span = Span{start.begin, inner->span.end, start.line, start.col};
    e->kids.push_back(inner);
    return e;
  }

  ExprPtr parse_plus_level() {
    ExprPtr lhs = parse_inter();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      BinOp op = at(Tok::Plus) ? BinOp::Plus : BinOp::Minus;
      advance();
      lhs = mk_binary(op, lhs, parse_inter());
    }
    return lhs;
  }

  ExprPtr parse_inter() {
    ExprPtr lhs = parse_arrow();
    while (accept(Tok::Amp)) lhs = mk_binary(BinOp::Inter, lhs, parse_arrow());
    return lhs;
  }

  ExprPtr parse_arrow() {
    ExprPtr lhs = parse_join();
    while (accept(Tok::Arrow)) lhs = mk_binary(BinOp::Arrow, lhs, parse_join());
    return lhs;
  }

  ExprPtr parse_join() {
    ExprPtr lhs = parse_unary();
    while (true) {
      if (accept(Tok::Dot)) {
        lhs = mk_binary(BinOp::Join, lhs, parse_unary());
        continue;
      }
      if (at(Tok::LBrack)) {
        Span open = advance().span;
        auto e = std::make_shared<Expr>();
        e->kind = ExprKind::BoxJoin;
        e->kids.push_back(lhs);
        e->span = Span{lhs->span.begin, open.end, lhs->span.line, lhs->span.col};
        while (true) {
          e->kids.push_back(parse_expr());
          if (!accept(Tok::Comma)) break;
        }
        e->span.end = expect(Tok::RBrack, "']'").span.end;
        lhs = e;
        continue;
      }
      return lhs;
    }
  }

  ExprPtr parse_unary() {
    if (at(Tok::Caret) || at(Tok::Star)) {
      UnOp op = at(Tok::Caret) ? UnOp::TransClose : UnOp::ReflClose;
      Span start = advance().span;
      ExprPtr inner = parse_unary();
      auto e = std::make_shared<Expr>();
      e->kind = ExprKind::Unary;
      e->uop = op;
      e->span = Span{start.begin, inner->span.end, start.line, start.col};
      e->kids.push_back(inner);
      return e;
    }
    return parse_primary();
  }

  ExprPtr parse_primary() {
    reject_reserved();
    if (at(Tok::LParen)) {
      advance();
      ExprPtr inner = parse_expr();
      expect(Tok::RParen, "')'");
      return inner;
    }
    if (at(Tok::KwNone)) {
      auto e = std::make_shared<Expr>();
      e->kind = ExprKind::NoneSet;
      e->span = advance().span;
      return e;
    }
    if (at(Tok::Number) || (at(Tok::Minus) && peek(1).type == Tok::Number)) {
      auto e = std::make_shared<Expr>();
      e->kind = ExprKind::IntLit;
      bool neg = accept(Tok::Minus);
      const Token& n = advance();
      e->int_val = neg ? -n.number : n.number;
      e->span = n.span;
      return e;
    }
    if (at(Tok::Ident)) {
      auto e = std::make_shared<Expr>();
      e->kind = ExprKind::Name;
      const Token& first = advance();
      e->span = first.span;
      if (at(Tok::Slash)) {
        advance();
        const Token& second = expect(Tok::Ident, "qualified name");
        e->qualifier = first.text;
        e->name = second.text;
        e->span.end = second.span.end;
      } else {
        e->name = first.text;
      }
      return e;
    }
    if (at(Tok::LBrace))
      throw Error(ErrorKind::UnsupportedConstruct, "set comprehensions are not supported",
                  peek().span);
    reject_reserved();
    throw Error(ErrorKind::Syntax,
                "expected an expression (name, none, integer, '(', or a quantifier); found " +
                    describe(peek()),
                peek().span);
  }
};

}  // namespace

Spec parse(const std::string& source) {
  Parser parser(frontend::lex(source));
  return parser.parse_spec();
}

}  // namespace relcheck::ast
