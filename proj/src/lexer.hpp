#pragma once
// Tokenizer for the specification language. Internal to the frontend.

#include <string>
#include <vector>

#include "relcheck/diag.hpp"

namespace relcheck::frontend {

enum class Tok {
  End,
  Ident,
  Number,
  // supported keywords
  KwAbstract, KwAll, KwAnd, KwAs, KwAssert, KwCheck, KwExtends, KwFact,
  KwFor, KwFun, KwIff, KwImplies, KwIn, KwLet, KwLone, KwNo, KwNone,
  KwNot, KwOne, KwOpen, KwOr, KwPred, KwSet, KwSig, KwSome,
  // recognized but unsupported keywords
  KwReserved,
  // punctuation and operators
  LBrace, RBrace, LBrack, RBrack, LParen, RParen,
  Colon, Comma, Bar, Slash, Dot, Caret, Star, Amp,
  Plus, Minus, Arrow, Eq, Neq, Lt, Le, Gt, Ge, Bang,
  AndAnd, OrOr, FatArrow, IffArrow,
  // recognized but unsupported operators
  ReservedOp,
};

struct Token {
  Tok type = Tok::End;
  std::string text;
  Span span;
  long long number = 0;
};

// Tokenize the whole input, stripping //, -- and /* */ comments.
// Throws Error(Syntax) on stray characters or unterminated comments.
std::vector<Token> lex(const std::string& source);

}  // namespace relcheck::frontend
