#include "lexer.hpp"

#include <cctype>
#include <map>

namespace relcheck::frontend {

namespace {

const std::map<std::string, Tok>& keyword_table() {
  static const std::map<std::string, Tok> table = {
      {"abstract", Tok::KwAbstract}, {"all", Tok::KwAll},
      {"and", Tok::KwAnd},           {"as", Tok::KwAs},
      {"assert", Tok::KwAssert},     {"check", Tok::KwCheck},
      {"extends", Tok::KwExtends},   {"fact", Tok::KwFact},
      {"for", Tok::KwFor},           {"fun", Tok::KwFun},
      {"iff", Tok::KwIff},           {"implies", Tok::KwImplies},
      {"in", Tok::KwIn},             {"let", Tok::KwLet},
      {"lone", Tok::KwLone},         {"no", Tok::KwNo},
      {"none", Tok::KwNone},         {"not", Tok::KwNot},
      {"one", Tok::KwOne},           {"open", Tok::KwOpen},
      {"or", Tok::KwOr},             {"pred", Tok::KwPred},
      {"set", Tok::KwSet},           {"sig", Tok::KwSig},
      {"some", Tok::KwSome},
      // Recognized so the parser can reject them with a helpful message.
      {"but", Tok::KwReserved},      {"disj", Tok::KwReserved},
      {"else", Tok::KwReserved},     {"iden", Tok::KwReserved},
      {"module", Tok::KwReserved},   {"run", Tok::KwReserved},
      {"seq", Tok::KwReserved},      {"sum", Tok::KwReserved},
      {"univ", Tok::KwReserved},
  };
  return table;
}

struct Cursor {
  const std::string& src;
  size_t pos = 0;
  int line = 1;
  int col = 1;

  bool done() const { return pos >= src.size(); }
  char peek(size_t ahead = 0) const {
    return pos + ahead < src.size() ? src[pos + ahead] : '\0';
  }
  void advance() {
    if (src[pos] == '\n') {
      line++;
      col = 1;
    } else {
      col++;
    }
    pos++;
  }
  Span here() const { return Span{pos, pos, line, col}; }
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_cont(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

}  // namespace

std::vector<Token> lex(const std::string& source) {
  Cursor cur{source};
  std::vector<Token> out;

  auto push = [&](Tok type, Span start) {
    Token t;
    t.type = type;
    t.span = start;
    t.span.end = cur.pos;
    t.text = source.substr(start.begin, cur.pos - start.begin);
    out.push_back(std::move(t));
  };

  while (!cur.done()) {
    char c = cur.peek();
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      cur.advance();
      continue;
    }
    // Comments.
    if (c == '/' && cur.peek(1) == '/') {
      while (!cur.done() && cur.peek() != '\n') cur.advance();
      continue;
    }
    if (c == '-' && cur.peek(1) == '-') {
      while (!cur.done() && cur.peek() != '\n') cur.advance();
      continue;
    }
    if (c == '/' && cur.peek(1) == '*') {
      Span start = cur.here();
      cur.advance();
      cur.advance();
      bool closed = false;
      while (!cur.done()) {
        if (cur.peek() == '*' && cur.peek(1) == '/') {
          cur.advance();
          cur.advance();
          closed = true;
          break;
        }
        cur.advance();
      }
      if (!closed) throw Error(ErrorKind::Syntax, "unterminated block comment", start);
      continue;
    }

    Span start = cur.here();
    if (ident_start(c)) {
      while (!cur.done() && ident_cont(cur.peek())) cur.advance();
      std::string word = source.substr(start.begin, cur.pos - start.begin);
      auto it = keyword_table().find(word);
      push(it != keyword_table().end() ? it->second : Tok::Ident, start);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (!cur.done() && std::isdigit(static_cast<unsigned char>(cur.peek()))) cur.advance();
      push(Tok::Number, start);
      out.back().number = std::stoll(out.back().text);
      continue;
    }

    auto two = [&](char a, char b) { return c == a && cur.peek(1) == b; };
    auto emit = [&](Tok type, int len) {
      for (int i = 0; i < len; i++) cur.advance();
      push(type, start);
    };

    if (two('<', '=') && cur.peek(2) == '>') { emit(Tok::IffArrow, 3); continue; }
    if (two('-', '>')) { emit(Tok::Arrow, 2); continue; }
    if (two('=', '>')) { emit(Tok::FatArrow, 2); continue; }
    if (two('!', '=')) { emit(Tok::Neq, 2); continue; }
    if (two('<', '=')) { emit(Tok::Le, 2); continue; }
    if (two('>', '=')) { emit(Tok::Ge, 2); continue; }
    if (two('&', '&')) { emit(Tok::AndAnd, 2); continue; }
    if (two('|', '|')) { emit(Tok::OrOr, 2); continue; }
    if (two('+', '+') || two('<', ':') || two(':', '>')) { emit(Tok::ReservedOp, 2); continue; }

    switch (c) {
      case '{': emit(Tok::LBrace, 1); continue;
      case '}': emit(Tok::RBrace, 1); continue;
      case '[': emit(Tok::LBrack, 1); continue;
      case ']': emit(Tok::RBrack, 1); continue;
      case '(': emit(Tok::LParen, 1); continue;
      case ')': emit(Tok::RParen, 1); continue;
      case ':': emit(Tok::Colon, 1); continue;
      case ',': emit(Tok::Comma, 1); continue;
      case '|': emit(Tok::Bar, 1); continue;
      case '/': emit(Tok::Slash, 1); continue;
      case '.': emit(Tok::Dot, 1); continue;
      case '^': emit(Tok::Caret, 1); continue;
      case '*': emit(Tok::Star, 1); continue;
      case '&': emit(Tok::Amp, 1); continue;
      case '+': emit(Tok::Plus, 1); continue;
      case '-': emit(Tok::Minus, 1); continue;
      case '=': emit(Tok::Eq, 1); continue;
      case '<': emit(Tok::Lt, 1); continue;
      case '>': emit(Tok::Gt, 1); continue;
      case '!': emit(Tok::Bang, 1); continue;
      case '~':
      case '#':
      case '@': emit(Tok::ReservedOp, 1); continue;
      default:
        throw Error(ErrorKind::Syntax,
                    std::string("unexpected character '") + c + "'", start);
    }
  }

  Token end;
  end.type = Tok::End;
  end.span = cur.here();
  out.push_back(end);
  return out;
}

}  // namespace relcheck::frontend
