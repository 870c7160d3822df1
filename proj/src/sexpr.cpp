#include <sstream>

#include "relcheck/diag.hpp"
#include "relcheck/smt/sexpr.hpp"

namespace relcheck::smt {

namespace {

struct Reader {
  const std::string& text;
  size_t pos = 0;

  bool done() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }

  void skip_space() {
    while (!done()) {
      char c = peek();
      if (c == ';') {
        while (!done() && peek() != '\n') pos++;
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        pos++;
      } else {
        return;
      }
    }
  }

  SExpr read() {
    skip_space();
    if (done()) throw Error(ErrorKind::Decode, "unexpected end of solver output");
    char c = peek();
    if (c == '(') {
      pos++;
      SExpr list;
      list.is_atom = false;
      while (true) {
        skip_space();
        if (done()) throw Error(ErrorKind::Decode, "unbalanced '(' in solver output");
        if (peek() == ')') {
          pos++;
          return list;
        }
        list.items.push_back(read());
      }
    }
    if (c == ')') throw Error(ErrorKind::Decode, "unbalanced ')' in solver output");
    SExpr atom;
    if (c == '|') {
      size_t end = text.find('|', pos + 1);
      if (end == std::string::npos)
        throw Error(ErrorKind::Decode, "unterminated quoted symbol in solver output");
      atom.atom = text.substr(pos, end - pos + 1);
      pos = end + 1;
      return atom;
    }
    if (c == '"') {
      size_t end = pos + 1;
      while (end < text.size() && text[end] != '"') end++;
      if (end >= text.size())
        throw Error(ErrorKind::Decode, "unterminated string in solver output");
      atom.atom = text.substr(pos, end - pos + 1);
      pos = end + 1;
      return atom;
    }
    size_t start = pos;
    while (!done()) {
      char d = peek();
      if (d == '(' || d == ')' || d == ';' || d == ' ' || d == '\t' || d == '\n' || d == '\r')
        break;
      pos++;
    }
    atom.atom = text.substr(start, pos - start);
    return atom;
  }
};

void print_sexpr(std::ostream& os, const SExpr& e) {
  if (e.is_atom) {
    os << e.atom;
    return;
  }
  os << "(";
  for (size_t i = 0; i < e.items.size(); i++) {
    if (i) os << " ";
    print_sexpr(os, e.items[i]);
  }
  os << ")";
}

}  // namespace

std::vector<SExpr> parse_sexprs(const std::string& text) {
  Reader r{text};
  std::vector<SExpr> out;
  while (true) {
    r.skip_space();
    if (r.done()) return out;
    out.push_back(r.read());
  }
}

std::string sexpr_text(const SExpr& e) {
  std::ostringstream os;
  print_sexpr(os, e);
  return os.str();
}

}  // namespace relcheck::smt
