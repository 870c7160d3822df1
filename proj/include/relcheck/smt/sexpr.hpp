#pragma once
// Minimal S-expression reader for solver output. Comments (`;` to end of
// line) are skipped; atoms keep their literal spelling (including #b/#x
// literals and |quoted| symbols).

#include <string>
#include <vector>

namespace relcheck::smt {

struct SExpr {
  bool is_atom = true;
  std::string atom;
  std::vector<SExpr> items;

  bool is(const std::string& s) const { return is_atom && atom == s; }
  // Convenience: head symbol of a list, or empty.
  std::string head() const {
    return !is_atom && !items.empty() && items[0].is_atom ? items[0].atom : "";
  }
};

// Parses every top-level expression in the text. Throws Error(Decode) on
// unbalanced parentheses or an unterminated quoted symbol.
std::vector<SExpr> parse_sexprs(const std::string& text);

std::string sexpr_text(const SExpr& e);

}  // namespace relcheck::smt
