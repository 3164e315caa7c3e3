#ifndef EPIC_EPI_TEXT_HPP
#define EPIC_EPI_TEXT_HPP

#include <stdexcept>
#include <string>

#include "epi_ast.hpp"

namespace epi {

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(std::string msg, int l, int c)
      : std::runtime_error(std::to_string(l) + ":" + std::to_string(c) + ": " + msg),
        line(l),
        col(c) {}
};

// Grammar (one-token lookahead):
//   P      ::= T ('|' T)*
//   T      ::= '[' e ']' Prefix ('+' '[' e ']' Prefix)*    guarded sum
//            | Prefix
//   Prefix ::= '0'
//            | '!' Prefix                                  replication
//            | 'new' x ':' B (',' x ':' B)* '(' P ')'
//            | 'if' e 'then' Prefix 'else' Prefix          sugar for [e]P + [not e]Q
//            | '(' P ')'
//            | subj '!' '(' e,... ')' ('.' Prefix)?
//            | subj '?' '(' x,... ')' ('.' Prefix)?
//   subj   ::= name ('*' name)*
// Expressions use 'or'/'and'/'not', '=', '<', '+', '-', '*', integer and
// boolean literals, and names.
Proc parse_process(const std::string& text);
Expr parse_expr(const std::string& text);

std::string print_value(const Value& v);
std::string print_expr(const Expr& e);
std::string print_process(const Proc& p);

// Canonical-form pretty print; equal strings iff alpha-equivalent terms.
std::string alpha_key(const Proc& p);

} // namespace epi

#endif
