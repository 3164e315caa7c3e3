#ifndef EPIC_WC_TEXT_HPP
#define EPIC_WC_TEXT_HPP

#include <string>

#include "wc_ast.hpp"

namespace wc {

// .wc layout: interface declarations, then class declarations, then
// main { S }. Statements:
//   skip | var B x := e in S | x := e | this.p := e | S1; S2
//   | if e then S else S | while e do S | e::f(e1,...,en) | { S }
// A declaration nested inside the scope of a same-named variable is renamed
// at parse time (the big-step declaration rule requires fresh names); the
// renaming is reported in Program::warnings.
Program parse_program(const std::string& text); // throws epi::ParseError

std::string print_program(const Program& p);
std::string print_stm(const StmPtr& s);
std::string print_expr(const Expr& e);

} // namespace wc

#endif
