#ifndef EPIC_EPI_OPS_HPP
#define EPIC_EPI_OPS_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "epi_ast.hpp"

namespace epi {

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Fixed operator table shared by the epi and WC evaluators:
//   + - * : int^2 -> int      < : int^2 -> bool
//   and or : bool^2 -> bool   not : bool -> bool
//   = : B^2 -> bool for every base type B (name equality included)
// No operator yields a name.
bool known_op(const std::string& op);
size_t op_arity(const std::string& op);

// Signature lookup used by the type checkers. '=' requires both argument
// types equal; the result is their common base type mapped to bool.
std::optional<BaseType> op_result(const std::string& op, const std::vector<BaseType>& args);

// Applies an operator to evaluated arguments; throws EvalError on misuse.
Value apply_op(const std::string& op, const std::vector<Value>& args);

// Evaluates a closed expression; names evaluate to themselves.
Value eval_expr(const Expr& e);

std::vector<Value> eval_exprs(const std::vector<Expr>& es);

} // namespace epi

#endif
