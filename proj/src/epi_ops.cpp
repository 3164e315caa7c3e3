#include "epi_ops.hpp"

#include "common.hpp"
#include "epi_text.hpp"

using epic::overloaded;

namespace epi {

bool known_op(const std::string& op) {
  return op == "+" || op == "-" || op == "*" || op == "<" || op == "=" || op == "and" ||
         op == "or" || op == "not";
}

size_t op_arity(const std::string& op) { return op == "not" ? 1 : 2; }

std::optional<BaseType> op_result(const std::string& op, const std::vector<BaseType>& args) {
  if (!known_op(op) || args.size() != op_arity(op)) return std::nullopt;
  if (op == "+" || op == "-" || op == "*") {
    if (args[0] == BaseType::integer() && args[1] == BaseType::integer())
      return BaseType::integer();
    return std::nullopt;
  }
  if (op == "<") {
    if (args[0] == BaseType::integer() && args[1] == BaseType::integer())
      return BaseType::boolean();
    return std::nullopt;
  }
  if (op == "and" || op == "or") {
    if (args[0] == BaseType::boolean() && args[1] == BaseType::boolean())
      return BaseType::boolean();
    return std::nullopt;
  }
  if (op == "not") {
    if (args[0] == BaseType::boolean()) return BaseType::boolean();
    return std::nullopt;
  }
  // '=' at any base type, nominally matched
  if (args[0] == args[1]) return BaseType::boolean();
  return std::nullopt;
}

namespace {

long long want_int(const std::string& op, const Value& v) {
  if (const long long* n = std::get_if<long long>(&v)) return *n;
  throw EvalError("operator '" + op + "' expects integers, got " + print_value(v));
}

bool want_bool(const std::string& op, const Value& v) {
  if (const bool* b = std::get_if<bool>(&v)) return *b;
  throw EvalError("operator '" + op + "' expects booleans, got " + print_value(v));
}

} // namespace

Value apply_op(const std::string& op, const std::vector<Value>& args) {
  if (!known_op(op)) throw EvalError("unknown operator '" + op + "'");
  if (args.size() != op_arity(op))
    throw EvalError("operator '" + op + "' expects " + std::to_string(op_arity(op)) +
                    " arguments, got " + std::to_string(args.size()));
  if (op == "+") return want_int(op, args[0]) + want_int(op, args[1]);
  if (op == "-") return want_int(op, args[0]) - want_int(op, args[1]);
  if (op == "*") return want_int(op, args[0]) * want_int(op, args[1]);
  if (op == "<") return want_int(op, args[0]) < want_int(op, args[1]);
  if (op == "and") return want_bool(op, args[0]) && want_bool(op, args[1]);
  if (op == "or") return want_bool(op, args[0]) || want_bool(op, args[1]);
  if (op == "not") return !want_bool(op, args[0]);
  // '=' compares like values only; comparing across sorts is an error the
  // type system rules out
  if (args[0].index() != args[1].index())
    throw EvalError("operator '=' applied to values of different sorts: " +
                    print_value(args[0]) + " and " + print_value(args[1]));
  return args[0] == args[1];
}

Value eval_expr(const Expr& e) {
  return std::visit(overloaded{
                        [](const Value& v) { return v; },
                        [](const OpApp& a) {
                          std::vector<Value> args;
                          args.reserve(a.args.size());
                          for (const Expr& arg : a.args) args.push_back(eval_expr(arg));
                          return apply_op(a.op, args);
                        },
                    },
                    e.node);
}

std::vector<Value> eval_exprs(const std::vector<Expr>& es) {
  std::vector<Value> out;
  out.reserve(es.size());
  for (const Expr& e : es) out.push_back(eval_expr(e));
  return out;
}

} // namespace epi
