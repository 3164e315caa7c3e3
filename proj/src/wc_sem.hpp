#ifndef EPIC_WC_SEM_HPP
#define EPIC_WC_SEM_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

#include "wc_ast.hpp"

namespace wc {

struct DuplicateName : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// No big-step rule applies (wrong guard sort, unknown method, arity
// mismatch, ...). Carries the rule that got stuck.
struct StuckError : std::runtime_error {
  std::string rule;
  StuckError(std::string r, const std::string& msg)
      : std::runtime_error(r + ": " + msg), rule(std::move(r)) {}
};

// Fuel ran out before the derivation finished; divergence suspicion.
struct FuelExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultFuel = 1000000;

// Per-class field stores and method tables from the declaration list, in
// declaration order.
struct Environments {
  EnvS envs;
  EnvT envt;
};
Environments build_environments(const std::vector<ClassDecl>& classes);

// Expression evaluation; throws epi::EvalError on unbound variables, bad
// field accesses or operator misuse.
Value eval_expr(const EnvS& envs, const EnvV& envv, const Expr& e);

struct ExecResult {
  EnvS envs;
  EnvV envv;
};

// Big-step execution; fuel counts rule applications.
ExecResult exec(const EnvT& envt, EnvS envs, EnvV envv, const StmPtr& s,
                std::uint64_t fuel = kDefaultFuel);

// Conversions used by the encoder and the operator table.
epi::Value to_epi(const Value& v);
Value from_epi(const epi::Value& v);

// Final field store as "A.p = v" lines, sorted by class then field.
std::string format_store(const EnvS& envs);

} // namespace wc

#endif
