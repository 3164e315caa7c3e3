#ifndef EPIC_WC_TYPES_HPP
#define EPIC_WC_TYPES_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "wc_ast.hpp"

namespace wc {

struct ProcType {
  std::vector<BaseType> params;
  bool operator==(const ProcType&) const = default;
};

// Interface: field names to base types, method names to proc signatures.
struct IfaceType {
  std::map<std::string, BaseType> fields;
  std::map<std::string, ProcType> methods;
  bool operator==(const IfaceType&) const = default;
};

using WcType = std::variant<BaseType, ProcType, IfaceType>;

struct WcTypeEnv {
  std::map<std::string, WcType> entries;

  const WcType* lookup(const std::string& id) const {
    auto it = entries.find(id);
    return it == entries.end() ? nullptr : &it->second;
  }
  const BaseType* base_of(const std::string& id) const {
    const WcType* t = lookup(id);
    return t ? std::get_if<BaseType>(t) : nullptr;
  }
  const IfaceType* iface_of(const std::string& id) const {
    const WcType* t = lookup(id);
    return t ? std::get_if<IfaceType>(t) : nullptr;
  }
  WcTypeEnv with(const std::string& id, WcType t) const {
    WcTypeEnv out = *this;
    out.entries[id] = std::move(t);
    return out;
  }
};

struct WcTypeError : std::runtime_error {
  std::string rule;
  WcTypeError(std::string r, const std::string& msg)
      : std::runtime_error(r + ": " + msg), rule(std::move(r)) {}
};

// Interfaces become interface entries, each class maps to its annotation.
// Throws WcTypeError on duplicate interfaces/members or unknown annotations.
WcTypeEnv build_gamma(const Program& program);

BaseType typecheck_expr(const WcTypeEnv& gamma, const Expr& e); // throws WcTypeError
BaseType typecheck_value(const WcTypeEnv& gamma, const Value& v);

void typecheck_stm_or_throw(const WcTypeEnv& gamma, const StmPtr& s);
std::optional<WcTypeError> typecheck_stm(const WcTypeEnv& gamma, const StmPtr& s);

void typecheck_envs_or_throw(const WcTypeEnv& gamma, const EnvT& envt, const EnvS& envs,
                             const EnvV& envv);
std::optional<WcTypeError> typecheck_envs(const WcTypeEnv& gamma, const EnvT& envt,
                                          const EnvS& envs, const EnvV& envv);

// Whole-program check: gamma construction, environment agreement for the
// declarations, and the main statement.
std::optional<WcTypeError> typecheck_program(const Program& program);

} // namespace wc

#endif
