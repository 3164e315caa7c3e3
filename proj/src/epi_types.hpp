#ifndef EPIC_EPI_TYPES_HPP
#define EPIC_EPI_TYPES_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "epi_ast.hpp"
#include "epi_lts.hpp"

namespace epi {

// ch(B1,...,Bn) or none; ch() is pure synchronisation.
struct Capability {
  bool is_chan = false;
  std::vector<BaseType> carries;

  static Capability none() { return {}; }
  static Capability chan(std::vector<BaseType> bs) { return {true, std::move(bs)}; }
  bool operator==(const Capability&) const = default;
  std::string str() const;
};

// A tree type: channel capability plus the local environment giving meaning
// to the type names a composition may continue with.
struct TreeType {
  Capability cap;
  std::map<std::string, TreeType> local; // keyed by type names
  bool operator==(const TreeType&) const = default;
};

// Gamma: channel names to base types, type names to tree types.
struct TypeEnv {
  std::map<std::string, BaseType> names;
  std::map<std::string, TreeType> typenames;

  TypeEnv with_name(const std::string& n, BaseType b) const {
    TypeEnv out = *this;
    out.names[n] = std::move(b);
    return out;
  }
  TypeEnv with_bindings(const std::vector<Binding>& bs) const {
    TypeEnv out = *this;
    for (const Binding& b : bs) out.names[b.name.id] = b.type;
    return out;
  }
};

struct TypeError : std::runtime_error {
  std::string rule; // type rule that failed
  std::string path; // path into the term
  TypeError(std::string r, std::string p, const std::string& msg)
      : std::runtime_error(r + " at " + (p.empty() ? "top" : p) + ": " + msg),
        rule(std::move(r)),
        path(std::move(p)) {}
};

struct SubjectError : TypeError {
  using TypeError::TypeError;
};

// Well-formedness: every type name used in the range of the name map or
// inside any ch(...) list has a global entry; the name and type-name key
// spaces do not overlap. Empty result means well-formed.
std::vector<std::string> check_wellformed(const TypeEnv& gamma);

BaseType type_of_value(const TypeEnv& gamma, const Value& v); // throws TypeError

// Cursor walk of t-vec1/t-vec2: names resolve to type names through the
// global Gamma, tree types come from the current cursor only.
Capability type_of_subject(const TypeEnv& gamma, const std::vector<Value>& subject,
                           const std::string& path = ""); // throws SubjectError

BaseType typecheck_expr(const TypeEnv& gamma, const Expr& e,
                        const std::string& path = ""); // throws TypeError

struct CheckOptions {
  bool skip_out_object_check = false; // test-only soundness mutation hook
};

void typecheck_process_or_throw(const TypeEnv& gamma, const Proc& p,
                                const CheckOptions& opts = {});
std::optional<TypeError> typecheck_process(const TypeEnv& gamma, const Proc& p,
                                           const CheckOptions& opts = {});

void typecheck_label_or_throw(const TypeEnv& gamma, const Label& l);
std::optional<TypeError> typecheck_label(const TypeEnv& gamma, const Label& l);

// Error predicate of the safety theorem; total, does not descend under
// prefixes. Expects fn(p) within dom(gamma).
bool wrong(const TypeEnv& gamma, const Proc& p);

inline bool now_safe(const TypeEnv& gamma, const Proc& p) { return !wrong(gamma, p); }

// now_safe at every state tau-reachable within `depth` steps.
bool safe_bounded(const TypeEnv& gamma, const Proc& p, size_t depth,
                  size_t frontier_cap = 0);

// .tenv text format:
//   name <x> : <B>
//   type <I> = (<cap>, { <I'> = (<cap'>, { ... }), ... })
// where <cap> is none or ch(B1,...,Bn).
TypeEnv parse_typeenv(const std::string& text); // throws ParseError
std::string print_typeenv(const TypeEnv& gamma);

} // namespace epi

#endif
