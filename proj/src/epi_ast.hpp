#ifndef EPIC_EPI_AST_HPP
#define EPIC_EPI_AST_HPP

#include <map>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace epi {

// Base types annotate restriction binders and populate type environments.
struct BaseType {
  enum class Kind { TypeName, Int, Bool };
  Kind kind = Kind::Int;
  std::string name; // set iff kind == TypeName

  static BaseType integer() { return {Kind::Int, {}}; }
  static BaseType boolean() { return {Kind::Bool, {}}; }
  static BaseType type_name(std::string id) { return {Kind::TypeName, std::move(id)}; }

  bool operator==(const BaseType&) const = default;
  bool operator<(const BaseType& o) const {
    if (kind != o.kind) return kind < o.kind;
    return name < o.name;
  }
  std::string str() const {
    switch (kind) {
      case Kind::Int: return "int";
      case Kind::Bool: return "bool";
      default: return name;
    }
  }
};

struct Name {
  std::string id;
  bool operator==(const Name&) const = default;
  bool operator<(const Name& o) const { return id < o.id; }
};

// Values: names, integers, booleans. Operators never yield a name.
using Value = std::variant<Name, long long, bool>;

inline Value val_name(std::string id) { return Name{std::move(id)}; }
inline Value val_int(long long n) { return n; }
inline Value val_bool(bool b) { return b; }
inline const Name* as_name(const Value& v) { return std::get_if<Name>(&v); }

struct Expr;

struct OpApp {
  std::string op;
  std::vector<Expr> args;
};

struct Expr {
  std::variant<Value, OpApp> node;

  Expr() : node(Value{false}) {}
  Expr(Value v) : node(std::move(v)) {}
  Expr(OpApp a) : node(std::move(a)) {}
};

inline Expr ex_val(Value v) { return Expr{std::move(v)}; }
inline Expr ex_name(std::string id) { return Expr{val_name(std::move(id))}; }
inline Expr ex_op(std::string op, std::vector<Expr> args) {
  return Expr{OpApp{std::move(op), std::move(args)}};
}

struct Binding {
  Name name;
  BaseType type;
  bool operator==(const Binding&) const = default;
};

struct Process;
using Proc = std::shared_ptr<const Process>;

struct Nil {};
struct Input {
  std::vector<Value> subject; // nonempty; names unless substitution introduced data
  std::vector<Name> binders;  // pairwise distinct
  Proc body;
};
struct Output {
  std::vector<Value> subject;
  std::vector<Expr> objects;
  Proc body;
};
struct Par {
  Proc left, right;
};
struct Restrict {
  std::vector<Binding> bindings; // nonempty, names pairwise distinct
  Proc body;
};
struct Repl {
  Proc body;
};
struct Branch {
  Expr guard;
  Proc body;
};
struct Sum {
  std::vector<Branch> branches; // nonempty
};

struct Process {
  std::variant<Nil, Input, Output, Par, Restrict, Repl, Sum> node;
};

Proc p_nil();
Proc p_in(std::vector<Value> subject, std::vector<Name> binders, Proc body);
Proc p_out(std::vector<Value> subject, std::vector<Expr> objects, Proc body);
Proc p_par(Proc left, Proc right);
Proc p_new(std::vector<Binding> bindings, Proc body); // empty binding list collapses to body
Proc p_repl(Proc body);
Proc p_sum(std::vector<Branch> branches);

using Subst = std::map<std::string, Value>;

std::set<std::string> free_names(const Expr& e);
std::set<std::string> free_names(const Proc& p);

Value substitute(const Value& v, const Subst& s);
Expr substitute(const Expr& e, const Subst& s);
// Capture-avoiding; bound names are renamed to fresh "stem#k" names as needed.
Proc substitute(const Proc& p, const Subst& s);

// Structural equality (no alpha identification).
bool equal(const Expr& a, const Expr& b);
bool equal(const Proc& a, const Proc& b);

// Renames every bound name to a positional "#k" name and normalises the order
// of binders within each restriction, so two processes are alpha-equivalent
// exactly when their canonical forms are structurally equal.
Proc canonical(const Proc& p);

bool alpha_eq(const Proc& a, const Proc& b);

} // namespace epi

#endif
