#ifndef EPIC_WC_AST_HPP
#define EPIC_WC_AST_HPP

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "epi_ast.hpp" // WC base types are shared with the epi side

namespace wc {

// Interface names double as epi type names, so the base-type language is the
// same on both sides.
using BaseType = epi::BaseType;

struct ClassName {
  std::string id;
  bool operator==(const ClassName&) const = default;
};

// Values: integers, booleans, class names.
using Value = std::variant<long long, bool, ClassName>;

std::string print_value(const Value& v);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct EVal {
  Value value;
};
struct EVar {
  std::string name;
};
struct EThis {};
struct EField {
  ExprPtr base;
  std::string field;
};
struct EOp {
  std::string op;
  std::vector<Expr> args;
};

struct Expr {
  std::variant<EVal, EVar, EThis, EField, EOp> node;
};

Expr e_val(Value v);
Expr e_var(std::string name);
Expr e_this();
Expr e_field(Expr base, std::string field);
Expr e_op(std::string op, std::vector<Expr> args);

struct Stm;
using StmPtr = std::shared_ptr<const Stm>;

struct SSkip {};
struct SVarDecl {
  BaseType type;
  std::string var;
  Expr init;
  StmPtr body;
};
struct SAssignVar {
  std::string var;
  Expr value;
};
struct SAssignField {
  std::string field; // this.field := value
  Expr value;
};
struct SSeq {
  StmPtr first, second;
};
struct SIf {
  Expr cond;
  StmPtr then_branch, else_branch;
};
struct SWhile {
  Expr cond;
  StmPtr body;
};
struct SCall {
  Expr target;
  std::string method;
  std::vector<Expr> args;
};

struct Stm {
  std::variant<SSkip, SVarDecl, SAssignVar, SAssignField, SSeq, SIf, SWhile, SCall> node;
};

StmPtr s_skip();
StmPtr s_vardecl(BaseType type, std::string var, Expr init, StmPtr body);
StmPtr s_assign(std::string var, Expr value);
StmPtr s_assign_field(std::string field, Expr value);
StmPtr s_seq(StmPtr first, StmPtr second);
StmPtr s_if(Expr cond, StmPtr t, StmPtr f);
StmPtr s_while(Expr cond, StmPtr body);
StmPtr s_call(Expr target, std::string method, std::vector<Expr> args);

struct Method {
  std::string name;
  std::vector<std::string> params;
  StmPtr body;
};

struct ClassDecl {
  std::string name;
  std::string interface;
  std::vector<std::pair<std::string, Value>> fields; // declaration order
  std::vector<Method> methods;
};

struct InterfaceField {
  std::string name;
  BaseType type;
};
struct InterfaceMethod {
  std::string name;
  std::vector<BaseType> params; // proc(B1,...,Bn)
};
struct InterfaceDecl {
  std::string name;
  std::vector<InterfaceField> fields;
  std::vector<InterfaceMethod> methods;
};

struct Program {
  std::vector<InterfaceDecl> interfaces;
  std::vector<ClassDecl> classes;
  StmPtr main;
  std::vector<std::string> warnings; // e.g. shadowed variables renamed at parse time
};

// Environments are association lists; lookup is leftmost-first and update
// replaces the leftmost binding.
template <class T>
struct EnvList {
  std::vector<std::pair<std::string, T>> entries;

  const T* lookup(const std::string& key) const {
    for (const auto& [k, v] : entries)
      if (k == key) return &v;
    return nullptr;
  }
  bool update(const std::string& key, T value) {
    for (auto& [k, v] : entries)
      if (k == key) {
        v = std::move(value);
        return true;
      }
    return false;
  }
  void push_front(std::string key, T value) {
    entries.insert(entries.begin(), {std::move(key), std::move(value)});
  }
  bool contains(const std::string& key) const { return lookup(key) != nullptr; }
  size_t size() const { return entries.size(); }
  bool operator==(const EnvList&) const = default;
};

using EnvV = EnvList<Value>;  // locals and this
using EnvF = EnvList<Value>;  // fields of one class
using EnvM = EnvList<Method>; // methods of one class
using EnvS = EnvList<EnvF>;   // class -> field store
using EnvT = EnvList<EnvM>;   // class -> method table

} // namespace wc

#endif
