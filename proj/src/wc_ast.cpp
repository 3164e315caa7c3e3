#include "wc_ast.hpp"

#include "common.hpp"

using epic::overloaded;

namespace wc {

std::string print_value(const Value& v) {
  return std::visit(overloaded{
                        [](long long n) { return std::to_string(n); },
                        [](bool b) { return std::string(b ? "true" : "false"); },
                        [](const ClassName& c) { return c.id; },
                    },
                    v);
}

Expr e_val(Value v) { return Expr{EVal{std::move(v)}}; }
Expr e_var(std::string name) { return Expr{EVar{std::move(name)}}; }
Expr e_this() { return Expr{EThis{}}; }
Expr e_field(Expr base, std::string field) {
  return Expr{EField{std::make_shared<Expr>(std::move(base)), std::move(field)}};
}
Expr e_op(std::string op, std::vector<Expr> args) {
  return Expr{EOp{std::move(op), std::move(args)}};
}

StmPtr s_skip() { return std::make_shared<Stm>(Stm{SSkip{}}); }
StmPtr s_vardecl(BaseType type, std::string var, Expr init, StmPtr body) {
  return std::make_shared<Stm>(
      Stm{SVarDecl{std::move(type), std::move(var), std::move(init), std::move(body)}});
}
StmPtr s_assign(std::string var, Expr value) {
  return std::make_shared<Stm>(Stm{SAssignVar{std::move(var), std::move(value)}});
}
StmPtr s_assign_field(std::string field, Expr value) {
  return std::make_shared<Stm>(Stm{SAssignField{std::move(field), std::move(value)}});
}
StmPtr s_seq(StmPtr first, StmPtr second) {
  return std::make_shared<Stm>(Stm{SSeq{std::move(first), std::move(second)}});
}
StmPtr s_if(Expr cond, StmPtr t, StmPtr f) {
  return std::make_shared<Stm>(Stm{SIf{std::move(cond), std::move(t), std::move(f)}});
}
StmPtr s_while(Expr cond, StmPtr body) {
  return std::make_shared<Stm>(Stm{SWhile{std::move(cond), std::move(body)}});
}
StmPtr s_call(Expr target, std::string method, std::vector<Expr> args) {
  return std::make_shared<Stm>(Stm{SCall{std::move(target), std::move(method), std::move(args)}});
}

} // namespace wc
