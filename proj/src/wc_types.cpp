#include "wc_types.hpp"

#include "common.hpp"
#include "epi_ops.hpp"
#include "wc_sem.hpp"
#include "wc_text.hpp"

using epic::join;
using epic::overloaded;

namespace wc {

WcTypeEnv build_gamma(const Program& program) {
  WcTypeEnv gamma;
  for (const InterfaceDecl& decl : program.interfaces) {
    if (gamma.lookup(decl.name))
      throw WcTypeError("gamma", "duplicate interface " + decl.name);
    IfaceType iface;
    for (const InterfaceField& f : decl.fields) {
      if (iface.fields.count(f.name) || iface.methods.count(f.name))
        throw WcTypeError("gamma", "duplicate member " + f.name + " in interface " + decl.name);
      iface.fields.emplace(f.name, f.type);
    }
    for (const InterfaceMethod& m : decl.methods) {
      if (iface.fields.count(m.name) || iface.methods.count(m.name))
        throw WcTypeError("gamma", "duplicate member " + m.name + " in interface " + decl.name);
      iface.methods.emplace(m.name, ProcType{m.params});
    }
    gamma.entries.emplace(decl.name, std::move(iface));
  }
  for (const ClassDecl& decl : program.classes) {
    if (gamma.lookup(decl.name)) throw WcTypeError("gamma", "duplicate class " + decl.name);
    if (!gamma.iface_of(decl.interface))
      throw WcTypeError("gamma",
                        "class " + decl.name + " implements unknown interface " + decl.interface);
    gamma.entries.emplace(decl.name, BaseType::type_name(decl.interface));
  }
  return gamma;
}

BaseType typecheck_value(const WcTypeEnv& gamma, const Value& v) {
  return std::visit(overloaded{
                        [](long long) { return BaseType::integer(); },
                        [](bool) { return BaseType::boolean(); },
                        [&](const ClassName& c) {
                          const BaseType* b = gamma.base_of(c.id);
                          if (!b) throw WcTypeError("t-val", "unbound class name " + c.id);
                          return *b;
                        },
                    },
                    v);
}

BaseType typecheck_expr(const WcTypeEnv& gamma, const Expr& e) {
  return std::visit(
      overloaded{
          [&](const EVal& n) { return typecheck_value(gamma, n.value); },
          [&](const EVar& n) {
            const BaseType* b = gamma.base_of(n.name);
            if (!b) throw WcTypeError("t-var", "unbound variable " + n.name);
            return *b;
          },
          [&](const EThis&) {
            const BaseType* b = gamma.base_of("this");
            if (!b) throw WcTypeError("t-var", "'this' is not bound here");
            return *b;
          },
          [&](const EField& n) {
            BaseType base = typecheck_expr(gamma, *n.base);
            if (base.kind != BaseType::Kind::TypeName)
              throw WcTypeError("t-field",
                                "field access on expression of type " + base.str());
            const IfaceType* iface = gamma.iface_of(base.name);
            if (!iface)
              throw WcTypeError("t-field", "no interface named " + base.name);
            auto it = iface->fields.find(n.field);
            if (it == iface->fields.end())
              throw WcTypeError("t-field",
                                "interface " + base.name + " has no field " + n.field);
            return it->second;
          },
          [&](const EOp& n) {
            std::vector<BaseType> args;
            for (const Expr& a : n.args) args.push_back(typecheck_expr(gamma, a));
            std::optional<BaseType> res = epi::op_result(n.op, args);
            if (!res) {
              std::vector<std::string> shown;
              for (const BaseType& b : args) shown.push_back(b.str());
              throw WcTypeError("t-op", "operator '" + n.op + "' not applicable at (" +
                                            join(shown, ", ") + ")");
            }
            return *res;
          },
      },
      e.node);
}

namespace {

void expect_type(const WcTypeEnv& gamma, const Expr& e, const BaseType& want,
                 const std::string& rule) {
  BaseType got = typecheck_expr(gamma, e);
  if (!(got == want))
    throw WcTypeError(rule, "expression '" + print_expr(e) + "' has type " + got.str() +
                                ", wanted " + want.str());
}

void check_stm(const WcTypeEnv& gamma, const StmPtr& s) {
  std::visit(
      overloaded{
          [](const SSkip&) {},
          [&](const SVarDecl& n) {
            expect_type(gamma, n.init, n.type, "t-decv");
            check_stm(gamma.with(n.var, n.type), n.body);
          },
          [&](const SAssignVar& n) {
            const BaseType* b = gamma.base_of(n.var);
            if (!b) throw WcTypeError("t-assv", "unbound variable " + n.var);
            expect_type(gamma, n.value, *b, "t-assv");
          },
          [&](const SAssignField& n) {
            BaseType field = typecheck_expr(gamma, e_field(e_this(), n.field));
            expect_type(gamma, n.value, field, "t-assf");
          },
          [&](const SSeq& n) {
            check_stm(gamma, n.first);
            check_stm(gamma, n.second);
          },
          [&](const SIf& n) {
            expect_type(gamma, n.cond, BaseType::boolean(), "t-if");
            check_stm(gamma, n.then_branch);
            check_stm(gamma, n.else_branch);
          },
          [&](const SWhile& n) {
            expect_type(gamma, n.cond, BaseType::boolean(), "t-while");
            check_stm(gamma, n.body);
          },
          [&](const SCall& n) {
            BaseType target = typecheck_expr(gamma, n.target);
            if (target.kind != BaseType::Kind::TypeName)
              throw WcTypeError("t-call", "call target has type " + target.str());
            const IfaceType* iface = gamma.iface_of(target.name);
            if (!iface) throw WcTypeError("t-call", "no interface named " + target.name);
            auto it = iface->methods.find(n.method);
            if (it == iface->methods.end())
              throw WcTypeError("t-call",
                                "interface " + target.name + " has no method " + n.method);
            const ProcType& sig = it->second;
            if (sig.params.size() != n.args.size())
              throw WcTypeError("t-call", "method " + n.method + " expects " +
                                              std::to_string(sig.params.size()) +
                                              " arguments, got " +
                                              std::to_string(n.args.size()));
            for (size_t i = 0; i < n.args.size(); ++i)
              expect_type(gamma, n.args[i], sig.params[i], "t-call");
          },
      },
      s->node);
}

void check_value(const WcTypeEnv& gamma, const Value& v, const BaseType& want,
                 const std::string& rule, const std::string& what) {
  BaseType got = typecheck_value(gamma, v);
  if (!(got == want))
    throw WcTypeError(rule, what + " holds " + print_value(v) + " of type " + got.str() +
                                ", declared " + want.str());
}

} // namespace

void typecheck_stm_or_throw(const WcTypeEnv& gamma, const StmPtr& s) { check_stm(gamma, s); }

std::optional<WcTypeError> typecheck_stm(const WcTypeEnv& gamma, const StmPtr& s) {
  try {
    check_stm(gamma, s);
    return std::nullopt;
  } catch (const WcTypeError& e) {
    return e;
  }
}

void typecheck_envs_or_throw(const WcTypeEnv& gamma, const EnvT& envt, const EnvS& envs,
                             const EnvV& envv) {
  for (const auto& [cls, envm] : envt.entries) {
    const BaseType* anno = gamma.base_of(cls);
    if (!anno || anno->kind != BaseType::Kind::TypeName)
      throw WcTypeError("t-env_T", "class " + cls + " has no interface annotation");
    const IfaceType* iface = gamma.iface_of(anno->name);
    if (!iface) throw WcTypeError("t-env_T", "no interface named " + anno->name);
    for (const auto& [name, method] : envm.entries) {
      auto sig = iface->methods.find(name);
      if (sig == iface->methods.end())
        throw WcTypeError("t-env_M",
                          "interface " + anno->name + " does not declare method " + name);
      if (sig->second.params.size() != method.params.size())
        throw WcTypeError("t-env_M", "method " + name + " declares " +
                                         std::to_string(method.params.size()) +
                                         " parameters, interface says " +
                                         std::to_string(sig->second.params.size()));
      // the method body is checked under Gamma, this : I, params : B~
      WcTypeEnv inner = gamma.with("this", *anno);
      for (size_t i = 0; i < method.params.size(); ++i)
        inner.entries[method.params[i]] = sig->second.params[i];
      check_stm(inner, method.body);
    }
  }
  for (const auto& [cls, envf] : envs.entries) {
    const BaseType* anno = gamma.base_of(cls);
    if (!anno || anno->kind != BaseType::Kind::TypeName)
      throw WcTypeError("t-env_S", "class " + cls + " has no interface annotation");
    const IfaceType* iface = gamma.iface_of(anno->name);
    if (!iface) throw WcTypeError("t-env_S", "no interface named " + anno->name);
    for (const auto& [field, value] : envf.entries) {
      auto ft = iface->fields.find(field);
      if (ft == iface->fields.end())
        throw WcTypeError("t-env_F",
                          "interface " + anno->name + " does not declare field " + field);
      check_value(gamma, value, ft->second, "t-env_F", "field " + cls + "." + field);
    }
  }
  for (const auto& [var, value] : envv.entries) {
    const BaseType* b = gamma.base_of(var);
    if (!b) throw WcTypeError("t-env_V", "no type assumption for " + var);
    check_value(gamma, value, *b, "t-env_V", "variable " + var);
  }
}

std::optional<WcTypeError> typecheck_envs(const WcTypeEnv& gamma, const EnvT& envt,
                                          const EnvS& envs, const EnvV& envv) {
  try {
    typecheck_envs_or_throw(gamma, envt, envs, envv);
    return std::nullopt;
  } catch (const WcTypeError& e) {
    return e;
  }
}

std::optional<WcTypeError> typecheck_program(const Program& program) {
  try {
    WcTypeEnv gamma = build_gamma(program);
    Environments env = build_environments(program.classes);
    typecheck_envs_or_throw(gamma, env.envt, env.envs, EnvV{});
    check_stm(gamma, program.main);
    return std::nullopt;
  } catch (const WcTypeError& e) {
    return e;
  } catch (const DuplicateName& e) {
    return WcTypeError("gamma", e.what());
  }
}

} // namespace wc
