#include "wc_sem.hpp"

#include <algorithm>
#include <map>

#include "common.hpp"
#include "epi_ops.hpp"

using epic::overloaded;

namespace wc {

Environments build_environments(const std::vector<ClassDecl>& classes) {
  Environments env;
  for (const ClassDecl& c : classes) {
    if (env.envs.contains(c.name)) throw DuplicateName("duplicate class " + c.name);
    EnvF envf;
    for (const auto& [p, v] : c.fields) {
      if (envf.contains(p)) throw DuplicateName("duplicate field " + p + " in class " + c.name);
      envf.entries.emplace_back(p, v);
    }
    EnvM envm;
    for (const Method& m : c.methods) {
      if (envm.contains(m.name))
        throw DuplicateName("duplicate method " + m.name + " in class " + c.name);
      envm.entries.emplace_back(m.name, m);
    }
    env.envs.entries.emplace_back(c.name, std::move(envf));
    env.envt.entries.emplace_back(c.name, std::move(envm));
  }
  return env;
}

epi::Value to_epi(const Value& v) {
  return std::visit(overloaded{
                        [](long long n) { return epi::Value{n}; },
                        [](bool b) { return epi::Value{b}; },
                        [](const ClassName& c) { return epi::val_name(c.id); },
                    },
                    v);
}

Value from_epi(const epi::Value& v) {
  return std::visit(overloaded{
                        [](const epi::Name& n) { return Value{ClassName{n.id}}; },
                        [](long long n) { return Value{n}; },
                        [](bool b) { return Value{b}; },
                    },
                    v);
}

Value eval_expr(const EnvS& envs, const EnvV& envv, const Expr& e) {
  return std::visit(
      overloaded{
          [&](const EVal& n) { return n.value; },
          [&](const EVar& n) {
            const Value* v = envv.lookup(n.name);
            if (!v) throw epi::EvalError("unbound variable " + n.name);
            return *v;
          },
          [&](const EThis&) {
            const Value* v = envv.lookup("this");
            if (!v) throw epi::EvalError("'this' is not bound here");
            return *v;
          },
          [&](const EField& n) {
            Value base = eval_expr(envs, envv, *n.base);
            const ClassName* cls = std::get_if<ClassName>(&base);
            if (!cls)
              throw epi::EvalError("field access on non-class value " + print_value(base));
            const EnvF* envf = envs.lookup(cls->id);
            if (!envf) throw epi::EvalError("unknown class " + cls->id);
            const Value* v = envf->lookup(n.field);
            if (!v) throw epi::EvalError("class " + cls->id + " has no field " + n.field);
            return *v;
          },
          [&](const EOp& n) {
            std::vector<epi::Value> args;
            args.reserve(n.args.size());
            for (const Expr& a : n.args) args.push_back(to_epi(eval_expr(envs, envv, a)));
            return from_epi(epi::apply_op(n.op, args));
          },
      },
      e.node);
}

namespace {

struct Machine {
  const EnvT& envt;
  std::uint64_t fuel;

  void tick() {
    if (fuel == 0) throw FuelExhausted("statement execution fuel exhausted");
    --fuel;
  }

  bool eval_bool(const EnvS& envs, const EnvV& envv, const Expr& e, const char* rule) {
    Value v = eval_expr(envs, envv, e);
    if (const bool* b = std::get_if<bool>(&v)) return *b;
    throw StuckError(rule, "guard evaluated to non-boolean " + print_value(v));
  }

  ExecResult run(EnvS envs, EnvV envv, StmPtr s) {
    // sequencing tails and loop re-entries are iterated, not recursed, so a
    // diverging while runs out of fuel instead of stack
    while (true) {
      tick();
      if (const SSeq* seq = std::get_if<SSeq>(&s->node)) {
        ExecResult mid = run(std::move(envs), std::move(envv), seq->first);
        envs = std::move(mid.envs);
        envv = std::move(mid.envv);
        s = seq->second;
        continue;
      }
      if (const SWhile* wh = std::get_if<SWhile>(&s->node)) {
        if (!eval_bool(envs, envv, wh->cond, "wc-while")) // wc-while_F
          return ExecResult{std::move(envs), std::move(envv)};
        ExecResult mid = run(std::move(envs), std::move(envv), wh->body);
        envs = std::move(mid.envs);
        envv = std::move(mid.envv);
        continue; // wc-while_T re-derives the loop
      }
      return dispatch(std::move(envs), std::move(envv), s);
    }
  }

  ExecResult dispatch(EnvS envs, EnvV envv, const StmPtr& s) {
    return std::visit(
        overloaded{
            [&](const SSkip&) { return ExecResult{std::move(envs), std::move(envv)}; },
            [&](const SVarDecl& n) {
              Value v = eval_expr(envs, envv, n.init);
              if (envv.contains(n.var))
                throw StuckError("wc-decv", "variable " + n.var + " already bound");
              envv.push_front(n.var, std::move(v));
              ExecResult r = run(std::move(envs), std::move(envv), n.body);
              // the declaration's binding is the leftmost entry; it is
              // discarded when the scope ends
              r.envv.entries.erase(r.envv.entries.begin());
              return r;
            },
            [&](const SAssignVar& n) {
              if (!envv.contains(n.var))
                throw StuckError("wc-assv", "variable " + n.var + " is not bound");
              Value v = eval_expr(envs, envv, n.value);
              envv.update(n.var, std::move(v));
              return ExecResult{std::move(envs), std::move(envv)};
            },
            [&](const SAssignField& n) {
              Value v = eval_expr(envs, envv, n.value);
              const Value* self = envv.lookup("this");
              if (!self) throw StuckError("wc-assf", "'this' is not bound");
              const ClassName* cls = std::get_if<ClassName>(self);
              if (!cls)
                throw StuckError("wc-assf", "'this' holds non-class value " + print_value(*self));
              const EnvF* envf = envs.lookup(cls->id);
              if (!envf) throw StuckError("wc-assf", "unknown class " + cls->id);
              if (!envf->contains(n.field))
                throw StuckError("wc-assf",
                                 "class " + cls->id + " has no field " + n.field);
              EnvF updated = *envf;
              updated.update(n.field, std::move(v));
              envs.update(cls->id, std::move(updated));
              return ExecResult{std::move(envs), std::move(envv)};
            },
            [&](const SSeq&) -> ExecResult {
              throw StuckError("wc-seq", "unreachable: handled iteratively");
            },
            [&](const SIf& n) {
              bool b = eval_bool(envs, envv, n.cond, "wc-if");
              return run(std::move(envs), std::move(envv), b ? n.then_branch : n.else_branch);
            },
            [&](const SWhile&) -> ExecResult {
              throw StuckError("wc-while", "unreachable: handled iteratively");
            },
            [&](const SCall& n) {
              Value target = eval_expr(envs, envv, n.target);
              const ClassName* cls = std::get_if<ClassName>(&target);
              if (!cls)
                throw StuckError("wc-call",
                                 "call target evaluated to non-class value " +
                                     print_value(target));
              const EnvM* envm = envt.lookup(cls->id);
              if (!envm) throw StuckError("wc-call", "unknown class " + cls->id);
              const Method* m = envm->lookup(n.method);
              if (!m)
                throw StuckError("wc-call",
                                 "class " + cls->id + " has no method " + n.method);
              if (m->params.size() != n.args.size())
                throw StuckError("wc-call", "method " + n.method + " expects " +
                                                std::to_string(m->params.size()) +
                                                " arguments, got " +
                                                std::to_string(n.args.size()));
              EnvV callee;
              callee.entries.emplace_back("this", Value{*cls});
              for (size_t i = 0; i < n.args.size(); ++i)
                callee.entries.emplace_back(m->params[i], eval_expr(envs, envv, n.args[i]));
              ExecResult r = run(std::move(envs), std::move(callee), m->body);
              // the callee's variable environment is discarded, the caller's
              // is restored untouched
              return ExecResult{std::move(r.envs), std::move(envv)};
            },
        },
        s->node);
  }
};

} // namespace

ExecResult exec(const EnvT& envt, EnvS envs, EnvV envv, const StmPtr& s, std::uint64_t fuel) {
  Machine m{envt, fuel};
  return m.run(std::move(envs), std::move(envv), s);
}

std::string format_store(const EnvS& envs) {
  std::map<std::string, std::map<std::string, std::string>> sorted;
  for (const auto& [cls, envf] : envs.entries)
    for (const auto& [p, v] : envf.entries) sorted[cls][p] = print_value(v);
  std::string out;
  for (const auto& [cls, fields] : sorted)
    for (const auto& [p, v] : fields) out += cls + "." + p + " = " + v + "\n";
  return out;
}

} // namespace wc
