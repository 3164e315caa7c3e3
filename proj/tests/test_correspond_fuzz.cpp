// Generative check of the type correspondence: random WC programs, half of
// them sabotaged with an injected type error, must never make the WC and epi
// checkers disagree about the translation.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <optional>
#include <random>
#include <vector>

#include "harness.hpp"
#include "wc_sem.hpp"
#include "wc_text.hpp"
#include "wc_types.hpp"

using namespace wc;

namespace {

struct Ctx {
  WcTypeEnv gamma; // class/interface entries plus locals in scope
  std::optional<std::string> self_iface;
  std::vector<std::string> classes;
  size_t var_counter = 0;
};

struct ProgramGen {
  std::mt19937_64& rng;
  bool sabotage = false;      // inject exactly one type error when set
  bool sabotaged = false;

  size_t below(size_t n) { return std::uniform_int_distribution<size_t>(0, n - 1)(rng); }
  bool chance(double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; }

  bool fire_sabotage() {
    if (!sabotage || sabotaged || !chance(0.25)) return false;
    sabotaged = true;
    return true;
  }

  BaseType wrong_type(const BaseType& right) {
    if (right == BaseType::integer()) return BaseType::boolean();
    return BaseType::integer();
  }

  // expression of the wanted base type under ctx; falls back to literals
  Expr expr(const Ctx& ctx, const BaseType& want, int depth) {
    if (want.kind == BaseType::Kind::TypeName) {
      std::vector<Expr> options;
      for (const std::string& cls : ctx.classes)
        if (*ctx.gamma.base_of(cls) == want) options.push_back(e_val(Value{ClassName{cls}}));
      for (const auto& [id, t] : ctx.gamma.entries)
        if (const BaseType* b = std::get_if<BaseType>(&t))
          if (*b == want && !std::count(ctx.classes.begin(), ctx.classes.end(), id) &&
              id != "this")
            options.push_back(e_var(id));
      if (options.empty()) return e_val(Value{ClassName{ctx.classes.front()}});
      return options[below(options.size())];
    }
    bool is_int = want == BaseType::integer();
    if (depth > 0 && chance(0.5)) {
      if (is_int && chance(0.4))
        return e_op(chance(0.5) ? "+" : "*",
                    {expr(ctx, BaseType::integer(), depth - 1),
                     expr(ctx, BaseType::integer(), depth - 1)});
      if (!is_int && chance(0.4))
        return e_op("<", {expr(ctx, BaseType::integer(), depth - 1),
                          expr(ctx, BaseType::integer(), depth - 1)});
      // a field of some class with the wanted type
      std::vector<Expr> fields;
      for (const std::string& cls : ctx.classes) {
        const IfaceType* iface = ctx.gamma.iface_of(ctx.gamma.base_of(cls)->name);
        for (const auto& [p, b] : iface->fields)
          if (b == want) fields.push_back(e_field(e_val(Value{ClassName{cls}}), p));
      }
      if (!fields.empty() && chance(0.6)) return fields[below(fields.size())];
    }
    // a variable of the wanted type, sometimes
    if (chance(0.4)) {
      std::vector<Expr> vars;
      for (const auto& [id, t] : ctx.gamma.entries)
        if (const BaseType* b = std::get_if<BaseType>(&t))
          if (*b == want && id != "this" &&
              !std::count(ctx.classes.begin(), ctx.classes.end(), id))
            vars.push_back(e_var(id));
      if (!vars.empty()) return vars[below(vars.size())];
    }
    if (is_int) return e_val(Value{(long long)below(10)});
    return e_val(Value{below(2) == 0});
  }

  // an expression deliberately of the WRONG type
  Expr bad_expr(const Ctx& ctx, const BaseType& want) {
    if (want.kind == BaseType::Kind::TypeName) return e_val(Value{1LL});
    return expr(ctx, wrong_type(want), 0);
  }

  StmPtr assign_field(Ctx& ctx) {
    const IfaceType* iface = ctx.gamma.iface_of(*ctx.self_iface);
    if (iface->fields.empty()) return s_skip();
    auto it = iface->fields.begin();
    std::advance(it, below(iface->fields.size()));
    Expr rhs = fire_sabotage() ? bad_expr(ctx, it->second) : expr(ctx, it->second, 2);
    return s_assign_field(it->first, std::move(rhs));
  }

  StmPtr call(Ctx& ctx) {
    const std::string& cls = ctx.classes[below(ctx.classes.size())];
    const IfaceType* iface = ctx.gamma.iface_of(ctx.gamma.base_of(cls)->name);
    if (iface->methods.empty()) return s_skip();
    auto it = iface->methods.begin();
    std::advance(it, below(iface->methods.size()));
    std::string method = it->first;
    std::vector<Expr> args;
    for (const BaseType& b : it->second.params) args.push_back(expr(ctx, b, 1));
    if (fire_sabotage()) {
      switch (below(3)) {
        case 0: method = "nosuch"; break;
        case 1: args.push_back(e_val(Value{1LL})); break; // arity
        default:
          if (!args.empty())
            args[0] = bad_expr(ctx, it->second.params[0]);
          else
            args.push_back(e_val(Value{true}));
      }
    }
    return s_call(e_val(Value{ClassName{cls}}), method, std::move(args));
  }

  StmPtr stm(Ctx& ctx, int depth) {
    switch (below(depth > 0 ? 8 : 3)) {
      case 0: return s_skip();
      case 1: { // assignment to a local, when one exists
        std::vector<std::pair<std::string, BaseType>> vars;
        for (const auto& [id, t] : ctx.gamma.entries)
          if (const BaseType* b = std::get_if<BaseType>(&t))
            if (id.rfind("v", 0) == 0) vars.emplace_back(id, *b);
        if (vars.empty()) return s_skip();
        auto& [id, b] = vars[below(vars.size())];
        Expr rhs = fire_sabotage() ? bad_expr(ctx, b) : expr(ctx, b, 2);
        return s_assign(id, std::move(rhs));
      }
      case 2: return ctx.self_iface ? assign_field(ctx) : call(ctx);
      case 3: { // var declaration scoping over a sub-statement
        BaseType b = below(2) ? BaseType::integer() : BaseType::boolean();
        std::string id = "v" + std::to_string(ctx.var_counter++);
        Expr init = fire_sabotage() ? bad_expr(ctx, b) : expr(ctx, b, 1);
        Ctx inner = ctx;
        inner.gamma.entries[id] = b;
        inner.var_counter = ctx.var_counter;
        StmPtr body = stm(inner, depth - 1);
        ctx.var_counter = inner.var_counter;
        return s_vardecl(b, id, std::move(init), std::move(body));
      }
      case 4: return s_seq(stm(ctx, depth - 1), stm(ctx, depth - 1));
      case 5: {
        Expr guard = fire_sabotage() ? expr(ctx, BaseType::integer(), 0)
                                     : expr(ctx, BaseType::boolean(), 1);
        return s_if(std::move(guard), stm(ctx, depth - 1), stm(ctx, depth - 1));
      }
      case 6: {
        Expr guard = fire_sabotage() ? expr(ctx, BaseType::integer(), 0)
                                     : expr(ctx, BaseType::boolean(), 1);
        return s_while(std::move(guard), stm(ctx, depth - 1));
      }
      default: return call(ctx);
    }
  }

  Program generate() {
    Program prog;
    size_t n_ifaces = 1 + below(2);
    size_t field_counter = 0, method_counter = 0;
    for (size_t i = 0; i < n_ifaces; ++i) {
      InterfaceDecl iface;
      iface.name = "J" + std::to_string(i);
      size_t nf = 1 + below(2);
      for (size_t k = 0; k < nf; ++k) {
        BaseType b = below(3) == 0 ? BaseType::boolean() : BaseType::integer();
        if (i > 0 && below(4) == 0) b = BaseType::type_name("J0");
        iface.fields.push_back({"p" + std::to_string(field_counter++), b});
      }
      size_t nm = 1 + below(2);
      for (size_t k = 0; k < nm; ++k) {
        InterfaceMethod m;
        m.name = "m" + std::to_string(method_counter++);
        size_t np = below(3);
        for (size_t q = 0; q < np; ++q)
          m.params.push_back(below(2) ? BaseType::integer() : BaseType::boolean());
        iface.methods.push_back(std::move(m));
      }
      prog.interfaces.push_back(std::move(iface));
    }
    // one class per interface; class K_i implements J_i
    for (size_t i = 0; i < n_ifaces; ++i) prog.classes.push_back(ClassDecl{
        "K" + std::to_string(i), "J" + std::to_string(i), {}, {}});

    // a gamma for generation (bodies are filled in below)
    Ctx base;
    for (const InterfaceDecl& i : prog.interfaces) {
      IfaceType t;
      for (const InterfaceField& f : i.fields) t.fields.emplace(f.name, f.type);
      for (const InterfaceMethod& m : i.methods) t.methods.emplace(m.name, ProcType{m.params});
      base.gamma.entries.emplace(i.name, std::move(t));
    }
    for (const ClassDecl& c : prog.classes) {
      base.gamma.entries.emplace(c.name, BaseType::type_name(c.interface));
      base.classes.push_back(c.name);
    }

    size_t param_counter = 0;
    for (size_t i = 0; i < prog.classes.size(); ++i) {
      ClassDecl& cls = prog.classes[i];
      const InterfaceDecl& iface = prog.interfaces[i];
      for (const InterfaceField& f : iface.fields) {
        Value init = f.type == BaseType::integer()  ? Value{(long long)below(5)}
                     : f.type == BaseType::boolean() ? Value{below(2) == 0}
                                                     : Value{ClassName{"K0"}};
        if (fire_sabotage()) init = f.type == BaseType::integer() ? Value{true} : Value{1LL};
        cls.fields.emplace_back(f.name, init);
      }
      for (const InterfaceMethod& m : iface.methods) {
        Method impl;
        impl.name = m.name;
        Ctx ctx = base;
        ctx.self_iface = iface.name;
        ctx.gamma.entries["this"] = BaseType::type_name(iface.name);
        for (const BaseType& b : m.params) {
          std::string x = "a" + std::to_string(param_counter++);
          impl.params.push_back(x);
          ctx.gamma.entries[x] = b;
        }
        impl.body = stm(ctx, 2);
        cls.methods.push_back(std::move(impl));
      }
    }
    Ctx main_ctx = base;
    prog.main = stm(main_ctx, 3);
    return prog;
  }
};

} // namespace

TEST_CASE("agreement fuzz on terminating random programs") {
  std::mt19937_64 rng(777);
  size_t agreed = 0, skipped = 0;
  for (int i = 0; i < 150; ++i) {
    ProgramGen gen{rng, /*sabotage=*/false};
    Program prog = parse_program(print_program(gen.generate()));
    REQUIRE_FALSE(typecheck_program(prog).has_value());
    Environments env = build_environments(prog.classes);
    try {
      wc::exec(env.envt, env.envs, EnvV{}, prog.main, 500);
    } catch (const std::exception&) {
      ++skipped; // diverges or needs more fuel; agreement is checked on
                 // terminating programs only
      continue;
    }
    epic::AgreeReport r = epic::agree(prog, 100000, 0);
    CAPTURE(print_program(prog));
    CHECK(r.verdict == epic::AgreeVerdict::Match);
    if (r.verdict == epic::AgreeVerdict::Match) ++agreed;
  }
  CHECK(agreed >= 50);
  MESSAGE("agreed: " << agreed << ", skipped: " << skipped);
}

TEST_CASE("random programs never make the checkers disagree") {
  std::mt19937_64 rng(2024);
  size_t positive = 0, negative = 0, untranslatable = 0;
  for (int i = 0; i < 300; ++i) {
    ProgramGen gen{rng, i % 2 == 1};
    Program prog = gen.generate();
    // the printed program must survive its own parser (fresh names obey the
    // surface grammar by construction)
    Program reparsed = parse_program(print_program(prog));
    epic::CorrespondReport r = epic::correspond(reparsed);
    CAPTURE(print_program(prog));
    CHECK(r.verdict != epic::CorrespondVerdict::Disagree);
    switch (r.verdict) {
      case epic::CorrespondVerdict::AgreePositive: ++positive; break;
      case epic::CorrespondVerdict::AgreeNegative: ++negative; break;
      case epic::CorrespondVerdict::Untranslatable: ++untranslatable; break;
      default: break;
    }
    // unsabotaged programs are well-typed by construction
    if (!gen.sabotage) CHECK(r.verdict == epic::CorrespondVerdict::AgreePositive);
  }
  // the mutation machinery must actually produce both verdicts
  CHECK(positive >= 100);
  CHECK(negative >= 30);
  MESSAGE("positive: " << positive << ", negative: " << negative
                       << ", untranslatable: " << untranslatable);
}
