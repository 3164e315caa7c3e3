#include "fuzz.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "common.hpp"
#include "epi_lts.hpp"
#include "epi_text.hpp"

namespace epic {

namespace {

using epi::BaseType;
using epi::Capability;
using epi::Proc;
using epi::TreeType;
using epi::TypeEnv;

struct Rng {
  std::mt19937_64& gen;
  size_t below(size_t n) { return std::uniform_int_distribution<size_t>(0, n - 1)(gen); }
  bool chance(double p) { return std::uniform_real_distribution<double>(0, 1)(gen) < p; }
  long long small_int() { return static_cast<long long>(below(21)) - 10; }
  template <class T>
  const T& pick(const std::vector<T>& xs) {
    return xs[below(xs.size())];
  }
};

struct Generator {
  Rng rng;
  const FuzzConfig& config;
  TypeEnv gamma;
  size_t next_binder = 0;

  std::vector<BaseType> pool_types; // generated type names
  std::vector<BaseType> data_pool;  // int, bool, type names

  std::string fresh_binder() { return "b" + std::to_string(next_binder++); }

  BaseType random_base() { return rng.pick(data_pool); }

  Capability random_capability() {
    if (rng.chance(0.25)) return Capability::none();
    std::vector<BaseType> carries;
    size_t n = rng.below(3); // 0..2 carried values
    for (size_t i = 0; i < n; ++i) carries.push_back(random_base());
    return Capability::chan(std::move(carries));
  }

  TreeType random_tree(size_t depth) {
    TreeType t;
    t.cap = random_capability();
    if (depth > 0) {
      for (const BaseType& tn : pool_types)
        if (rng.chance(0.4)) t.local.emplace(tn.name, random_tree(depth - 1));
    }
    return t;
  }

  void build_gamma() {
    for (size_t i = 0; i < config.pool; ++i)
      pool_types.push_back(BaseType::type_name("I" + std::to_string(i)));
    data_pool = pool_types;
    data_pool.push_back(BaseType::integer());
    data_pool.push_back(BaseType::boolean());
    for (const BaseType& tn : pool_types) gamma.typenames[tn.name] = random_tree(2);
    // keep at least one data channel and one synchronisation channel around
    gamma.typenames[pool_types[0].name].cap = Capability::chan({BaseType::integer()});
    if (config.pool > 1) gamma.typenames[pool_types[1].name].cap = Capability::chan({});
    size_t names = config.pool + 3 + rng.below(3);
    for (size_t i = 0; i < names; ++i) {
      BaseType b = rng.chance(0.7) ? rng.pick(pool_types) : (rng.chance(0.5)
                                                                  ? BaseType::integer()
                                                                  : BaseType::boolean());
      gamma.names["x" + std::to_string(i)] = b;
    }
  }

  // Enumerates subject vectors with a channel capability under `env`.
  struct SubjectChoice {
    std::vector<epi::Value> subject;
    Capability cap;
  };

  std::vector<SubjectChoice> channel_subjects(const TypeEnv& env) {
    std::vector<SubjectChoice> out;
    struct Item {
      std::vector<epi::Value> vec;
      const std::map<std::string, TreeType>* cursor;
    };
    std::deque<Item> queue;
    queue.push_back({{}, &env.typenames});
    while (!queue.empty()) {
      Item item = queue.front();
      queue.pop_front();
      if (item.vec.size() >= config.max_vec) continue;
      for (const auto& [name, base] : env.names) {
        if (base.kind != BaseType::Kind::TypeName) continue;
        auto it = item.cursor->find(base.name);
        if (it == item.cursor->end()) continue;
        Item next{item.vec, &it->second.local};
        next.vec.push_back(epi::val_name(name));
        if (it->second.cap.is_chan) out.push_back({next.vec, it->second.cap});
        if (!it->second.local.empty()) queue.push_back(std::move(next));
      }
      if (out.size() > 64) break; // plenty to choose from
    }
    return out;
  }

  std::vector<std::string> names_of_type(const TypeEnv& env, const BaseType& b) {
    std::vector<std::string> out;
    for (const auto& [name, base] : env.names)
      if (base == b) out.push_back(name);
    return out;
  }

  // Expression of the given type; nullopt when no term inhabits it here.
  std::optional<epi::Expr> gen_expr(const TypeEnv& env, const BaseType& want, size_t depth) {
    if (want.kind == BaseType::Kind::TypeName) {
      std::vector<std::string> candidates = names_of_type(env, want);
      if (candidates.empty()) return std::nullopt;
      return epi::ex_name(rng.pick(candidates));
    }
    bool is_int = want.kind == BaseType::Kind::Int;
    if (depth > 0 && rng.chance(0.4)) {
      if (is_int) {
        static const char* ops[] = {"+", "-", "*"};
        auto a = gen_expr(env, BaseType::integer(), depth - 1);
        auto b = gen_expr(env, BaseType::integer(), depth - 1);
        if (a && b) return epi::ex_op(ops[rng.below(3)], {*a, *b});
      } else {
        switch (rng.below(4)) {
          case 0: {
            auto a = gen_expr(env, BaseType::integer(), depth - 1);
            auto b = gen_expr(env, BaseType::integer(), depth - 1);
            if (a && b) return epi::ex_op("<", {*a, *b});
            break;
          }
          case 1: {
            BaseType at = random_base();
            auto a = gen_expr(env, at, depth - 1);
            auto b = gen_expr(env, at, depth - 1);
            if (a && b) return epi::ex_op("=", {*a, *b});
            break;
          }
          case 2: {
            auto a = gen_expr(env, BaseType::boolean(), depth - 1);
            if (a) return epi::ex_op("not", {*a});
            break;
          }
          default: {
            auto a = gen_expr(env, BaseType::boolean(), depth - 1);
            auto b = gen_expr(env, BaseType::boolean(), depth - 1);
            if (a && b) return epi::ex_op(rng.chance(0.5) ? "and" : "or", {*a, *b});
            break;
          }
        }
      }
    }
    if (rng.chance(0.35)) { // a name of the wanted data type, when one exists
      std::vector<std::string> candidates = names_of_type(env, want);
      if (!candidates.empty()) return epi::ex_name(rng.pick(candidates));
    }
    if (is_int) return epi::ex_val(epi::val_int(rng.small_int()));
    return epi::ex_val(epi::val_bool(rng.chance(0.5)));
  }

  // The mutation hook drops the object-type premise of the output rule; the
  // generator then emits objects at arbitrary types, exactly the terms the
  // weakened checker still accepts.
  std::vector<epi::Expr> gen_objects(const TypeEnv& env, const std::vector<BaseType>& carries) {
    std::vector<epi::Expr> objects;
    for (const BaseType& b : carries) {
      BaseType want = b;
      if (config.check_options.skip_out_object_check && rng.chance(0.5)) want = random_base();
      auto e = gen_expr(env, want, 1);
      if (!e) return {}; // caller falls back
      objects.push_back(*e);
    }
    return objects;
  }

  std::optional<Proc> gen_output(const TypeEnv& env, size_t depth) {
    std::vector<SubjectChoice> subjects = channel_subjects(env);
    // some subjects carry uninhabited type names; retry a few picks
    for (int attempt = 0; attempt < 4 && !subjects.empty(); ++attempt) {
      const SubjectChoice& s = rng.pick(subjects);
      std::vector<epi::Expr> objects = gen_objects(env, s.cap.carries);
      if (objects.size() != s.cap.carries.size()) continue;
      return epi::p_out(s.subject, std::move(objects), gen_proc(env, depth - 1));
    }
    return std::nullopt;
  }

  Proc gen_input(const TypeEnv& env, size_t depth) {
    std::vector<SubjectChoice> subjects = channel_subjects(env);
    if (subjects.empty()) return epi::p_nil();
    const SubjectChoice& s = rng.pick(subjects);
    std::vector<epi::Name> binders;
    TypeEnv inner = env;
    for (const BaseType& b : s.cap.carries) {
      std::string id = fresh_binder();
      binders.push_back(epi::Name{id});
      inner.names[id] = b;
    }
    return epi::p_in(s.subject, std::move(binders), gen_proc(inner, depth - 1));
  }

  Proc gen_proc(const TypeEnv& env, size_t depth) {
    if (depth == 0) return epi::p_nil();
    switch (rng.below(20)) {
      case 0: return epi::p_nil();
      case 1:
      case 2:
      case 3:
      case 4:
      case 5:
      case 6: { // output
        std::optional<Proc> out = gen_output(env, depth);
        return out ? *out : gen_input(env, depth);
      }
      case 7:
      case 8:
      case 9:
      case 10:
      case 11: // input
        return gen_input(env, depth);
      case 12:
      case 13:
      case 14:
        return epi::p_par(gen_proc(env, depth - 1), gen_proc(env, depth - 1));
      case 15:
      case 16: { // restriction
        size_t n = 1 + rng.below(2);
        std::vector<epi::Binding> bindings;
        TypeEnv inner = env;
        for (size_t i = 0; i < n; ++i) {
          std::string id = fresh_binder();
          BaseType b = random_base();
          bindings.push_back(epi::Binding{epi::Name{id}, b});
          inner.names[id] = b;
        }
        return epi::p_new(std::move(bindings), gen_proc(inner, depth - 1));
      }
      case 17:
      case 18: { // guarded sum
        size_t n = 1 + rng.below(2);
        std::vector<epi::Branch> branches;
        for (size_t i = 0; i < n; ++i) {
          auto guard = gen_expr(env, BaseType::boolean(), 1);
          branches.push_back(
              epi::Branch{guard ? *guard : epi::ex_val(epi::val_bool(true)),
                          gen_proc(env, depth - 1)});
        }
        return epi::p_sum(std::move(branches));
      }
      default: return epi::p_repl(gen_proc(env, depth > 2 ? 2 : depth - 1));
    }
  }

  // A parallel composition of a few components, so synchronisation and
  // scope extrusion actually occur.
  Proc gen_top() {
    size_t parts = 2 + rng.below(2);
    Proc out = gen_proc(gamma, config.max_depth);
    for (size_t i = 1; i < parts; ++i)
      out = epi::p_par(std::move(out), gen_proc(gamma, config.max_depth));
    return out;
  }
};

} // namespace

FuzzCase generate_case(std::mt19937_64& rng, const FuzzConfig& config) {
  Generator gen{Rng{rng}, config, {}, 0, {}, {}};
  gen.build_gamma();
  Proc p = gen.gen_top();
  return FuzzCase{std::move(gen.gamma), std::move(p)};
}

std::string FuzzSummary::describe() const {
  std::string out = "cases: " + std::to_string(cases) +
                    ", states checked: " + std::to_string(states_checked) +
                    ", labels checked: " + std::to_string(labels_checked) +
                    ", failures: " + std::to_string(failures.size());
  for (const FuzzFailure& f : failures)
    out += "\n  case " + std::to_string(f.index) + " " + f.what + ": " + f.detail;
  return out;
}

FuzzSummary run_fuzz(const FuzzConfig& config, size_t explore_depth,
                     size_t max_states_per_case) {
  std::mt19937_64 rng(config.seed);
  FuzzSummary summary;
  for (size_t i = 0; i < config.count; ++i) {
    FuzzCase c = generate_case(rng, config);
    summary.cases++;
    auto fail = [&](const std::string& what, const std::string& detail) {
      summary.failures.push_back(
          FuzzFailure{i, what, detail + "\n    P = " + epi::print_process(c.process)});
    };

    if (!check_wellformed(c.gamma).empty()) {
      fail("generator", "generated Gamma is not well-formed");
      continue;
    }
    if (auto err = epi::typecheck_process(c.gamma, c.process, config.check_options)) {
      fail("generator", std::string("generated term does not typecheck: ") + err->what());
      continue;
    }

    // Theorem 1: well-typed implies not wrong.
    if (epi::wrong(c.gamma, c.process)) {
      fail("safety", "typechecked term satisfies the error predicate");
      continue;
    }

    // Theorem 2 + well-typed labels, over tau and output transitions.
    struct State {
      epi::TypeEnv gamma;
      Proc proc;
      size_t depth;
    };
    std::deque<State> frontier;
    std::set<std::string> seen;
    frontier.push_back({c.gamma, c.process, 0});
    seen.insert(epi::alpha_key(c.process));
    bool case_ok = true;
    while (!frontier.empty() && case_ok && seen.size() < max_states_per_case) {
      State st = frontier.front();
      frontier.pop_front();
      if (st.depth >= explore_depth) continue;
      for (const epi::Transition& t : epi::transitions(st.proc, {})) {
        const bool is_tau = std::holds_alternative<epi::LabelTau>(t.label);
        const epi::LabelSend* send = std::get_if<epi::LabelSend>(&t.label);
        if (!is_tau && !send) continue;
        summary.labels_checked++;
        if (auto err = epi::typecheck_label(st.gamma, t.label)) {
          fail("well-typed-labels", "label " + epi::print_label(t.label) +
                                        " from a well-typed state is ill-typed: " + err->what());
          case_ok = false;
          break;
        }
        epi::TypeEnv next = send ? st.gamma.with_bindings(send->extruded) : st.gamma;
        if (auto err = epi::typecheck_process(next, t.target, config.check_options)) {
          fail("subject-reduction",
               "successor along " + epi::print_label(t.label) +
                   " fails to typecheck: " + err->what() +
                   "\n    successor = " + epi::print_process(t.target));
          case_ok = false;
          break;
        }
        if (epi::wrong(next, t.target)) {
          fail("safety", "successor along " + epi::print_label(t.label) + " is wrong");
          case_ok = false;
          break;
        }
        summary.states_checked++;
        std::string key = epi::alpha_key(t.target);
        if (seen.insert(key).second && seen.size() < max_states_per_case)
          frontier.push_back({std::move(next), t.target, st.depth + 1});
      }
    }

    // Corollary: bounded safety along tau alone.
    if (case_ok) {
      try {
        if (!epi::safe_bounded(c.gamma, c.process, explore_depth))
          fail("soundness", "safe_bounded refuted a well-typed term");
      } catch (const epi::StateExplosion&) {
        // resource cap, not a verdict; the bounded check stays inconclusive
      }
    }
  }
  return summary;
}

LemmaSummary run_lemma_checks(const FuzzConfig& config) {
  std::mt19937_64 rng(config.seed);
  LemmaSummary summary;
  for (size_t i = 0; i < config.count; ++i) {
    // Half the samples are deliberately broken so verdict preservation is
    // tested on both verdicts.
    FuzzConfig local = config;
    local.check_options.skip_out_object_check = (i % 2 == 1);
    FuzzCase c = generate_case(rng, local);
    bool verdict = !epi::typecheck_process(c.gamma, c.process);
    std::set<std::string> fn = epi::free_names(c.process);

    // Weakening: a fresh assumption preserves the verdict.
    {
      std::string fresh = "w" + std::to_string(i);
      epi::TypeEnv wider = c.gamma.with_name(
          fresh, i % 3 == 0 ? epi::BaseType::integer()
                            : epi::BaseType::type_name("I" + std::to_string(i % config.pool)));
      summary.weakening++;
      if (!epi::typecheck_process(wider, c.process) != verdict)
        summary.failures.push_back(FuzzFailure{i, "weakening", epi::print_process(c.process)});
    }
    // Strengthening: dropping an assumption for a non-free name preserves it.
    {
      std::string victim;
      for (const auto& [n, b] : c.gamma.names)
        if (!fn.count(n)) {
          victim = n;
          break;
        }
      if (!victim.empty()) {
        epi::TypeEnv narrower = c.gamma;
        narrower.names.erase(victim);
        summary.strengthening++;
        if (!epi::typecheck_process(narrower, c.process) != verdict)
          summary.failures.push_back(
              FuzzFailure{i, "strengthening", epi::print_process(c.process)});
      }
    }
    // Substitution: names replaced by equi-typed values keep typability.
    if (verdict) {
      epi::Subst sigma;
      Rng r{rng};
      for (const auto& [n, b] : c.gamma.names) {
        if (!r.chance(0.5)) continue;
        if (b == epi::BaseType::integer()) {
          sigma[n] = epi::val_int(r.small_int());
        } else if (b == epi::BaseType::boolean()) {
          sigma[n] = epi::val_bool(r.chance(0.5));
        } else {
          std::vector<std::string> same;
          for (const auto& [m, mb] : c.gamma.names)
            if (mb == b) same.push_back(m);
          sigma[n] = epi::val_name(r.pick(same));
        }
      }
      summary.substitution++;
      Proc substituted = epi::substitute(c.process, sigma);
      if (epi::typecheck_process(c.gamma, substituted))
        summary.failures.push_back(FuzzFailure{
            i, "substitution",
            epi::print_process(c.process) + "  sigma-image: " + epi::print_process(substituted)});
    }
  }
  return summary;
}

} // namespace epic
