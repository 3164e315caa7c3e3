#include "epi_lts.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <map>
#include <random>
#include <set>

#include "common.hpp"
#include "epi_ops.hpp"
#include "epi_text.hpp"

using epic::FreshNames;
using epic::join;
using epic::overloaded;

namespace epi {

namespace {

void collect_names(const std::vector<Value>& vs, std::set<std::string>& out) {
  for (const Value& v : vs)
    if (const Name* n = as_name(v)) out.insert(n->id);
}

// Alpha-renames extruded names that collide with `avoid`, consistently in the
// label objects and the target.
void freshen_extruded(LabelSend& l, Proc& target, const std::set<std::string>& avoid) {
  Subst ren;
  for (Binding& b : l.extruded) {
    if (avoid.count(b.name.id)) {
      std::string fresh = FreshNames::next(b.name.id);
      ren[b.name.id] = val_name(fresh);
      b.name.id = fresh;
    }
  }
  if (ren.empty()) return;
  for (Value& v : l.objects) v = substitute(v, ren);
  target = substitute(target, ren);
}

void report(std::vector<std::string>* diags, const std::string& msg) {
  if (diags) diags->push_back(msg);
}

struct Engine {
  const std::vector<std::vector<Value>>& receivable;
  std::vector<std::string>* diags;
  std::set<std::string> receivable_names; // names the environment may supply
  // free-name sets memoised on shared subterms; spent protocol residue makes
  // terms deep and repetitive, so this turns the Par cases linear. Keyed by
  // the owning pointer so cached nodes stay alive and addresses never recur.
  std::map<Proc, std::set<std::string>> fn_cache;

  void index_receivable() {
    for (const std::vector<Value>& vs : receivable) collect_names(vs, receivable_names);
  }

  const std::set<std::string>& fn(const Proc& p) {
    auto it = fn_cache.find(p);
    if (it == fn_cache.end()) it = fn_cache.emplace(p, free_names(p)).first;
    return it->second;
  }

  // Targets of input transitions at exactly the given subject and values.
  std::vector<Proc> in_targets(const Proc& p, const std::vector<Value>& subject,
                               const std::vector<Value>& values) {
    return std::visit(
        overloaded{
            [&](const Input& n) -> std::vector<Proc> {
              if (n.subject != subject || n.binders.size() != values.size()) return {};
              Subst s;
              for (size_t i = 0; i < values.size(); ++i) s[n.binders[i].id] = values[i];
              return {substitute(n.body, s)};
            },
            [&](const Sum& n) {
              std::vector<Proc> out;
              for (const Branch& br : n.branches) {
                if (!guard_holds(br.guard)) continue;
                for (Proc t : in_targets(br.body, subject, values)) out.push_back(std::move(t));
              }
              return out;
            },
            [&](const Par& n) {
              std::vector<Proc> out;
              for (Proc t : in_targets(n.left, subject, values))
                out.push_back(p_par(std::move(t), n.right));
              for (Proc t : in_targets(n.right, subject, values))
                out.push_back(p_par(n.left, std::move(t)));
              return out;
            },
            [&](const Restrict& n) -> std::vector<Proc> {
              // the label's names come from the sender; a colliding binder is
              // a distinct name and is alpha-renamed away
              std::set<std::string> avoid;
              collect_names(subject, avoid);
              collect_names(values, avoid);
              std::vector<Binding> bindings = n.bindings;
              Subst ren;
              for (Binding& b : bindings) {
                if (avoid.count(b.name.id)) {
                  std::string fresh = FreshNames::next(b.name.id);
                  ren[b.name.id] = val_name(fresh);
                  b.name.id = fresh;
                }
              }
              Proc body = ren.empty() ? n.body : substitute(n.body, ren);
              std::vector<Proc> out;
              for (Proc t : in_targets(body, subject, values))
                out.push_back(p_new(bindings, std::move(t)));
              return out;
            },
            [&](const Repl& n) {
              std::vector<Proc> out;
              for (Proc t : in_targets(n.body, subject, values))
                out.push_back(p_par(p, std::move(t)));
              return out;
            },
            [&](const auto&) { return std::vector<Proc>{}; },
        },
        p->node);
  }

  bool guard_holds(const Expr& guard) {
    try {
      Value v = eval_expr(guard);
      if (const bool* b = std::get_if<bool>(&v)) return *b;
      report(diags, "sum guard evaluated to non-boolean " + print_value(v));
      return false;
    } catch (const EvalError& e) {
      report(diags, std::string("sum guard error: ") + e.what());
      return false;
    }
  }

  std::vector<Transition> trans(const Proc& p) {
    return std::visit(
        overloaded{
            [&](const Nil&) { return std::vector<Transition>{}; },
            [&](const Output& n) -> std::vector<Transition> {
              try {
                std::vector<Value> vals = eval_exprs(n.objects);
                return {Transition{LabelSend{n.subject, {}, std::move(vals)}, n.body}};
              } catch (const EvalError& e) {
                report(diags, std::string("output object error: ") + e.what());
                return {};
              }
            },
            [&](const Input& n) {
              std::vector<Transition> out;
              for (const std::vector<Value>& vals : receivable) {
                if (vals.size() != n.binders.size()) continue;
                Subst s;
                for (size_t i = 0; i < vals.size(); ++i) s[n.binders[i].id] = vals[i];
                out.push_back(Transition{LabelRecv{n.subject, vals}, substitute(n.body, s)});
              }
              return out;
            },
            [&](const Sum& n) {
              std::vector<Transition> out;
              for (const Branch& br : n.branches) {
                if (!guard_holds(br.guard)) continue;
                for (Transition t : trans(br.body)) out.push_back(std::move(t));
              }
              return out;
            },
            [&](const Par& n) {
              std::vector<Transition> out;
              const std::set<std::string>& fn_left = fn(n.left);
              const std::set<std::string>& fn_right = fn(n.right);
              std::vector<Transition> tl = trans(n.left);
              std::vector<Transition> tr = trans(n.right);
              for (const Transition& t : tl) {
                Transition u = t;
                if (LabelSend* s = std::get_if<LabelSend>(&u.label))
                  freshen_extruded(*s, u.target, fn_right);
                out.push_back(Transition{u.label, p_par(u.target, n.right)});
                if (const LabelSend* s = std::get_if<LabelSend>(&u.label))
                  synth_tau(out, *s, u.target, n.right, /*sender_left=*/true);
              }
              for (const Transition& t : tr) {
                Transition u = t;
                if (LabelSend* s = std::get_if<LabelSend>(&u.label))
                  freshen_extruded(*s, u.target, fn_left);
                out.push_back(Transition{u.label, p_par(n.left, u.target)});
                if (const LabelSend* s = std::get_if<LabelSend>(&u.label))
                  synth_tau(out, *s, u.target, n.left, /*sender_left=*/false);
              }
              return out;
            },
            [&](const Restrict& n) {
              std::vector<Transition> out;
              // a binder equal to an environment-suppliable name is a
              // distinct name; rename it so early inputs are not lost
              std::vector<Binding> bindings = n.bindings;
              Subst ren;
              for (Binding& b : bindings) {
                if (receivable_names.count(b.name.id)) {
                  std::string fresh = FreshNames::next(b.name.id);
                  ren[b.name.id] = val_name(fresh);
                  b.name.id = fresh;
                }
              }
              Proc body = ren.empty() ? n.body : substitute(n.body, ren);
              std::set<std::string> bound;
              for (const Binding& b : bindings) bound.insert(b.name.id);
              for (Transition t : trans(body)) {
                std::visit(
                    overloaded{
                        [&](const LabelTau&) {
                          out.push_back(Transition{t.label, p_new(bindings, t.target)});
                        },
                        [&](const LabelRecv& r) {
                          // a restricted name cannot take part in an
                          // environment-facing label
                          std::set<std::string> used;
                          collect_names(r.subject, used);
                          collect_names(r.objects, used);
                          for (const std::string& b : bound)
                            if (used.count(b)) return;
                          out.push_back(Transition{t.label, p_new(bindings, t.target)});
                        },
                        [&](LabelSend s) {
                          std::set<std::string> subj;
                          collect_names(s.subject, subj);
                          for (const std::string& b : bound)
                            if (subj.count(b)) return;
                          Proc target = t.target;
                          freshen_extruded(s, target, bound);
                          std::set<std::string> objs;
                          collect_names(s.objects, objs);
                          std::vector<Binding> keep;
                          for (const Binding& b : bindings) {
                            if (objs.count(b.name.id))
                              s.extruded.push_back(b); // E-Open hoists it
                            else
                              keep.push_back(b);
                          }
                          out.push_back(Transition{std::move(s), p_new(keep, target)});
                        },
                    },
                    t.label);
              }
              return out;
            },
            [&](const Repl& n) {
              std::vector<Transition> out;
              const std::set<std::string>& fn_self = fn(n.body);
              std::vector<Transition> tb = trans(n.body);
              for (const Transition& t : tb) {
                Transition u = t;
                if (LabelSend* s = std::get_if<LabelSend>(&u.label))
                  freshen_extruded(*s, u.target, fn_self);
                out.push_back(Transition{u.label, p_par(p, u.target)});
              }
              // two unfolded copies communicating
              for (const Transition& t : tb) {
                const LabelSend* s = std::get_if<LabelSend>(&t.label);
                if (!s) continue;
                LabelSend send = *s;
                Proc send_target = t.target;
                freshen_extruded(send, send_target, fn_self);
                for (Proc recv_target : in_targets(n.body, send.subject, send.objects)) {
                  out.push_back(Transition{
                      LabelTau{},
                      p_new(send.extruded,
                            p_par(p_par(p, send_target), std::move(recv_target)))});
                }
              }
              return out;
            },
        },
        p->node);
  }

  void synth_tau(std::vector<Transition>& out, const LabelSend& send, const Proc& send_target,
                 const Proc& other, bool sender_left) {
    for (Proc recv_target : in_targets(other, send.subject, send.objects)) {
      Proc pair = sender_left ? p_par(send_target, std::move(recv_target))
                              : p_par(std::move(recv_target), send_target);
      out.push_back(Transition{LabelTau{}, p_new(send.extruded, std::move(pair))});
    }
  }
};

} // namespace

std::vector<Transition> transitions(const Proc& p,
                                    const std::vector<std::vector<Value>>& receivable,
                                    std::vector<std::string>* diags) {
  Engine e{receivable, diags, {}};
  e.index_receivable();
  return e.trans(p);
}

std::string print_label(const Label& l) {
  auto values = [](const std::vector<Value>& vs) {
    std::vector<std::string> parts;
    for (const Value& v : vs) parts.push_back(print_value(v));
    return join(parts, ", ");
  };
  auto subject = [](const std::vector<Value>& vs) {
    std::vector<std::string> parts;
    for (const Value& v : vs) parts.push_back(print_value(v));
    return join(parts, "*");
  };
  return std::visit(overloaded{
                        [](const LabelTau&) { return std::string("tau"); },
                        [&](const LabelRecv& r) {
                          return subject(r.subject) + "?(" + values(r.objects) + ")";
                        },
                        [&](const LabelSend& s) {
                          std::string out = subject(s.subject) + "!";
                          if (!s.extruded.empty()) {
                            std::vector<std::string> bs;
                            for (const Binding& b : s.extruded)
                              bs.push_back(b.name.id + ":" + b.type.str());
                            out += "(new " + join(bs, ", ") + ")";
                          }
                          return out + "(" + values(s.objects) + ")";
                        },
                    },
                    l);
}

std::string transition_key(const Transition& t) {
  // Encode label plus target as one process so canonical printing identifies
  // transitions up to renaming of extruded names.
  return std::visit(overloaded{
                        [&](const LabelTau&) { return "t:" + alpha_key(t.target); },
                        [&](const LabelRecv& r) {
                          std::vector<Expr> objects;
                          for (const Value& v : r.objects) objects.push_back(ex_val(v));
                          return "r:" + alpha_key(p_out(r.subject, objects, t.target));
                        },
                        [&](const LabelSend& s) {
                          std::vector<Expr> objects;
                          for (const Value& v : s.objects) objects.push_back(ex_val(v));
                          return "s:" + alpha_key(
                                            p_new(s.extruded, p_out(s.subject, objects, t.target)));
                        },
                    },
                    t.label);
}

TauRun run_tau(const Proc& p, Strategy strategy, size_t max_steps, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  TauRun run;
  Proc state = p;
  for (size_t step = 0; step < max_steps; ++step) {
    std::vector<Transition> taus;
    for (Transition& t : transitions(state, {}))
      if (std::holds_alternative<LabelTau>(t.label)) taus.push_back(std::move(t));
    if (taus.empty()) {
      run.final_state = state;
      run.quiescent = true;
      return run;
    }
    // derivations are enumerated in a fixed leftmost order, so the first tau
    // is the least element of a stable ordering on derivations
    size_t pick = 0;
    if (strategy == Strategy::Random)
      pick = std::uniform_int_distribution<size_t>(0, taus.size() - 1)(rng);
    state = taus[pick].target;
    run.steps.push_back(TauStep{state});
  }
  run.final_state = state;
  std::vector<Transition> probe = transitions(state, {});
  run.quiescent = std::none_of(probe.begin(), probe.end(), [](const Transition& t) {
    return std::holds_alternative<LabelTau>(t.label);
  });
  return run;
}

size_t effective_frontier_cap(size_t requested) {
  if (requested) return requested;
  if (const char* env = std::getenv("EPIC_FRONTIER_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<size_t>(v);
  }
  return kDefaultFrontierCap;
}

std::vector<Proc> explore_tau(const Proc& p, size_t depth, size_t frontier_cap) {
  frontier_cap = effective_frontier_cap(frontier_cap);
  std::map<std::string, Proc> seen;
  Proc root = canonical(p);
  seen.emplace(print_process(root), root);
  std::deque<std::pair<Proc, size_t>> frontier;
  frontier.emplace_back(root, 0);
  while (!frontier.empty()) {
    auto [state, d] = frontier.front();
    frontier.pop_front();
    if (d >= depth) continue;
    for (const Transition& t : transitions(state, {})) {
      if (!std::holds_alternative<LabelTau>(t.label)) continue;
      Proc c = canonical(t.target);
      std::string key = print_process(c);
      if (seen.emplace(key, c).second) {
        if (seen.size() > frontier_cap)
          throw StateExplosion("tau exploration exceeded " + std::to_string(frontier_cap) +
                               " states");
        frontier.emplace_back(c, d + 1);
      }
    }
  }
  std::vector<Proc> out;
  out.reserve(seen.size());
  for (auto& [key, proc] : seen) out.push_back(proc);
  return out;
}

} // namespace epi
