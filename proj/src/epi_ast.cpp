#include "epi_ast.hpp"

#include <algorithm>
#include <cassert>

#include "common.hpp"

using epic::FreshNames;
using epic::overloaded;

namespace epi {

Proc p_nil() { return std::make_shared<Process>(Process{Nil{}}); }
Proc p_in(std::vector<Value> subject, std::vector<Name> binders, Proc body) {
  return std::make_shared<Process>(Process{Input{std::move(subject), std::move(binders), std::move(body)}});
}
Proc p_out(std::vector<Value> subject, std::vector<Expr> objects, Proc body) {
  return std::make_shared<Process>(Process{Output{std::move(subject), std::move(objects), std::move(body)}});
}
Proc p_par(Proc left, Proc right) {
  return std::make_shared<Process>(Process{Par{std::move(left), std::move(right)}});
}
Proc p_new(std::vector<Binding> bindings, Proc body) {
  if (bindings.empty()) return body; // (nu epsilon)P = P
  return std::make_shared<Process>(Process{Restrict{std::move(bindings), std::move(body)}});
}
Proc p_repl(Proc body) { return std::make_shared<Process>(Process{Repl{std::move(body)}}); }
Proc p_sum(std::vector<Branch> branches) {
  return std::make_shared<Process>(Process{Sum{std::move(branches)}});
}

// ---------------------------------------------------------------------------
// free names

static void collect(const Value& v, std::set<std::string>& out) {
  if (const Name* n = as_name(v)) out.insert(n->id);
}

static void collect(const Expr& e, std::set<std::string>& out) {
  std::visit(overloaded{
                 [&](const Value& v) { collect(v, out); },
                 [&](const OpApp& a) {
                   for (const Expr& arg : a.args) collect(arg, out);
                 },
             },
             e.node);
}

static void collect(const Proc& p, std::set<std::string>& out) {
  std::visit(overloaded{
                 [&](const Nil&) {},
                 [&](const Input& n) {
                   for (const Value& v : n.subject) collect(v, out);
                   std::set<std::string> body;
                   collect(n.body, body);
                   for (const Name& b : n.binders) body.erase(b.id);
                   out.insert(body.begin(), body.end());
                 },
                 [&](const Output& n) {
                   for (const Value& v : n.subject) collect(v, out);
                   for (const Expr& e : n.objects) collect(e, out);
                   collect(n.body, out);
                 },
                 [&](const Par& n) {
                   collect(n.left, out);
                   collect(n.right, out);
                 },
                 [&](const Restrict& n) {
                   std::set<std::string> body;
                   collect(n.body, body);
                   for (const Binding& b : n.bindings) body.erase(b.name.id);
                   out.insert(body.begin(), body.end());
                 },
                 [&](const Repl& n) { collect(n.body, out); },
                 [&](const Sum& n) {
                   for (const Branch& br : n.branches) {
                     collect(br.guard, out);
                     collect(br.body, out);
                   }
                 },
             },
             p->node);
}

std::set<std::string> free_names(const Expr& e) {
  std::set<std::string> out;
  collect(e, out);
  return out;
}

std::set<std::string> free_names(const Proc& p) {
  std::set<std::string> out;
  collect(p, out);
  return out;
}

// ---------------------------------------------------------------------------
// substitution

Value substitute(const Value& v, const Subst& s) {
  if (const Name* n = as_name(v)) {
    auto it = s.find(n->id);
    if (it != s.end()) return it->second;
  }
  return v;
}

Expr substitute(const Expr& e, const Subst& s) {
  return std::visit(overloaded{
                        [&](const Value& v) { return ex_val(substitute(v, s)); },
                        [&](const OpApp& a) {
                          std::vector<Expr> args;
                          args.reserve(a.args.size());
                          for (const Expr& arg : a.args) args.push_back(substitute(arg, s));
                          return ex_op(a.op, std::move(args));
                        },
                    },
                    e.node);
}

static std::set<std::string> range_names(const Subst& s) {
  std::set<std::string> out;
  for (const auto& [k, v] : s) collect(v, out);
  return out;
}

// Prepares a substitution for descending under binders: drops shadowed
// entries and renames binders that would capture names from the range.
template <class GetName, class SetName, class Bound>
static Subst adjust_binders(std::vector<Bound>& binders, const Subst& s,
                            const std::set<std::string>& body_free, GetName get, SetName set) {
  Subst inner;
  for (const auto& [k, v] : s) {
    bool shadowed = std::any_of(binders.begin(), binders.end(),
                                [&](const Bound& b) { return get(b) == k; });
    if (!shadowed && body_free.count(k)) inner.emplace(k, v);
  }
  std::set<std::string> avoid = range_names(inner);
  for (Bound& b : binders) {
    if (avoid.count(get(b))) {
      std::string fresh = FreshNames::next(get(b));
      inner[get(b)] = val_name(fresh);
      set(b, fresh);
    }
  }
  return inner;
}

Proc substitute(const Proc& p, const Subst& s) {
  if (s.empty()) return p;
  return std::visit(
      overloaded{
          [&](const Nil&) { return p; },
          [&](const Input& n) {
            std::vector<Value> subject;
            subject.reserve(n.subject.size());
            for (const Value& v : n.subject) subject.push_back(substitute(v, s));
            std::vector<Name> binders = n.binders;
            Subst inner = adjust_binders(
                binders, s, free_names(n.body), [](const Name& b) { return b.id; },
                [](Name& b, const std::string& id) { b.id = id; });
            return p_in(std::move(subject), std::move(binders), substitute(n.body, inner));
          },
          [&](const Output& n) {
            std::vector<Value> subject;
            subject.reserve(n.subject.size());
            for (const Value& v : n.subject) subject.push_back(substitute(v, s));
            std::vector<Expr> objects;
            objects.reserve(n.objects.size());
            for (const Expr& e : n.objects) objects.push_back(substitute(e, s));
            return p_out(std::move(subject), std::move(objects), substitute(n.body, s));
          },
          [&](const Par& n) { return p_par(substitute(n.left, s), substitute(n.right, s)); },
          [&](const Restrict& n) {
            std::vector<Binding> bindings = n.bindings;
            Subst inner = adjust_binders(
                bindings, s, free_names(n.body), [](const Binding& b) { return b.name.id; },
                [](Binding& b, const std::string& id) { b.name.id = id; });
            return p_new(std::move(bindings), substitute(n.body, inner));
          },
          [&](const Repl& n) { return p_repl(substitute(n.body, s)); },
          [&](const Sum& n) {
            std::vector<Branch> branches;
            branches.reserve(n.branches.size());
            for (const Branch& br : n.branches)
              branches.push_back(Branch{substitute(br.guard, s), substitute(br.body, s)});
            return p_sum(std::move(branches));
          },
      },
      p->node);
}

// ---------------------------------------------------------------------------
// structural equality

bool equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  if (const Value* va = std::get_if<Value>(&a.node)) return *va == std::get<Value>(b.node);
  const OpApp& oa = std::get<OpApp>(a.node);
  const OpApp& ob = std::get<OpApp>(b.node);
  if (oa.op != ob.op || oa.args.size() != ob.args.size()) return false;
  for (size_t i = 0; i < oa.args.size(); ++i)
    if (!equal(oa.args[i], ob.args[i])) return false;
  return true;
}

static bool equal_exprs(const std::vector<Expr>& a, const std::vector<Expr>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!equal(a[i], b[i])) return false;
  return true;
}

bool equal(const Proc& a, const Proc& b) {
  if (a == b) return true;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      overloaded{
          [&](const Nil&) { return true; },
          [&](const Input& n) {
            const Input& m = std::get<Input>(b->node);
            return n.subject == m.subject && n.binders == m.binders && equal(n.body, m.body);
          },
          [&](const Output& n) {
            const Output& m = std::get<Output>(b->node);
            return n.subject == m.subject && equal_exprs(n.objects, m.objects) &&
                   equal(n.body, m.body);
          },
          [&](const Par& n) {
            const Par& m = std::get<Par>(b->node);
            return equal(n.left, m.left) && equal(n.right, m.right);
          },
          [&](const Restrict& n) {
            const Restrict& m = std::get<Restrict>(b->node);
            return n.bindings == m.bindings && equal(n.body, m.body);
          },
          [&](const Repl& n) { return equal(n.body, std::get<Repl>(b->node).body); },
          [&](const Sum& n) {
            const Sum& m = std::get<Sum>(b->node);
            if (n.branches.size() != m.branches.size()) return false;
            for (size_t i = 0; i < n.branches.size(); ++i)
              if (!equal(n.branches[i].guard, m.branches[i].guard) ||
                  !equal(n.branches[i].body, m.branches[i].body))
                return false;
            return true;
          },
      },
      a->node);
}

// ---------------------------------------------------------------------------
// canonical form
//
// Binders are renamed to "#0", "#1", ... in traversal order. Restriction
// binder lists are identified up to reordering, so within one restriction
// the list is normalised by the position of each name's first free
// occurrence in the body (unused binders last, ordered by type).

namespace {

// First free-occurrence index of each target name, counting value slots in
// preorder. Shadowed occurrences do not count.
struct OccurrenceScan {
  std::map<std::string, size_t> first;
  size_t slot = 0;

  void value(const Value& v, const std::set<std::string>& shadowed) {
    if (const Name* n = as_name(v)) {
      if (!shadowed.count(n->id) && !first.count(n->id)) first[n->id] = slot;
    }
    ++slot;
  }
  void expr(const Expr& e, const std::set<std::string>& shadowed) {
    std::visit(overloaded{
                   [&](const Value& v) { value(v, shadowed); },
                   [&](const OpApp& a) {
                     for (const Expr& arg : a.args) expr(arg, shadowed);
                   },
               },
               e.node);
  }
  void proc(const Proc& p, std::set<std::string> shadowed) {
    std::visit(overloaded{
                   [&](const Nil&) {},
                   [&](const Input& n) {
                     for (const Value& v : n.subject) value(v, shadowed);
                     auto inner = shadowed;
                     for (const Name& b : n.binders) inner.insert(b.id);
                     proc(n.body, std::move(inner));
                   },
                   [&](const Output& n) {
                     for (const Value& v : n.subject) value(v, shadowed);
                     for (const Expr& e : n.objects) expr(e, shadowed);
                     proc(n.body, shadowed);
                   },
                   [&](const Par& n) {
                     proc(n.left, shadowed);
                     proc(n.right, shadowed);
                   },
                   [&](const Restrict& n) {
                     auto inner = shadowed;
                     for (const Binding& b : n.bindings) inner.insert(b.name.id);
                     proc(n.body, std::move(inner));
                   },
                   [&](const Repl& n) { proc(n.body, shadowed); },
                   [&](const Sum& n) {
                     for (const Branch& br : n.branches) {
                       expr(br.guard, shadowed);
                       proc(br.body, shadowed);
                     }
                   },
               },
               p->node);
  }
};

struct Canonicalizer {
  size_t next = 0;

  std::string fresh() { return "#" + std::to_string(next++); }

  Value value(const Value& v, const Subst& env) { return substitute(v, env); }

  Expr expr(const Expr& e, const Subst& env) { return substitute(e, env); }

  Proc proc(const Proc& p, const Subst& env) {
    return std::visit(
        overloaded{
            [&](const Nil&) { return p_nil(); },
            [&](const Input& n) {
              std::vector<Value> subject;
              for (const Value& v : n.subject) subject.push_back(value(v, env));
              Subst inner = env;
              std::vector<Name> binders;
              for (const Name& b : n.binders) {
                std::string id = fresh();
                inner[b.id] = val_name(id);
                binders.push_back(Name{id});
              }
              return p_in(std::move(subject), std::move(binders), proc(n.body, inner));
            },
            [&](const Output& n) {
              std::vector<Value> subject;
              for (const Value& v : n.subject) subject.push_back(value(v, env));
              std::vector<Expr> objects;
              for (const Expr& e : n.objects) objects.push_back(expr(e, env));
              return p_out(std::move(subject), std::move(objects), proc(n.body, env));
            },
            [&](const Par& n) { return p_par(proc(n.left, env), proc(n.right, env)); },
            [&](const Restrict& n) {
              OccurrenceScan scan;
              std::set<std::string> shadowed; // binder occurrences in the body are free here
              scan.proc(n.body, shadowed);
              std::vector<Binding> order = n.bindings;
              constexpr size_t kUnused = ~size_t{0};
              auto key = [&](const Binding& b) {
                auto it = scan.first.find(b.name.id);
                return it == scan.first.end() ? kUnused : it->second;
              };
              std::stable_sort(order.begin(), order.end(), [&](const Binding& a, const Binding& b) {
                size_t ka = key(a), kb = key(b);
                if (ka != kb) return ka < kb;
                return a.type < b.type; // only reachable for unused binders
              });
              Subst inner = env;
              std::vector<Binding> bindings;
              for (const Binding& b : order) {
                std::string id = fresh();
                inner[b.name.id] = val_name(id);
                bindings.push_back(Binding{Name{id}, b.type});
              }
              return p_new(std::move(bindings), proc(n.body, inner));
            },
            [&](const Repl& n) { return p_repl(proc(n.body, env)); },
            [&](const Sum& n) {
              std::vector<Branch> branches;
              for (const Branch& br : n.branches)
                branches.push_back(Branch{expr(br.guard, env), proc(br.body, env)});
              return p_sum(std::move(branches));
            },
        },
        p->node);
  }
};

} // namespace

Proc canonical(const Proc& p) {
  Canonicalizer c;
  return c.proc(p, Subst{});
}

bool alpha_eq(const Proc& a, const Proc& b) { return equal(canonical(a), canonical(b)); }

} // namespace epi
