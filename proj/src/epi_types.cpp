#include "epi_types.hpp"

#include <set>

#include "common.hpp"
#include "epi_ops.hpp"
#include "epi_text.hpp"
#include "lexer.hpp"

using epic::join;
using epic::Lexer;
using epic::overloaded;
using epic::Token;

namespace epi {

std::string Capability::str() const {
  if (!is_chan) return "none";
  std::vector<std::string> parts;
  for (const BaseType& b : carries) parts.push_back(b.str());
  return "ch(" + join(parts, ", ") + ")";
}

// ---------------------------------------------------------------------------
// well-formedness

namespace {

void scan_capability(const Capability& cap, const std::string& where, const TypeEnv& gamma,
                     std::vector<std::string>& diags) {
  if (!cap.is_chan) return;
  for (const BaseType& b : cap.carries)
    if (b.kind == BaseType::Kind::TypeName && !gamma.typenames.count(b.name))
      diags.push_back("type name " + b.name + " unbound (used in " + where + ")");
}

void scan_tree(const TreeType& t, const std::string& where, const TypeEnv& gamma,
               std::vector<std::string>& diags) {
  scan_capability(t.cap, where, gamma, diags);
  for (const auto& [key, sub] : t.local) scan_tree(sub, where + "." + key, gamma, diags);
}

} // namespace

std::vector<std::string> check_wellformed(const TypeEnv& gamma) {
  std::vector<std::string> diags;
  for (const auto& [name, base] : gamma.names) {
    if (base.kind == BaseType::Kind::TypeName && !gamma.typenames.count(base.name))
      diags.push_back("type name " + base.name + " unbound (type of name " + name + ")");
    if (gamma.typenames.count(name))
      diags.push_back("identifier " + name + " used both as a name and as a type name");
  }
  for (const auto& [tn, tree] : gamma.typenames) scan_tree(tree, tn, gamma, diags);
  return diags;
}

// ---------------------------------------------------------------------------
// value, subject, expression typing

BaseType type_of_value(const TypeEnv& gamma, const Value& v) {
  return std::visit(overloaded{
                        [&](const Name& n) {
                          auto it = gamma.names.find(n.id);
                          if (it == gamma.names.end())
                            throw TypeError("t-val", n.id, "unbound name " + n.id);
                          return it->second;
                        },
                        [](long long) { return BaseType::integer(); },
                        [](bool) { return BaseType::boolean(); },
                    },
                    v);
}

Capability type_of_subject(const TypeEnv& gamma, const std::vector<Value>& subject,
                           const std::string& path) {
  if (subject.empty()) throw SubjectError("t-vec", path, "empty subject vector");
  const std::map<std::string, TreeType>* cursor = &gamma.typenames;
  for (size_t i = 0; i < subject.size(); ++i) {
    const Name* n = as_name(subject[i]);
    if (!n)
      throw SubjectError("t-vec", path,
                         "subject element " + print_value(subject[i]) + " is not a name");
    auto nit = gamma.names.find(n->id);
    if (nit == gamma.names.end())
      throw SubjectError("t-vec", path, "unbound name " + n->id + " in subject");
    if (nit->second.kind != BaseType::Kind::TypeName)
      throw SubjectError("t-vec", path,
                         "subject name " + n->id + " has data type " + nit->second.str());
    const std::string& tn = nit->second.name;
    auto tit = cursor->find(tn);
    if (tit == cursor->end()) {
      if (i == 0)
        throw SubjectError("t-vec", path, "type name " + tn + " unbound");
      throw SubjectError("t-vec", path,
                         "composition not permitted: type name " + tn + " (of " + n->id +
                             ") has no entry under the preceding vector");
    }
    if (i + 1 == subject.size()) return tit->second.cap;
    cursor = &tit->second.local;
  }
  return Capability::none(); // unreachable
}

BaseType typecheck_expr(const TypeEnv& gamma, const Expr& e, const std::string& path) {
  return std::visit(overloaded{
                        [&](const Value& v) { return type_of_value(gamma, v); },
                        [&](const OpApp& a) {
                          std::vector<BaseType> args;
                          for (size_t i = 0; i < a.args.size(); ++i)
                            args.push_back(
                                typecheck_expr(gamma, a.args[i], path + "/" + std::to_string(i)));
                          std::optional<BaseType> res = op_result(a.op, args);
                          if (!res) {
                            std::vector<std::string> shown;
                            for (const BaseType& b : args) shown.push_back(b.str());
                            throw TypeError("t-op", path,
                                            "operator '" + a.op + "' not applicable at (" +
                                                join(shown, ", ") + ")");
                          }
                          return *res;
                        },
                    },
                    e.node);
}

// ---------------------------------------------------------------------------
// process typing

namespace {

Capability subject_channel(const TypeEnv& gamma, const std::vector<Value>& subject,
                           const std::string& rule, const std::string& path) {
  Capability cap = type_of_subject(gamma, subject, path);
  if (!cap.is_chan)
    throw TypeError(rule, path, "subject has no channel capability (none)");
  return cap;
}

void expect_extension_wellformed(const TypeEnv& gamma, const std::vector<Binding>& bs,
                                 const std::string& rule, const std::string& path) {
  for (const Binding& b : bs)
    if (b.type.kind == BaseType::Kind::TypeName && !gamma.typenames.count(b.type.name))
      throw TypeError(rule, path, "unknown type name " + b.type.name + " in binder for " +
                                      b.name.id);
}

struct ProcessChecker {
  const CheckOptions& opts;

  void check(const TypeEnv& gamma, const Proc& p, const std::string& path) {
    std::visit(
        overloaded{
            [&](const Nil&) {},
            [&](const Input& n) {
              Capability cap = subject_channel(gamma, n.subject, "t-in", path);
              if (cap.carries.size() != n.binders.size())
                throw TypeError("t-in", path,
                                "channel carries " + std::to_string(cap.carries.size()) +
                                    " values but input binds " +
                                    std::to_string(n.binders.size()));
              TypeEnv inner = gamma;
              for (size_t i = 0; i < n.binders.size(); ++i)
                inner.names[n.binders[i].id] = cap.carries[i];
              check(inner, n.body, path + "/in");
            },
            [&](const Output& n) {
              Capability cap = subject_channel(gamma, n.subject, "t-out", path);
              if (!opts.skip_out_object_check) {
                if (cap.carries.size() != n.objects.size())
                  throw TypeError("t-out", path,
                                  "channel carries " + std::to_string(cap.carries.size()) +
                                      " values but output sends " +
                                      std::to_string(n.objects.size()));
                for (size_t i = 0; i < n.objects.size(); ++i) {
                  BaseType got =
                      typecheck_expr(gamma, n.objects[i], path + "/obj" + std::to_string(i));
                  if (!(got == cap.carries[i]))
                    throw TypeError("t-out", path + "/obj" + std::to_string(i),
                                    "object has type " + got.str() + ", channel carries " +
                                        cap.carries[i].str());
                }
              }
              check(gamma, n.body, path + "/out");
            },
            [&](const Par& n) {
              check(gamma, n.left, path + "/l");
              check(gamma, n.right, path + "/r");
            },
            [&](const Restrict& n) {
              expect_extension_wellformed(gamma, n.bindings, "t-res", path);
              check(gamma.with_bindings(n.bindings), n.body, path + "/new");
            },
            [&](const Repl& n) { check(gamma, n.body, path + "/repl"); },
            [&](const Sum& n) {
              for (size_t i = 0; i < n.branches.size(); ++i) {
                const std::string bpath = path + "/br" + std::to_string(i);
                BaseType g = typecheck_expr(gamma, n.branches[i].guard, bpath + "/guard");
                if (!(g == BaseType::boolean()))
                  throw TypeError("t-sum", bpath, "guard has type " + g.str() + ", wanted bool");
                check(gamma, n.branches[i].body, bpath);
              }
            },
        },
        p->node);
  }
};

} // namespace

void typecheck_process_or_throw(const TypeEnv& gamma, const Proc& p, const CheckOptions& opts) {
  ProcessChecker{opts}.check(gamma, p, "");
}

std::optional<TypeError> typecheck_process(const TypeEnv& gamma, const Proc& p,
                                           const CheckOptions& opts) {
  try {
    typecheck_process_or_throw(gamma, p, opts);
    return std::nullopt;
  } catch (const TypeError& e) {
    return e;
  }
}

void typecheck_label_or_throw(const TypeEnv& gamma, const Label& l) {
  std::visit(
      overloaded{
          [](const LabelTau&) {},
          [&](const LabelRecv& r) {
            Capability cap = subject_channel(gamma, r.subject, "t-rcv", "label");
            if (cap.carries.size() != r.objects.size())
              throw TypeError("t-rcv", "label", "object arity mismatch");
            for (size_t i = 0; i < r.objects.size(); ++i) {
              BaseType got = type_of_value(gamma, r.objects[i]);
              if (!(got == cap.carries[i]))
                throw TypeError("t-rcv", "label",
                                "object " + print_value(r.objects[i]) + " has type " + got.str() +
                                    ", channel carries " + cap.carries[i].str());
            }
          },
          [&](const LabelSend& s) {
            Capability cap = subject_channel(gamma, s.subject, "t-snd", "label");
            expect_extension_wellformed(gamma, s.extruded, "t-snd", "label");
            TypeEnv ext = gamma.with_bindings(s.extruded);
            if (cap.carries.size() != s.objects.size())
              throw TypeError("t-snd", "label", "object arity mismatch");
            for (size_t i = 0; i < s.objects.size(); ++i) {
              BaseType got = type_of_value(ext, s.objects[i]);
              if (!(got == cap.carries[i]))
                throw TypeError("t-snd", "label",
                                "object " + print_value(s.objects[i]) + " has type " + got.str() +
                                    ", channel carries " + cap.carries[i].str());
            }
          },
      },
      l);
}

std::optional<TypeError> typecheck_label(const TypeEnv& gamma, const Label& l) {
  try {
    typecheck_label_or_throw(gamma, l);
    return std::nullopt;
  } catch (const TypeError& e) {
    return e;
  }
}

// ---------------------------------------------------------------------------
// error predicate and safety

namespace {

bool objects_welltyped(const TypeEnv& gamma, const std::vector<Expr>& objects,
                       const Capability& cap) {
  if (cap.carries.size() != objects.size()) return false;
  for (size_t i = 0; i < objects.size(); ++i) {
    try {
      if (!(typecheck_expr(gamma, objects[i]) == cap.carries[i])) return false;
    } catch (const TypeError&) {
      return false;
    }
  }
  return true;
}

std::optional<Capability> try_subject(const TypeEnv& gamma, const std::vector<Value>& subject) {
  try {
    Capability cap = type_of_subject(gamma, subject);
    if (!cap.is_chan) return std::nullopt;
    return cap;
  } catch (const TypeError&) {
    return std::nullopt;
  }
}

} // namespace

bool wrong(const TypeEnv& gamma, const Proc& p) {
  return std::visit(
      overloaded{
          [&](const Nil&) { return false; },
          [&](const Input& n) {
            std::optional<Capability> cap = try_subject(gamma, n.subject);
            return !cap || cap->carries.size() != n.binders.size();
          },
          [&](const Output& n) {
            std::optional<Capability> cap = try_subject(gamma, n.subject);
            return !cap || !objects_welltyped(gamma, n.objects, *cap);
          },
          [&](const Par& n) { return wrong(gamma, n.left) || wrong(gamma, n.right); },
          [&](const Restrict& n) { return wrong(gamma.with_bindings(n.bindings), n.body); },
          [&](const Repl& n) { return wrong(gamma, n.body); },
          [&](const Sum& n) {
            for (const Branch& br : n.branches) {
              try {
                if (!(typecheck_expr(gamma, br.guard) == BaseType::boolean())) return true;
              } catch (const TypeError&) {
                return true;
              }
              if (wrong(gamma, br.body)) return true;
            }
            return false;
          },
      },
      p->node);
}

bool safe_bounded(const TypeEnv& gamma, const Proc& p, size_t depth, size_t frontier_cap) {
  for (const Proc& state : explore_tau(p, depth, frontier_cap))
    if (wrong(gamma, state)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// .tenv parsing and printing

namespace {

const std::set<std::string> kTenvKeywords = {"name", "type", "none", "ch", "int", "bool"};

struct TenvParser {
  Lexer lex;

  explicit TenvParser(const std::string& text) : lex(text, kTenvKeywords) {}

  TypeEnv parse() {
    TypeEnv env;
    while (!lex.at_end()) {
      if (lex.eat_keyword("name")) {
        std::string n = lex.expect_ident("a name");
        lex.expect_symbol(":");
        if (!env.names.emplace(n, base_type()).second) lex.fail("duplicate name " + n);
      } else if (lex.eat_keyword("type")) {
        std::string n = lex.expect_ident("a type name");
        lex.expect_symbol("=");
        if (!env.typenames.emplace(n, tree()).second) lex.fail("duplicate type name " + n);
      } else {
        lex.fail("expected 'name' or 'type'");
      }
    }
    return env;
  }

  BaseType base_type() {
    if (lex.eat_keyword("int")) return BaseType::integer();
    if (lex.eat_keyword("bool")) return BaseType::boolean();
    return BaseType::type_name(lex.expect_ident("a type"));
  }

  Capability capability() {
    if (lex.eat_keyword("none")) return Capability::none();
    lex.expect_keyword("ch");
    lex.expect_symbol("(");
    std::vector<BaseType> carries;
    if (!lex.at_symbol(")")) {
      do carries.push_back(base_type());
      while (lex.eat_symbol(","));
    }
    lex.expect_symbol(")");
    return Capability::chan(std::move(carries));
  }

  TreeType tree() {
    TreeType t;
    lex.expect_symbol("(");
    t.cap = capability();
    lex.expect_symbol(",");
    lex.expect_symbol("{");
    if (!lex.at_symbol("}")) {
      do {
        std::string key = lex.expect_ident("a type name");
        lex.expect_symbol("=");
        if (!t.local.emplace(key, tree()).second) lex.fail("duplicate local entry " + key);
      } while (lex.eat_symbol(","));
    }
    lex.expect_symbol("}");
    lex.expect_symbol(")");
    return t;
  }
};

std::string tree_str(const TreeType& t) {
  if (t.local.empty()) return "(" + t.cap.str() + ", {})";
  std::vector<std::string> entries;
  for (const auto& [key, sub] : t.local) entries.push_back(key + " = " + tree_str(sub));
  return "(" + t.cap.str() + ", { " + join(entries, ", ") + " })";
}

} // namespace

TypeEnv parse_typeenv(const std::string& text) { return TenvParser(text).parse(); }

std::string print_typeenv(const TypeEnv& gamma) {
  std::string out;
  for (const auto& [n, b] : gamma.names) out += "name " + n + " : " + b.str() + "\n";
  for (const auto& [n, t] : gamma.typenames) out += "type " + n + " = " + tree_str(t) + "\n";
  return out;
}

} // namespace epi
