#include "encode.hpp"

#include <algorithm>

#include "common.hpp"
#include "epi_lts.hpp"
#include "epi_ops.hpp"
#include "wc_sem.hpp"
#include "wc_text.hpp"

using epic::overloaded;

namespace wc {

std::string ref_container_name(const BaseType& b) { return "$Ref_" + b.str(); }

std::string proc_container_name(const std::vector<BaseType>& sig) {
  std::string out = "$Proc";
  for (const BaseType& b : sig) out += "_" + b.str();
  return out;
}

namespace {

epi::TreeType leaf(epi::Capability cap) { return epi::TreeType{std::move(cap), {}}; }

void add_def(std::map<std::string, epi::TreeType>& defs, const std::string& name,
             epi::TreeType def) {
  auto [it, fresh] = defs.emplace(name, def);
  if (!fresh && !(it->second == def))
    throw Untranslatable("container type " + name + " demanded at two different definitions");
}

} // namespace

epi::BaseType ContainerSet::ref(const BaseType& b) {
  std::string name = ref_container_name(b);
  add_def(defs_, name, leaf(epi::Capability::chan({b})));
  return epi::BaseType::type_name(name);
}

epi::BaseType ContainerSet::proc(const std::vector<BaseType>& sig) {
  std::string name = proc_container_name(sig);
  std::vector<BaseType> carries;
  carries.push_back(ret());
  carries.insert(carries.end(), sig.begin(), sig.end());
  add_def(defs_, name, leaf(epi::Capability::chan(std::move(carries))));
  return epi::BaseType::type_name(name);
}

epi::BaseType ContainerSet::ret() {
  add_def(defs_, kRetTypeName, leaf(epi::Capability::chan({})));
  return epi::BaseType::type_name(kRetTypeName);
}

// ---------------------------------------------------------------------------
// reference cells

epi::Proc loc_new(const std::string& cell, const epi::BaseType& container, epi::Expr init,
                  epi::Proc body) {
  return epi::p_new({epi::Binding{epi::Name{cell}, container}},
                    epi::p_par(epi::p_out({epi::val_name(cell)}, {std::move(init)}, epi::p_nil()),
                               std::move(body)));
}

epi::Proc loc_read(std::vector<epi::Value> cell, const std::string& binder, epi::Proc body) {
  epi::Proc reput = epi::p_out(cell, {epi::ex_name(binder)}, epi::p_nil());
  return epi::p_in(std::move(cell), {epi::Name{binder}},
                   epi::p_par(std::move(reput), std::move(body)));
}

epi::Proc loc_write(std::vector<epi::Value> cell, const std::string& scratch, epi::Expr value,
                    epi::Proc body) {
  epi::Proc reput = epi::p_out(cell, {std::move(value)}, epi::p_nil());
  return epi::p_in(std::move(cell), {epi::Name{scratch}},
                   epi::p_par(std::move(reput), std::move(body)));
}

// ---------------------------------------------------------------------------
// Gamma translation

epi::TypeEnv encode_gamma(const WcTypeEnv& gamma, const std::set<std::string>& class_names,
                          ContainerSet& containers) {
  epi::TypeEnv out;
  containers.ret(); // the return type is always available
  auto add_member = [&](const std::string& member, const epi::BaseType& container) {
    auto [it, fresh] = out.names.emplace(member, container);
    if (!fresh && !(it->second == container))
      throw Untranslatable("member " + member + " is used at two different container types (" +
                           it->second.str() + " vs " + container.str() + ")");
  };
  for (const auto& [id, entry] : gamma.entries) {
    std::visit(overloaded{
                   [&](const BaseType& b) {
                     if (class_names.count(id)) {
                       // class names keep their interface annotation
                       out.names[id] = b;
                     } else {
                       // a variable of type B becomes a cell of type $Ref_B
                       out.names[id] = containers.ref(b);
                     }
                   },
                   [&](const ProcType& sig) { add_member(id, containers.proc(sig.params)); },
                   [&](const IfaceType& iface) {
                     epi::TreeType tree;
                     tree.cap = epi::Capability::none();
                     for (const auto& [p, b] : iface.fields) {
                       epi::BaseType c = containers.ref(b);
                       tree.local.emplace(c.name, leaf(epi::Capability::chan({b})));
                       add_member(p, c);
                     }
                     for (const auto& [f, sig] : iface.methods) {
                       epi::BaseType c = containers.proc(sig.params);
                       std::vector<BaseType> carries;
                       carries.push_back(containers.ret());
                       carries.insert(carries.end(), sig.params.begin(), sig.params.end());
                       tree.local.emplace(c.name, leaf(epi::Capability::chan(carries)));
                       add_member(f, c);
                     }
                     out.typenames[id] = std::move(tree);
                   },
               },
               entry);
  }
  for (const auto& [name, def] : containers.defs()) out.typenames[name] = def;
  return out;
}

// ---------------------------------------------------------------------------
// statement and expression translation

Encoder::Encoder(WcTypeEnv gamma, std::set<std::string> class_names)
    : gamma_(std::move(gamma)), class_names_(std::move(class_names)) {}

BaseType Encoder::type_of(const WcTypeEnv& gamma, const Expr& e) {
  try {
    return typecheck_expr(gamma, e);
  } catch (const WcTypeError& err) {
    throw Untranslatable(std::string("translation needs a type for '") + print_expr(e) +
                         "' but none is derivable: " + err.what());
  }
}

epi::Proc Encoder::encode_expr(const Expr& e, const std::string& z, const WcTypeEnv& gamma) {
  return std::visit(
      overloaded{
          [&](const EVal& n) { // [[v]](z) = z!(v)
            return epi::p_out({epi::val_name(z)}, {epi::ex_val(to_epi(n.value))}, epi::p_nil());
          },
          [&](const EVar& n) { // read the cell, forward on z
            std::string y = mint_.fresh("y");
            return loc_read({epi::val_name(n.name)}, y,
                            epi::p_out({epi::val_name(z)}, {epi::ex_name(y)}, epi::p_nil()));
          },
          [&](const EThis&) { // 'this' is an ordinary variable cell
            std::string y = mint_.fresh("y");
            return loc_read({epi::val_name("this")}, y,
                            epi::p_out({epi::val_name(z)}, {epi::ex_name(y)}, epi::p_nil()));
          },
          [&](const EField& n) {
            BaseType iface = type_of(gamma, *n.base);
            if (iface.kind != BaseType::Kind::TypeName)
              throw Untranslatable("field access base has data type " + iface.str());
            std::string zp = mint_.fresh("z");
            std::string cls = mint_.fresh("Y");
            std::string y = mint_.fresh("y");
            epi::Proc read = loc_read(
                {epi::val_name(cls), epi::val_name(n.field)}, y,
                epi::p_out({epi::val_name(z)}, {epi::ex_name(y)}, epi::p_nil()));
            epi::Proc wait = epi::p_in({epi::val_name(zp)}, {epi::Name{cls}}, std::move(read));
            return epi::p_new({epi::Binding{epi::Name{zp}, containers_.ref(iface)}},
                              epi::p_par(encode_expr(*n.base, zp, gamma), std::move(wait)));
          },
          [&](const EOp& n) {
            std::vector<epi::Binding> cells;
            std::vector<std::string> zs, ys;
            for (const Expr& arg : n.args) {
              BaseType b = type_of(gamma, arg);
              std::string zi = mint_.fresh("z");
              cells.push_back(epi::Binding{epi::Name{zi}, containers_.ref(b)});
              zs.push_back(zi);
              ys.push_back(mint_.fresh("y"));
            }
            std::vector<epi::Expr> operands;
            for (const std::string& y : ys) operands.push_back(epi::ex_name(y));
            epi::Proc inner = epi::p_out({epi::val_name(z)},
                                         {epi::ex_op(n.op, std::move(operands))}, epi::p_nil());
            for (size_t i = n.args.size(); i-- > 0;)
              inner = epi::p_in({epi::val_name(zs[i])}, {epi::Name{ys[i]}}, std::move(inner));
            epi::Proc body = std::move(inner);
            for (size_t i = n.args.size(); i-- > 0;)
              body = epi::p_par(encode_expr(n.args[i], zs[i], gamma), std::move(body));
            return epi::p_new(std::move(cells), std::move(body));
          },
      },
      e.node);
}

epi::Proc Encoder::encode_stm(const StmPtr& s, const std::string& r, const WcTypeEnv& gamma) {
  auto ret_signal = [&](const std::string& on) {
    return epi::p_out({epi::val_name(on)}, {}, epi::p_nil());
  };
  return std::visit(
      overloaded{
          [&](const SSkip&) { return ret_signal(r); }, // [[skip]](r) = r!()
          [&](const SVarDecl& n) {
            epi::BaseType cell = containers_.ref(n.type);
            std::string z = mint_.fresh("z");
            std::string y = mint_.fresh("y");
            WcTypeEnv inner = gamma.with(n.var, n.type);
            epi::Proc scope =
                loc_new(n.var, cell, epi::ex_name(y), encode_stm(n.body, r, inner));
            epi::Proc wait = epi::p_in({epi::val_name(z)}, {epi::Name{y}}, std::move(scope));
            return epi::p_new({epi::Binding{epi::Name{z}, cell}},
                              epi::p_par(encode_expr(n.init, z, gamma), std::move(wait)));
          },
          [&](const SAssignVar& n) {
            BaseType b = type_of(gamma, n.value);
            std::string z = mint_.fresh("z");
            std::string y = mint_.fresh("y");
            std::string w = mint_.fresh("w");
            epi::Proc write =
                loc_write({epi::val_name(n.var)}, w, epi::ex_name(y), ret_signal(r));
            epi::Proc wait = epi::p_in({epi::val_name(z)}, {epi::Name{y}}, std::move(write));
            return epi::p_new({epi::Binding{epi::Name{z}, containers_.ref(b)}},
                              epi::p_par(encode_expr(n.value, z, gamma), std::move(wait)));
          },
          [&](const SAssignField& n) {
            BaseType b = type_of(gamma, n.value);
            std::string z = mint_.fresh("z");
            std::string y = mint_.fresh("y");
            std::string cls = mint_.fresh("Y");
            std::string w = mint_.fresh("w");
            epi::Proc write = loc_write({epi::val_name(cls), epi::val_name(n.field)}, w,
                                        epi::ex_name(y), ret_signal(r));
            epi::Proc deref = loc_read({epi::val_name("this")}, cls, std::move(write));
            epi::Proc wait = epi::p_in({epi::val_name(z)}, {epi::Name{y}}, std::move(deref));
            return epi::p_new({epi::Binding{epi::Name{z}, containers_.ref(b)}},
                              epi::p_par(encode_expr(n.value, z, gamma), std::move(wait)));
          },
          [&](const SSeq& n) { // (new r1:$Ret)([[S1]](r1) | r1?().[[S2]](r))
            std::string r1 = mint_.fresh("r");
            epi::Proc second =
                epi::p_in({epi::val_name(r1)}, {}, encode_stm(n.second, r, gamma));
            return epi::p_new({epi::Binding{epi::Name{r1}, containers_.ret()}},
                              epi::p_par(encode_stm(n.first, r1, gamma), std::move(second)));
          },
          [&](const SIf& n) {
            std::string z = mint_.fresh("z");
            std::string y = mint_.fresh("y");
            std::vector<epi::Branch> branches;
            branches.push_back(
                epi::Branch{epi::ex_name(y), encode_stm(n.then_branch, r, gamma)});
            branches.push_back(epi::Branch{epi::ex_op("not", {epi::ex_name(y)}),
                                           encode_stm(n.else_branch, r, gamma)});
            epi::Proc wait = epi::p_in({epi::val_name(z)}, {epi::Name{y}},
                                       epi::p_sum(std::move(branches)));
            return epi::p_new(
                {epi::Binding{epi::Name{z}, containers_.ref(BaseType::boolean())}},
                epi::p_par(encode_expr(n.cond, z, gamma), std::move(wait)));
          },
          [&](const SWhile& n) {
            // (new r':$Ret)(r'!() | !r'?().(new z)([[e]](z) | z?(y).
            //    ([y][[S]](r') + [not y]r!())))
            std::string rp = mint_.fresh("r");
            std::string z = mint_.fresh("z");
            std::string y = mint_.fresh("y");
            std::vector<epi::Branch> branches;
            branches.push_back(epi::Branch{epi::ex_name(y), encode_stm(n.body, rp, gamma)});
            branches.push_back(
                epi::Branch{epi::ex_op("not", {epi::ex_name(y)}), ret_signal(r)});
            epi::Proc wait = epi::p_in({epi::val_name(z)}, {epi::Name{y}},
                                       epi::p_sum(std::move(branches)));
            epi::Proc test = epi::p_new(
                {epi::Binding{epi::Name{z}, containers_.ref(BaseType::boolean())}},
                epi::p_par(encode_expr(n.cond, z, gamma), std::move(wait)));
            epi::Proc server =
                epi::p_repl(epi::p_in({epi::val_name(rp)}, {}, std::move(test)));
            return epi::p_new({epi::Binding{epi::Name{rp}, containers_.ret()}},
                              epi::p_par(ret_signal(rp), std::move(server)));
          },
          [&](const SCall& n) {
            BaseType iface = type_of(gamma, n.target);
            if (iface.kind != BaseType::Kind::TypeName)
              throw Untranslatable("call target has data type " + iface.str());
            std::string a = mint_.fresh("a");
            std::string cls = mint_.fresh("Y");
            std::vector<epi::Binding> cells;
            cells.push_back(epi::Binding{epi::Name{a}, containers_.ref(iface)});
            std::vector<std::string> zs, ys;
            for (const Expr& arg : n.args) {
              BaseType b = type_of(gamma, arg);
              std::string zi = mint_.fresh("z");
              cells.push_back(epi::Binding{epi::Name{zi}, containers_.ref(b)});
              zs.push_back(zi);
              ys.push_back(mint_.fresh("y"));
            }
            std::vector<epi::Expr> objects;
            objects.push_back(epi::ex_name(r));
            for (const std::string& y : ys) objects.push_back(epi::ex_name(y));
            epi::Proc send = epi::p_out({epi::val_name(cls), epi::val_name(n.method)},
                                        std::move(objects), epi::p_nil());
            for (size_t i = n.args.size(); i-- > 0;)
              send = epi::p_in({epi::val_name(zs[i])}, {epi::Name{ys[i]}}, std::move(send));
            epi::Proc chain = epi::p_in({epi::val_name(a)}, {epi::Name{cls}}, std::move(send));
            epi::Proc body = std::move(chain);
            for (size_t i = n.args.size(); i-- > 0;)
              body = epi::p_par(encode_expr(n.args[i], zs[i], gamma), std::move(body));
            body = epi::p_par(encode_expr(n.target, a, gamma), std::move(body));
            return epi::p_new(std::move(cells), std::move(body));
          },
      },
      s->node);
}

// ---------------------------------------------------------------------------
// environment translation

epi::Proc Encoder::encode_env_f(const EnvF& envf, const std::string& cls) {
  epi::Proc acc = epi::p_nil();
  for (auto it = envf.entries.rbegin(); it != envf.entries.rend(); ++it) {
    epi::Proc cell = epi::p_out({epi::val_name(cls), epi::val_name(it->first)},
                                {epi::ex_val(to_epi(it->second))}, epi::p_nil());
    acc = epi::p_par(std::move(acc), std::move(cell));
  }
  return acc;
}

epi::Proc Encoder::encode_env_m(const EnvM& envm, const std::string& cls) {
  const BaseType* anno = gamma_.base_of(cls);
  if (!anno || anno->kind != BaseType::Kind::TypeName)
    throw Untranslatable("class " + cls + " has no interface annotation");
  const IfaceType* iface = gamma_.iface_of(anno->name);
  if (!iface) throw Untranslatable("no interface named " + anno->name);

  epi::Proc acc = epi::p_nil();
  for (auto it = envm.entries.rbegin(); it != envm.entries.rend(); ++it) {
    const Method& m = it->second;
    auto sig = iface->methods.find(m.name);
    if (sig == iface->methods.end())
      throw Untranslatable("interface " + anno->name + " does not declare method " + m.name);
    const std::vector<BaseType>& params = sig->second.params;
    if (params.size() != m.params.size())
      throw Untranslatable("method " + m.name + " arity differs from its signature");

    // !(A*f)?(r, a1..an).(x1 := a1)...(xn := an)(this := A)([[S]](r))
    std::string r = mint_.fresh("r");
    std::vector<std::string> actuals;
    for (size_t i = 0; i < params.size(); ++i) actuals.push_back(mint_.fresh("a"));

    WcTypeEnv inner = gamma_.with("this", *anno);
    for (size_t i = 0; i < params.size(); ++i) inner.entries[m.params[i]] = params[i];

    epi::Proc body = encode_stm(m.body, r, inner);
    body = loc_new("this", containers_.ref(*anno), epi::ex_name(cls), std::move(body));
    for (size_t i = params.size(); i-- > 0;)
      body = loc_new(m.params[i], containers_.ref(params[i]), epi::ex_name(actuals[i]),
                     std::move(body));

    std::vector<epi::Name> binders;
    binders.push_back(epi::Name{r});
    for (const std::string& a : actuals) binders.push_back(epi::Name{a});
    epi::Proc server = epi::p_repl(epi::p_in(
        {epi::val_name(cls), epi::val_name(m.name)}, std::move(binders), std::move(body)));
    containers_.proc(params); // the subject type of the server channel
    acc = epi::p_par(std::move(acc), std::move(server));
  }
  return acc;
}

epi::Proc Encoder::encode_env_s(const EnvS& envs) {
  epi::Proc acc = epi::p_nil();
  for (auto it = envs.entries.rbegin(); it != envs.entries.rend(); ++it)
    acc = epi::p_par(std::move(acc), encode_env_f(it->second, it->first));
  return acc;
}

epi::Proc Encoder::encode_env_t(const EnvT& envt) {
  epi::Proc acc = epi::p_nil();
  for (auto it = envt.entries.rbegin(); it != envt.entries.rend(); ++it)
    acc = epi::p_par(std::move(acc), encode_env_m(it->second, it->first));
  return acc;
}

ProcessContext Encoder::encode_env_v(const EnvV& envv, const WcTypeEnv& gamma) {
  // [[(x,v), envV]] = (x := v)([[envV]]); declarations nest left to right
  std::vector<std::pair<std::string, epi::BaseType>> cells;
  std::vector<Value> values;
  for (const auto& [x, v] : envv.entries) {
    const BaseType* b = gamma.base_of(x);
    if (!b) throw Untranslatable("no type assumption for variable " + x);
    cells.emplace_back(x, containers_.ref(*b));
    values.push_back(v);
  }
  return ProcessContext([cells, values](epi::Proc plug) {
    epi::Proc out = std::move(plug);
    for (size_t i = cells.size(); i-- > 0;)
      out = loc_new(cells[i].first, cells[i].second, epi::ex_val(to_epi(values[i])),
                    std::move(out));
    return out;
  });
}

CompilationUnit Encoder::encode_config(const EnvT& envt, const EnvS& envs, const EnvV& envv,
                                       const StmPtr& main) {
  CompilationUnit unit;
  epi::Proc table = encode_env_t(envt);
  epi::Proc store = encode_env_s(envs);
  ProcessContext locals = encode_env_v(envv, gamma_);

  std::string r = mint_.fresh("r");
  unit.return_name = r;
  epi::Proc body = locals.fill(encode_stm(main, r, gamma_));
  epi::Proc await = epi::p_in({epi::val_name(r)}, {}, epi::p_nil());
  epi::Proc ret_scope = epi::p_new({epi::Binding{epi::Name{r}, containers_.ret()}},
                                   epi::p_par(std::move(body), std::move(await)));

  unit.process = epi::p_par(epi::p_par(std::move(table), std::move(store)),
                            std::move(ret_scope));
  unit.tenv = encode_gamma(gamma_, class_names_, containers_);
  for (const auto& [cls, envf] : envs.entries)
    for (const auto& [field, value] : envf.entries)
      unit.decoder[{cls, field}] = {epi::val_name(cls), epi::val_name(field)};
  return unit;
}

CompilationUnit compile(const Program& program) {
  WcTypeEnv gamma;
  Environments env;
  try {
    gamma = build_gamma(program);
    env = build_environments(program.classes);
  } catch (const WcTypeError& e) {
    throw Untranslatable(std::string("type environment is not constructible: ") + e.what());
  } catch (const DuplicateName& e) {
    throw Untranslatable(std::string("declarations are not constructible: ") + e.what());
  }
  std::set<std::string> class_names;
  for (const ClassDecl& c : program.classes) class_names.insert(c.name);
  Encoder enc(std::move(gamma), std::move(class_names));
  return enc.encode_config(env.envt, env.envs, EnvV{}, program.main);
}

// ---------------------------------------------------------------------------
// decoding

namespace {

struct CellScan {
  const CompilationUnit& unit;
  std::map<std::pair<std::string, std::string>, std::vector<Value>> found;

  void walk(const epi::Proc& p, std::set<std::string> bound) {
    std::visit(overloaded{
                   [&](const epi::Par& n) {
                     walk(n.left, bound);
                     walk(n.right, bound);
                   },
                   [&](const epi::Restrict& n) {
                     for (const epi::Binding& b : n.bindings) bound.insert(b.name.id);
                     walk(n.body, std::move(bound));
                   },
                   [&](const epi::Output& n) {
                     if (n.subject.size() != 2 || n.objects.size() != 1) return;
                     const epi::Name* cls = epi::as_name(n.subject[0]);
                     const epi::Name* field = epi::as_name(n.subject[1]);
                     if (!cls || !field || bound.count(cls->id) || bound.count(field->id))
                       return;
                     auto key = std::make_pair(cls->id, field->id);
                     if (!unit.decoder.count(key)) return;
                     try {
                       found[key].push_back(from_epi(epi::eval_expr(n.objects[0])));
                     } catch (const epi::EvalError&) {
                       // an unevaluated cell payload is not a stored value
                     }
                   },
                   [](const auto&) {}, // never under a prefix
               },
               p->node);
  }
};

bool mentions_pending_return(const epi::Proc& p, const std::string& ret) {
  bool pending = false;
  std::visit(overloaded{
                 [&](const epi::Par& n) {
                   pending = mentions_pending_return(n.left, ret) ||
                             mentions_pending_return(n.right, ret);
                 },
                 [&](const epi::Restrict& n) {
                   pending = mentions_pending_return(n.body, ret);
                 },
                 [&](const epi::Input& n) {
                   pending = n.subject.size() == 1 && epi::as_name(n.subject[0]) &&
                             epi::as_name(n.subject[0])->id == ret;
                 },
                 [](const auto&) {},
             },
             p->node);
  return pending;
}

} // namespace

std::map<std::pair<std::string, std::string>, Value> decode_fields(const epi::Proc& quiescent,
                                                                   const CompilationUnit& unit) {
  std::vector<epi::Transition> probe = epi::transitions(quiescent, {});
  for (const epi::Transition& t : probe)
    if (std::holds_alternative<epi::LabelTau>(t.label))
      throw DecodeError("process is not quiescent");
  if (mentions_pending_return(quiescent, unit.return_name))
    throw DecodeError("the top-level return signal has not fired");

  CellScan scan{unit, {}};
  scan.walk(quiescent, {});
  std::map<std::pair<std::string, std::string>, Value> out;
  for (const auto& [key, subject] : unit.decoder) {
    auto it = scan.found.find(key);
    if (it == scan.found.end() || it->second.empty())
      throw DecodeError("no cell for field " + key.first + "." + key.second +
                        " (missing or prefix-guarded)");
    if (it->second.size() > 1)
      throw DecodeError("field " + key.first + "." + key.second + " has " +
                        std::to_string(it->second.size()) + " candidate cells");
    out[key] = it->second.front();
  }
  return out;
}

} // namespace wc
