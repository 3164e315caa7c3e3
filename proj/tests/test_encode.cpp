#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>

#include "common.hpp"
#include "encode.hpp"
#include "epi_lts.hpp"
#include "epi_text.hpp"
#include "harness.hpp"
#include "wc_sem.hpp"
#include "wc_text.hpp"
#include "wc_types.hpp"

using namespace wc;

namespace {

Program W(const std::string& text) { return parse_program(text); }

const char* kInc = R"(
interface IA {
  field p : int;
  method inc : proc();
}
class A : IA {
  field p := 0;
  method inc() { this.p := this.p + 1 }
}
main { A::inc(); A::inc() }
)";

Encoder encoder_for(const Program& p) {
  std::set<std::string> classes;
  for (const ClassDecl& c : p.classes) classes.insert(c.name);
  return Encoder(build_gamma(p), classes);
}

// all quiescent states reachable by exhaustive tau exploration
std::vector<epi::Proc> quiescent_states(const epi::Proc& p, size_t depth = 20) {
  std::vector<epi::Proc> out;
  for (const epi::Proc& s : epi::explore_tau(p, depth)) {
    bool quiet = true;
    for (const epi::Transition& t : epi::transitions(s, {}))
      if (std::holds_alternative<epi::LabelTau>(t.label)) quiet = false;
    if (quiet) out.push_back(s);
  }
  return out;
}

bool offers_output(const epi::Proc& p, const std::string& label) {
  for (const epi::Transition& t : epi::transitions(p, {}))
    if (epi::print_label(t.label) == label) return true;
  return false;
}

void collect_subterms(const epi::Proc& p, std::vector<epi::Proc>& out) {
  out.push_back(p);
  std::visit(epic::overloaded{
                 [&](const epi::Input& n) { collect_subterms(n.body, out); },
                 [&](const epi::Output& n) { collect_subterms(n.body, out); },
                 [&](const epi::Par& n) {
                   collect_subterms(n.left, out);
                   collect_subterms(n.right, out);
                 },
                 [&](const epi::Restrict& n) { collect_subterms(n.body, out); },
                 [&](const epi::Repl& n) { collect_subterms(n.body, out); },
                 [&](const epi::Sum& n) {
                   for (const epi::Branch& b : n.branches) collect_subterms(b.body, out);
                 },
                 [](const epi::Nil&) {},
             },
             p->node);
}

} // namespace

TEST_CASE("reference cell macros") {
  epi::Proc cell = loc_new("x", epi::BaseType::type_name("$Ref_int"),
                           epi::ex_val(epi::val_int(5)), epi::p_nil());
  CHECK(epi::print_process(cell) == "new x:$Ref_int (x!(5) | 0)");

  // a read restores the cell and forwards the value
  epi::Proc read = loc_new("x", epi::BaseType::type_name("$Ref_int"),
                           epi::ex_val(epi::val_int(5)),
                           loc_read({epi::val_name("x")}, "y",
                                    epi::p_out({epi::val_name("z")}, {epi::ex_name("y")},
                                               epi::p_nil())));
  std::vector<epi::Proc> finals = quiescent_states(read);
  REQUIRE(finals.size() == 1);
  CHECK(offers_output(finals[0], "z!(5)"));

  // cell 5, write 7, read delivers 7
  epi::Proc readout = loc_read({epi::val_name("x")}, "y",
                               epi::p_out({epi::val_name("z")}, {epi::ex_name("y")},
                                          epi::p_nil()));
  epi::Proc sequenced =
      epi::p_in({epi::val_name("s")}, {}, std::move(readout));
  epi::Proc write = loc_write({epi::val_name("x")}, "w", epi::ex_val(epi::val_int(7)),
                              epi::p_out({epi::val_name("s")}, {}, epi::p_nil()));
  epi::Proc program = loc_new("x", epi::BaseType::type_name("$Ref_int"),
                              epi::ex_val(epi::val_int(5)),
                              epi::p_par(std::move(write), std::move(sequenced)));
  finals = quiescent_states(program);
  REQUIRE(finals.size() == 1);
  CHECK(offers_output(finals[0], "z!(7)"));
}

TEST_CASE("statement translations") {
  Encoder enc = encoder_for(W("main { skip }"));
  CHECK(epi::print_process(enc.encode_stm(s_skip(), "r", enc.gamma())) == "r!()");

  Encoder enc2 = encoder_for(W("main { skip }"));
  epi::Proc seq = enc2.encode_stm(s_seq(s_skip(), s_skip()), "r", enc2.gamma());
  CHECK(epi::print_process(seq) == "new $r0:$Ret ($r0!() | $r0?().r!())");
}

TEST_CASE("expression translations") {
  Encoder enc = encoder_for(W("main { skip }"));
  CHECK(epi::print_process(enc.encode_expr(e_val(Value{7LL}), "z", enc.gamma())) == "z!(7)");

  Encoder enc2 = encoder_for(W("main { skip }"));
  WcTypeEnv g = enc2.gamma().with("x", BaseType::integer());
  CHECK(epi::print_process(enc2.encode_expr(e_var("x"), "z", g)) ==
        "x?($y0).(x!($y0) | z!($y0))");

  // running the translation of 1+2 delivers 3 on z
  Encoder enc3 = encoder_for(W("main { skip }"));
  epi::Proc sum = enc3.encode_expr(e_op("+", {e_val(Value{1LL}), e_val(Value{2LL})}), "z",
                                   enc3.gamma());
  std::vector<epi::Proc> finals = quiescent_states(sum);
  REQUIRE(finals.size() == 1);
  CHECK(offers_output(finals[0], "z!(3)"));
}

TEST_CASE("environment translations") {
  Program inc = W(kInc);
  Encoder enc = encoder_for(inc);
  EnvF envf;
  envf.entries.emplace_back("p", Value{0LL});
  CHECK(epi::print_process(enc.encode_env_f(envf, "A")) == "0 | A*p!(0)");
  CHECK(epi::print_process(enc.encode_env_m(EnvM{}, "A")) == "0");

  EnvV envv;
  envv.entries.emplace_back("x", Value{4LL});
  WcTypeEnv g = enc.gamma().with("x", BaseType::integer());
  ProcessContext ctx = enc.encode_env_v(envv, g);
  CHECK(epi::print_process(ctx.fill(epi::p_nil())) == "new x:$Ref_int (x!(4) | 0)");
  // the context is capture-permitting: the plug sees the declaration
  CHECK(epi::print_process(ctx.fill(epi::parse_process("x!(9)"))) ==
        "new x:$Ref_int (x!(4) | x!(9))");
}

TEST_CASE("gamma translation") {
  // a lone variable entry becomes a cell type
  {
    WcTypeEnv g;
    g.entries.emplace("x", BaseType::integer());
    ContainerSet cs;
    epi::TypeEnv out = encode_gamma(g, {}, cs);
    CHECK(out.names.at("x") == epi::BaseType::type_name("$Ref_int"));
    CHECK(out.typenames.at("$Ref_int").cap == epi::Capability::chan({epi::BaseType::integer()}));
    CHECK(out.typenames.count("$Ret"));
  }
  // interface/class entries keep names and hoist container definitions
  {
    Program p = W(kInc);
    ContainerSet cs;
    std::set<std::string> classes{"A"};
    epi::TypeEnv out = encode_gamma(build_gamma(p), classes, cs);
    CHECK(out.names.at("A") == epi::BaseType::type_name("IA"));
    CHECK(out.names.at("p") == epi::BaseType::type_name("$Ref_int"));
    CHECK(out.names.at("inc") == epi::BaseType::type_name("$Proc"));
    const epi::TreeType& ia = out.typenames.at("IA");
    CHECK_FALSE(ia.cap.is_chan);
    CHECK(ia.local.count("$Ref_int"));
    CHECK(ia.local.count("$Proc"));
    CHECK(out.typenames.at("$Proc").cap ==
          epi::Capability::chan({epi::BaseType::type_name("$Ret")}));
    CHECK(epi::check_wellformed(out).empty());
  }
  // the empty environment still carries the return type
  {
    ContainerSet cs;
    epi::TypeEnv out = encode_gamma(WcTypeEnv{}, {}, cs);
    CHECK(out.names.empty());
    CHECK(out.typenames.size() == 1);
    CHECK(out.typenames.count("$Ret"));
  }
}

TEST_CASE("configuration translation") {
  CompilationUnit unit = compile(W("main { skip }"));
  CHECK(epi::print_process(unit.process) == "0 | 0 | new $r0:$Ret ($r0!() | $r0?())");
  epi::TauRun run = epi::run_tau(unit.process, epi::Strategy::Deterministic, 10, 0);
  CHECK(run.steps.size() == 1);
  CHECK(run.quiescent);
  CHECK(decode_fields(run.final_state, unit).empty());

  // a well-typed program compiles to a well-typed process
  CompilationUnit inc = compile(W(kInc));
  CHECK(epi::check_wellformed(inc.tenv).empty());
  CHECK_FALSE(epi::typecheck_process(inc.tenv, inc.process).has_value());

  // the ill-typed variant fails on both sides
  Program bad = W("interface IA { field p : int; method inc : proc(); }\n"
                  "class A : IA { field p := 0; method inc() { this.p := true } }\n"
                  "main { A::inc() }");
  CHECK(typecheck_program(bad).has_value());
  CompilationUnit bad_unit = compile(bad);
  CHECK(epi::typecheck_process(bad_unit.tenv, bad_unit.process).has_value());
}

TEST_CASE("compiled output survives its own concrete syntax") {
  CompilationUnit unit = compile(W(kInc));
  epi::Proc reparsed = epi::parse_process(epi::print_process(unit.process));
  CHECK(epi::alpha_eq(reparsed, unit.process));
  epi::TypeEnv genv = epi::parse_typeenv(epi::print_typeenv(unit.tenv));
  CHECK(epi::check_wellformed(genv).empty());
  CHECK_FALSE(epi::typecheck_process(genv, reparsed).has_value());
}

TEST_CASE("compilation is deterministic") {
  Program p = W(kInc);
  CompilationUnit a = compile(p);
  CompilationUnit b = compile(p);
  CHECK(epi::print_process(a.process) == epi::print_process(b.process));
  CHECK(epi::alpha_eq(a.process, b.process));
  CHECK(epi::print_typeenv(a.tenv) == epi::print_typeenv(b.tenv));
  CHECK(a.decoder == b.decoder);
}

TEST_CASE("sequential composition embeds its component translations") {
  Program p = W(kInc);
  StmPtr s1 = s_assign_field("p", e_op("+", {e_field(e_this(), "p"), e_val(Value{1LL})}));
  StmPtr s2 = s_call(e_val(Value{ClassName{"A"}}), "inc", {});
  WcTypeEnv gamma = build_gamma(p).with("this", BaseType::type_name("IA"));

  Encoder whole = encoder_for(p);
  epi::Proc seq = whole.encode_stm(s_seq(s1, s2), "r", gamma);
  // the first component runs under the minted return name $r0, the second
  // under the outer r
  Encoder part1 = encoder_for(p);
  epi::Proc first = part1.encode_stm(s1, "$r0", gamma);
  Encoder part2 = encoder_for(p);
  epi::Proc second = part2.encode_stm(s2, "r", gamma);

  std::vector<epi::Proc> subterms;
  collect_subterms(seq, subterms);
  auto contains = [&](const epi::Proc& needle) {
    for (const epi::Proc& sub : subterms)
      if (epi::alpha_eq(sub, needle)) return true;
    return false;
  };
  CHECK(contains(first));
  CHECK(contains(second));
}

TEST_CASE("decoding the final store") {
  Program p = W(kInc);
  CompilationUnit unit = compile(p);
  // not quiescent yet
  CHECK_THROWS_AS(decode_fields(unit.process, unit), DecodeError);

  epi::TauRun run = epi::run_tau(unit.process, epi::Strategy::Deterministic, 10000, 0);
  REQUIRE(run.quiescent);
  auto fields = decode_fields(run.final_state, unit);
  REQUIRE(fields.size() == 1);
  CHECK(fields.at({"A", "p"}) == Value{2LL});

  // agreement with the direct semantics
  Environments env = build_environments(p.classes);
  ExecResult direct = exec(env.envt, env.envs, EnvV{}, p.main);
  CHECK(*direct.envs.lookup("A")->lookup("p") == fields.at({"A", "p"}));
}

TEST_CASE("compiled programs stay safe along their runs") {
  // soundness through the correspondence: the compiled process of a
  // well-typed program never reaches a wrong state
  for (const char* text : {"main { skip }",
                           "main { var int x := 1 in x := x + 1 }", kInc}) {
    Program p = W(text);
    REQUIRE_FALSE(typecheck_program(p).has_value());
    CompilationUnit unit = compile(p);
    REQUIRE_FALSE(epi::typecheck_process(unit.tenv, unit.process).has_value());
    CHECK(epi::safe_bounded(unit.tenv, unit.process, 6));
    epi::Proc state = unit.process;
    CHECK(epi::now_safe(unit.tenv, state));
    epi::TauRun run = epi::run_tau(unit.process, epi::Strategy::Deterministic, 10000, 0);
    for (const epi::TauStep& step : run.steps) CHECK(epi::now_safe(unit.tenv, step.state));
    CHECK(run.quiescent);
  }
}

TEST_CASE("agreement holds across random schedules") {
  // confluence of the compiled protocol is expected, not assumed; a
  // seed-dependent verdict would be a finding
  Program p = W(kInc);
  for (std::uint64_t seed : {1, 2, 3, 4, 5})
    CHECK(epic::agree(p, 10000, seed, epi::Strategy::Random).verdict ==
          epic::AgreeVerdict::Match);
}

TEST_CASE("harness verdicts") {
  CHECK(epic::correspond(W(kInc)).verdict == epic::CorrespondVerdict::AgreePositive);
  CHECK(epic::agree(W(kInc), 10000, 0).verdict == epic::AgreeVerdict::Match);

  Program neg = W("interface IA { field p : int; method inc : proc(); }\n"
                  "class A : IA { field p := 0; method inc() { this.p := true } }\n"
                  "main { A::inc() }");
  CHECK(epic::correspond(neg).verdict == epic::CorrespondVerdict::AgreeNegative);

  Program loop = W("main { while true do skip }");
  CHECK(epic::agree(loop, 2000, 0).verdict == epic::AgreeVerdict::NonTerminating);

  CHECK_THROWS_AS(epic::agree(W("main { y := 1 }"), 100, 0), std::invalid_argument);
}
