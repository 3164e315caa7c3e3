// epic - command line front end. Talks to the core exclusively through the
// shared library's C interface.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "epic/epic.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitUsage = 2;

struct StringOut {
  char* value = nullptr;
  ~StringOut() { epic_string_free(value); }
  std::string str() const { return value ? value : ""; }
};

int fail_usage(const std::string& msg) {
  std::cerr << "epic: " << msg << "\n";
  return kExitUsage;
}

bool read_file(const std::string& path, std::string& out, std::string& err) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    err = "cannot open " + path;
    return false;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  out = buf.str();
  return true;
}

struct ProcessHandle {
  epic_process* p = nullptr;
  ~ProcessHandle() { epic_process_free(p); }
};
struct TypeEnvHandle {
  epic_typeenv* g = nullptr;
  ~TypeEnvHandle() { epic_typeenv_free(g); }
};
struct ProgramHandle {
  epic_wcprogram* p = nullptr;
  ~ProgramHandle() { epic_wcprogram_free(p); }
};
struct UnitHandle {
  epic_unit* u = nullptr;
  ~UnitHandle() { epic_unit_free(u); }
};

int load_process(const std::string& path, ProcessHandle& h) {
  std::string text, err;
  if (!read_file(path, text, err)) return fail_usage(err);
  StringOut perr;
  if (epic_process_parse(text.c_str(), &h.p, &perr.value) != EPIC_OK)
    return fail_usage(path + ": " + perr.str());
  return -1;
}

int load_typeenv(const std::string& path, TypeEnvHandle& h) {
  std::string text, err;
  if (!read_file(path, text, err)) return fail_usage(err);
  StringOut perr;
  if (epic_typeenv_parse(text.c_str(), &h.g, &perr.value) != EPIC_OK)
    return fail_usage(path + ": " + perr.str());
  return -1;
}

int load_program(const std::string& path, ProgramHandle& h) {
  std::string text, err;
  if (!read_file(path, text, err)) return fail_usage(err);
  StringOut perr;
  if (epic_wcprogram_parse(text.c_str(), &h.p, &perr.value) != EPIC_OK)
    return fail_usage(path + ": " + perr.str());
  StringOut warn;
  warn.value = epic_wcprogram_warnings(h.p);
  if (!warn.str().empty()) std::cerr << warn.str();
  return -1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"epi-calculus workbench: checkers, runners, and the WC compiler"};
  app.require_subcommand(1);

  std::string input, types_path, out_base = "out";
  size_t max_steps = 10000;
  size_t depth = 50;
  std::uint64_t seed = 0;
  std::string strategy = "deterministic";
  std::string format = "text";
  size_t fuzz_count = 500, fuzz_pool = 4, fuzz_term_depth = 4, fuzz_vec = 3;

  auto add_common = [&](CLI::App* cmd, bool with_types) {
    cmd->add_option("file", input, "input file")->required();
    if (with_types) cmd->add_option("--types", types_path, "type environment (.tenv)");
  };

  CLI::App* check = app.add_subcommand("check", "type-check an epi process against a Gamma");
  add_common(check, true);

  CLI::App* step = app.add_subcommand("step", "list the transitions of an epi process");
  add_common(step, false);
  step->add_option("--format", format, "text|json");

  CLI::App* run = app.add_subcommand("run", "run tau steps of an epi process");
  add_common(run, false);
  run->add_option("--max-steps", max_steps, "step budget (default 10000)");
  run->add_option("--seed", seed, "seed for the random strategy");
  run->add_option("--strategy", strategy, "deterministic|random");
  run->add_option("--format", format, "text|json");

  CLI::App* wc_check = app.add_subcommand("wc-check", "type-check a WC program");
  add_common(wc_check, false);

  CLI::App* wc_run = app.add_subcommand("wc-run", "run a WC program, print the field store");
  add_common(wc_run, false);
  wc_run->add_option("--max-steps", max_steps, "big-step fuel (default 1000000)");

  CLI::App* compile = app.add_subcommand("compile", "compile WC to epi");
  add_common(compile, false);
  compile->add_option("-o,--output", out_base, "output base path (default 'out')");

  CLI::App* correspond =
      app.add_subcommand("correspond", "compare WC and epi type verdicts for a program");
  add_common(correspond, false);

  CLI::App* agree = app.add_subcommand(
      "agree", "compare direct execution with the compiled process's tau-run");
  add_common(agree, false);
  agree->add_option("--max-steps", max_steps, "tau budget (default 10000)");
  agree->add_option("--seed", seed, "seed (random strategy variants)");

  CLI::App* fuzz = app.add_subcommand("fuzz", "generative soundness campaign");
  fuzz->add_option("--count", fuzz_count, "number of generated cases (default 500)");
  fuzz->add_option("--seed", seed, "generator seed");
  fuzz->add_option("--depth", depth, "exploration depth (default 10 for fuzz)");
  fuzz->add_option("--term-depth", fuzz_term_depth, "generated term depth (default 4)");
  fuzz->add_option("--max-vec", fuzz_vec, "max subject vector length (default 3)");
  fuzz->add_option("--pool", fuzz_pool, "type-name pool size (default 4)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*check) {
    if (types_path.empty()) return fail_usage("check needs --types");
    ProcessHandle p;
    if (int rc = load_process(input, p); rc >= 0) return rc;
    TypeEnvHandle g;
    if (int rc = load_typeenv(types_path, g); rc >= 0) return rc;
    StringOut err;
    if (epic_typeenv_wellformed(g.g, &err.value) != EPIC_OK) {
      std::cerr << "ill-formed type environment:\n" << err.str();
      return kExitNegative;
    }
    StringOut terr;
    if (epic_check_process(g.g, p.p, &terr.value) != EPIC_OK) {
      std::cerr << terr.str() << "\n";
      return kExitNegative;
    }
    std::cout << "well-typed\n";
    return kExitOk;
  }

  if (*step) {
    ProcessHandle p;
    if (int rc = load_process(input, p); rc >= 0) return rc;
    StringOut out, err;
    if (epic_step(p.p, format == "json" ? 1 : 0, &out.value, &err.value) != EPIC_OK)
      return fail_usage(err.str());
    std::cout << out.str();
    return kExitOk;
  }

  if (*run) {
    ProcessHandle p;
    if (int rc = load_process(input, p); rc >= 0) return rc;
    StringOut trace, err;
    int quiescent = 0;
    int strat = strategy == "random" ? 1 : 0;
    if (epic_run_tau(p.p, strat, max_steps, seed, format == "json" ? 1 : 0, &trace.value,
                     nullptr, &quiescent, &err.value) != EPIC_OK)
      return fail_usage(err.str());
    std::cout << trace.str();
    return kExitOk;
  }

  if (*wc_check) {
    ProgramHandle p;
    if (int rc = load_program(input, p); rc >= 0) return rc;
    StringOut err;
    if (epic_wc_check(p.p, &err.value) != EPIC_OK) {
      std::cerr << err.str() << "\n";
      return kExitNegative;
    }
    std::cout << "well-typed\n";
    return kExitOk;
  }

  if (*wc_run) {
    ProgramHandle p;
    if (int rc = load_program(input, p); rc >= 0) return rc;
    StringOut out, err;
    epic_status st = epic_wc_run(p.p, wc_run->count("--max-steps") ? max_steps : 0, &out.value,
                                 &err.value);
    if (st != EPIC_OK) {
      std::cerr << err.str() << "\n";
      return kExitNegative;
    }
    std::cout << out.str();
    return kExitOk;
  }

  if (*compile) {
    ProgramHandle p;
    if (int rc = load_program(input, p); rc >= 0) return rc;
    UnitHandle u;
    StringOut err;
    if (epic_compile(p.p, &u.u, &err.value) != EPIC_OK) {
      std::cerr << err.str() << "\n";
      return kExitNegative;
    }
    std::string base = out_base;
    if (base.size() > 4 && base.substr(base.size() - 4) == ".epi")
      base = base.substr(0, base.size() - 4);
    ProcessHandle proc;
    proc.p = epic_unit_process(u.u);
    TypeEnvHandle env;
    env.g = epic_unit_typeenv(u.u);
    StringOut ptext, gtext, dtext;
    ptext.value = epic_process_print(proc.p);
    gtext.value = epic_typeenv_print(env.g);
    dtext.value = epic_unit_decoder_json(u.u);
    std::ofstream(base + ".epi") << ptext.str() << "\n";
    std::ofstream(base + ".tenv") << gtext.str();
    std::ofstream(base + ".map.json") << dtext.str() << "\n";
    std::cout << base << ".epi\n" << base << ".tenv\n" << base << ".map.json\n";
    return kExitOk;
  }

  if (*correspond) {
    ProgramHandle p;
    if (int rc = load_program(input, p); rc >= 0) return rc;
    int verdict = 0;
    StringOut report;
    if (epic_correspond(p.p, &verdict, &report.value) != EPIC_OK)
      return fail_usage(report.str());
    std::cout << report.str();
    if (verdict == EPIC_CORRESPOND_DISAGREE) return kExitNegative;
    if (verdict == EPIC_CORRESPOND_UNTRANSLATABLE)
      std::cerr << "warning: program excluded from the correspondence account\n";
    return kExitOk;
  }

  if (*agree) {
    ProgramHandle p;
    if (int rc = load_program(input, p); rc >= 0) return rc;
    int verdict = 0;
    StringOut report, err;
    if (epic_agree(p.p, max_steps, seed, &verdict, &report.value, &err.value) != EPIC_OK)
      return fail_usage(err.str());
    std::cout << report.str();
    return verdict == EPIC_AGREE_MATCH ? kExitOk : kExitNegative;
  }

  if (*fuzz) {
    size_t failures = 0;
    StringOut summary;
    size_t explore = fuzz->count("--depth") ? depth : 10;
    if (epic_fuzz(fuzz_count, seed, fuzz_term_depth, fuzz_vec, fuzz_pool, explore, &failures,
                  &summary.value) != EPIC_OK)
      return fail_usage(summary.str());
    std::cout << summary.str() << "\n";
    size_t lemma_failures = 0;
    StringOut lemmas;
    if (epic_lemma_checks(fuzz_count < 200 ? fuzz_count : 200, seed, &lemma_failures,
                          &lemmas.value) != EPIC_OK)
      return fail_usage(lemmas.str());
    std::cout << lemmas.str() << "\n";
    return failures + lemma_failures == 0 ? kExitOk : kExitNegative;
  }

  return fail_usage("no command");
}
