// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria that specify exit codes drive the CLI binary itself.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "encode.hpp"
#include "epi_lts.hpp"
#include "epi_text.hpp"
#include "epi_types.hpp"
#include "fuzz.hpp"
#include "harness.hpp"
#include "wc_sem.hpp"
#include "wc_text.hpp"
#include "wc_types.hpp"

#ifndef EPIC_CORPUS_DIR
#define EPIC_CORPUS_DIR "tests/corpus"
#endif
#ifndef EPIC_CLI_PATH
#define EPIC_CLI_PATH "build/tools/epic"
#endif
#ifndef EPIC_LIB_DIR
#define EPIC_LIB_DIR "build/src"
#endif

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

int g_failures = 0;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void report(int n, bool pass, const std::string& what, double secs) {
  std::printf("%s: criterion %d (%s) [%.2fs]\n", pass ? "PASS" : "FAIL", n, what.c_str(), secs);
  if (!pass) ++g_failures;
}

struct CliResult {
  int exit_code;
  std::string output;
};

CliResult run_cli(const std::string& args) {
  std::string cmd = std::string("LD_LIBRARY_PATH=") + EPIC_LIB_DIR + " " + EPIC_CLI_PATH + " " +
                    args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, "popen failed"};
  std::string output;
  char buf[512];
  while (size_t n = fread(buf, 1, sizeof buf, pipe)) output.append(buf, n);
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, output};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<fs::path> corpus(const std::string& sub, const std::string& prefix) {
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(fs::path(EPIC_CORPUS_DIR) / sub)) {
    std::string name = entry.path().filename().string();
    if (name.rfind(prefix, 0) == 0 && entry.path().extension() == ".wc")
      out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

// 1. The worked subject-vector example: four typeable outputs, one forbidden
// composition, via CLI exit codes.
void criterion1() {
  auto start = Clock::now();
  fs::path dir = fs::path(EPIC_CORPUS_DIR) / "epi";
  std::string tenv = (dir / "ex42.tenv").string();
  bool ok = true;
  std::string why;
  for (const char* name : {"ex42_a.epi", "ex42_b.epi", "ex42_c.epi", "ex42_d.epi"}) {
    CliResult r = run_cli("check " + (dir / name).string() + " --types " + tenv);
    if (r.exit_code != 0) {
      ok = false;
      why = std::string(name) + " exited " + std::to_string(r.exit_code);
    }
  }
  CliResult bad = run_cli("check " + (dir / "ex42_bad.epi").string() + " --types " + tenv);
  if (bad.exit_code != 1 || bad.output.find("composition not permitted") == std::string::npos) {
    ok = false;
    why = "forbidden composition: exit " + std::to_string(bad.exit_code);
  }
  double secs = seconds_since(start);
  if (secs >= 1.0) ok = false;
  report(1, ok, "worked example typings" + (why.empty() ? "" : ": " + why), secs);
}

epic::FuzzConfig campaign_config() {
  epic::FuzzConfig config;
  config.count = 500;
  config.seed = 42;
  return config;
}

// 2. Safety: 500 generated well-typed terms are never wrong.
void criterion2() {
  auto start = Clock::now();
  epic::FuzzSummary s = epic::run_fuzz(campaign_config(), /*explore_depth=*/0);
  double secs = seconds_since(start);
  bool ok = s.cases == 500 && s.failures.empty() && secs < 60.0;
  if (!s.failures.empty()) std::cout << s.describe() << "\n";
  report(2, ok, "safety theorem, 500 cases", secs);
}

// 3+4. Subject reduction, label well-typedness, and bounded soundness over
// tau/output exploration to depth 10.
void criteria3and4() {
  auto start = Clock::now();
  epic::FuzzSummary s = epic::run_fuzz(campaign_config(), /*explore_depth=*/10);
  double secs = seconds_since(start);
  size_t sr = 0, sound = 0, other = 0;
  for (const epic::FuzzFailure& f : s.failures) {
    if (f.what == "subject-reduction" || f.what == "well-typed-labels")
      ++sr;
    else if (f.what == "soundness")
      ++sound;
    else
      ++other;
  }
  if (!s.failures.empty()) std::cout << s.describe() << "\n";
  report(3, sr == 0 && other == 0 && secs < 300.0,
         "subject reduction + well-typed labels, depth 10 (" +
             std::to_string(s.labels_checked) + " labels)",
         secs);
  report(4, sound == 0 && other == 0, "bounded soundness corollary", secs);
}

// 5. Weakening / strengthening / substitution, at least 200 instances each.
void criterion5() {
  auto start = Clock::now();
  epic::FuzzConfig config;
  config.count = 500;
  config.seed = 43;
  epic::LemmaSummary s = epic::run_lemma_checks(config);
  bool ok = s.weakening >= 200 && s.strengthening >= 200 && s.substitution >= 200 &&
            s.failures.empty();
  for (const epic::FuzzFailure& f : s.failures)
    std::cout << "  lemma failure " << f.what << ": " << f.detail << "\n";
  report(5, ok,
         "lemmata (weakening " + std::to_string(s.weakening) + ", strengthening " +
             std::to_string(s.strengthening) + ", substitution " +
             std::to_string(s.substitution) + ")",
         seconds_since(start));
}

// 6. Type correspondence over the checked-in corpus.
void criterion6() {
  auto start = Clock::now();
  std::vector<fs::path> wt = corpus("wc", "wt");
  std::vector<fs::path> bad = corpus("wc", "bad");
  size_t disagree = 0, untranslatable = 0, agree = 0;
  bool ok = wt.size() >= 15 && bad.size() >= 15;
  std::vector<fs::path> all = wt;
  all.insert(all.end(), bad.begin(), bad.end());
  for (const fs::path& f : all) {
    wc::Program prog = wc::parse_program(slurp(f));
    epic::CorrespondReport r = epic::correspond(prog);
    switch (r.verdict) {
      case epic::CorrespondVerdict::Disagree:
        ++disagree;
        std::cout << "  DISAGREE: " << f.filename().string() << " — " << r.detail << "\n";
        break;
      case epic::CorrespondVerdict::Untranslatable: ++untranslatable; break;
      default: ++agree; break;
    }
  }
  double secs = seconds_since(start);
  ok = ok && disagree == 0 && secs < 30.0;
  report(6, ok,
         "type correspondence over " + std::to_string(all.size()) + " programs (" +
             std::to_string(agree) + " agree, " + std::to_string(untranslatable) +
             " untranslatable, " + std::to_string(disagree) + " disagree)",
         secs);
}

// 7. WC subject reduction on every terminating well-typed corpus program.
void criterion7() {
  auto start = Clock::now();
  size_t failures = 0, checked = 0;
  for (const fs::path& f : corpus("wc", "wt")) {
    wc::Program prog = wc::parse_program(slurp(f));
    if (wc::typecheck_program(prog)) {
      ++failures;
      continue;
    }
    wc::WcTypeEnv gamma = wc::build_gamma(prog);
    wc::Environments env = wc::build_environments(prog.classes);
    try {
      wc::ExecResult r = wc::exec(env.envt, env.envs, wc::EnvV{}, prog.main);
      ++checked;
      if (wc::typecheck_envs(gamma, env.envt, r.envs, r.envv)) {
        ++failures;
        std::cout << "  final environments ill-typed for " << f.filename().string() << "\n";
      }
    } catch (const std::exception& e) {
      ++failures;
      std::cout << "  " << f.filename().string() << ": " << e.what() << "\n";
    }
  }
  report(7, failures == 0 && checked >= 15,
         "WC subject reduction on " + std::to_string(checked) + " programs",
         seconds_since(start));
}

// 8. Operational agreement on at least 20 terminating programs.
void criterion8() {
  auto start = Clock::now();
  size_t matched = 0, total = 0;
  std::string why;
  for (const fs::path& f : corpus("wc", "wt")) {
    ++total;
    epic::AgreeReport r = epic::agree(wc::parse_program(slurp(f)), 10000, 0);
    if (r.verdict == epic::AgreeVerdict::Match) {
      ++matched;
    } else {
      why += " " + f.filename().string() + "=" + epic::to_string(r.verdict);
    }
  }
  double secs = seconds_since(start);
  bool ok = total >= 20 && matched == total && secs < 120.0;
  report(8, ok,
         "operational agreement " + std::to_string(matched) + "/" + std::to_string(total) + why,
         secs);
}

// 9. Reference-cell protocol micro-tests by exhaustive exploration.
void criterion9() {
  auto start = Clock::now();
  bool ok = true;
  auto unique_quiescent = [&](const epi::Proc& p, const std::string& expected_offer) {
    std::vector<epi::Proc> finals;
    for (const epi::Proc& s : epi::explore_tau(p, 30)) {
      bool quiet = true;
      for (const epi::Transition& t : epi::transitions(s, {}))
        if (std::holds_alternative<epi::LabelTau>(t.label)) quiet = false;
      if (quiet) finals.push_back(s);
    }
    if (finals.size() != 1) return false;
    for (const epi::Transition& t : epi::transitions(finals[0], {}))
      if (epi::print_label(t.label) == expected_offer) return true;
    return false;
  };

  epi::BaseType ref_int = epi::BaseType::type_name("$Ref_int");
  // new cell holds its initial value
  epi::Proc fresh = wc::loc_new(
      "x", ref_int, epi::ex_val(epi::val_int(5)),
      wc::loc_read({epi::val_name("x")}, "y",
                   epi::p_out({epi::val_name("z")}, {epi::ex_name("y")}, epi::p_nil())));
  ok = ok && unique_quiescent(fresh, "z!(5)");

  // read restores the cell: two sequenced reads both see 5
  epi::Proc twice = wc::loc_new(
      "x", ref_int, epi::ex_val(epi::val_int(5)),
      wc::loc_read({epi::val_name("x")}, "y1",
                   wc::loc_read({epi::val_name("x")}, "y2",
                                epi::p_out({epi::val_name("z")},
                                           {epi::ex_op("+", {epi::ex_name("y1"),
                                                             epi::ex_name("y2")})},
                                           epi::p_nil()))));
  ok = ok && unique_quiescent(twice, "z!(10)");

  // write overwrites: cell 5, write 7, read 7
  epi::Proc readout = wc::loc_read(
      {epi::val_name("x")}, "y",
      epi::p_out({epi::val_name("z")}, {epi::ex_name("y")}, epi::p_nil()));
  epi::Proc sequenced = epi::p_in({epi::val_name("s")}, {}, std::move(readout));
  epi::Proc write = wc::loc_write({epi::val_name("x")}, "w", epi::ex_val(epi::val_int(7)),
                                  epi::p_out({epi::val_name("s")}, {}, epi::p_nil()));
  epi::Proc program = wc::loc_new("x", ref_int, epi::ex_val(epi::val_int(5)),
                                  epi::p_par(std::move(write), std::move(sequenced)));
  ok = ok && unique_quiescent(program, "z!(7)");

  report(9, ok, "reference-cell protocol micro-tests", seconds_since(start));
}

// 10. Round-trip: 1000 generated epi terms and the full WC corpus.
void criterion10() {
  auto start = Clock::now();
  size_t failures = 0;
  std::mt19937_64 rng(1234);
  epic::FuzzConfig config;
  for (int i = 0; i < 1000; ++i) {
    epic::FuzzCase c = epic::generate_case(rng, config);
    try {
      if (!epi::alpha_eq(epi::parse_process(epi::print_process(c.process)), c.process))
        ++failures;
    } catch (const std::exception&) {
      ++failures;
    }
  }
  for (const char* prefix : {"wt", "bad"}) {
    for (const fs::path& f : corpus("wc", prefix)) {
      wc::Program p = wc::parse_program(slurp(f));
      std::string printed = wc::print_program(p);
      if (wc::print_program(wc::parse_program(printed)) != printed) {
        ++failures;
        std::cout << "  round-trip failed for " << f.filename().string() << "\n";
      }
    }
  }
  report(10, failures == 0, "parse/print round trips (1000 terms + WC corpus)",
         seconds_since(start));
}

} // namespace

int main() {
  criterion1();
  criterion2();
  criteria3and4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  if (g_failures) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
