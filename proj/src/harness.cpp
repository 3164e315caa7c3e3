#include "harness.hpp"

#include "epi_lts.hpp"
#include "epi_types.hpp"
#include "wc_sem.hpp"
#include "wc_types.hpp"

namespace epic {

const char* to_string(CorrespondVerdict v) {
  switch (v) {
    case CorrespondVerdict::AgreePositive: return "AGREE-POSITIVE";
    case CorrespondVerdict::AgreeNegative: return "AGREE-NEGATIVE";
    case CorrespondVerdict::Disagree: return "DISAGREE";
    default: return "UNTRANSLATABLE";
  }
}

const char* to_string(AgreeVerdict v) {
  switch (v) {
    case AgreeVerdict::Match: return "MATCH";
    case AgreeVerdict::Mismatch: return "MISMATCH";
    default: return "NONTERMINATING";
  }
}

CorrespondReport correspond(const wc::Program& program) {
  CorrespondReport report;
  std::optional<wc::WcTypeError> wc_err = wc::typecheck_program(program);
  report.wc_ok = !wc_err;
  if (wc_err) report.detail = std::string("wc: ") + wc_err->what();

  wc::CompilationUnit unit;
  try {
    unit = wc::compile(program);
  } catch (const wc::Untranslatable& e) {
    report.verdict = CorrespondVerdict::Untranslatable;
    report.detail += std::string(report.detail.empty() ? "" : "; ") + e.what();
    return report;
  }

  std::vector<std::string> wf = check_wellformed(unit.tenv);
  std::optional<epi::TypeError> epi_err;
  if (!wf.empty()) {
    epi_err = epi::TypeError("well-formedness", "tenv", wf.front());
  } else {
    epi_err = epi::typecheck_process(unit.tenv, unit.process);
  }
  report.epi_ok = !epi_err;
  if (epi_err) report.detail += std::string(report.detail.empty() ? "" : "; ") + "epi: " +
                                epi_err->what();

  if (report.wc_ok == *report.epi_ok)
    report.verdict = report.wc_ok ? CorrespondVerdict::AgreePositive
                                  : CorrespondVerdict::AgreeNegative;
  else
    report.verdict = CorrespondVerdict::Disagree;
  return report;
}

AgreeReport agree(const wc::Program& program, size_t max_steps, std::uint64_t seed,
                  epi::Strategy strategy, std::uint64_t wc_fuel) {
  if (std::optional<wc::WcTypeError> err = wc::typecheck_program(program))
    throw std::invalid_argument(std::string("program is not well-typed: ") + err->what());

  AgreeReport report;

  // direct execution
  wc::Environments env = wc::build_environments(program.classes);
  wc::ExecResult direct;
  try {
    direct = wc::exec(env.envt, env.envs, wc::EnvV{}, program.main, wc_fuel);
  } catch (const wc::FuelExhausted&) {
    report.verdict = AgreeVerdict::NonTerminating;
    report.detail = "direct execution exhausted its fuel";
    return report;
  } catch (const wc::StuckError& e) {
    report.verdict = AgreeVerdict::NonTerminating;
    report.detail = std::string("direct execution got stuck, ") + e.what();
    return report;
  }
  report.wc_store = wc::format_store(direct.envs);

  // compiled execution
  wc::CompilationUnit unit = wc::compile(program);
  epi::TauRun run = epi::run_tau(unit.process, strategy, max_steps, seed);
  if (!run.quiescent) {
    report.verdict = AgreeVerdict::NonTerminating;
    report.detail = "compiled process still had tau steps after " +
                    std::to_string(max_steps) + " steps";
    return report;
  }

  std::map<std::pair<std::string, std::string>, wc::Value> decoded;
  try {
    decoded = wc::decode_fields(run.final_state, unit);
  } catch (const wc::DecodeError& e) {
    report.verdict = AgreeVerdict::Mismatch;
    report.detail = std::string("decoding failed: ") + e.what();
    return report;
  }

  std::map<std::pair<std::string, std::string>, wc::Value> expected;
  for (const auto& [cls, envf] : direct.envs.entries)
    for (const auto& [field, value] : envf.entries) expected[{cls, field}] = value;

  wc::EnvS decoded_store;
  for (const auto& [key, value] : decoded) {
    if (!decoded_store.contains(key.first)) decoded_store.entries.emplace_back(key.first, wc::EnvF{});
    for (auto& [cls, envf] : decoded_store.entries)
      if (cls == key.first) envf.entries.emplace_back(key.second, value);
  }
  report.epi_store = wc::format_store(decoded_store);

  if (decoded == expected) {
    report.verdict = AgreeVerdict::Match;
  } else {
    report.verdict = AgreeVerdict::Mismatch;
    report.detail = "final field stores differ";
  }
  return report;
}

} // namespace epic
