#ifndef EPIC_HARNESS_HPP
#define EPIC_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "encode.hpp"
#include "wc_ast.hpp"
#include "wc_sem.hpp"

namespace epic {

enum class CorrespondVerdict { AgreePositive, AgreeNegative, Disagree, Untranslatable };

const char* to_string(CorrespondVerdict v);

struct CorrespondReport {
  CorrespondVerdict verdict;
  bool wc_ok = false;
  std::optional<bool> epi_ok; // unset when untranslatable
  std::string detail;
};

// Runs the WC checker, translates (also for ill-typed programs, when the
// translation is defined), runs the epi checker on the result and compares
// the verdicts.
CorrespondReport correspond(const wc::Program& program);

enum class AgreeVerdict { Match, Mismatch, NonTerminating };

const char* to_string(AgreeVerdict v);

struct AgreeReport {
  AgreeVerdict verdict;
  std::string detail;
  std::string wc_store;  // "A.p = v" lines from direct execution
  std::string epi_store; // decoded from the quiescent compiled state
};

// Compares direct big-step execution against the tau-run of the compiled
// process. Throws std::invalid_argument if the program is not well-typed.
AgreeReport agree(const wc::Program& program, size_t max_steps, std::uint64_t seed,
                  epi::Strategy strategy = epi::Strategy::Deterministic,
                  std::uint64_t wc_fuel = wc::kDefaultFuel);

} // namespace epic

#endif
