#ifndef EPIC_FUZZ_HPP
#define EPIC_FUZZ_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "epi_types.hpp"

namespace epic {

struct FuzzConfig {
  size_t count = 500;
  std::uint64_t seed = 1;
  size_t max_depth = 4; // process term depth
  size_t max_vec = 3;   // longest subject vector considered
  size_t pool = 4;      // number of generated type names
  // Test-only mutation hook: shared by the checker and the generator, so a
  // weakened rule produces terms the weakened checker accepts.
  epi::CheckOptions check_options{};
};

struct FuzzCase {
  epi::TypeEnv gamma;
  epi::Proc process;
};

// Builds a typing derivation and reads off the term: the result passes
// check_wellformed and typecheck_process by construction.
FuzzCase generate_case(std::mt19937_64& rng, const FuzzConfig& config);

struct FuzzFailure {
  size_t index;
  std::string what;
  std::string detail;
};

struct FuzzSummary {
  size_t cases = 0;
  size_t states_checked = 0;
  size_t labels_checked = 0;
  std::vector<FuzzFailure> failures;
  std::string describe() const;
};

// Safety + subject reduction + label well-typedness + bounded soundness over
// generated cases, exploring tau and output transitions to `explore_depth`.
FuzzSummary run_fuzz(const FuzzConfig& config, size_t explore_depth = 10,
                     size_t max_states_per_case = 400);

struct LemmaSummary {
  size_t weakening = 0;
  size_t strengthening = 0;
  size_t substitution = 0;
  std::vector<FuzzFailure> failures;
};

// Weakening / strengthening (verdict preservation under unused bindings) and
// substitution (well-typed substitutions preserve typability).
LemmaSummary run_lemma_checks(const FuzzConfig& config);

} // namespace epic

#endif
