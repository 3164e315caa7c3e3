#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "epi_text.hpp"
#include "epi_types.hpp"
#include "fuzz.hpp"

using epic::FuzzConfig;

TEST_CASE("generated cases are well-typed by construction") {
  std::mt19937_64 rng(3);
  FuzzConfig config;
  for (int i = 0; i < 50; ++i) {
    epic::FuzzCase c = epic::generate_case(rng, config);
    CAPTURE(epi::print_process(c.process));
    CHECK(epi::check_wellformed(c.gamma).empty());
    CHECK_FALSE(epi::typecheck_process(c.gamma, c.process).has_value());
  }
}

TEST_CASE("the generator is reproducible") {
  FuzzConfig config;
  std::mt19937_64 a(99), b(99);
  for (int i = 0; i < 20; ++i) {
    epic::FuzzCase ca = epic::generate_case(a, config);
    epic::FuzzCase cb = epic::generate_case(b, config);
    CHECK(epi::print_process(ca.process) == epi::print_process(cb.process));
    CHECK(epi::print_typeenv(ca.gamma) == epi::print_typeenv(cb.gamma));
  }
}

TEST_CASE("typechecking is invariant under alpha renaming") {
  std::mt19937_64 rng(14);
  FuzzConfig config;
  for (int i = 0; i < 80; ++i) {
    epic::FuzzCase c = epic::generate_case(rng, config);
    bool direct = !epi::typecheck_process(c.gamma, c.process).has_value();
    bool renamed = !epi::typecheck_process(c.gamma, epi::canonical(c.process)).has_value();
    CHECK(direct == renamed);
  }
}

TEST_CASE("theorem campaign on a small budget") {
  FuzzConfig config;
  config.count = 60;
  config.seed = 5;
  epic::FuzzSummary summary = epic::run_fuzz(config, 6);
  INFO(summary.describe());
  CHECK(summary.cases == 60);
  CHECK(summary.failures.empty());
  CHECK(summary.labels_checked > 0);
}

TEST_CASE("lemma checks on a small budget") {
  FuzzConfig config;
  config.count = 100;
  config.seed = 6;
  epic::LemmaSummary summary = epic::run_lemma_checks(config);
  CHECK(summary.weakening == 100);
  CHECK(summary.strengthening > 0);
  CHECK(summary.substitution > 0);
  CHECK(summary.failures.empty());
}

TEST_CASE("a weakened output rule is caught by the campaign") {
  // dropping the object-type premise of the output rule must surface as
  // error-predicate counterexamples well within the default budget
  FuzzConfig mutated;
  mutated.count = 500;
  mutated.seed = 7;
  mutated.check_options.skip_out_object_check = true;
  epic::FuzzSummary summary = epic::run_fuzz(mutated, 2);
  CHECK(!summary.failures.empty());
}
