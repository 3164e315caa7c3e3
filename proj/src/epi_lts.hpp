#ifndef EPIC_EPI_LTS_HPP
#define EPIC_EPI_LTS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "epi_ast.hpp"

namespace epi {

struct LabelTau {};
struct LabelRecv {
  std::vector<Value> subject;
  std::vector<Value> objects;
};
struct LabelSend {
  std::vector<Value> subject;
  std::vector<Binding> extruded; // occur among objects, never in the subject
  std::vector<Value> objects;
};
using Label = std::variant<LabelTau, LabelRecv, LabelSend>;

struct Transition {
  Label label;
  Proc target;
};

std::string print_label(const Label& l);

// Key identifying a transition up to alpha-renaming of extruded names.
std::string transition_key(const Transition& t);

// Early transitions of p. Input labels are instantiated at the vectors in
// `receivable`; tau-synthesis uses exactly the values emitted by matching
// outputs and needs no bound. Guard or object evaluation errors make the
// offending derivation contribute nothing and are reported via `diags`.
std::vector<Transition> transitions(const Proc& p,
                                    const std::vector<std::vector<Value>>& receivable,
                                    std::vector<std::string>* diags = nullptr);

enum class Strategy { Deterministic, Random };

struct TauStep {
  Proc state; // state after the step
};
struct TauRun {
  std::vector<TauStep> steps;
  Proc final_state;
  bool quiescent; // no tau enabled at final_state
};

TauRun run_tau(const Proc& p, Strategy strategy, size_t max_steps, std::uint64_t seed);

struct StateExplosion : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr size_t kDefaultFrontierCap = 100000;

// Resolves a requested cap: 0 means the EPIC_FRONTIER_CAP environment
// variable, or the built-in default.
size_t effective_frontier_cap(size_t requested);

// BFS over tau steps; returned states are alpha-canonicalised and
// deduplicated. Throws StateExplosion past the frontier cap (0 = default).
std::vector<Proc> explore_tau(const Proc& p, size_t depth, size_t frontier_cap = 0);

} // namespace epi

#endif
