#pragma once

#include <optional>
#include <string>
#include <vector>

#include "resil/breaking_point.hpp"
#include "resil/induced.hpp"
#include "resil/mcmp.hpp"
#include "resil/mec.hpp"
#include "resil/model.hpp"
#include "resil/objective.hpp"
#include "resil/reach.hpp"
#include "resil/strategy.hpp"

namespace resil {

// Case labels of the evaluation algorithms. Reachability objectives split
// three ways on how much violation the disturber can force: enough while
// eventually staying silent (Case1, finite transient count), not even with
// every disturbance-reachable end component (Case2, unbreakable), or only by
// disturbing forever (Case3, frequency value). Boundary marks the knife edge
// where the unlimited-disturbance violation value equals the threshold
// exactly. Safety objectives split two ways.
enum class EvalCase {
  Case1,
  Case2,
  Case3,
  Boundary,
  SafetyBreak,
  SafetySafe,
};

const char* to_string(EvalCase value);

struct EvalOptions {
  NumericMode mode = NumericMode::Exact;
  double precision = 1e-8;
  long budget = 1000000;
};

struct EvalReport {
  BreakingPoint<Rational> breaking_point;
  EvalCase case_taken = EvalCase::Case2;
  // Breaking adversary and disturber, on the original model. Extracted for
  // memoryless controllers (and step-counting ones whose memory fits under
  // the breaking level); absent otherwise, with a note in `diagnostic`.
  std::optional<Strategy> witness_adversary;
  std::optional<Strategy> witness_disturber;

  // Induced one-player view the analysis ran on (target states absorbed).
  Induced induced;
  // Violation target inside the induced model: the silent core for
  // reachability objectives, the bad states for safety.
  std::vector<int> violation_target;
  // Initial-weighted maximal probability of reaching the violation target
  // with unlimited disturbances.
  Rational reach_target;
  // End components of the non-goal region, their minimal stationary
  // disturbance frequencies, and the reach value of their union (filled for
  // reachability objectives that pass the finite-case gate unbroken).
  std::vector<std::vector<int>> components;
  std::vector<Rational> frequencies;
  Rational reach_components;

  // Initial-weighted violation value per disturbance level, and the full
  // per-state vectors (index = level), for as many levels as were solved.
  std::vector<Rational> level_values;
  std::vector<std::vector<Rational>> level_vectors;

  // Constrained-cost solve behind a finite expected value.
  std::optional<McmpResult> mcmp;

  std::string diagnostic;
  NumericMode mode = NumericMode::Exact;
};

// Expected breaking point of a Player-1 strategy: the least expected number
// of disturbances an adversary and disturber need to push the violation
// probability to the threshold, or a long-run frequency when no finite
// expectation suffices.
EvalReport expected_breaking_point(const Model& model, const Objective& phi,
                                   const Strategy& pi, const EvalOptions& options = {});

// Worst-case breaking point: disturbance counts are bounded almost surely
// instead of in expectation.
EvalReport worst_case_breaking_point(const Model& model, const Objective& phi,
                                     const Strategy& pi, const EvalOptions& options = {});

// Level-indexed reachability LPs over an induced MDP. Level i bounds normal
// actions by level-i values and disturbance actions by the frozen
// level-(i-1) values, so its optimum is the maximal probability of reaching
// `targets` using at most i disturbances. Solves levels 0..k, stopping at
// the first whose initial-weighted value the objective calls broken.
struct TransientLevels {
  std::optional<int> level;
  std::vector<Rational> initial_values;
  std::vector<std::vector<Rational>> vectors;
};

TransientLevels transient_iterative_lp(const Model& induced, const std::vector<int>& targets,
                                       const Objective& phi, int k);

// Worst-case disturbance frequency over an induced MDP: `pool` holds the end
// components of the non-goal region with `silent` the zero-frequency core.
// Discards the most expensive component (largest minimal stay frequency,
// ties by state set) while the remaining family still lets the adversary
// force breaking mass into it; the last discarded frequency is the answer.
// Requires the full family to break and `silent` alone not to; throws
// PreconditionViolated otherwise.
struct FrequencyReport {
  Rational value;
  std::vector<std::vector<int>> components;
  std::vector<Rational> frequencies;
  // Pool indices of the final breaking family and of the component whose
  // removal dropped the reach value below the threshold.
  std::vector<int> kept;
  int critical = -1;
};

FrequencyReport worst_case_frequency(const Model& induced, const std::vector<int>& goal,
                                     const std::vector<int>& silent,
                                     const std::vector<EndComponent>& pool,
                                     const Objective& phi);

}  // namespace resil
