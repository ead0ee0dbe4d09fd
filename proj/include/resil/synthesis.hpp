#pragma once

#include <optional>
#include <string>
#include <vector>

#include "resil/breaking_point.hpp"
#include "resil/model.hpp"
#include "resil/objective.hpp"
#include "resil/strategy.hpp"

namespace resil {

enum class Semantics { Expected, WorstCase };

enum class SynthesisMethod { LevelUnfolding, GadgetSsp, MecRemoval, ExactEnumeration };

struct SynthesisOptions {
  // Worst-case transient search ceiling; -1 searches until the level breaks,
  // falling back to the disturbance-action count at an exact threshold
  // boundary and to an internal ceiling otherwise.
  int k_max = -1;
  // Attach per-level certificate programs over the stopping-normalized game.
  bool emit_qp = false;
  Rational qp_epsilon = Rational(1, 1000);
  long budget = 1000000;
  double precision = 1e-8;
};

// Everything here is exact; approximations appear only inside diagnostics.
struct SynthesisReport {
  // Best breaking point any controller strategy can secure.
  BreakingPoint<Rational> breaking_point;
  std::optional<Strategy> strategy;
  SynthesisMethod method = SynthesisMethod::LevelUnfolding;
  // Violation value of the unlimited-disturbance gadget game at the initial
  // distribution.
  Rational gate;
  // Reach value of the disturbance-free silent region (frequency synthesis).
  Rational silent_gate;
  // Worst-case transient: violation value per disturbance budget level.
  std::vector<Rational> level_values;
  std::vector<std::string> qp_texts;
  // Component bookkeeping for the frequency and expected cases.
  std::vector<std::vector<int>> components;
  std::vector<Rational> frequencies;
  long enumerated = 0;
  std::string diagnostic;
};

// Largest k such that some controller survives every disturber using at most
// k disturbances, via the budget-unfolded games; the synthesized strategy is
// step-counting with counter k. Reports unbreakable when even the
// unlimited-disturbance gadget game cannot break the best controller.
SynthesisReport synthesize_worst_transient(const Model& game, const Objective& phi,
                                           const SynthesisOptions& options = {});

// Worst-case long-run disturbance frequency the best controller can force on
// any breaking disturber. Only defined when no finite transient breaking
// point exists: throws PreconditionViolated when the silent-region reach
// value strictly exceeds the violation threshold (safety: when the objective
// is breakable at all).
SynthesisReport synthesize_worst_frequency(const Model& game, const Objective& phi,
                                           const SynthesisOptions& options = {});

// Largest expected disturbance count (transient) or expected long-run
// frequency the best controller can force, via the single-level gadget game:
// a constrained shortest-path problem into the freely-stayable region when
// one exists, otherwise into the component quotient.
SynthesisReport synthesize_expected(const Model& game, const Objective& phi,
                                    const SynthesisOptions& options = {});

// Ground-truth enumeration: evaluates every pure controller and returns the
// best breaking point. Memoryless when k_max is negative; otherwise
// step-counting over counter values 0..k_max. Exponential in the number of
// decision cells.
SynthesisReport oracle_enumerate(const Model& game, const Objective& phi, Semantics semantics,
                                 const SynthesisOptions& options = {});

}  // namespace resil
