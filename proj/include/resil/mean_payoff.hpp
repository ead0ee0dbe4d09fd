#pragma once

#include <vector>

#include "resil/lp.hpp"
#include "resil/mcmp.hpp"
#include "resil/mec.hpp"
#include "resil/model.hpp"
#include "resil/strategy.hpp"

namespace resil {

struct MeanPayoffResult {
  Rational value;
  // Stay mixing per state (indexed like the model; empty outside the
  // component). States the optimal stationary flow never visits route toward
  // its support through kept actions.
  std::vector<Choice> stay;
  LinearProgram lp;
};

// Minimum long-run average cost of remaining inside the component forever.
// `time` weights steps per state (default 1 everywhere); the value is cost
// per unit of time, so zero-weight gadget hops do not dilute the average.
// With opponent_only, Player-1-owned member states act adversarially: their
// kept-action assignments are enumerated, each leaving a pure minimization
// for the remaining choices, and the worst (largest) result is returned.
MeanPayoffResult min_mean_payoff_mec(const Model& model, const EndComponent& component,
                                     const CostFunction& costs,
                                     const std::vector<Rational>& time = {},
                                     bool opponent_only = false);

// Independent oracle: enumerates every pure stay assignment over the kept
// actions and takes the best recurrent-class average. Exponential; only for
// small components.
Rational min_mean_payoff_brute(const Model& model, const EndComponent& component,
                               const CostFunction& costs,
                               const std::vector<Rational>& time = {});

}  // namespace resil
