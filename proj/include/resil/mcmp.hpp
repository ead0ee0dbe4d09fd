#pragma once

#include <vector>

#include "resil/lp.hpp"
#include "resil/model.hpp"
#include "resil/strategy.hpp"

namespace resil {

// Per-state, per-action step costs, indexed like Model::states[s].actions.
using CostFunction = std::vector<std::vector<Rational>>;

// Cost 1 on disturbance actions, 0 on normal ones.
CostFunction disturbance_costs(const Model& model);

struct McmpResult {
  Rational value;
  // Action mixing per state (empty at targets, value-0 states, and states
  // the optimal flow never visits; play anything silent there).
  std::vector<Choice> mixing;
  LinearProgram lp;
  std::vector<Rational> flows;
  Rational witness_reach;
  Rational witness_cost;
};

// Minimum expected total cost over all action-resolving strategies of the
// MDP, subject to reaching `target` with probability at least `threshold`.
// The witness mixing is recovered from an optimal flow (mass-minimal among
// optimal flows, which makes the chain induced by the mixing reproduce the
// flow exactly) and re-verified by exact chain evaluation before returning.
// Throws Infeasible when no strategy reaches the threshold.
McmpResult ssp_mcmp_lp(const Model& model, const CostFunction& costs,
                       const std::vector<int>& target, const Rational& threshold);

// Largest reach probability of `target` among strategies whose expected
// total cost stays within `cost_bound`. Used to decide whether a non-strict
// breaking threshold is attained or only approached.
Rational mcmp_max_reach_at_cost(const Model& model, const CostFunction& costs,
                                const std::vector<int>& target,
                                const Rational& cost_bound);

}  // namespace resil
