#pragma once

#include <map>
#include <vector>

#include "resil/model.hpp"
#include "resil/numeric.hpp"

namespace resil {

enum class NumericMode { Exact, Float };

// Per-state values; residual and sweeps are meaningful in float mode only.
struct ValueVector {
  std::vector<Rational> values;
  double residual = 0.0;
  long sweeps = 0;
};

// Maximal probability of reaching `targets` when a single controller picks
// freely among the allowed actions (ownership ignored). Disallowed states
// count as value-0 dead ends; empty masks allow everything. Exact LP.
std::vector<Rational> max_reach_exact(
    const Model& model, const std::vector<int>& targets,
    const std::vector<char>& state_allowed = {},
    const std::vector<std::vector<char>>& action_allowed = {});

// Minimal reachability counterpart (the controller avoids `targets`).
std::vector<Rational> min_reach_exact(
    const Model& model, const std::vector<int>& targets,
    const std::vector<char>& state_allowed = {},
    const std::vector<std::vector<char>>& action_allowed = {});

// Exact policy iteration with chain-based policy evaluation. Returns the
// optimal values and a pure memoryless policy attaining them (entry -1 on
// targets, disallowed, or actionless states). Independent of the simplex
// path, so it doubles as an oracle and as witness extraction.
struct ReachPolicy {
  std::vector<Rational> values;
  std::vector<int> policy;
  int iterations = 0;
};

ReachPolicy max_reach_policy_iteration(
    const Model& model, const std::vector<int>& targets,
    const std::vector<char>& state_allowed = {},
    const std::vector<std::vector<char>>& action_allowed = {});

// Interval value iteration: lower sweep from 0, upper sweep from 1 on the
// end-component quotient. Throws NotConverged when the gap stays above
// `precision` for `max_sweeps` sweeps.
ValueVector max_reach_interval(const Model& model, const std::vector<int>& targets,
                               double precision = 1e-8, long max_sweeps = 1000000);

// Number of plain value-iteration sweeps until the initial-state value
// strictly exceeds `bound`; -1 when `cap` sweeps do not reach it.
long vi_sweeps_to_exceed(const Model& model, const std::vector<int>& targets,
                         const Rational& bound, long cap);

// Mode dispatch: exact LP or interval VI.
ValueVector max_reach_mdp(const Model& model, const std::vector<int>& targets,
                          NumericMode mode = NumericMode::Exact,
                          double precision = 1e-8);

// Max-min reachability of a plain two-player game (no disturbance actions):
// `maximizer` optimizes reach of `targets`, the other player opposes. Exact
// via enumeration of pure memoryless strategies of Player 1; each inner
// problem is a single-controller LP. `choice` is an optimal Player-1 action
// assignment (by initial-weighted value).
struct SgReach {
  std::vector<Rational> values;
  std::map<int, int> choice;
  long enumerated = 0;
};

SgReach max_reach_sg(const Model& game, const std::vector<int>& targets,
                     Player maximizer, long budget = 1000000);

}  // namespace resil
