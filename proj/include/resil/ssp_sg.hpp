#pragma once

#include <vector>

#include "resil/mcmp.hpp"
#include "resil/model.hpp"

namespace resil {

struct SspSgResult {
  Rational value;
  double approx = 0.0;
  // Chosen action index per Player-1 state with more than one option; -1
  // where there was no choice.
  std::vector<int> assignment;
  McmpResult inner;
  long enumerated = 0;
};

// Min-max expected cost of reaching `target` with probability at least
// `threshold` in a plain SG: Player 1 commits to a pure memoryless choice,
// the opponent then plays the cost-minimal constrained policy. Player-1
// choices are enumerated exactly (each inner problem is the constrained
// shortest-path program), so the reported value carries no iteration error;
// `precision` only bounds the post-hoc witness check of the float view.
// Throws Infeasible when the best Player-1 choice makes the threshold
// unreachable, NotConverged when the enumeration budget is exhausted.
SspSgResult ssp_sg_vi(const Model& game, const CostFunction& costs,
                      const std::vector<int>& target, const Rational& threshold,
                      double precision = 1e-8, long budget = 1000000);

// Copy of the game with each Player-1 state narrowed to one chosen action
// (by original index); -1 keeps the state untouched.
Model restrict_player1(const Model& game, const std::vector<int>& assignment);

}  // namespace resil
