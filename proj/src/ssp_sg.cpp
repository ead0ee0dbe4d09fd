#include "resil/ssp_sg.hpp"

#include <cmath>
#include <string>

#include "resil/errors.hpp"

namespace resil {

Model restrict_player1(const Model& game, const std::vector<int>& assignment) {
  Model out = game;
  for (int s = 0; s < out.state_count(); ++s) {
    if (assignment[s] < 0) continue;
    Action chosen = out.states[s].actions[assignment[s]];
    out.states[s].actions = {std::move(chosen)};
  }
  return out;
}

SspSgResult ssp_sg_vi(const Model& game, const CostFunction& costs,
                      const std::vector<int>& target, const Rational& threshold,
                      double precision, long budget) {
  std::vector<int> choice_states;
  for (int s = 0; s < game.state_count(); ++s) {
    for (const Action& action : game.states[s].actions)
      if (action.kind == ActionKind::Disturbance)
        throw Error("ssp_sg_vi expects a plain game; resolve disturbances first");
    if (game.states[s].owner == Player::One && game.states[s].actions.size() > 1)
      choice_states.push_back(s);
  }

  long combinations = 1;
  for (int s : choice_states) {
    long count = static_cast<long>(game.states[s].actions.size());
    if (combinations > budget / count)
      throw NotConverged("Player-1 profile enumeration exceeds " + std::to_string(budget));
    combinations *= count;
  }

  SspSgResult best;
  bool found = false;
  bool escapes = false;
  std::vector<int> assignment(game.state_count(), -1);
  std::vector<size_t> pick(choice_states.size(), 0);
  while (true) {
    for (size_t c = 0; c < choice_states.size(); ++c)
      assignment[choice_states[c]] = static_cast<int>(pick[c]);
    ++best.enumerated;
    Model narrowed = restrict_player1(game, assignment);
    CostFunction narrowed_costs(costs.size());
    for (int s = 0; s < game.state_count(); ++s)
      narrowed_costs[s] = assignment[s] < 0 ? costs[s]
                                            : std::vector<Rational>{costs[s][assignment[s]]};
    try {
      McmpResult inner = ssp_mcmp_lp(narrowed, narrowed_costs, target, threshold);
      if (!found || inner.value > best.value) {
        best.value = inner.value;
        best.assignment = assignment;
        best.inner = std::move(inner);
        found = true;
      }
    } catch (const Infeasible&) {
      escapes = true;
    }

    size_t c = 0;
    while (c < pick.size() &&
           ++pick[c] == game.states[choice_states[c]].actions.size()) {
      pick[c] = 0;
      ++c;
    }
    if (c == pick.size()) break;
  }

  if (escapes)
    throw Infeasible("a Player-1 choice keeps the target below the threshold");
  if (!found) throw Error("ssp_sg_vi enumerated no profile");

  best.approx = static_cast<double>(best.value);
  double residual = std::abs(static_cast<double>(best.inner.witness_cost) - best.approx);
  if (residual > precision)
    throw NotConverged("witness cost check missed the requested precision");
  return best;
}

}  // namespace resil
