#pragma once

#include <string>
#include <vector>

#include "resil/mec.hpp"
#include "resil/model.hpp"

namespace resil {

// Budget-unfolded two-player game: plain states (s, i) track the number of
// disturbances the adversary may still use; each Player-1 move at level i ≥ 1
// routes through an owned-by-Player-2 gadget state (s, i, a) that either
// passes the chosen action through ("bot") or replaces it by a disturbance,
// dropping one level. The result is a plain SG: disturbance choices become
// normal Player-2 actions.
struct Unfolded {
  Model model;
  std::vector<int> origin;         // source state of each unfolded state
  std::vector<int> level;          // remaining-disturbance level
  std::vector<int> gadget_action;  // action index at origin; -1 for plain states
};

// trim keeps only states reachable from the initial distribution; pass false
// to materialize the full definition grid.
Unfolded unfold(const Model& game, int k, bool trim = true);

// Single-level gadget game for expected-case analysis: every Player-1
// state-action pair gains a Player-2 gadget choosing "bot" (cost 0) or a
// disturbance (cost 1). `time` weights are 1 on original states and 0 on
// gadgets so long-run frequencies are measured in original steps.
struct GadgetGame {
  Model model;
  std::vector<std::vector<Rational>> cost;  // per state, per action
  std::vector<Rational> time;
  std::vector<int> origin;
  std::vector<int> gadget_action;
};

GadgetGame expected_gadget_game(const Model& game);

// Component-collapsed model: each given component becomes one state that
// keeps only its exiting actions (hoisted and origin-tagged) plus a "stay"
// action leading to the fresh absorbing state s_plus at cost f; every other
// action costs 0.
struct WeightedQuotient {
  Model model;
  std::vector<int> rep_of;        // original state -> quotient state
  std::vector<int> component_of;  // quotient state -> component index, -1 otherwise
  int s_plus = -1;
  std::vector<std::vector<Rational>> cost;
};

// collapsed_owner decides who plays at the collapsed states: Player::One for
// single-controller quotients (evaluation), Player::Two when the stay-or-exit
// choice belongs to the disturber (synthesis over the gadget game).
WeightedQuotient weighted_mec_quotient(const Model& model,
                                       const std::vector<EndComponent>& components,
                                       const std::vector<Rational>& f,
                                       Player collapsed_owner = Player::One);

// Redirects mass epsilon of every action to the state labeled `trap_label`
// (created as an absorbing sink when missing), rescaling the rest by
// 1 − epsilon. The result is a stopping game.
Model make_stopping(const Model& game, const Rational& epsilon,
                    const std::string& trap_label = "B");

// Normalizes choice arity: every state ends up with exactly two normal
// actions and every Player-1 state with exactly one disturbance action, via
// a chain of intermediary states (disturbance choices first, then normal
// ones; at most |normals| + |disturbances| − 2 intermediaries per state).
// Player-1 states without disturbances gain a dummy disturbance to the state
// labeled `goal_label` (created when missing), which a rational adversary
// never takes. Values are preserved.
Model binarize_actions(const Model& game, const std::string& goal_label = "G");

}  // namespace resil
