#pragma once

#include <vector>

#include "resil/chain.hpp"
#include "resil/model.hpp"
#include "resil/strategy.hpp"

namespace resil {

// A game extended with a disturbance counter in the state space.
struct CounterProduct {
  Model model;
  std::vector<int> origin;   // product state -> original state
  std::vector<int> counter;  // product state -> remaining budget
};

// Budget product over counters {k..0}: disturbance actions decrement the
// counter and disappear at 0.
CounterProduct product_with_counter(const Model& model, int k);

// Evaluation product: like product_with_counter, but disturbances stay
// available at counter 0 (the counter only records what a step-counting
// strategy observes; it never limits the adversary).
CounterProduct saturating_product(const Model& model, int k);

// Reinterprets a step-counting strategy of the base model as a memoryless
// strategy of the product. Action indices carry over only when the product
// keeps every action, so this accepts saturating products.
Strategy lift_to_product(const CounterProduct& product, const Strategy& strategy);

// One-player-resolved MDP: Player-1 states keep a single merged normal
// action (the controller's choice) plus their disturbance actions; Player-2
// states are untouched. Step-counting controllers are routed through
// saturating_product first, so the result ranges over (state, counter) pairs.
struct Induced {
  Model model;
  std::vector<int> origin;
  std::vector<int> counter;
};

Induced induced_mdp(const Model& model, const Strategy& controller);

// Fully resolved Markov chain over (state, disturbances-used) pairs, with the
// per-state expected number of disturbances as step cost. `adversary` may be
// omitted when every Player-2 state has a single normal action.
struct InducedChain {
  Chain chain;
  std::vector<int> origin;
  std::vector<int> used;
};

InducedChain induced_mc(const Model& model, const Strategy& controller,
                        const Strategy& disturber, const Strategy* adversary = nullptr);

}  // namespace resil
