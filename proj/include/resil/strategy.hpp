#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "resil/model.hpp"

namespace resil {

// Which decisions a strategy controls: Controller picks normal actions at
// Player-1 states, Adversary picks normal actions at Player-2 states, and
// Disturber picks a disturbance or Bottom at Player-1 states.
enum class Role { Controller, Adversary, Disturber };

// Disturber's "no disturbance" choice.
inline constexpr int kBottom = -1;

struct Weighted {
  int action = kBottom;  // index into State::actions, or kBottom
  Rational weight;
};

// Mixed choice; weights sum to 1. A pure choice has a single entry.
using Choice = std::vector<Weighted>;

struct Strategy {
  static constexpr int kMemoryless = -1;

  Role role = Role::Controller;
  // kMemoryless, or a bound k: the rule reads a counter over {0..k} holding
  // the number of disturbances it still tolerates. The counter starts at k
  // and decrements on every observed disturbance, staying at 0 once reached.
  int counter = kMemoryless;
  // (state, counter) -> choice; memoryless rules use counter 0.
  std::map<std::pair<int, int>, Choice> rule;

  bool memoryless() const { return counter == kMemoryless; }
  bool pure() const;
  // Rule lookup; returns nullptr when no entry exists.
  const Choice* choice(int state, int step) const;

  static Strategy pure_memoryless(Role role, std::map<int, int> actions);
};

// Builds the controller strategy that picks the named normal action at every
// Player-1 state that has it (and the unique normal action elsewhere).
Strategy uniform_controller(const Model& model, const std::string& action_name);

// Disturber that picks the first disturbance action wherever one exists at
// the given states (by name), Bottom elsewhere.
Strategy disturber_at(const Model& model, const std::vector<std::string>& state_names);

// Disturber that never disturbs.
Strategy silent_disturber();

// Checks a strategy against a model: role-appropriate action kinds, weights
// normalized, totality over the role's choice states (every counter value for
// step-counting rules). Throws StrategyIncompatible on the first violation.
void check_strategy(const Model& model, const Strategy& strategy);

}  // namespace resil
