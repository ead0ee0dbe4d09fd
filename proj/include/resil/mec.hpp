#pragma once

#include <vector>

#include "resil/model.hpp"

namespace resil {

// An end component: a set of states plus, per state, the actions whose
// outcomes stay inside the set, such that the kept edges are strongly
// connected. `actions[i]` lists action indices of `states[i]`.
struct EndComponent {
  std::vector<int> states;
  std::vector<std::vector<int>> actions;

  bool contains(int state) const;
};

// Maximal end components of the action-restricted view of `model` (ownership
// is ignored; every listed action counts as available). `state_allowed` and
// `action_allowed` restrict the view; pass empty vectors for no restriction.
std::vector<EndComponent> maximal_end_components(const Model& model,
                                                 std::vector<char> state_allowed,
                                                 std::vector<std::vector<char>> action_allowed);

std::vector<EndComponent> maximal_end_components(const Model& model);

// Checks the end-component conditions directly (closure plus strong
// connectivity through the kept actions). Used to certify decompositions.
bool is_end_component(const Model& model, const std::vector<int>& states,
                      const std::vector<std::vector<int>>& actions);

}  // namespace resil
