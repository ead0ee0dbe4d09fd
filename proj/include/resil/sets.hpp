#pragma once

#include <vector>

#include "resil/mec.hpp"
#include "resil/model.hpp"

namespace resil {

// The operations here read an induced MDP in the shape produced by
// induced_mdp: every Player-1 state carries exactly one normal action (the
// controller's baked-in choice) plus the original disturbance actions.

// Components of M restricted away from `goal` where the play can remain
// indefinitely without any disturbance: every Player-1 member's normal action
// stays inside the component.
std::vector<EndComponent> compute_B(const Model& induced, const std::vector<int>& goal);

// Components of M restricted away from `goal` that are stayable but where
// every Player-1 member whose normal action exits still has a disturbance
// available; components already satisfying the compute_B condition are
// excluded.
std::vector<EndComponent> compute_R(const Model& induced, const std::vector<int>& goal);

// The literal membership tests behind compute_B/compute_R, exposed so they
// can be probed on hand-built pseudo-components.
bool closed_under_controller(const Model& induced, const EndComponent& component);
bool stayable_with_disturbances(const Model& induced, const EndComponent& component);

// Greatest fixpoint W ⊆ S \ goal closed under disturbance-free play: the
// normal action of every Player-1 member stays in W, and every Player-2
// member has some normal action staying in W. From any W state the adversary
// keeps the play outside `goal` forever without further disturbances. This is
// the exact target for transient analyses; the union of compute_B components
// is contained in it but can be strictly smaller when a controller-closed
// sub-component hides inside a larger component.
std::vector<int> silent_core(const Model& induced, const std::vector<int>& goal);

// Greatest fixpoint on a plain two-player view: Player-1 states stay only if
// all their actions stay, Player-2 states stay if some action stays. From the
// result, Player 2 avoids `goal` with probability 1.
std::vector<int> player2_avoid_set(const Model& game, const std::vector<int>& goal);

}  // namespace resil
