#include "resil/sets.hpp"

#include <algorithm>

namespace resil {

namespace {

std::vector<char> allowed_outside(const Model& model, const std::vector<int>& goal) {
  std::vector<char> allowed(model.state_count(), 1);
  for (int g : goal) allowed[g] = 0;
  return allowed;
}

std::vector<EndComponent> components_outside_goal(const Model& induced,
                                                  const std::vector<int>& goal) {
  return maximal_end_components(induced, allowed_outside(induced, goal), {});
}

}  // namespace

bool closed_under_controller(const Model& induced, const EndComponent& component) {
  for (int s : component.states) {
    const State& state = induced.states[s];
    if (state.owner != Player::One) continue;
    for (const Action& action : state.actions) {
      if (action.kind != ActionKind::Normal) continue;
      for (const Outcome& o : action.to) {
        if (o.prob > 0 && !component.contains(o.state)) return false;
      }
    }
  }
  return true;
}

bool stayable_with_disturbances(const Model& induced, const EndComponent& component) {
  for (int s : component.states) {
    const State& state = induced.states[s];
    if (state.owner != Player::One) continue;
    bool exits = false;
    for (const Action& action : state.actions) {
      if (action.kind != ActionKind::Normal) continue;
      for (const Outcome& o : action.to) {
        if (o.prob > 0 && !component.contains(o.state)) exits = true;
      }
    }
    if (exits && induced.disturbance_actions(s).empty()) return false;
  }
  return true;
}

std::vector<EndComponent> compute_B(const Model& induced, const std::vector<int>& goal) {
  std::vector<EndComponent> result;
  for (EndComponent& component : components_outside_goal(induced, goal)) {
    if (closed_under_controller(induced, component)) result.push_back(std::move(component));
  }
  return result;
}

std::vector<EndComponent> compute_R(const Model& induced, const std::vector<int>& goal) {
  std::vector<EndComponent> result;
  for (EndComponent& component : components_outside_goal(induced, goal)) {
    if (closed_under_controller(induced, component)) continue;
    if (stayable_with_disturbances(induced, component)) result.push_back(std::move(component));
  }
  return result;
}

namespace {

// Greatest fixpoint: Player-1 states stay while all their normal actions
// stay, Player-2 states while some normal action stays. Disturbance actions
// are the adversary's to decline, so they never force a removal.
std::vector<int> shrink_to_fixpoint(const Model& model, const std::vector<int>& goal) {
  std::vector<char> in_set = allowed_outside(model, goal);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int s = 0; s < model.state_count(); ++s) {
      if (!in_set[s]) continue;
      const State& state = model.states[s];
      bool keep = state.owner == Player::One;
      for (const Action& action : state.actions) {
        if (action.kind != ActionKind::Normal) continue;
        bool stays = true;
        for (const Outcome& o : action.to) {
          if (o.prob > 0 && !in_set[o.state]) stays = false;
        }
        if (state.owner == Player::One) {
          if (!stays) {
            keep = false;
            break;
          }
        } else if (stays) {
          keep = true;
          break;
        }
      }
      if (!keep) {
        in_set[s] = 0;
        changed = true;
      }
    }
  }
  std::vector<int> out;
  for (int s = 0; s < model.state_count(); ++s) {
    if (in_set[s]) out.push_back(s);
  }
  return out;
}

}  // namespace

std::vector<int> silent_core(const Model& induced, const std::vector<int>& goal) {
  return shrink_to_fixpoint(induced, goal);
}

std::vector<int> player2_avoid_set(const Model& game, const std::vector<int>& goal) {
  return shrink_to_fixpoint(game, goal);
}

}  // namespace resil
