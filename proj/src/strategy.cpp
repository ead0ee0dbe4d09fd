#include "resil/strategy.hpp"

#include "resil/errors.hpp"

namespace resil {

bool Strategy::pure() const {
  for (const auto& [key, choice] : rule) {
    if (choice.size() != 1) return false;
  }
  return true;
}

const Choice* Strategy::choice(int state, int step) const {
  auto it = rule.find({state, memoryless() ? 0 : step});
  return it == rule.end() ? nullptr : &it->second;
}

Strategy Strategy::pure_memoryless(Role role, std::map<int, int> actions) {
  Strategy s;
  s.role = role;
  for (const auto& [state, action] : actions) {
    s.rule[{state, 0}] = {Weighted{action, Rational(1)}};
  }
  return s;
}

Strategy uniform_controller(const Model& model, const std::string& action_name) {
  Strategy s;
  s.role = Role::Controller;
  for (int st = 0; st < model.state_count(); ++st) {
    if (model.states[st].owner != Player::One) continue;
    int pick = model.find_action(st, action_name);
    if (pick < 0 || model.states[st].actions[pick].kind != ActionKind::Normal) {
      auto normals = model.normal_actions(st);
      if (normals.size() != 1) {
        throw StrategyIncompatible("uniform_controller: state '" + model.states[st].name +
                                   "' has no normal action named '" + action_name + "'");
      }
      pick = normals[0];
    }
    s.rule[{st, 0}] = {Weighted{pick, Rational(1)}};
  }
  return s;
}

Strategy disturber_at(const Model& model, const std::vector<std::string>& state_names) {
  Strategy s;
  s.role = Role::Disturber;
  for (const auto& name : state_names) {
    int st = model.require_state(name);
    auto ds = model.disturbance_actions(st);
    if (ds.empty()) {
      throw StrategyIncompatible("disturber_at: state '" + name + "' has no disturbance action");
    }
    s.rule[{st, 0}] = {Weighted{ds[0], Rational(1)}};
  }
  return s;
}

Strategy silent_disturber() {
  Strategy s;
  s.role = Role::Disturber;
  return s;
}

void check_strategy(const Model& model, const Strategy& strategy) {
  int bound = strategy.memoryless() ? 0 : strategy.counter;
  for (const auto& [key, choice] : strategy.rule) {
    auto [st, step] = key;
    if (st < 0 || st >= model.state_count()) {
      throw StrategyIncompatible("rule references unknown state id " + std::to_string(st));
    }
    if (step < 0 || step > bound) {
      throw StrategyIncompatible("rule counter " + std::to_string(step) +
                                 " outside bound at state '" + model.states[st].name + "'");
    }
    const State& state = model.states[st];
    Player expected = strategy.role == Role::Adversary ? Player::Two : Player::One;
    if (state.owner != expected) {
      throw StrategyIncompatible("rule entry at state '" + state.name +
                                 "' owned by the other player");
    }
    if (choice.empty()) {
      throw StrategyIncompatible("empty choice at state '" + state.name + "'");
    }
    Rational total = 0;
    for (const auto& w : choice) {
      total += w.weight;
      if (w.weight <= 0) {
        throw StrategyIncompatible("non-positive weight at state '" + state.name + "'");
      }
      if (w.action == kBottom) {
        if (strategy.role != Role::Disturber) {
          throw StrategyIncompatible("bottom choice outside a disturbance rule at state '" +
                                     state.name + "'");
        }
        continue;
      }
      if (w.action < 0 || w.action >= static_cast<int>(state.actions.size())) {
        throw StrategyIncompatible("rule references unknown action at state '" + state.name + "'");
      }
      ActionKind kind = state.actions[w.action].kind;
      if (strategy.role == Role::Disturber && kind != ActionKind::Disturbance) {
        throw StrategyIncompatible("disturbance rule picks a normal action at state '" +
                                   state.name + "'");
      }
      if (strategy.role != Role::Disturber && kind != ActionKind::Normal) {
        throw StrategyIncompatible("rule picks a disturbance action at state '" + state.name +
                                   "'");
      }
    }
    if (total != 1) {
      throw StrategyIncompatible("choice weights not normalized at state '" + state.name + "'");
    }
  }
  // Totality over the role's choice states.
  for (int st = 0; st < model.state_count(); ++st) {
    const State& state = model.states[st];
    bool needs_rule = false;
    if (strategy.role == Role::Controller) {
      needs_rule = state.owner == Player::One && state.normal_count() > 1;
    } else if (strategy.role == Role::Adversary) {
      needs_rule = state.owner == Player::Two && state.normal_count() > 1;
    }
    if (!needs_rule) continue;
    for (int step = 0; step <= bound; ++step) {
      if (!strategy.choice(st, step)) {
        throw StrategyIncompatible("rule omits state '" + state.name + "'" +
                                   (strategy.memoryless()
                                        ? std::string()
                                        : " at counter " + std::to_string(step)));
      }
    }
  }
}

}  // namespace resil
