#include "resil/induced.hpp"

#include <algorithm>

#include "resil/errors.hpp"

namespace resil {

namespace {

std::string counter_name(const std::string& base, int counter) {
  return base + "@" + std::to_string(counter);
}

CounterProduct build_product(const Model& model, int k, bool saturating) {
  if (k < 0) throw Error("counter product needs k >= 0");
  CounterProduct out;
  out.model.name = model.name;
  int n = model.state_count();
  auto id_at = [&](int s, int c) { return c * n + s; };
  for (int c = 0; c <= k; ++c) {
    for (int s = 0; s < n; ++s) {
      const State& base = model.states[s];
      State state;
      state.name = counter_name(base.name, c);
      state.owner = base.owner;
      state.labels = base.labels;
      for (const Action& action : base.actions) {
        if (action.kind == ActionKind::Disturbance && c == 0 && !saturating) continue;
        Action copy;
        copy.name = action.name;
        copy.kind = action.kind;
        int next_c = action.kind == ActionKind::Disturbance ? std::max(0, c - 1) : c;
        for (const Outcome& o : action.to) {
          copy.to.push_back({id_at(o.state, next_c), o.prob});
        }
        normalize_distribution(copy.to);
        state.actions.push_back(std::move(copy));
      }
      out.model.states.push_back(std::move(state));
      out.origin.push_back(s);
      out.counter.push_back(c);
    }
  }
  for (const Outcome& o : model.initial) {
    out.model.initial.push_back({id_at(o.state, k), o.prob});
  }
  normalize_distribution(out.model.initial);
  return out;
}

}  // namespace

CounterProduct product_with_counter(const Model& model, int k) {
  return build_product(model, k, false);
}

CounterProduct saturating_product(const Model& model, int k) {
  return build_product(model, k, true);
}

Strategy lift_to_product(const CounterProduct& product, const Strategy& strategy) {
  Strategy lifted;
  lifted.role = strategy.role;
  for (int s = 0; s < product.model.state_count(); ++s) {
    const Choice* choice = strategy.choice(product.origin[s], product.counter[s]);
    if (!choice) continue;
    // Indices transfer only when the product state kept the full action list.
    const State& here = product.model.states[s];
    for (const Weighted& w : *choice) {
      if (w.action >= static_cast<int>(here.actions.size())) {
        throw StrategyIncompatible("cannot lift rule at state '" + here.name +
                                   "': action list was truncated");
      }
    }
    lifted.rule[{s, 0}] = *choice;
  }
  return lifted;
}

Induced induced_mdp(const Model& model, const Strategy& controller) {
  if (controller.role != Role::Controller) {
    throw StrategyIncompatible("induced_mdp expects a controller strategy");
  }
  check_strategy(model, controller);
  if (!controller.memoryless()) {
    CounterProduct product = saturating_product(model, controller.counter);
    Strategy lifted = lift_to_product(product, controller);
    Induced inner = induced_mdp(product.model, lifted);
    // The lifted strategy is memoryless, so states pass through unchanged.
    inner.origin = product.origin;
    inner.counter = product.counter;
    return inner;
  }

  Induced out;
  out.model.name = model.name;
  for (int s = 0; s < model.state_count(); ++s) {
    const State& base = model.states[s];
    State state;
    state.name = base.name;
    state.owner = base.owner;
    state.labels = base.labels;
    if (base.owner == Player::One) {
      const Choice* choice = controller.choice(s, 0);
      std::vector<Weighted> picks;
      if (choice) {
        picks = *choice;
      } else {
        picks = {Weighted{model.normal_actions(s)[0], Rational(1)}};
      }
      Action merged;
      merged.kind = ActionKind::Normal;
      merged.name = picks.size() == 1 ? base.actions[picks[0].action].name : "pi";
      for (const Weighted& w : picks) {
        for (const Outcome& o : base.actions[w.action].to) {
          merged.to.push_back({o.state, o.prob * w.weight});
        }
      }
      normalize_distribution(merged.to);
      state.actions.push_back(std::move(merged));
      for (const Action& action : base.actions) {
        if (action.kind == ActionKind::Disturbance) state.actions.push_back(action);
      }
      // Merged-name collision with a kept disturbance name.
      for (size_t a = 1; a < state.actions.size(); ++a) {
        if (state.actions[a].name == state.actions[0].name) state.actions[0].name += "'";
      }
    } else {
      state.actions = base.actions;
    }
    out.model.states.push_back(std::move(state));
    out.origin.push_back(s);
    out.counter.push_back(0);
  }
  out.model.initial = model.initial;
  return out;
}

InducedChain induced_mc(const Model& model, const Strategy& controller,
                        const Strategy& disturber, const Strategy* adversary) {
  if (controller.role != Role::Controller) {
    throw StrategyIncompatible("induced_mc expects a controller strategy first");
  }
  if (disturber.role != Role::Disturber) {
    throw StrategyIncompatible("induced_mc expects a disturber strategy second");
  }
  check_strategy(model, controller);
  check_strategy(model, disturber);
  if (adversary) {
    if (adversary->role != Role::Adversary) {
      throw StrategyIncompatible("induced_mc: third strategy must be an adversary");
    }
    check_strategy(model, *adversary);
  }

  int bound = 0;
  for (const Strategy* s : {&controller, &disturber, adversary}) {
    if (s && !s->memoryless()) bound = std::max(bound, s->counter);
  }
  int n = model.state_count();
  auto id_at = [&](int s, int used) { return used * n + s; };
  auto remaining = [&](const Strategy& s, int used) {
    return s.memoryless() ? 0 : std::max(0, s.counter - used);
  };

  InducedChain out;
  for (int used = 0; used <= bound; ++used) {
    for (int s = 0; s < n; ++s) {
      const State& state = model.states[s];
      Distribution row;
      Rational cost(0);
      int next_used = std::min(bound, used + 1);
      if (state.owner == Player::One) {
        Rational quiet(1);
        if (const Choice* dc = disturber.choice(s, remaining(disturber, used))) {
          for (const Weighted& w : *dc) {
            if (w.action == kBottom) continue;
            quiet -= w.weight;
            cost += w.weight;
            for (const Outcome& o : state.actions[w.action].to) {
              row.push_back({id_at(o.state, next_used), o.prob * w.weight});
            }
          }
        }
        if (quiet > 0) {
          const Choice* cc = controller.choice(s, remaining(controller, used));
          std::vector<Weighted> picks;
          if (cc) {
            picks = *cc;
          } else {
            picks = {Weighted{model.normal_actions(s)[0], Rational(1)}};
          }
          for (const Weighted& w : picks) {
            for (const Outcome& o : state.actions[w.action].to) {
              row.push_back({id_at(o.state, used), o.prob * w.weight * quiet});
            }
          }
        }
      } else {
        const Choice* ac = adversary ? adversary->choice(s, remaining(*adversary, used)) : nullptr;
        std::vector<Weighted> picks;
        if (ac) {
          picks = *ac;
        } else {
          auto normals = model.normal_actions(s);
          if (normals.size() != 1) {
            throw StrategyIncompatible("induced_mc: state '" + state.name +
                                       "' needs an adversary strategy");
          }
          picks = {Weighted{normals[0], Rational(1)}};
        }
        for (const Weighted& w : picks) {
          for (const Outcome& o : state.actions[w.action].to) {
            row.push_back({id_at(o.state, used), o.prob * w.weight});
          }
        }
      }
      normalize_distribution(row);
      out.chain.names.push_back(bound == 0 ? state.name
                                           : state.name + "@" + std::to_string(used));
      out.chain.rows.push_back(std::move(row));
      out.chain.step_cost.push_back(cost);
      out.origin.push_back(s);
      out.used.push_back(used);
    }
  }
  for (const Outcome& o : model.initial) {
    out.chain.initial.push_back({id_at(o.state, 0), o.prob});
  }
  normalize_distribution(out.chain.initial);
  return out;
}

}  // namespace resil
