#include "resil/transforms.hpp"

#include <algorithm>
#include <map>
#include <queue>

#include "resil/errors.hpp"

namespace resil {

namespace {

std::string level_name(const std::string& base, int level) {
  return base + "@" + std::to_string(level);
}

void uniquify_action_names(State& state) {
  for (size_t a = 1; a < state.actions.size(); ++a) {
    bool clash = true;
    while (clash) {
      clash = false;
      for (size_t b = 0; b < a; ++b) {
        if (state.actions[b].name == state.actions[a].name) {
          state.actions[a].name += "'";
          clash = true;
        }
      }
    }
  }
}

}  // namespace

Unfolded unfold(const Model& game, int k, bool trim) {
  if (k < 0) throw Error("unfold needs k >= 0");
  Unfolded out;
  out.model.name = game.name;
  int n = game.state_count();

  // Layout per level, top level first: plain states in model order, then
  // gadgets for every Player-1 normal action.
  std::vector<int> gadgets_per_level_offset(n + 1, 0);
  std::vector<std::pair<int, int>> gadget_slots;  // (state, action)
  for (int s = 0; s < n; ++s) {
    gadgets_per_level_offset[s] = static_cast<int>(gadget_slots.size());
    if (game.states[s].owner == Player::One) {
      for (size_t a = 0; a < game.states[s].actions.size(); ++a) {
        if (game.states[s].actions[a].kind == ActionKind::Normal) {
          gadget_slots.push_back({s, static_cast<int>(a)});
        }
      }
    }
  }
  gadgets_per_level_offset[n] = static_cast<int>(gadget_slots.size());
  int per_level = n + static_cast<int>(gadget_slots.size());
  auto plain_id = [&](int s, int level) { return (k - level) * per_level + s; };
  auto gadget_id = [&](int slot, int level) { return (k - level) * per_level + n + slot; };

  for (int level = k; level >= 0; --level) {
    for (int s = 0; s < n; ++s) {
      const State& base = game.states[s];
      State state;
      state.name = level_name(base.name, level);
      state.owner = base.owner;
      state.labels = base.labels;
      for (size_t a = 0; a < base.actions.size(); ++a) {
        const Action& action = base.actions[a];
        if (action.kind == ActionKind::Disturbance) continue;
        Action copy;
        copy.name = action.name;
        copy.kind = ActionKind::Normal;
        if (base.owner == Player::One && level >= 1) {
          int slot = -1;
          for (int g = gadgets_per_level_offset[s]; g < gadgets_per_level_offset[s + 1]; ++g) {
            if (gadget_slots[g].second == static_cast<int>(a)) slot = g;
          }
          copy.to.push_back({gadget_id(slot, level), Rational(1)});
        } else {
          for (const Outcome& o : action.to) {
            copy.to.push_back({plain_id(o.state, level), o.prob});
          }
        }
        normalize_distribution(copy.to);
        state.actions.push_back(std::move(copy));
      }
      out.model.states.push_back(std::move(state));
      out.origin.push_back(s);
      out.level.push_back(level);
      out.gadget_action.push_back(-1);
    }
    for (size_t slot = 0; slot < gadget_slots.size(); ++slot) {
      auto [s, a] = gadget_slots[slot];
      const State& base = game.states[s];
      State state;
      state.name = level_name(base.name, level) + "#" + base.actions[a].name;
      state.owner = Player::Two;
      Action pass;
      pass.name = "bot";
      pass.kind = ActionKind::Normal;
      for (const Outcome& o : base.actions[a].to) {
        pass.to.push_back({plain_id(o.state, level), o.prob});
      }
      normalize_distribution(pass.to);
      state.actions.push_back(std::move(pass));
      if (level >= 1) {
        for (const Action& action : base.actions) {
          if (action.kind != ActionKind::Disturbance) continue;
          Action replace;
          replace.name = action.name;
          replace.kind = ActionKind::Normal;
          for (const Outcome& o : action.to) {
            replace.to.push_back({plain_id(o.state, level - 1), o.prob});
          }
          normalize_distribution(replace.to);
          state.actions.push_back(std::move(replace));
        }
      }
      uniquify_action_names(state);
      out.model.states.push_back(std::move(state));
      out.origin.push_back(s);
      out.level.push_back(level);
      out.gadget_action.push_back(a);
    }
  }
  for (const Outcome& o : game.initial) {
    out.model.initial.push_back({plain_id(o.state, k), o.prob});
  }
  normalize_distribution(out.model.initial);

  if (!trim) return out;

  // Keep only states reachable from the initial distribution.
  std::vector<char> seen(out.model.state_count(), 0);
  std::queue<int> queue;
  for (const Outcome& o : out.model.initial) {
    if (!seen[o.state]) {
      seen[o.state] = 1;
      queue.push(o.state);
    }
  }
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop();
    for (const Action& action : out.model.states[s].actions) {
      for (const Outcome& o : action.to) {
        if (!seen[o.state]) {
          seen[o.state] = 1;
          queue.push(o.state);
        }
      }
    }
  }
  Unfolded trimmed;
  trimmed.model.name = out.model.name;
  std::vector<int> remap(out.model.state_count(), -1);
  for (int s = 0; s < out.model.state_count(); ++s) {
    if (!seen[s]) continue;
    remap[s] = trimmed.model.state_count();
    trimmed.model.states.push_back(out.model.states[s]);
    trimmed.origin.push_back(out.origin[s]);
    trimmed.level.push_back(out.level[s]);
    trimmed.gadget_action.push_back(out.gadget_action[s]);
  }
  for (State& state : trimmed.model.states) {
    for (Action& action : state.actions) {
      for (Outcome& o : action.to) o.state = remap[o.state];
    }
  }
  for (const Outcome& o : out.model.initial) {
    trimmed.model.initial.push_back({remap[o.state], o.prob});
  }
  normalize_distribution(trimmed.model.initial);
  return trimmed;
}

GadgetGame expected_gadget_game(const Model& game) {
  GadgetGame out;
  out.model.name = game.name;
  int n = game.state_count();
  std::vector<std::pair<int, int>> gadget_slots;
  std::vector<std::vector<int>> slot_of(n);
  for (int s = 0; s < n; ++s) {
    slot_of[s].assign(game.states[s].actions.size(), -1);
    if (game.states[s].owner != Player::One) continue;
    for (size_t a = 0; a < game.states[s].actions.size(); ++a) {
      if (game.states[s].actions[a].kind == ActionKind::Normal) {
        slot_of[s][a] = static_cast<int>(gadget_slots.size());
        gadget_slots.push_back({s, static_cast<int>(a)});
      }
    }
  }
  auto gadget_id = [&](int slot) { return n + slot; };

  for (int s = 0; s < n; ++s) {
    const State& base = game.states[s];
    State state;
    state.name = base.name;
    state.owner = base.owner;
    state.labels = base.labels;
    std::vector<Rational> costs;
    for (size_t a = 0; a < base.actions.size(); ++a) {
      const Action& action = base.actions[a];
      if (action.kind == ActionKind::Disturbance) continue;
      Action copy;
      copy.name = action.name;
      copy.kind = ActionKind::Normal;
      if (base.owner == Player::One) {
        copy.to.push_back({gadget_id(slot_of[s][a]), Rational(1)});
      } else {
        copy.to = action.to;
      }
      state.actions.push_back(std::move(copy));
      costs.push_back(Rational(0));
    }
    out.model.states.push_back(std::move(state));
    out.cost.push_back(std::move(costs));
    out.time.push_back(Rational(1));
    out.origin.push_back(s);
    out.gadget_action.push_back(-1);
  }
  for (auto [s, a] : gadget_slots) {
    const State& base = game.states[s];
    State state;
    state.name = base.name + "#" + base.actions[a].name;
    state.owner = Player::Two;
    std::vector<Rational> costs;
    Action pass;
    pass.name = "bot";
    pass.kind = ActionKind::Normal;
    pass.to = base.actions[a].to;
    state.actions.push_back(std::move(pass));
    costs.push_back(Rational(0));
    for (const Action& action : base.actions) {
      if (action.kind != ActionKind::Disturbance) continue;
      Action replace;
      replace.name = action.name;
      replace.kind = ActionKind::Normal;
      replace.to = action.to;
      state.actions.push_back(std::move(replace));
      costs.push_back(Rational(1));
    }
    uniquify_action_names(state);
    out.model.states.push_back(std::move(state));
    out.cost.push_back(std::move(costs));
    out.time.push_back(Rational(0));
    out.origin.push_back(s);
    out.gadget_action.push_back(a);
  }
  out.model.initial = game.initial;
  return out;
}

WeightedQuotient weighted_mec_quotient(const Model& model,
                                       const std::vector<EndComponent>& components,
                                       const std::vector<Rational>& f,
                                       Player collapsed_owner) {
  if (f.size() != components.size()) {
    throw Error("weighted_mec_quotient: one weight per component required");
  }
  int n = model.state_count();
  std::vector<int> member_of(n, -1);
  for (size_t c = 0; c < components.size(); ++c) {
    for (int s : components[c].states) {
      if (s < 0 || s >= n) throw Error("weighted_mec_quotient: component state out of range");
      if (member_of[s] != -1) {
        throw OverlappingComponents("state '" + model.states[s].name +
                                    "' appears in two components");
      }
      member_of[s] = static_cast<int>(c);
    }
  }

  WeightedQuotient out;
  out.model.name = model.name;
  out.rep_of.assign(n, -1);
  // Untouched states keep their relative order, then one state per component,
  // then the fresh absorbing target.
  for (int s = 0; s < n; ++s) {
    if (member_of[s] != -1) continue;
    out.rep_of[s] = out.model.state_count();
    out.component_of.push_back(-1);
    State state;
    state.name = model.states[s].name;
    state.owner = model.states[s].owner;
    state.labels = model.states[s].labels;
    out.model.states.push_back(std::move(state));
  }
  std::vector<int> collapsed_id(components.size(), -1);
  for (size_t c = 0; c < components.size(); ++c) {
    collapsed_id[c] = out.model.state_count();
    out.component_of.push_back(static_cast<int>(c));
    State state;
    state.name = "mec" + std::to_string(c);
    state.owner = collapsed_owner;
    for (int s : components[c].states) {
      out.rep_of[s] = collapsed_id[c];
      for (const std::string& label : model.states[s].labels) {
        if (std::find(state.labels.begin(), state.labels.end(), label) == state.labels.end()) {
          state.labels.push_back(label);
        }
      }
    }
    out.model.states.push_back(std::move(state));
  }
  out.s_plus = out.model.state_count();
  out.component_of.push_back(-1);
  {
    State plus;
    plus.name = "s_plus";
    plus.owner = Player::Two;
    Action loop;
    loop.name = "loop";
    loop.kind = ActionKind::Normal;
    out.model.states.push_back(std::move(plus));
    out.model.states.back().actions.push_back(std::move(loop));
    out.model.states.back().actions[0].to.push_back({out.s_plus, Rational(1)});
  }

  auto redirect = [&](const Distribution& dist) {
    Distribution mapped;
    for (const Outcome& o : dist) mapped.push_back({out.rep_of[o.state], o.prob});
    normalize_distribution(mapped);
    return mapped;
  };

  out.cost.assign(out.model.state_count(), {});
  for (int s = 0; s < n; ++s) {
    if (member_of[s] != -1) continue;
    State& state = out.model.states[out.rep_of[s]];
    for (const Action& action : model.states[s].actions) {
      Action copy;
      copy.name = action.name;
      copy.kind = action.kind;
      copy.to = redirect(action.to);
      state.actions.push_back(std::move(copy));
      out.cost[out.rep_of[s]].push_back(Rational(0));
    }
  }
  for (size_t c = 0; c < components.size(); ++c) {
    State& state = out.model.states[collapsed_id[c]];
    const EndComponent& component = components[c];
    for (size_t i = 0; i < component.states.size(); ++i) {
      int s = component.states[i];
      for (size_t a = 0; a < model.states[s].actions.size(); ++a) {
        bool kept = std::find(component.actions[i].begin(), component.actions[i].end(),
                              static_cast<int>(a)) != component.actions[i].end();
        if (kept) continue;  // internal action, absorbed into the collapse
        const Action& action = model.states[s].actions[a];
        Action copy;
        copy.name = model.states[s].name + "." + action.name;
        copy.kind = action.kind;
        copy.to = redirect(action.to);
        state.actions.push_back(std::move(copy));
        out.cost[collapsed_id[c]].push_back(Rational(0));
      }
    }
    Action stay;
    stay.name = "stay";
    stay.kind = ActionKind::Normal;
    stay.to.push_back({out.s_plus, Rational(1)});
    state.actions.push_back(std::move(stay));
    out.cost[collapsed_id[c]].push_back(f[c]);
    uniquify_action_names(state);
  }
  out.cost[out.s_plus] = {Rational(0)};

  out.model.initial = redirect(model.initial);
  return out;
}

Model make_stopping(const Model& game, const Rational& epsilon, const std::string& trap_label) {
  if (!(epsilon > 0) || !(epsilon < 1)) {
    throw Error("make_stopping needs 0 < epsilon < 1");
  }
  Model out = game;
  std::vector<int> trapped = out.labeled(trap_label);
  int trap;
  if (trapped.empty()) {
    trap = out.state_count();
    State state;
    state.name = "trap";
    state.owner = Player::Two;
    state.labels = {trap_label};
    Action loop;
    loop.name = "loop";
    loop.kind = ActionKind::Normal;
    loop.to.push_back({trap, Rational(1)});
    state.actions.push_back(std::move(loop));
    out.states.push_back(std::move(state));
  } else {
    trap = trapped[0];
  }
  Rational keep = Rational(1) - epsilon;
  for (State& state : out.states) {
    for (Action& action : state.actions) {
      for (Outcome& o : action.to) o.prob *= keep;
      action.to.push_back({trap, epsilon});
      normalize_distribution(action.to);
    }
  }
  return out;
}

Model binarize_actions(const Model& game, const std::string& goal_label) {
  Model out;
  out.name = game.name;
  int n = game.state_count();
  // Heads keep their ids and names, so original outcome targets stay valid.
  std::map<std::string, int> taken;
  for (int s = 0; s < n; ++s) {
    State head;
    head.name = game.states[s].name;
    head.owner = game.states[s].owner;
    head.labels = game.states[s].labels;
    taken[head.name] = s;
    out.states.push_back(std::move(head));
  }
  out.initial = game.initial;

  int goal = -1;
  {
    std::vector<int> labeled = game.labeled(goal_label);
    if (!labeled.empty()) goal = labeled[0];
  }
  auto dummy_goal = [&]() {
    if (goal != -1) return goal;
    goal = out.state_count();
    State state;
    state.name = "gpad";
    while (taken.count(state.name)) state.name += "'";
    taken[state.name] = goal;
    state.owner = Player::Two;
    state.labels = {goal_label};
    Action loop;
    loop.name = "loop";
    loop.kind = ActionKind::Normal;
    loop.to.push_back({goal, Rational(1)});
    state.actions.push_back(std::move(loop));
    out.states.push_back(std::move(state));
    return goal;
  };

  auto fresh_node = [&](const State& base, int step) {
    State node;
    node.name = base.name + "+" + std::to_string(step);
    while (taken.count(node.name)) node.name += "'";
    node.owner = base.owner;
    int id = out.state_count();
    taken[node.name] = id;
    out.states.push_back(std::move(node));
    return id;
  };

  auto add_dummy_disturbance = [&](int node) {
    Action dummy;
    dummy.name = "dg";
    dummy.kind = ActionKind::Disturbance;
    dummy.to.push_back({dummy_goal(), Rational(1)});
    out.states[node].actions.push_back(std::move(dummy));
  };
  auto add_advance = [&](int node, int next, bool duplicated) {
    Action go;
    go.name = "go";
    go.kind = ActionKind::Normal;
    go.to.push_back({next, Rational(1)});
    out.states[node].actions.push_back(go);
    if (duplicated) out.states[node].actions.push_back(go);
  };

  for (int s = 0; s < n; ++s) {
    const State& base = game.states[s];
    bool p1 = base.owner == Player::One;
    std::vector<int> choices;  // disturbances first, then normals
    for (size_t a = 0; a < base.actions.size(); ++a) {
      if (base.actions[a].kind == ActionKind::Disturbance) choices.push_back(static_cast<int>(a));
    }
    for (size_t a = 0; a < base.actions.size(); ++a) {
      if (base.actions[a].kind == ActionKind::Normal) choices.push_back(static_cast<int>(a));
    }
    int last = std::max(0, static_cast<int>(choices.size()) - 2);

    int node = s;
    for (int step = 0; step < last; ++step) {
      int next = fresh_node(base, step + 1);
      const Action& choice = base.actions[choices[step]];
      if (choice.kind == ActionKind::Disturbance) {
        add_advance(node, next, true);
        out.states[node].actions.push_back(choice);
      } else {
        out.states[node].actions.push_back(choice);
        add_advance(node, next, false);
        if (p1) add_dummy_disturbance(node);
      }
      uniquify_action_names(out.states[node]);
      node = next;
    }
    // Final node: the one or two remaining choices.
    std::vector<int> rest(choices.begin() + last, choices.end());
    bool has_disturbance = false;
    for (int a : rest) {
      if (base.actions[a].kind == ActionKind::Normal) {
        out.states[node].actions.push_back(base.actions[a]);
      } else {
        has_disturbance = true;
      }
    }
    if (out.states[node].actions.size() == 1) {
      out.states[node].actions.push_back(out.states[node].actions[0]);
    }
    for (int a : rest) {
      if (base.actions[a].kind == ActionKind::Disturbance) {
        out.states[node].actions.push_back(base.actions[a]);
      }
    }
    if (p1 && !has_disturbance) add_dummy_disturbance(node);
    uniquify_action_names(out.states[node]);
  }
  return out;
}

}  // namespace resil
