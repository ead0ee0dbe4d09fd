#include "resil/mec.hpp"

#include <algorithm>
#include <queue>

namespace resil {

namespace {

// SCC indices over the edges induced by the allowed actions, restricted to
// allowed states. Disallowed states get component -1.
std::vector<int> component_ids(const Model& model, const std::vector<char>& state_allowed,
                               const std::vector<std::vector<char>>& action_allowed,
                               int* component_count) {
  int n = model.state_count();
  std::vector<std::vector<int>> edges(n);
  for (int s = 0; s < n; ++s) {
    if (!state_allowed[s]) continue;
    const State& state = model.states[s];
    for (size_t a = 0; a < state.actions.size(); ++a) {
      if (!action_allowed[s][a]) continue;
      for (const Outcome& o : state.actions[a].to) {
        if (o.prob > 0 && state_allowed[o.state]) edges[s].push_back(o.state);
      }
    }
  }

  std::vector<int> component(n, -1);
  std::vector<int> index(n, -1);
  std::vector<int> low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<int> stack;
  int next_index = 0;
  int next_component = 0;

  struct Frame {
    int state;
    size_t edge;
  };
  for (int root = 0; root < n; ++root) {
    if (!state_allowed[root] || index[root] != -1) continue;
    std::vector<Frame> call_stack{{root, 0}};
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call_stack.empty()) {
      Frame& frame = call_stack.back();
      int s = frame.state;
      if (frame.edge < edges[s].size()) {
        int t = edges[s][frame.edge++];
        if (index[t] == -1) {
          index[t] = low[t] = next_index++;
          stack.push_back(t);
          on_stack[t] = 1;
          call_stack.push_back({t, 0});
        } else if (on_stack[t]) {
          low[s] = std::min(low[s], index[t]);
        }
      } else {
        if (low[s] == index[s]) {
          while (true) {
            int t = stack.back();
            stack.pop_back();
            on_stack[t] = 0;
            component[t] = next_component;
            if (t == s) break;
          }
          ++next_component;
        }
        call_stack.pop_back();
        if (!call_stack.empty()) {
          int parent = call_stack.back().state;
          low[parent] = std::min(low[parent], low[s]);
        }
      }
    }
  }
  *component_count = next_component;
  return component;
}

}  // namespace

bool EndComponent::contains(int state) const {
  return std::binary_search(states.begin(), states.end(), state);
}

std::vector<EndComponent> maximal_end_components(const Model& model,
                                                 std::vector<char> state_allowed,
                                                 std::vector<std::vector<char>> action_allowed) {
  int n = model.state_count();
  if (state_allowed.empty()) state_allowed.assign(n, 1);
  if (action_allowed.empty()) {
    action_allowed.resize(n);
    for (int s = 0; s < n; ++s) {
      action_allowed[s].assign(model.states[s].actions.size(), 1);
    }
  }

  bool changed = true;
  std::vector<int> component(n, -1);
  int component_count = 0;
  while (changed) {
    changed = false;
    component = component_ids(model, state_allowed, action_allowed, &component_count);
    for (int s = 0; s < n; ++s) {
      if (!state_allowed[s]) continue;
      const State& state = model.states[s];
      bool any_action = false;
      for (size_t a = 0; a < state.actions.size(); ++a) {
        if (!action_allowed[s][a]) continue;
        bool stays = true;
        for (const Outcome& o : state.actions[a].to) {
          if (o.prob > 0 &&
              (!state_allowed[o.state] || component[o.state] != component[s])) {
            stays = false;
            break;
          }
        }
        if (!stays) {
          action_allowed[s][a] = 0;
          changed = true;
        } else {
          any_action = true;
        }
      }
      if (!any_action) {
        state_allowed[s] = 0;
        changed = true;
      }
    }
  }

  std::vector<EndComponent> out(component_count);
  for (int s = 0; s < n; ++s) {
    if (!state_allowed[s]) continue;
    EndComponent& ec = out[component[s]];
    ec.states.push_back(s);
    std::vector<int> kept;
    for (size_t a = 0; a < model.states[s].actions.size(); ++a) {
      if (action_allowed[s][a]) kept.push_back(static_cast<int>(a));
    }
    ec.actions.push_back(std::move(kept));
  }
  std::vector<EndComponent> result;
  for (EndComponent& ec : out) {
    if (ec.states.empty()) continue;
    // Members arrive in stack-pop order; re-sort with actions in tow.
    std::vector<size_t> order(ec.states.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return ec.states[a] < ec.states[b]; });
    EndComponent sorted;
    for (size_t i : order) {
      sorted.states.push_back(ec.states[i]);
      sorted.actions.push_back(std::move(ec.actions[i]));
    }
    result.push_back(std::move(sorted));
  }
  std::sort(result.begin(), result.end(),
            [](const EndComponent& a, const EndComponent& b) { return a.states[0] < b.states[0]; });
  return result;
}

std::vector<EndComponent> maximal_end_components(const Model& model) {
  return maximal_end_components(model, {}, {});
}

bool is_end_component(const Model& model, const std::vector<int>& states,
                      const std::vector<std::vector<int>>& actions) {
  if (states.empty() || states.size() != actions.size()) return false;
  std::vector<char> inside(model.state_count(), 0);
  for (int s : states) {
    if (s < 0 || s >= model.state_count() || inside[s]) return false;
    inside[s] = 1;
  }
  // Closure: every kept action stays inside.
  for (size_t i = 0; i < states.size(); ++i) {
    const State& state = model.states[states[i]];
    if (actions[i].empty()) return false;
    for (int a : actions[i]) {
      if (a < 0 || a >= static_cast<int>(state.actions.size())) return false;
      for (const Outcome& o : state.actions[a].to) {
        if (o.prob > 0 && !inside[o.state]) return false;
      }
    }
  }
  // Strong connectivity through the kept edges.
  for (size_t source = 0; source < states.size(); ++source) {
    std::vector<char> seen(model.state_count(), 0);
    std::queue<int> queue;
    seen[states[source]] = 1;
    queue.push(states[source]);
    while (!queue.empty()) {
      int s = queue.front();
      queue.pop();
      size_t slot = std::find(states.begin(), states.end(), s) - states.begin();
      for (int a : actions[slot]) {
        for (const Outcome& o : model.states[s].actions[a].to) {
          if (o.prob > 0 && !seen[o.state]) {
            seen[o.state] = 1;
            queue.push(o.state);
          }
        }
      }
    }
    for (int t : states) {
      if (!seen[t]) return false;
    }
  }
  return true;
}

}  // namespace resil
