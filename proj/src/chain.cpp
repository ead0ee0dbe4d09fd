#include "resil/chain.hpp"

#include <algorithm>
#include <queue>

#include "resil/errors.hpp"

namespace resil {

namespace {

std::vector<std::vector<int>> forward_edges(const Chain& chain) {
  std::vector<std::vector<int>> out(chain.rows.size());
  for (int s = 0; s < chain.size(); ++s) {
    for (const Outcome& o : chain.rows[s]) {
      if (o.prob > 0) out[s].push_back(o.state);
    }
  }
  return out;
}

std::vector<int> reachable_from_initial(const Chain& chain) {
  auto edges = forward_edges(chain);
  std::vector<char> seen(chain.rows.size(), 0);
  std::queue<int> queue;
  for (const Outcome& o : chain.initial) {
    if (o.prob > 0 && !seen[o.state]) {
      seen[o.state] = 1;
      queue.push(o.state);
    }
  }
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop();
    for (int t : edges[s]) {
      if (!seen[t]) {
        seen[t] = 1;
        queue.push(t);
      }
    }
  }
  std::vector<int> out;
  for (int s = 0; s < chain.size(); ++s) {
    if (seen[s]) out.push_back(s);
  }
  return out;
}

// Iterative Tarjan over the positive-probability edge relation.
std::vector<std::vector<int>> strongly_connected_components(
    const std::vector<std::vector<int>>& edges) {
  int n = static_cast<int>(edges.size());
  std::vector<int> index(n, -1);
  std::vector<int> low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<int> stack;
  std::vector<std::vector<int>> components;
  int next_index = 0;

  struct Frame {
    int state;
    size_t edge;
  };
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
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
          std::vector<int> component;
          while (true) {
            int t = stack.back();
            stack.pop_back();
            on_stack[t] = 0;
            component.push_back(t);
            if (t == s) break;
          }
          std::sort(component.begin(), component.end());
          components.push_back(std::move(component));
        }
        call_stack.pop_back();
        if (!call_stack.empty()) {
          int parent = call_stack.back().state;
          low[parent] = std::min(low[parent], low[s]);
        }
      }
    }
  }
  std::sort(components.begin(), components.end(),
            [](const std::vector<int>& a, const std::vector<int>& b) { return a[0] < b[0]; });
  return components;
}

}  // namespace

std::vector<Rational> solve_linear_system(std::vector<std::vector<Rational>> a,
                                          std::vector<Rational> b) {
  int n = static_cast<int>(a.size());
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int row = col; row < n; ++row) {
      if (a[row][col] != 0) {
        pivot = row;
        break;
      }
    }
    if (pivot == -1) throw Error("singular linear system");
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    Rational inv = a[col][col];
    for (int row = col + 1; row < n; ++row) {
      if (a[row][col] == 0) continue;
      Rational factor = a[row][col] / inv;
      for (int k = col; k < n; ++k) a[row][k] -= factor * a[col][k];
      b[row] -= factor * b[col];
    }
  }
  std::vector<Rational> x(n, Rational(0));
  for (int row = n - 1; row >= 0; --row) {
    Rational acc = b[row];
    for (int k = row + 1; k < n; ++k) acc -= a[row][k] * x[k];
    x[row] = acc / a[row][row];
  }
  return x;
}

std::vector<Rational> chain_reach(const Chain& chain, const std::vector<int>& targets) {
  int n = chain.size();
  std::vector<char> is_target(n, 0);
  for (int t : targets) is_target[t] = 1;

  // States with a positive-probability path into the target set.
  std::vector<std::vector<int>> back(n);
  for (int s = 0; s < n; ++s) {
    for (const Outcome& o : chain.rows[s]) {
      if (o.prob > 0) back[o.state].push_back(s);
    }
  }
  std::vector<char> can_reach(n, 0);
  std::queue<int> queue;
  for (int t : targets) {
    if (!can_reach[t]) {
      can_reach[t] = 1;
      queue.push(t);
    }
  }
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop();
    for (int p : back[s]) {
      if (!can_reach[p]) {
        can_reach[p] = 1;
        queue.push(p);
      }
    }
  }

  std::vector<int> unknown;
  std::vector<int> slot(n, -1);
  for (int s = 0; s < n; ++s) {
    if (can_reach[s] && !is_target[s]) {
      slot[s] = static_cast<int>(unknown.size());
      unknown.push_back(s);
    }
  }
  std::vector<Rational> result(n, Rational(0));
  for (int t : targets) result[t] = 1;
  if (!unknown.empty()) {
    int m = static_cast<int>(unknown.size());
    std::vector<std::vector<Rational>> a(m, std::vector<Rational>(m, Rational(0)));
    std::vector<Rational> b(m, Rational(0));
    for (int row = 0; row < m; ++row) {
      int s = unknown[row];
      a[row][row] = 1;
      for (const Outcome& o : chain.rows[s]) {
        if (is_target[o.state]) {
          b[row] += o.prob;
        } else if (slot[o.state] != -1) {
          a[row][slot[o.state]] -= o.prob;
        }
      }
    }
    std::vector<Rational> x = solve_linear_system(std::move(a), std::move(b));
    for (int row = 0; row < m; ++row) result[unknown[row]] = x[row];
  }
  return result;
}

Rational chain_reach_initial(const Chain& chain, const std::vector<int>& targets) {
  std::vector<Rational> per_state = chain_reach(chain, targets);
  Rational total(0);
  for (const Outcome& o : chain.initial) total += o.prob * per_state[o.state];
  return total;
}

std::vector<std::vector<int>> chain_recurrent_classes(const Chain& chain) {
  auto edges = forward_edges(chain);
  auto components = strongly_connected_components(edges);
  std::vector<std::vector<int>> recurrent;
  for (const auto& component : components) {
    std::vector<char> inside(chain.rows.size(), 0);
    for (int s : component) inside[s] = 1;
    bool bottom = true;
    for (int s : component) {
      for (int t : edges[s]) {
        if (!inside[t]) {
          bottom = false;
          break;
        }
      }
      if (!bottom) break;
    }
    if (bottom) recurrent.push_back(component);
  }
  return recurrent;
}

std::vector<Rational> chain_stationary(const Chain& chain, const std::vector<int>& cls) {
  int m = static_cast<int>(cls.size());
  std::vector<int> slot(chain.rows.size(), -1);
  for (int i = 0; i < m; ++i) slot[cls[i]] = i;
  // Balance equations for all but the last member, then normalization.
  std::vector<std::vector<Rational>> a(m, std::vector<Rational>(m, Rational(0)));
  std::vector<Rational> b(m, Rational(0));
  for (int row = 0; row + 1 < m; ++row) {
    int j = cls[row];
    a[row][row] = 1;
    for (int i = 0; i < m; ++i) {
      for (const Outcome& o : chain.rows[cls[i]]) {
        if (o.state == j) a[row][i] -= o.prob;
      }
    }
  }
  for (int i = 0; i < m; ++i) a[m - 1][i] = 1;
  b[m - 1] = 1;
  return solve_linear_system(std::move(a), std::move(b));
}

Rational chain_class_mean_cost(const Chain& chain, const std::vector<int>& cls) {
  std::vector<Rational> pi = chain_stationary(chain, cls);
  Rational mean(0);
  for (size_t i = 0; i < cls.size(); ++i) mean += pi[i] * chain.step_cost[cls[i]];
  return mean;
}

std::optional<Rational> chain_expected_cost(const Chain& chain) {
  int n = chain.size();
  std::vector<int> reachable = reachable_from_initial(chain);
  std::vector<char> alive(n, 0);
  for (int s : reachable) alive[s] = 1;

  std::vector<char> recurrent(n, 0);
  for (const auto& cls : chain_recurrent_classes(chain)) {
    bool touched = false;
    bool costly = false;
    for (int s : cls) {
      if (alive[s]) touched = true;
      if (chain.step_cost[s] > 0) costly = true;
    }
    if (touched && costly) return std::nullopt;
    for (int s : cls) recurrent[s] = 1;
  }

  std::vector<int> transient;
  std::vector<int> slot(n, -1);
  for (int s = 0; s < n; ++s) {
    if (alive[s] && !recurrent[s]) {
      slot[s] = static_cast<int>(transient.size());
      transient.push_back(s);
    }
  }
  std::vector<Rational> cost(n, Rational(0));
  if (!transient.empty()) {
    int m = static_cast<int>(transient.size());
    std::vector<std::vector<Rational>> a(m, std::vector<Rational>(m, Rational(0)));
    std::vector<Rational> b(m, Rational(0));
    for (int row = 0; row < m; ++row) {
      int s = transient[row];
      a[row][row] = 1;
      b[row] = chain.step_cost[s];
      for (const Outcome& o : chain.rows[s]) {
        if (slot[o.state] != -1) a[row][slot[o.state]] -= o.prob;
      }
    }
    std::vector<Rational> x = solve_linear_system(std::move(a), std::move(b));
    for (int row = 0; row < m; ++row) cost[transient[row]] = x[row];
  }
  Rational total(0);
  for (const Outcome& o : chain.initial) total += o.prob * cost[o.state];
  return total;
}

std::optional<int> chain_max_disturbances(const Chain& chain) {
  int n = chain.size();
  std::vector<int> reachable = reachable_from_initial(chain);
  std::vector<char> alive(n, 0);
  for (int s : reachable) alive[s] = 1;

  auto edges = forward_edges(chain);
  std::vector<std::vector<int>> live_edges(n);
  for (int s = 0; s < n; ++s) {
    if (!alive[s]) continue;
    for (int t : edges[s]) {
      if (alive[t]) live_edges[s].push_back(t);
    }
  }
  auto components = strongly_connected_components(live_edges);
  std::vector<int> component_of(n, -1);
  for (size_t c = 0; c < components.size(); ++c) {
    for (int s : components[c]) component_of[s] = static_cast<int>(c);
  }
  // A costly step inside a cycle can repeat along some path.
  for (int s = 0; s < n; ++s) {
    if (!alive[s] || !(chain.step_cost[s] > 0)) continue;
    bool on_cycle = components[component_of[s]].size() > 1;
    for (int t : live_edges[s]) {
      if (t == s) on_cycle = true;
    }
    if (on_cycle) return std::nullopt;
  }
  // Longest costly path over the condensation order.
  int k = static_cast<int>(components.size());
  std::vector<int> weight(k, 0);
  std::vector<std::vector<int>> dag(k);
  for (int s = 0; s < n; ++s) {
    if (!alive[s]) continue;
    if (chain.step_cost[s] > 0) weight[component_of[s]] = 1;
    for (int t : live_edges[s]) {
      if (component_of[t] != component_of[s]) dag[component_of[s]].push_back(component_of[t]);
    }
  }
  // The component list is sorted by state id, not topologically, so relax
  // until stable; path lengths on the condensation are bounded by k.
  std::vector<int> best = weight;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int c = 0; c < k; ++c) {
      int follow = 0;
      for (int d : dag[c]) follow = std::max(follow, best[d]);
      if (weight[c] + follow > best[c]) {
        best[c] = weight[c] + follow;
        changed = true;
      }
    }
  }
  int answer = 0;
  for (const Outcome& o : chain.initial) {
    if (o.prob > 0) answer = std::max(answer, best[component_of[o.state]]);
  }
  return answer;
}

}  // namespace resil
