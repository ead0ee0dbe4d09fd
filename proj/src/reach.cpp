#include "resil/reach.hpp"

#include <algorithm>
#include <string>

#include "resil/chain.hpp"
#include "resil/errors.hpp"
#include "resil/lp.hpp"
#include "resil/mec.hpp"

namespace resil {

namespace {

struct Masks {
  std::vector<char> state;
  std::vector<std::vector<char>> action;
  std::vector<char> target;
};

Masks resolve_masks(const Model& model, const std::vector<int>& targets,
                    const std::vector<char>& state_allowed,
                    const std::vector<std::vector<char>>& action_allowed) {
  int n = model.state_count();
  Masks m;
  m.state = state_allowed.empty() ? std::vector<char>(n, 1) : state_allowed;
  if (action_allowed.empty()) {
    m.action.resize(n);
    for (int s = 0; s < n; ++s)
      m.action[s].assign(model.states[s].actions.size(), 1);
  } else {
    m.action = action_allowed;
  }
  m.target.assign(n, 0);
  for (int t : targets)
    if (m.state[t]) m.target[t] = 1;
  return m;
}

}  // namespace

std::vector<Rational> max_reach_exact(
    const Model& model, const std::vector<int>& targets,
    const std::vector<char>& state_allowed,
    const std::vector<std::vector<char>>& action_allowed) {
  int n = model.state_count();
  Masks m = resolve_masks(model, targets, state_allowed, action_allowed);

  std::vector<int> var_of(n, -1);
  LinearProgram lp;
  for (int s = 0; s < n; ++s) {
    if (!m.state[s] || m.target[s]) continue;
    var_of[s] = lp.add_variable("V_" + model.states[s].name);
    lp.add_objective_term(var_of[s], Rational(1));
  }
  for (int s = 0; s < n; ++s) {
    if (var_of[s] < 0) continue;
    const State& st = model.states[s];
    for (int a = 0; a < static_cast<int>(st.actions.size()); ++a) {
      if (!m.action[s][a]) continue;
      Rational constant(0);
      auto& row = lp.add_constraint(
          "r_" + st.name + "_" + st.actions[a].name, Relation::GreaterEq,
          Rational(0));
      row.terms.push_back({var_of[s], Rational(1)});
      for (const auto& out : st.actions[a].to) {
        if (m.target[out.state]) {
          constant += out.prob;
        } else if (var_of[out.state] >= 0) {
          row.terms.push_back({var_of[out.state], -out.prob});
        }
      }
      row.bound = constant;
    }
  }
  LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::Optimal) throw Error("reachability LP failed to solve");

  std::vector<Rational> values(n, Rational(0));
  for (int s = 0; s < n; ++s) {
    if (m.target[s]) values[s] = 1;
    else if (var_of[s] >= 0) values[s] = sol.point[var_of[s]];
  }
  return values;
}

std::vector<Rational> min_reach_exact(
    const Model& model, const std::vector<int>& targets,
    const std::vector<char>& state_allowed,
    const std::vector<std::vector<char>>& action_allowed) {
  int n = model.state_count();
  Masks m = resolve_masks(model, targets, state_allowed, action_allowed);

  // Value-0 core: states with some allowed action that avoids the targets
  // forever (support inside the core or escaping to disallowed states).
  std::vector<char> zero(n, 0);
  for (int s = 0; s < n; ++s) zero[s] = m.state[s] && !m.target[s];
  bool changed = true;
  while (changed) {
    changed = false;
    for (int s = 0; s < n; ++s) {
      if (!zero[s]) continue;
      bool has_safe = false;
      const State& st = model.states[s];
      for (int a = 0; a < static_cast<int>(st.actions.size()) && !has_safe; ++a) {
        if (!m.action[s][a]) continue;
        bool safe = true;
        for (const auto& out : st.actions[a].to) {
          if (m.state[out.state] && !zero[out.state]) { safe = false; break; }
          if (m.target[out.state]) { safe = false; break; }
        }
        if (safe) has_safe = true;
      }
      if (!has_safe) {
        zero[s] = 0;
        changed = true;
      }
    }
  }

  std::vector<int> var_of(n, -1);
  LinearProgram lp;
  lp.sense = Sense::Maximize;
  for (int s = 0; s < n; ++s) {
    if (!m.state[s] || m.target[s] || zero[s]) continue;
    var_of[s] = lp.add_variable("V_" + model.states[s].name);
    lp.add_objective_term(var_of[s], Rational(1));
  }
  for (int s = 0; s < n; ++s) {
    if (var_of[s] < 0) continue;
    const State& st = model.states[s];
    for (int a = 0; a < static_cast<int>(st.actions.size()); ++a) {
      if (!m.action[s][a]) continue;
      Rational constant(0);
      auto& row = lp.add_constraint(
          "r_" + st.name + "_" + st.actions[a].name, Relation::LessEq,
          Rational(0));
      row.terms.push_back({var_of[s], Rational(1)});
      for (const auto& out : st.actions[a].to) {
        if (m.target[out.state]) {
          constant += out.prob;
        } else if (var_of[out.state] >= 0) {
          row.terms.push_back({var_of[out.state], -out.prob});
        }
      }
      row.bound = constant;
    }
  }
  LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::Optimal) throw Error("reachability LP failed to solve");

  std::vector<Rational> values(n, Rational(0));
  for (int s = 0; s < n; ++s) {
    if (m.target[s]) values[s] = 1;
    else if (var_of[s] >= 0) values[s] = sol.point[var_of[s]];
  }
  return values;
}

namespace {

Chain policy_chain(const Model& model, const Masks& m, const std::vector<int>& policy) {
  Chain chain;
  int n = model.state_count();
  chain.names.reserve(n);
  chain.rows.resize(n);
  chain.step_cost.assign(n, Rational(0));
  for (int s = 0; s < n; ++s) {
    chain.names.push_back(model.states[s].name);
    if (policy[s] < 0 || m.target[s] || !m.state[s]) {
      chain.rows[s] = {{s, Rational(1)}};
    } else {
      chain.rows[s] = model.states[s].actions[policy[s]].to;
    }
  }
  chain.initial = {{0, Rational(1)}};
  return chain;
}

}  // namespace

ReachPolicy max_reach_policy_iteration(
    const Model& model, const std::vector<int>& targets,
    const std::vector<char>& state_allowed,
    const std::vector<std::vector<char>>& action_allowed) {
  int n = model.state_count();
  Masks m = resolve_masks(model, targets, state_allowed, action_allowed);

  ReachPolicy result;
  result.policy.assign(n, -1);
  for (int s = 0; s < n; ++s) {
    if (!m.state[s] || m.target[s]) continue;
    for (int a = 0; a < static_cast<int>(m.action[s].size()); ++a) {
      if (m.action[s][a]) {
        result.policy[s] = a;
        break;
      }
    }
  }

  std::vector<int> target_list;
  for (int s = 0; s < n; ++s)
    if (m.target[s]) target_list.push_back(s);

  while (true) {
    ++result.iterations;
    Chain chain = policy_chain(model, m, result.policy);
    std::vector<Rational> v = chain_reach(chain, target_list);
    bool improved = false;
    for (int s = 0; s < n; ++s) {
      if (!m.state[s] || m.target[s] || result.policy[s] < 0) continue;
      const State& st = model.states[s];
      for (int a = 0; a < static_cast<int>(st.actions.size()); ++a) {
        if (!m.action[s][a] || a == result.policy[s]) continue;
        Rational row(0);
        for (const auto& out : st.actions[a].to) {
          if (m.target[out.state]) row += out.prob;
          else if (m.state[out.state]) row += out.prob * v[out.state];
        }
        if (row > v[s]) {
          result.policy[s] = a;
          improved = true;
          break;
        }
      }
    }
    if (!improved) {
      result.values = std::move(v);
      for (int t : target_list) result.values[t] = 1;
      return result;
    }
  }
}

namespace {

std::vector<double> jacobi_sweep(const Model& model, const Masks& m,
                                 const std::vector<double>& v) {
  int n = model.state_count();
  std::vector<double> next(n, 0.0);
  for (int s = 0; s < n; ++s) {
    if (m.target[s]) { next[s] = 1.0; continue; }
    if (!m.state[s]) continue;
    double best = 0.0;
    for (int a = 0; a < static_cast<int>(m.action[s].size()); ++a) {
      if (!m.action[s][a]) continue;
      double row = 0.0;
      for (const auto& out : model.states[s].actions[a].to)
        row += static_cast<double>(out.prob) * v[out.state];
      best = std::max(best, row);
    }
    next[s] = best;
  }
  return next;
}

}  // namespace

ValueVector max_reach_interval(const Model& model, const std::vector<int>& targets,
                               double precision, long max_sweeps) {
  int n = model.state_count();
  Masks m = resolve_masks(model, targets, {}, {});

  // End components disjoint from the targets make plain upper iteration
  // stall at 1; collapsing them removes every spurious fixpoint.
  std::vector<char> non_target(n, 1);
  for (int s = 0; s < n; ++s)
    if (m.target[s]) non_target[s] = 0;
  auto comps = maximal_end_components(model, non_target, {});
  std::vector<int> cls(n, -1);
  for (int c = 0; c < static_cast<int>(comps.size()); ++c)
    for (int s : comps[c].states) cls[s] = c;

  // Exits of each class: (state, action) pairs leaving the class.
  struct Exit { int state; int action; };
  std::vector<std::vector<Exit>> exits(comps.size());
  for (int c = 0; c < static_cast<int>(comps.size()); ++c) {
    for (int s : comps[c].states) {
      const State& st = model.states[s];
      for (int a = 0; a < static_cast<int>(st.actions.size()); ++a) {
        bool inside = true;
        for (const auto& out : st.actions[a].to)
          if (cls[out.state] != c) inside = false;
        if (!inside) exits[c].push_back({s, a});
      }
    }
  }

  std::vector<double> lower(n, 0.0), upper(n, 1.0);
  for (int s = 0; s < n; ++s)
    if (m.target[s]) lower[s] = 1.0;

  auto upper_row = [&](int s, int a, const std::vector<double>& u) {
    double row = 0.0;
    for (const auto& out : model.states[s].actions[a].to)
      row += static_cast<double>(out.prob) * u[out.state];
    return row;
  };

  for (long sweep = 1; sweep <= max_sweeps; ++sweep) {
    lower = jacobi_sweep(model, m, lower);
    std::vector<double> next(n, 0.0);
    for (int s = 0; s < n; ++s) {
      if (m.target[s]) { next[s] = 1.0; continue; }
      double best = 0.0;
      if (cls[s] >= 0) {
        for (const auto& e : exits[cls[s]])
          best = std::max(best, upper_row(e.state, e.action, upper));
      } else {
        for (int a = 0; a < static_cast<int>(model.states[s].actions.size()); ++a)
          best = std::max(best, upper_row(s, a, upper));
      }
      next[s] = best;
    }
    upper = next;
    double gap = 0.0;
    for (int s = 0; s < n; ++s) gap = std::max(gap, upper[s] - lower[s]);
    if (gap < precision) {
      ValueVector out;
      out.residual = gap;
      out.sweeps = sweep;
      out.values.reserve(n);
      for (int s = 0; s < n; ++s) {
        // Exact rational carrier for a float result; NumTraits<double>
        // comparisons downstream apply the float tolerance.
        out.values.push_back(Rational((lower[s] + upper[s]) / 2.0));
      }
      return out;
    }
  }
  throw NotConverged("interval iteration gap above " + std::to_string(precision) +
                     " after " + std::to_string(max_sweeps) + " sweeps");
}

long vi_sweeps_to_exceed(const Model& model, const std::vector<int>& targets,
                         const Rational& bound, long cap) {
  Masks m = resolve_masks(model, targets, {}, {});
  int n = model.state_count();
  std::vector<double> v(n, 0.0);
  for (int s = 0; s < n; ++s)
    if (m.target[s]) v[s] = 1.0;
  double b = static_cast<double>(bound);
  for (long sweep = 1; sweep <= cap; ++sweep) {
    v = jacobi_sweep(model, m, v);
    double at_initial = 0.0;
    for (const auto& in : model.initial)
      at_initial += static_cast<double>(in.prob) * v[in.state];
    if (at_initial > b) return sweep;
  }
  return -1;
}

ValueVector max_reach_mdp(const Model& model, const std::vector<int>& targets,
                          NumericMode mode, double precision) {
  if (mode == NumericMode::Float)
    return max_reach_interval(model, targets, precision);
  ValueVector out;
  out.values = max_reach_exact(model, targets);
  return out;
}

SgReach max_reach_sg(const Model& game, const std::vector<int>& targets,
                     Player maximizer, long budget) {
  int n = game.state_count();
  for (int s = 0; s < n; ++s)
    if (game.states[s].disturbance_count() > 0)
      throw Error("max_reach_sg expects a plain game; fold disturbances first");

  std::vector<int> choosers;
  long combinations = 1;
  for (int s = 0; s < n; ++s) {
    if (game.states[s].owner != Player::One) continue;
    int count = static_cast<int>(game.states[s].actions.size());
    if (count > 1) {
      choosers.push_back(s);
      if (combinations > budget / count)
        throw BudgetExceeded("strategy enumeration over " +
                             std::to_string(choosers.size()) +
                             " states exceeds the budget");
      combinations *= count;
    }
  }

  bool p1_max = maximizer == Player::One;
  SgReach result;
  result.values.assign(n, p1_max ? Rational(0) : Rational(1));
  Rational best_initial = p1_max ? Rational(-1) : Rational(2);

  std::vector<int> pick(choosers.size(), 0);
  for (long iter = 0; iter < combinations; ++iter) {
    std::vector<std::vector<char>> action_allowed(n);
    for (int s = 0; s < n; ++s)
      action_allowed[s].assign(game.states[s].actions.size(), 1);
    std::map<int, int> assignment;
    for (size_t i = 0; i < choosers.size(); ++i) {
      int s = choosers[i];
      assignment[s] = pick[i];
      for (int a = 0; a < static_cast<int>(action_allowed[s].size()); ++a)
        action_allowed[s][a] = a == pick[i];
    }
    std::vector<Rational> values =
        p1_max ? min_reach_exact(game, targets, {}, action_allowed)
               : max_reach_exact(game, targets, {}, action_allowed);
    Rational at_initial(0);
    for (const auto& in : game.initial)
      at_initial += in.prob * values[in.state];
    if (p1_max) {
      for (int s = 0; s < n; ++s) result.values[s] = std::max(result.values[s], values[s]);
      if (at_initial > best_initial) { best_initial = at_initial; result.choice = assignment; }
    } else {
      for (int s = 0; s < n; ++s) result.values[s] = std::min(result.values[s], values[s]);
      if (at_initial < best_initial) { best_initial = at_initial; result.choice = assignment; }
    }
    ++result.enumerated;
    for (size_t i = 0; i < pick.size(); ++i) {
      int s = choosers[i];
      if (++pick[i] < static_cast<int>(game.states[s].actions.size())) break;
      pick[i] = 0;
    }
  }
  return result;
}

}  // namespace resil
