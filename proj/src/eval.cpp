#include "resil/eval.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "resil/errors.hpp"
#include "resil/lp.hpp"
#include "resil/mean_payoff.hpp"
#include "resil/numeric.hpp"
#include "resil/sets.hpp"
#include "resil/transforms.hpp"

namespace resil {

const char* to_string(EvalCase value) {
  switch (value) {
    case EvalCase::Case1: return "case-1";
    case EvalCase::Case2: return "case-2";
    case EvalCase::Case3: return "case-3";
    case EvalCase::Boundary: return "boundary";
    case EvalCase::SafetyBreak: return "safety-breakable";
    case EvalCase::SafetySafe: return "safety-unbreakable";
  }
  return "unknown";
}

namespace {

Rational initial_weighted(const Model& model, const std::vector<Rational>& values) {
  Rational out(0);
  for (const Outcome& o : model.initial) out += o.prob * values[o.state];
  return out;
}

std::vector<int> labeled_states(const Model& model, const std::string& label) {
  std::vector<int> out;
  for (int s = 0; s < model.state_count(); ++s) {
    if (model.states[s].has_label(label)) out.push_back(s);
  }
  return out;
}

int disturbance_action_count(const Model& model) {
  int count = 0;
  for (const State& state : model.states) {
    for (const Action& action : state.actions) {
      if (action.kind == ActionKind::Disturbance) ++count;
    }
  }
  return count;
}

struct Gate {
  Rational value;
  double approx = 0.0;
};

Gate reach_gate(const Model& model, const std::vector<int>& targets, const EvalOptions& options) {
  ValueVector vv = max_reach_mdp(model, targets, options.mode, options.precision);
  Gate gate;
  gate.value = initial_weighted(model, vv.values);
  gate.approx = num_from<double>(gate.value);
  return gate;
}

bool gate_breaks(const Objective& phi, const Gate& gate, NumericMode mode) {
  if (mode == NumericMode::Exact) return phi.breaks(gate.value);
  return phi.breaks(gate.approx);
}

bool gate_at_threshold(const Objective& phi, const Gate& gate, NumericMode mode) {
  Rational theta = phi.theta();
  if (mode == NumericMode::Exact) return gate.value == theta;
  double t = num_from<double>(theta);
  return !num_lt(gate.approx, t) && !num_lt(t, gate.approx);
}

// First normal action of a Player-2 state whose support stays inside the
// region; -1 when none does.
int staying_action(const Model& model, const std::vector<char>& region, int s) {
  const State& state = model.states[s];
  for (int a = 0; a < static_cast<int>(state.actions.size()); ++a) {
    if (state.actions[a].kind != ActionKind::Normal) continue;
    bool stays = true;
    for (const Outcome& o : state.actions[a].to) {
      if (o.prob > 0 && !region[o.state]) stays = false;
    }
    if (stays) return a;
  }
  return -1;
}

struct WitnessPair {
  Strategy sigma;
  Strategy delta;
};

// Maps a per-state action mixing over the one-player view back onto the
// original game: Player-2 rows become the adversary's choices and the
// disturbance shares at Player-1 rows become the disturber's, with the
// controller's own action standing for "no disturbance". Inside `stay` the
// defaults keep the play there silently. Only valid when the one-player view
// shares the original state space, i.e. for memoryless controllers.
WitnessPair memoryless_witness(const Model& original, const Model& view,
                               const std::vector<Choice>& mixing,
                               const std::vector<char>& stay) {
  WitnessPair out;
  out.sigma.role = Role::Adversary;
  out.delta.role = Role::Disturber;
  for (int s = 0; s < original.state_count(); ++s) {
    if (original.states[s].owner == Player::Two) {
      Choice choice;
      for (const Weighted& w : mixing[s]) {
        int a = original.find_action(s, view.states[s].actions[w.action].name);
        if (a >= 0) choice.push_back({a, w.weight});
      }
      if (choice.empty() && !stay.empty() && stay[s]) {
        int a = staying_action(original, stay, s);
        if (a >= 0) choice = {{a, Rational(1)}};
      }
      if (choice.empty()) choice = {{0, Rational(1)}};
      out.sigma.rule[{s, 0}] = choice;
    } else {
      Choice choice;
      Rational quiet(1);
      for (const Weighted& w : mixing[s]) {
        const Action& action = view.states[s].actions[w.action];
        if (action.kind != ActionKind::Disturbance) continue;
        int a = original.find_action(s, action.name);
        if (a >= 0) {
          choice.push_back({a, w.weight});
          quiet -= w.weight;
        }
      }
      if (choice.empty() || quiet > 0) choice.push_back({kBottom, quiet});
      out.delta.rule[{s, 0}] = choice;
    }
  }
  return out;
}

// Step-counting witness from a pure policy over the counter product of the
// one-player view: the counter tracks the disturbances still allowed, so the
// policy rows translate directly into rules keyed by (state, remaining).
// Distinct controller-memory copies of the same (state, remaining) pair must
// agree; returns nothing when they conflict.
std::optional<WitnessPair> product_witness(const Model& original, const Induced& induced,
                                           const Model& view, const CounterProduct& product,
                                           const std::vector<int>& policy, int k,
                                           const std::vector<char>& stay) {
  WitnessPair out;
  out.sigma.role = Role::Adversary;
  out.sigma.counter = k;
  out.delta.role = Role::Disturber;
  out.delta.counter = k;
  // Default rows: the adversary keeps the play inside the stay region once it
  // is reached (the policy rows below are blank there), the disturber stays
  // quiet. The stay region lives in the one-player view; map by action name.
  std::vector<int> stay_default(original.state_count(), -1);
  for (int v = 0; v < static_cast<int>(stay.size()); ++v) {
    if (!stay[v]) continue;
    int s = induced.origin[v];
    if (original.states[s].owner != Player::Two || stay_default[s] >= 0) continue;
    int a = staying_action(view, stay, v);
    if (a >= 0) stay_default[s] = original.find_action(s, view.states[v].actions[a].name);
  }
  for (int s = 0; s < original.state_count(); ++s) {
    for (int c = 0; c <= k; ++c) {
      if (original.states[s].owner == Player::Two) {
        out.sigma.rule[{s, c}] = {{stay_default[s] >= 0 ? stay_default[s] : 0, Rational(1)}};
      } else {
        out.delta.rule[{s, c}] = {{kBottom, Rational(1)}};
      }
    }
  }
  std::map<std::pair<int, int>, int> assigned_sigma;
  std::map<std::pair<int, int>, int> assigned_delta;
  for (int p = 0; p < product.model.state_count(); ++p) {
    int pick = policy[p];
    if (pick < 0) continue;
    int view_state = product.origin[p];
    int c = product.counter[p];
    int s = induced.origin[view_state];
    const Action& action = product.model.states[p].actions[pick];
    if (original.states[s].owner == Player::Two) {
      int a = original.find_action(s, action.name);
      if (a < 0) continue;
      auto [it, fresh] = assigned_sigma.try_emplace({s, c}, a);
      if (!fresh && it->second != a) return std::nullopt;
      out.sigma.rule[{s, c}] = {{a, Rational(1)}};
    } else if (action.kind == ActionKind::Disturbance) {
      int a = original.find_action(s, action.name);
      if (a < 0) continue;
      auto [it, fresh] = assigned_delta.try_emplace({s, c}, a);
      if (!fresh && it->second != a) return std::nullopt;
      out.delta.rule[{s, c}] = {{a, Rational(1)}};
    }
  }
  return out;
}

}  // namespace

TransientLevels transient_iterative_lp(const Model& induced, const std::vector<int>& targets,
                                       const Objective& phi, int k) {
  int n = induced.state_count();
  std::vector<char> is_target(n, 0);
  for (int s : targets) is_target[s] = 1;

  TransientLevels out;
  std::vector<Rational> previous;
  for (int level = 0; level <= k; ++level) {
    LinearProgram lp;
    std::vector<int> var(n, -1);
    for (int s = 0; s < n; ++s) {
      var[s] = lp.add_variable("v_" + induced.states[s].name);
      lp.add_objective_term(var[s], Rational(1));
    }
    for (int s = 0; s < n; ++s) {
      const State& state = induced.states[s];
      if (is_target[s]) {
        LinearConstraint& row =
            lp.add_constraint("target_" + state.name, Relation::Equal, Rational(1));
        row.terms.push_back({var[s], Rational(1)});
        continue;
      }
      for (size_t a = 0; a < state.actions.size(); ++a) {
        const Action& action = state.actions[a];
        if (action.kind == ActionKind::Normal) {
          LinearConstraint& row = lp.add_constraint(
              "row_" + state.name + "_" + action.name, Relation::GreaterEq, Rational(0));
          row.terms.push_back({var[s], Rational(1)});
          for (const Outcome& o : action.to) {
            row.terms.push_back({var[o.state], -o.prob});
          }
        } else if (level > 0) {
          Rational bound(0);
          for (const Outcome& o : action.to) bound += o.prob * previous[o.state];
          LinearConstraint& row = lp.add_constraint(
              "row_" + state.name + "_" + action.name, Relation::GreaterEq, bound);
          row.terms.push_back({var[s], Rational(1)});
        }
      }
    }
    LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::Optimal) {
      throw Error("level reachability program did not solve to optimality");
    }
    std::vector<Rational> values(n);
    for (int s = 0; s < n; ++s) values[s] = sol.point[var[s]];
    out.initial_values.push_back(initial_weighted(induced, values));
    out.vectors.push_back(values);
    previous = std::move(values);
    if (phi.breaks(out.initial_values.back())) {
      out.level = level;
      break;
    }
  }
  return out;
}

FrequencyReport worst_case_frequency(const Model& induced, const std::vector<int>& goal,
                                     const std::vector<int>& silent,
                                     const std::vector<EndComponent>& pool,
                                     const Objective& phi) {
  std::vector<char> is_goal(induced.state_count(), 0);
  for (int s : goal) is_goal[s] = 1;
  for (const EndComponent& component : pool) {
    for (int s : component.states) {
      if (is_goal[s]) {
        throw PreconditionViolated("frequency pool component touches the goal region");
      }
    }
  }

  CostFunction costs = disturbance_costs(induced);
  FrequencyReport out;
  for (const EndComponent& component : pool) {
    out.components.push_back(component.states);
    out.frequencies.push_back(min_mean_payoff_mec(induced, component, costs).value);
  }

  std::vector<char> removed(pool.size(), 0);
  auto family_reach = [&]() {
    std::vector<char> in_family(induced.state_count(), 0);
    for (int s : silent) in_family[s] = 1;
    for (size_t m = 0; m < pool.size(); ++m) {
      if (removed[m]) continue;
      for (int s : pool[m].states) in_family[s] = 1;
    }
    std::vector<int> targets;
    for (int s = 0; s < induced.state_count(); ++s) {
      if (in_family[s]) targets.push_back(s);
    }
    return initial_weighted(induced, max_reach_exact(induced, targets));
  };

  if (phi.breaks(initial_weighted(induced, max_reach_exact(induced, silent)))) {
    throw PreconditionViolated("the silent region alone already breaks the objective");
  }
  if (!phi.breaks(family_reach())) {
    throw PreconditionViolated("the full end-component family does not break the objective");
  }

  while (phi.breaks(family_reach())) {
    int pick = -1;
    for (size_t m = 0; m < pool.size(); ++m) {
      if (removed[m]) continue;
      if (pick < 0 || out.frequencies[m] > out.frequencies[pick] ||
          (out.frequencies[m] == out.frequencies[pick] &&
           pool[m].states < pool[pick].states)) {
        pick = static_cast<int>(m);
      }
    }
    removed[pick] = 1;
    out.critical = pick;
  }
  out.value = out.frequencies[out.critical];
  for (size_t m = 0; m < pool.size(); ++m) {
    if (!removed[m] || static_cast<int>(m) == out.critical) {
      out.kept.push_back(static_cast<int>(m));
    }
  }
  return out;
}

EvalReport expected_breaking_point(const Model& model, const Objective& phi,
                                   const Strategy& pi, const EvalOptions& options) {
  check_strategy(model, pi);
  EvalReport rep;
  rep.mode = options.mode;
  rep.induced = induced_mdp(model, pi);

  Model view = rep.induced.model;
  normalize_sinks(view, {phi.label});
  std::vector<int> lab = labeled_states(view, phi.label);
  bool safety = phi.kind == ObjectiveKind::Safety;
  std::vector<int> target = safety ? lab : silent_core(view, lab);
  rep.violation_target = target;

  CostFunction costs = disturbance_costs(view);
  Rational theta = phi.theta();
  Gate gate = reach_gate(view, target, options);
  rep.reach_target = gate.value;

  std::vector<char> stay(view.state_count(), 0);
  for (int s : target) stay[s] = 1;

  if (gate_breaks(phi, gate, options.mode)) {
    McmpResult solved = ssp_mcmp_lp(view, costs, target, theta);
    rep.breaking_point = BreakingPoint<Rational>::finite(solved.value);
    if (!phi.strict) {
      rep.breaking_point.attained =
          phi.breaks(mcmp_max_reach_at_cost(view, costs, target, solved.value));
    }
    rep.case_taken = safety ? EvalCase::SafetyBreak : EvalCase::Case1;
    if (pi.memoryless()) {
      WitnessPair pair = memoryless_witness(model, view, solved.mixing, stay);
      rep.witness_adversary = std::move(pair.sigma);
      rep.witness_disturber = std::move(pair.delta);
    } else {
      rep.diagnostic = "witness extraction skipped for a controller with memory";
    }
    rep.mcmp = std::move(solved);
    return rep;
  }

  if (safety) {
    rep.breaking_point = BreakingPoint<Rational>::unbreakable();
    rep.case_taken = EvalCase::SafetySafe;
    return rep;
  }

  std::vector<char> allowed(view.state_count(), 1);
  for (int s : lab) allowed[s] = 0;
  std::vector<EndComponent> pool = maximal_end_components(view, allowed, {});
  std::vector<int> pool_union;
  for (const EndComponent& component : pool) {
    rep.components.push_back(component.states);
    pool_union.insert(pool_union.end(), component.states.begin(), component.states.end());
  }
  Gate union_gate = reach_gate(view, pool_union, options);
  rep.reach_components = union_gate.value;

  if (!gate_breaks(phi, union_gate, options.mode)) {
    rep.breaking_point = BreakingPoint<Rational>::unbreakable();
    rep.case_taken = EvalCase::Case2;
    return rep;
  }

  for (const EndComponent& component : pool) {
    rep.frequencies.push_back(min_mean_payoff_mec(view, component, costs).value);
  }
  WeightedQuotient quotient = weighted_mec_quotient(view, pool, rep.frequencies);
  McmpResult solved = ssp_mcmp_lp(quotient.model, quotient.cost, {quotient.s_plus}, theta);
  rep.breaking_point = BreakingPoint<Rational>::at_frequency(solved.value);
  if (!phi.strict) {
    rep.breaking_point.attained = phi.breaks(
        mcmp_max_reach_at_cost(quotient.model, quotient.cost, {quotient.s_plus}, solved.value));
  }
  rep.mcmp = std::move(solved);
  rep.case_taken = EvalCase::Case3;
  rep.diagnostic = "frequency witnesses over the quotient are not mapped back";
  return rep;
}

EvalReport worst_case_breaking_point(const Model& model, const Objective& phi,
                                     const Strategy& pi, const EvalOptions& options) {
  check_strategy(model, pi);
  EvalReport rep;
  rep.mode = options.mode;
  rep.induced = induced_mdp(model, pi);

  Model view = rep.induced.model;
  normalize_sinks(view, {phi.label});
  std::vector<int> lab = labeled_states(view, phi.label);
  bool safety = phi.kind == ObjectiveKind::Safety;
  std::vector<int> target = safety ? lab : silent_core(view, lab);
  rep.violation_target = target;

  Rational theta = phi.theta();
  Gate gate = reach_gate(view, target, options);
  rep.reach_target = gate.value;

  std::vector<char> stay(view.state_count(), 0);
  for (int s : target) stay[s] = 1;

  auto finish_finite = [&](const TransientLevels& levels, EvalCase label) {
    rep.level_values = levels.initial_values;
    rep.level_vectors = levels.vectors;
    rep.case_taken = label;
    int level = *levels.level;
    rep.breaking_point = BreakingPoint<Rational>::finite(Rational(level));
    CounterProduct product = product_with_counter(view, level);
    std::vector<int> lifted;
    for (int p = 0; p < product.model.state_count(); ++p) {
      if (stay[product.origin[p]]) lifted.push_back(p);
    }
    ReachPolicy policy = max_reach_policy_iteration(product.model, lifted);
    std::optional<WitnessPair> pair =
        product_witness(model, rep.induced, view, product, policy.policy, level, stay);
    if (pair) {
      rep.witness_adversary = std::move(pair->sigma);
      rep.witness_disturber = std::move(pair->delta);
    } else {
      rep.diagnostic = "witness rules conflict across controller-memory copies; omitted";
    }
  };

  if (gate_breaks(phi, gate, options.mode)) {
    if (phi.strict && gate_at_threshold(phi, gate, options.mode)) {
      int rounds = disturbance_action_count(model);
      TransientLevels levels = transient_iterative_lp(view, target, phi, rounds);
      if (levels.level) {
        finish_finite(levels, EvalCase::Boundary);
      } else {
        rep.level_values = levels.initial_values;
        rep.level_vectors = levels.vectors;
        rep.breaking_point = BreakingPoint<Rational>::at_frequency(Rational(0));
        rep.breaking_point.attained = false;
        rep.case_taken = EvalCase::Boundary;
        rep.diagnostic =
            "level values approach the threshold without attaining it at any finite level";
      }
      return rep;
    }
    long cap = vi_sweeps_to_exceed(view, target, theta, options.budget);
    if (cap < 0) {
      rep.breaking_point = BreakingPoint<Rational>::at_frequency(Rational(0));
      rep.case_taken = safety ? EvalCase::SafetyBreak : EvalCase::Case1;
      rep.diagnostic =
          "level search exceeded the sweep budget; transient count reported as omega";
      return rep;
    }
    TransientLevels levels = transient_iterative_lp(view, target, phi, static_cast<int>(cap));
    if (!levels.level) {
      throw Error("value iteration bound did not cover the breaking level");
    }
    finish_finite(levels, safety ? EvalCase::SafetyBreak : EvalCase::Case1);
    return rep;
  }

  if (safety) {
    rep.breaking_point = BreakingPoint<Rational>::unbreakable();
    rep.case_taken = EvalCase::SafetySafe;
    return rep;
  }

  std::vector<char> allowed(view.state_count(), 1);
  for (int s : lab) allowed[s] = 0;
  std::vector<EndComponent> pool = maximal_end_components(view, allowed, {});
  std::vector<int> pool_union;
  for (const EndComponent& component : pool) {
    pool_union.insert(pool_union.end(), component.states.begin(), component.states.end());
  }
  Gate union_gate = reach_gate(view, pool_union, options);
  rep.reach_components = union_gate.value;

  if (!gate_breaks(phi, union_gate, options.mode)) {
    for (const EndComponent& component : pool) rep.components.push_back(component.states);
    rep.breaking_point = BreakingPoint<Rational>::unbreakable();
    rep.case_taken = EvalCase::Case2;
    return rep;
  }

  FrequencyReport frequency = worst_case_frequency(view, lab, target, pool, phi);
  rep.components = frequency.components;
  rep.frequencies = frequency.frequencies;
  rep.breaking_point = BreakingPoint<Rational>::at_frequency(frequency.value);
  rep.case_taken = EvalCase::Case3;

  if (pi.memoryless()) {
    CostFunction costs = disturbance_costs(view);
    std::vector<char> in_family = stay;
    std::vector<Choice> mixing(view.state_count());
    for (int m : frequency.kept) {
      MeanPayoffResult payoff = min_mean_payoff_mec(view, pool[m], costs);
      for (int s : pool[m].states) {
        in_family[s] = 1;
        mixing[s] = payoff.stay[s];
      }
    }
    std::vector<int> family;
    for (int s = 0; s < view.state_count(); ++s) {
      if (in_family[s]) family.push_back(s);
    }
    ReachPolicy policy = max_reach_policy_iteration(view, family);
    for (int s = 0; s < view.state_count(); ++s) {
      if (mixing[s].empty() && !in_family[s] && policy.policy[s] >= 0) {
        mixing[s] = {{policy.policy[s], Rational(1)}};
      }
    }
    WitnessPair pair = memoryless_witness(model, view, mixing, stay);
    rep.witness_adversary = std::move(pair.sigma);
    rep.witness_disturber = std::move(pair.delta);
  } else {
    rep.diagnostic = "witness extraction skipped for a controller with memory";
  }
  return rep;
}

}  // namespace resil
