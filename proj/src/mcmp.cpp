#include "resil/mcmp.hpp"

#include <string>

#include "resil/chain.hpp"
#include "resil/errors.hpp"
#include "resil/reach.hpp"

namespace resil {

CostFunction disturbance_costs(const Model& model) {
  CostFunction costs(model.state_count());
  for (int s = 0; s < model.state_count(); ++s) {
    const State& st = model.states[s];
    costs[s].assign(st.actions.size(), Rational(0));
    for (int a = 0; a < static_cast<int>(st.actions.size()); ++a)
      if (st.actions[a].kind == ActionKind::Disturbance) costs[s][a] = 1;
  }
  return costs;
}

namespace {

struct FlowSystem {
  int n = 0;
  std::vector<char> is_target;
  std::vector<char> is_sink;     // value-0 states; flow may vanish there
  std::vector<std::vector<int>> var_of;  // [state][action] -> variable, -1 none
  Rational initial_in_target;
};

// Flow variables live on states that can reach the target; their balance is
// exact (outflow = initial mass + inflow), which is what makes the mixing
// recovered from the flow reproduce it as a chain. Mass entering a value-0
// state can never reach the target, so those states absorb flow instead of
// carrying variables: that stands for giving up with a cost-free
// continuation, which always exists because the value-0 region is closed
// under every action.
FlowSystem build_flow_lp(LinearProgram& lp, const Model& model,
                         const CostFunction& costs, const std::vector<int>& target,
                         const Rational& threshold) {
  FlowSystem fs;
  fs.n = model.state_count();
  fs.is_target.assign(fs.n, 0);
  for (int t : target) fs.is_target[t] = 1;

  std::vector<Rational> value = max_reach_exact(model, target);
  fs.is_sink.assign(fs.n, 0);
  for (int s = 0; s < fs.n; ++s)
    if (!fs.is_target[s] && value[s] == 0) fs.is_sink[s] = 1;

  fs.var_of.resize(fs.n);
  for (int s = 0; s < fs.n; ++s) {
    const State& st = model.states[s];
    fs.var_of[s].assign(st.actions.size(), -1);
    if (fs.is_target[s] || fs.is_sink[s]) continue;
    for (int a = 0; a < static_cast<int>(st.actions.size()); ++a) {
      fs.var_of[s][a] =
          lp.add_variable("x_" + st.name + "_" + st.actions[a].name);
      lp.add_objective_term(fs.var_of[s][a], costs[s][a]);
    }
  }

  std::vector<Rational> iota(fs.n, Rational(0));
  fs.initial_in_target = 0;
  for (const auto& in : model.initial) {
    iota[in.state] += in.prob;
    if (fs.is_target[in.state]) fs.initial_in_target += in.prob;
  }

  for (int s = 0; s < fs.n; ++s) {
    if (fs.is_target[s] || fs.is_sink[s]) continue;
    auto& row = lp.add_constraint("flow_" + model.states[s].name,
                                  Relation::Equal, iota[s]);
    for (int a = 0; a < static_cast<int>(fs.var_of[s].size()); ++a)
      row.terms.push_back({fs.var_of[s][a], Rational(1)});
    for (int sp = 0; sp < fs.n; ++sp) {
      for (int a = 0; a < static_cast<int>(fs.var_of[sp].size()); ++a) {
        if (fs.var_of[sp][a] < 0) continue;
        for (const auto& out : model.states[sp].actions[a].to)
          if (out.state == s)
            row.terms.push_back({fs.var_of[sp][a], -out.prob});
      }
    }
  }

  auto& reach = lp.add_constraint("reach", Relation::GreaterEq,
                                  threshold - fs.initial_in_target);
  for (int s = 0; s < fs.n; ++s) {
    for (int a = 0; a < static_cast<int>(fs.var_of[s].size()); ++a) {
      if (fs.var_of[s][a] < 0) continue;
      Rational mass(0);
      for (const auto& out : model.states[s].actions[a].to)
        if (fs.is_target[out.state]) mass += out.prob;
      if (mass != 0) reach.terms.push_back({fs.var_of[s][a], mass});
    }
  }
  return fs;
}

struct WitnessChain {
  Chain chain;
  std::vector<Choice> mixing;
};

WitnessChain witness_from_flows(const Model& model, const CostFunction& costs,
                                const FlowSystem& fs,
                                const std::vector<Rational>& flows) {
  WitnessChain w;
  w.mixing.resize(fs.n);
  w.chain.names.reserve(fs.n);
  w.chain.rows.resize(fs.n);
  w.chain.step_cost.assign(fs.n, Rational(0));
  for (int s = 0; s < fs.n; ++s) {
    w.chain.names.push_back(model.states[s].name);
    if (fs.is_target[s] || fs.is_sink[s]) {
      w.chain.rows[s] = {{s, Rational(1)}};
      continue;
    }
    Rational out(0);
    for (int a = 0; a < static_cast<int>(fs.var_of[s].size()); ++a)
      out += flows[fs.var_of[s][a]];
    if (out == 0) {
      // The flow never visits this state, so neither does the chain.
      w.chain.rows[s] = {{s, Rational(1)}};
      continue;
    }
    Distribution row;
    for (int a = 0; a < static_cast<int>(fs.var_of[s].size()); ++a) {
      Rational x = flows[fs.var_of[s][a]];
      if (x == 0) continue;
      Rational weight = x / out;
      w.mixing[s].push_back({a, weight});
      w.chain.step_cost[s] += weight * costs[s][a];
      for (const auto& o : model.states[s].actions[a].to)
        row.push_back({o.state, weight * o.prob});
    }
    normalize_distribution(row);
    w.chain.rows[s] = std::move(row);
  }
  w.chain.initial = model.initial;
  return w;
}

}  // namespace

McmpResult ssp_mcmp_lp(const Model& model, const CostFunction& costs,
                       const std::vector<int>& target, const Rational& threshold) {
  McmpResult result;
  FlowSystem fs = build_flow_lp(result.lp, model, costs, target, threshold);

  LpSolution primary = solve_lp(result.lp);
  if (primary.status == LpStatus::Infeasible)
    throw Infeasible("no strategy reaches the target with probability " +
                     rational_to_string(threshold));
  if (primary.status != LpStatus::Optimal)
    throw Error("cost flow program did not solve");
  result.value = primary.value;

  // Among the optimal flows, pick the one with least total mass: it carries
  // no closed circulation, so the mixing below induces exactly this flow.
  LinearProgram polish = result.lp;
  auto& cap = polish.add_constraint("optimal_cost", Relation::LessEq, result.value);
  for (const auto& term : result.lp.objective) cap.terms.push_back(term);
  polish.objective.clear();
  for (int v = 0; v < static_cast<int>(polish.variables.size()); ++v)
    polish.add_objective_term(v, Rational(1));
  LpSolution massmin = solve_lp(polish);
  if (massmin.status != LpStatus::Optimal)
    throw Error("flow polishing program did not solve");
  result.flows = massmin.point;

  WitnessChain w = witness_from_flows(model, costs, fs, result.flows);
  result.mixing = std::move(w.mixing);
  result.witness_reach = chain_reach_initial(w.chain, target);
  auto cost = chain_expected_cost(w.chain);
  if (!cost || *cost != result.value || result.witness_reach < threshold)
    throw Error("flow witness failed exact re-evaluation");
  result.witness_cost = *cost;
  return result;
}

Rational mcmp_max_reach_at_cost(const Model& model, const CostFunction& costs,
                                const std::vector<int>& target,
                                const Rational& cost_bound) {
  LinearProgram lp;
  FlowSystem fs = build_flow_lp(lp, model, costs, target, Rational(0));
  auto& cap = lp.add_constraint("cost_budget", Relation::LessEq, cost_bound);
  for (const auto& term : lp.objective) cap.terms.push_back(term);
  lp.objective.clear();
  lp.sense = Sense::Maximize;
  // The reach row's left-hand side, as the objective.
  for (const auto& c : lp.constraints) {
    if (c.name != "reach") continue;
    for (const auto& term : c.terms) lp.add_objective_term(term.var, term.coeff);
  }
  LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::Optimal) throw Error("reach maximization did not solve");
  return sol.value + fs.initial_in_target;
}

}  // namespace resil
