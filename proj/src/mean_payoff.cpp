#include "resil/mean_payoff.hpp"

#include <algorithm>
#include <string>

#include "resil/chain.hpp"
#include "resil/errors.hpp"

namespace resil {

namespace {

std::vector<Rational> resolve_time(const Model& model, const std::vector<Rational>& time) {
  if (time.empty()) return std::vector<Rational>(model.state_count(), Rational(1));
  if (static_cast<int>(time.size()) != model.state_count())
    throw Error("time weights must cover every state");
  return time;
}

// Kept pairs of the component, possibly narrowed to a fixed choice at some
// states. kept[i] lists action indices of component.states[i].
struct StayView {
  std::vector<int> members;               // component states
  std::vector<int> slot_of;               // model state -> members index, -1
  std::vector<std::vector<int>> kept;
};

StayView make_view(const Model& model, const EndComponent& component) {
  StayView view;
  view.members = component.states;
  view.slot_of.assign(model.state_count(), -1);
  for (size_t i = 0; i < component.states.size(); ++i)
    view.slot_of[component.states[i]] = static_cast<int>(i);
  view.kept = component.actions;
  return view;
}

// Minimum time-weighted average cost over stationary flows through the kept
// pairs: balance per member, total time one, minimize total cost.
MeanPayoffResult stationary_lp(const Model& model, const StayView& view,
                               const CostFunction& costs, const std::vector<Rational>& tau) {
  MeanPayoffResult result;
  std::vector<std::vector<int>> var(view.members.size());
  for (size_t i = 0; i < view.members.size(); ++i) {
    int s = view.members[i];
    var[i].assign(model.states[s].actions.size(), -1);
    for (int a : view.kept[i]) {
      var[i][a] = result.lp.add_variable("x_" + model.states[s].name + "_" +
                                         model.states[s].actions[a].name);
      result.lp.add_objective_term(var[i][a], costs[s][a]);
    }
  }
  for (size_t i = 0; i < view.members.size(); ++i) {
    int s = view.members[i];
    auto& row = result.lp.add_constraint("balance_" + model.states[s].name,
                                         Relation::Equal, Rational(0));
    for (int a : view.kept[i]) row.terms.push_back({var[i][a], Rational(1)});
    for (size_t j = 0; j < view.members.size(); ++j) {
      int sp = view.members[j];
      for (int a : view.kept[j]) {
        for (const Outcome& o : model.states[sp].actions[a].to)
          if (o.state == s) row.terms.push_back({var[j][a], -o.prob});
      }
    }
  }
  auto& clock = result.lp.add_constraint("unit_time", Relation::Equal, Rational(1));
  for (size_t i = 0; i < view.members.size(); ++i)
    for (int a : view.kept[i]) clock.terms.push_back({var[i][a], tau[view.members[i]]});

  LpSolution sol = solve_lp(result.lp);
  if (sol.status != LpStatus::Optimal)
    throw Error("stationary flow program did not solve");
  result.value = sol.value;

  result.stay.assign(model.state_count(), Choice{});
  std::vector<char> supported(view.members.size(), 0);
  for (size_t i = 0; i < view.members.size(); ++i) {
    int s = view.members[i];
    Rational out(0);
    for (int a : view.kept[i]) out += sol.point[var[i][a]];
    if (out == 0) continue;
    supported[i] = 1;
    for (int a : view.kept[i]) {
      Rational x = sol.point[var[i][a]];
      if (x != 0) result.stay[s].push_back({a, x / out});
    }
  }

  // Zero-flow members head for the support along kept edges (backward
  // breadth-first layers from the supported states).
  std::vector<char> routed = supported;
  bool grew = true;
  while (grew) {
    grew = false;
    for (size_t j = 0; j < view.members.size(); ++j) {
      if (routed[j]) continue;
      int sp = view.members[j];
      for (int a : view.kept[j]) {
        bool hits = false;
        for (const Outcome& o : model.states[sp].actions[a].to)
          if (view.slot_of[o.state] >= 0 && routed[view.slot_of[o.state]]) hits = true;
        if (hits) {
          result.stay[sp].push_back({a, Rational(1)});
          routed[j] = 1;
          grew = true;
          break;
        }
      }
    }
  }
  for (size_t i = 0; i < view.members.size(); ++i)
    if (!routed[i]) throw Error("component state cannot reach the stationary support");
  return result;
}

// Minimum over the end components of the narrowed view (the opponent routes
// to whichever one is cheapest).
MeanPayoffResult best_sub_component(const Model& model, const StayView& view,
                                    const CostFunction& costs,
                                    const std::vector<Rational>& tau) {
  std::vector<char> state_allowed(model.state_count(), 0);
  std::vector<std::vector<char>> action_allowed(model.state_count());
  for (int s = 0; s < model.state_count(); ++s)
    action_allowed[s].assign(model.states[s].actions.size(), 0);
  for (size_t i = 0; i < view.members.size(); ++i) {
    state_allowed[view.members[i]] = 1;
    for (int a : view.kept[i]) action_allowed[view.members[i]][a] = 1;
  }
  std::vector<EndComponent> subs =
      maximal_end_components(model, state_allowed, action_allowed);
  if (subs.empty()) throw Error("narrowed component view has no end component");

  bool first = true;
  MeanPayoffResult best;
  for (const EndComponent& sub : subs) {
    MeanPayoffResult candidate = stationary_lp(model, make_view(model, sub), costs, tau);
    if (first || candidate.value < best.value) {
      best = std::move(candidate);
      first = false;
    }
  }

  // Extend the winner's stay rule to the rest of the view so the opponent
  // can route into the chosen sub-component from anywhere.
  std::vector<char> routed(view.members.size(), 0);
  for (size_t i = 0; i < view.members.size(); ++i) {
    if (!best.stay[view.members[i]].empty()) routed[i] = 1;
  }
  bool grew = true;
  while (grew) {
    grew = false;
    for (size_t j = 0; j < view.members.size(); ++j) {
      if (routed[j]) continue;
      int sp = view.members[j];
      for (int a : view.kept[j]) {
        bool hits = false;
        for (const Outcome& o : model.states[sp].actions[a].to)
          if (view.slot_of[o.state] >= 0 && routed[view.slot_of[o.state]]) hits = true;
        if (hits) {
          best.stay[sp].push_back({a, Rational(1)});
          routed[j] = 1;
          grew = true;
          break;
        }
      }
    }
  }
  return best;
}

}  // namespace

MeanPayoffResult min_mean_payoff_mec(const Model& model, const EndComponent& component,
                                     const CostFunction& costs,
                                     const std::vector<Rational>& time, bool opponent_only) {
  std::vector<Rational> tau = resolve_time(model, time);
  StayView view = make_view(model, component);
  if (!opponent_only) return stationary_lp(model, view, costs, tau);

  std::vector<size_t> controlled;
  for (size_t i = 0; i < view.members.size(); ++i)
    if (model.states[view.members[i]].owner == Player::One && view.kept[i].size() > 1)
      controlled.push_back(i);
  if (controlled.empty()) return best_sub_component(model, view, costs, tau);

  // The controller fixes one kept action per owned member; the opponent then
  // settles wherever the narrowed view is cheapest. Worst narrowed view wins.
  std::vector<size_t> pick(controlled.size(), 0);
  bool first = true;
  MeanPayoffResult worst;
  while (true) {
    StayView narrowed = view;
    for (size_t c = 0; c < controlled.size(); ++c)
      narrowed.kept[controlled[c]] = {view.kept[controlled[c]][pick[c]]};
    MeanPayoffResult candidate = best_sub_component(model, narrowed, costs, tau);
    if (first || candidate.value > worst.value) {
      worst = std::move(candidate);
      first = false;
    }
    size_t c = 0;
    while (c < pick.size() && ++pick[c] == view.kept[controlled[c]].size()) {
      pick[c] = 0;
      ++c;
    }
    if (c == pick.size()) break;
  }
  return worst;
}

Rational min_mean_payoff_brute(const Model& model, const EndComponent& component,
                               const CostFunction& costs, const std::vector<Rational>& time) {
  std::vector<Rational> tau = resolve_time(model, time);
  StayView view = make_view(model, component);
  int m = static_cast<int>(view.members.size());

  std::vector<size_t> pick(m, 0);
  bool first = true;
  Rational best;
  while (true) {
    Chain chain;
    chain.names.resize(m);
    chain.rows.resize(m);
    chain.step_cost.assign(m, Rational(0));
    for (int i = 0; i < m; ++i) {
      int s = view.members[i];
      int a = view.kept[i][pick[i]];
      chain.names[i] = model.states[s].name;
      chain.step_cost[i] = costs[s][a];
      for (const Outcome& o : model.states[s].actions[a].to)
        chain.rows[i].push_back({view.slot_of[o.state], o.prob});
      normalize_distribution(chain.rows[i]);
    }
    for (const auto& cls : chain_recurrent_classes(chain)) {
      std::vector<Rational> pi = chain_stationary(chain, cls);
      Rational cost(0), clock(0);
      for (size_t j = 0; j < cls.size(); ++j) {
        cost += pi[j] * chain.step_cost[cls[j]];
        clock += pi[j] * tau[view.members[cls[j]]];
      }
      if (clock == 0) throw Error("recurrent class with zero total time weight");
      Rational average = cost / clock;
      if (first || average < best) {
        best = average;
        first = false;
      }
    }
    int i = 0;
    while (i < m && ++pick[i] == view.kept[i].size()) {
      pick[i] = 0;
      ++i;
    }
    if (i == m) break;
  }
  return best;
}

}  // namespace resil
