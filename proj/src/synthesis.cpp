#include "resil/synthesis.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "resil/errors.hpp"
#include "resil/eval.hpp"
#include "resil/mcmp.hpp"
#include "resil/mean_payoff.hpp"
#include "resil/mec.hpp"
#include "resil/qp.hpp"
#include "resil/reach.hpp"
#include "resil/sets.hpp"
#include "resil/ssp_sg.hpp"
#include "resil/transforms.hpp"

namespace resil {

namespace {

Rational initial_weighted(const Model& model, const std::vector<Rational>& values) {
  Rational total;
  for (const Outcome& o : model.initial) total += o.prob * values[o.state];
  return total;
}

std::vector<int> normal_actions(const State& state) {
  std::vector<int> out;
  for (size_t a = 0; a < state.actions.size(); ++a) {
    if (state.actions[a].kind == ActionKind::Normal) out.push_back(static_cast<int>(a));
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

Model strip_disturbances(const Model& game) {
  Model out = game;
  for (State& state : out.states) {
    std::vector<Action> kept;
    for (Action& action : state.actions) {
      if (action.kind == ActionKind::Normal) kept.push_back(std::move(action));
    }
    state.actions = std::move(kept);
  }
  return out;
}

// Violation value of a plain game at the initial distribution, with the
// optimal Player-1 assignment when requested.
Rational game_violation(const Model& plain, const Objective& phi, long budget,
                        SgReach* out_reach = nullptr) {
  std::vector<int> targets = plain.labeled(phi.label);
  if (phi.kind == ObjectiveKind::Reach) {
    SgReach r = max_reach_sg(plain, targets, Player::One, budget);
    Rational violation = Rational(1) - initial_weighted(plain, r.values);
    if (out_reach) *out_reach = std::move(r);
    return violation;
  }
  SgReach r = max_reach_sg(plain, targets, Player::Two, budget);
  Rational violation = initial_weighted(plain, r.values);
  if (out_reach) *out_reach = std::move(r);
  return violation;
}

// Turns a rank-per-state map (ranks count normal actions only) into a total
// pure memoryless controller; unmapped states take their first normal action.
Strategy controller_from_ranks(const Model& game, const std::map<int, int>& ranks) {
  std::map<int, int> actions;
  for (int s = 0; s < game.state_count(); ++s) {
    if (game.states[s].owner != Player::One) continue;
    std::vector<int> normals = normal_actions(game.states[s]);
    int rank = 0;
    auto found = ranks.find(s);
    if (found != ranks.end() && found->second >= 0 &&
        found->second < static_cast<int>(normals.size())) {
      rank = found->second;
    }
    actions[s] = normals[rank];
  }
  return Strategy::pure_memoryless(Role::Controller, actions);
}

std::map<int, int> original_ranks(const std::map<int, int>& choice, int original_states) {
  std::map<int, int> ranks;
  for (const auto& [state, rank] : choice) {
    if (state < original_states) ranks[state] = rank;
  }
  return ranks;
}

// Single-level stand-in for the next budget unfolding: each Player-1 normal
// action routes through a two-way override where the adversary either passes
// it through or cashes the disturbance in as a coin whose goal probability is
// the disturbance's payoff against the previous level's values.
Model level_game(const Model& base, const std::vector<Rational>& previous, int goal_state,
                 int bad_state) {
  Model out = strip_disturbances(base);
  int n = base.state_count();
  for (int s = 0; s < n; ++s) {
    const State& original = base.states[s];
    if (original.owner != Player::One) continue;
    Distribution coin;
    bool has_disturbance = false;
    for (const Action& action : original.actions) {
      if (action.kind != ActionKind::Disturbance) continue;
      Rational payoff;
      for (const Outcome& o : action.to) payoff += o.prob * previous[o.state];
      if (payoff > 0) coin.push_back({goal_state, payoff});
      if (payoff < 1) coin.push_back({bad_state, Rational(1) - payoff});
      has_disturbance = true;
      break;
    }
    if (!has_disturbance) continue;
    int arity = static_cast<int>(out.states[s].actions.size());
    for (int a = 0; a < arity; ++a) {
      State two_way;
      two_way.name = original.name + "#" + out.states[s].actions[a].name;
      two_way.owner = Player::Two;
      Action pass;
      pass.name = "bot";
      pass.kind = ActionKind::Normal;
      pass.to = out.states[s].actions[a].to;
      Action replace;
      replace.name = "disturb";
      replace.kind = ActionKind::Normal;
      replace.to = coin;
      two_way.actions.push_back(std::move(pass));
      two_way.actions.push_back(std::move(replace));
      int split = out.state_count();
      out.states.push_back(std::move(two_way));
      out.states[s].actions[a].to = {{split, Rational(1)}};
    }
  }
  return out;
}

void fill_expected_attainment(SynthesisReport& rep, const Objective& phi, const Model& game,
                              const CostFunction& costs, const std::vector<int>& target,
                              const SspSgResult& ssp) {
  if (phi.strict) return;
  Model fixed = restrict_player1(game, ssp.assignment);
  rep.breaking_point.attained =
      phi.breaks(mcmp_max_reach_at_cost(fixed, costs, target, ssp.value));
}

std::map<int, int> ranks_from_assignment(const std::vector<int>& assignment, int limit) {
  std::map<int, int> ranks;
  for (int s = 0; s < limit && s < static_cast<int>(assignment.size()); ++s) {
    if (assignment[s] >= 0) ranks[s] = assignment[s];
  }
  return ranks;
}

}  // namespace

SynthesisReport synthesize_worst_transient(const Model& game, const Objective& phi,
                                           const SynthesisOptions& options) {
  SynthesisReport rep;
  rep.method = SynthesisMethod::LevelUnfolding;
  int n = game.state_count();

  GadgetGame gadget = expected_gadget_game(game);
  SgReach limit_reach;
  rep.gate = game_violation(gadget.model, phi, options.budget, &limit_reach);
  rep.enumerated += limit_reach.enumerated;

  if (!phi.breaks(rep.gate)) {
    rep.breaking_point = BreakingPoint<Rational>::unbreakable();
    rep.strategy = controller_from_ranks(game, original_ranks(limit_reach.choice, n));
    rep.diagnostic = "unlimited disturbances do not break the best controller";
    return rep;
  }

  bool boundary = phi.strict && rep.gate == phi.theta();
  int ceiling = options.k_max;
  if (ceiling < 0) ceiling = boundary ? disturbance_action_count(game) : 256;

  int found = -1;
  Unfolded survivor;
  SgReach survivor_reach;
  bool have_survivor = false;
  for (int level = 0; level <= ceiling; ++level) {
    Unfolded unfolded = unfold(game, level);
    SgReach reach;
    Rational violation = game_violation(unfolded.model, phi, options.budget, &reach);
    rep.enumerated += reach.enumerated;
    rep.level_values.push_back(violation);
    if (phi.breaks(violation)) {
      found = level;
      if (level == 0) {
        survivor = std::move(unfolded);
        survivor_reach = std::move(reach);
        have_survivor = true;
      }
      break;
    }
    survivor = std::move(unfolded);
    survivor_reach = std::move(reach);
    have_survivor = true;
  }

  if (found < 0) {
    rep.breaking_point = BreakingPoint<Rational>::at_frequency(Rational(0));
    rep.breaking_point.attained = false;
    rep.diagnostic = boundary
                         ? "no level within the disturbance-action bound attains the "
                           "threshold; the transient value is omega"
                         : "no level within the search ceiling breaks; raise k to decide "
                           "whether the transient value is finite";
  } else {
    rep.breaking_point = BreakingPoint<Rational>::finite(Rational(found));
    if (found == 0) {
      rep.diagnostic = "no controller meets the objective even without disturbances";
    }
  }

  if (have_survivor) {
    int counter = found < 0 ? ceiling : (found == 0 ? 0 : found - 1);
    Strategy strategy;
    strategy.role = Role::Controller;
    strategy.counter = counter;
    for (int s = 0; s < n; ++s) {
      if (game.states[s].owner != Player::One) continue;
      std::vector<int> normals = normal_actions(game.states[s]);
      for (int c = 0; c <= counter; ++c) {
        strategy.rule[{s, c}] = {{normals[0], Rational(1)}};
      }
    }
    for (int u = 0; u < survivor.model.state_count(); ++u) {
      if (survivor.gadget_action[u] != -1) continue;
      int s = survivor.origin[u];
      if (game.states[s].owner != Player::One) continue;
      std::vector<int> normals = normal_actions(game.states[s]);
      int rank = 0;
      auto found_rank = survivor_reach.choice.find(u);
      if (found_rank != survivor_reach.choice.end()) rank = found_rank->second;
      if (rank < 0 || rank >= static_cast<int>(normals.size())) rank = 0;
      strategy.rule[{s, survivor.level[u]}] = {{normals[rank], Rational(1)}};
    }
    rep.strategy = std::move(strategy);
  }

  if (options.emit_qp && phi.kind == ObjectiveKind::Reach) {
    Model norm = binarize_actions(make_stopping(game, options.qp_epsilon), phi.label);
    std::vector<int> goals = norm.labeled(phi.label);
    std::vector<int> bads = norm.labeled("B");
    if (goals.empty() || bads.empty()) {
      rep.diagnostic += (rep.diagnostic.empty() ? "" : "; ");
      rep.diagnostic += "certificate emission needs both goal and trap labels";
    } else {
      std::vector<Rational> previous;
      for (size_t level = 0; level < rep.level_values.size(); ++level) {
        QuadraticProgram qp = build_iterative_qp(
            norm, level == 0 ? std::vector<Rational>{} : previous, static_cast<int>(level),
            phi.label, "B");
        rep.qp_texts.push_back(qp.to_text());
        Model stage = level == 0 ? strip_disturbances(norm)
                                 : level_game(norm, previous, goals[0], bads[0]);
        SgReach values = max_reach_sg(stage, stage.labeled(phi.label), Player::One,
                                      options.budget);
        previous.assign(values.values.begin(), values.values.begin() + norm.state_count());
      }
    }
  } else if (options.emit_qp) {
    rep.diagnostic += (rep.diagnostic.empty() ? "" : "; ");
    rep.diagnostic += "certificate emission covers reach objectives only";
  }
  return rep;
}

SynthesisReport synthesize_worst_frequency(const Model& game, const Objective& phi,
                                           const SynthesisOptions& options) {
  SynthesisReport rep;
  rep.method = SynthesisMethod::MecRemoval;
  int n = game.state_count();
  GadgetGame gadget = expected_gadget_game(game);

  if (phi.kind == ObjectiveKind::Safety) {
    rep.gate = game_violation(gadget.model, phi, options.budget);
    if (phi.breaks(rep.gate)) {
      throw PreconditionViolated(
          "the safety objective is breakable outright, so no positive breaking "
          "frequency exists");
    }
    rep.breaking_point = BreakingPoint<Rational>::unbreakable();
    rep.diagnostic = "safety objectives admit no positive breaking frequency";
    return rep;
  }

  std::vector<int> goal = game.labeled(phi.label);
  std::vector<int> silent = player2_avoid_set(strip_disturbances(game), goal);
  {
    SgReach r = max_reach_sg(gadget.model, silent, Player::Two, options.budget);
    rep.enumerated += r.enumerated;
    rep.silent_gate = initial_weighted(gadget.model, r.values);
  }
  if (rep.silent_gate > phi.theta()) {
    throw PreconditionViolated(
        "the disturber reaches the silent region past the threshold, so a finite "
        "transient breaking point exists");
  }

  std::vector<int> ggoal = gadget.model.labeled(phi.label);
  std::vector<int> avoid = player2_avoid_set(gadget.model, ggoal);
  SgReach limit_reach = max_reach_sg(gadget.model, avoid, Player::Two, options.budget);
  rep.enumerated += limit_reach.enumerated;
  rep.gate = initial_weighted(gadget.model, limit_reach.values);
  if (!phi.breaks(rep.gate)) {
    rep.breaking_point = BreakingPoint<Rational>::unbreakable();
    rep.strategy = controller_from_ranks(game, original_ranks(limit_reach.choice, n));
    return rep;
  }

  std::vector<char> allowed(gadget.model.state_count(), 0);
  for (int s : avoid) allowed[s] = 1;
  std::vector<EndComponent> components =
      maximal_end_components(gadget.model, allowed, {});
  std::vector<int> zero_states;
  for (const EndComponent& component : components) {
    rep.components.push_back(component.states);
    Rational f = min_mean_payoff_mec(gadget.model, component, gadget.cost, gadget.time,
                                     true)
                     .value;
    rep.frequencies.push_back(f);
    if (f == 0) {
      zero_states.insert(zero_states.end(), component.states.begin(),
                         component.states.end());
    }
  }

  if (!zero_states.empty()) {
    SgReach r = max_reach_sg(gadget.model, zero_states, Player::Two, options.budget);
    rep.enumerated += r.enumerated;
    if (phi.breaks(initial_weighted(gadget.model, r.values))) {
      rep.breaking_point = BreakingPoint<Rational>::at_frequency(Rational(0));
      rep.breaking_point.attained = false;
      rep.strategy = controller_from_ranks(game, original_ranks(r.choice, n));
      rep.diagnostic =
          "freely stayable components alone break every controller; the frequency "
          "infimum is 0";
      return rep;
    }
  }

  std::vector<char> removed(components.size(), 0);
  int critical = -1;
  SgReach final_reach;
  while (true) {
    std::vector<int> targets;
    for (size_t c = 0; c < components.size(); ++c) {
      if (removed[c]) continue;
      targets.insert(targets.end(), components[c].states.begin(),
                     components[c].states.end());
    }
    Rational value;
    SgReach r;
    if (!targets.empty()) {
      r = max_reach_sg(gadget.model, targets, Player::Two, options.budget);
      rep.enumerated += r.enumerated;
      value = initial_weighted(gadget.model, r.values);
    }
    if (!phi.breaks(value)) {
      final_reach = std::move(r);
      break;
    }
    int pick = -1;
    for (size_t c = 0; c < components.size(); ++c) {
      if (removed[c]) continue;
      if (pick < 0 || rep.frequencies[c] > rep.frequencies[pick] ||
          (rep.frequencies[c] == rep.frequencies[pick] &&
           components[c].states < components[pick].states)) {
        pick = static_cast<int>(c);
      }
    }
    if (pick < 0) break;
    removed[pick] = 1;
    critical = pick;
  }

  if (critical < 0) {
    rep.breaking_point = BreakingPoint<Rational>::at_frequency(Rational(0));
    rep.diagnostic = "no component was needed to break; frequency defaults to 0";
    return rep;
  }
  rep.breaking_point = BreakingPoint<Rational>::at_frequency(rep.frequencies[critical]);
  rep.strategy = controller_from_ranks(game, original_ranks(final_reach.choice, n));
  return rep;
}

SynthesisReport synthesize_expected(const Model& game, const Objective& phi,
                                    const SynthesisOptions& options) {
  SynthesisReport rep;
  rep.method = SynthesisMethod::GadgetSsp;
  int n = game.state_count();
  GadgetGame gadget = expected_gadget_game(game);
  Rational theta = phi.theta();

  if (phi.kind == ObjectiveKind::Safety) {
    std::vector<int> bad = gadget.model.labeled(phi.label);
    SgReach r = max_reach_sg(gadget.model, bad, Player::Two, options.budget);
    rep.enumerated += r.enumerated;
    rep.gate = initial_weighted(gadget.model, r.values);
    if (!phi.breaks(rep.gate)) {
      rep.breaking_point = BreakingPoint<Rational>::unbreakable();
      rep.strategy = controller_from_ranks(game, original_ranks(r.choice, n));
      return rep;
    }
    SspSgResult ssp = ssp_sg_vi(gadget.model, gadget.cost, bad, theta, options.precision,
                                options.budget);
    rep.enumerated += ssp.enumerated;
    rep.breaking_point = BreakingPoint<Rational>::finite(ssp.value);
    fill_expected_attainment(rep, phi, gadget.model, gadget.cost, bad, ssp);
    rep.strategy = controller_from_ranks(game, ranks_from_assignment(ssp.assignment, n));
    return rep;
  }

  std::vector<int> ggoal = gadget.model.labeled(phi.label);
  std::vector<int> avoid = player2_avoid_set(gadget.model, ggoal);
  SgReach limit_reach = max_reach_sg(gadget.model, avoid, Player::Two, options.budget);
  rep.enumerated += limit_reach.enumerated;
  rep.gate = initial_weighted(gadget.model, limit_reach.values);
  if (!phi.breaks(rep.gate)) {
    rep.breaking_point = BreakingPoint<Rational>::unbreakable();
    rep.strategy = controller_from_ranks(game, original_ranks(limit_reach.choice, n));
    return rep;
  }

  std::vector<char> allowed(gadget.model.state_count(), 0);
  for (int s : avoid) allowed[s] = 1;
  std::vector<EndComponent> components =
      maximal_end_components(gadget.model, allowed, {});
  std::vector<int> zero_states;
  for (const EndComponent& component : components) {
    rep.components.push_back(component.states);
    Rational f = min_mean_payoff_mec(gadget.model, component, gadget.cost, gadget.time,
                                     true)
                     .value;
    rep.frequencies.push_back(f);
    if (f == 0) {
      zero_states.insert(zero_states.end(), component.states.begin(),
                         component.states.end());
    }
  }

  if (!zero_states.empty()) {
    SgReach r = max_reach_sg(gadget.model, zero_states, Player::Two, options.budget);
    rep.enumerated += r.enumerated;
    if (phi.breaks(initial_weighted(gadget.model, r.values))) {
      SspSgResult ssp = ssp_sg_vi(gadget.model, gadget.cost, zero_states, theta,
                                  options.precision, options.budget);
      rep.enumerated += ssp.enumerated;
      rep.breaking_point = BreakingPoint<Rational>::finite(ssp.value);
      fill_expected_attainment(rep, phi, gadget.model, gadget.cost, zero_states, ssp);
      rep.strategy =
          controller_from_ranks(game, ranks_from_assignment(ssp.assignment, n));
      return rep;
    }
  }

  WeightedQuotient quotient =
      weighted_mec_quotient(gadget.model, components, rep.frequencies, Player::Two);
  SspSgResult ssp = ssp_sg_vi(quotient.model, quotient.cost, {quotient.s_plus}, theta,
                              options.precision, options.budget);
  rep.enumerated += ssp.enumerated;
  rep.breaking_point = BreakingPoint<Rational>::at_frequency(ssp.value);
  fill_expected_attainment(rep, phi, quotient.model, quotient.cost, {quotient.s_plus},
                           ssp);
  std::map<int, int> ranks;
  for (int s = 0; s < n; ++s) {
    int q = quotient.rep_of[s];
    if (quotient.component_of[q] != -1) continue;
    if (q < static_cast<int>(ssp.assignment.size()) && ssp.assignment[q] >= 0) {
      ranks[s] = ssp.assignment[q];
    }
  }
  rep.strategy = controller_from_ranks(game, ranks);
  rep.diagnostic =
      "controller choices inside collapsed components default to the first action";
  return rep;
}

SynthesisReport oracle_enumerate(const Model& game, const Objective& phi,
                                 Semantics semantics, const SynthesisOptions& options) {
  SynthesisReport rep;
  rep.method = SynthesisMethod::ExactEnumeration;
  int n = game.state_count();
  // k_max >= 0 widens the candidate space from memoryless rules to pure
  // step-counting rules over counters {0..k_max}.
  int copies = options.k_max >= 0 ? options.k_max + 1 : 1;

  std::vector<std::vector<int>> menus(n);
  std::vector<std::pair<int, int>> cells;  // (state, counter) decision slots
  for (int s = 0; s < n; ++s) {
    if (game.states[s].owner != Player::One) continue;
    menus[s] = normal_actions(game.states[s]);
    if (menus[s].size() <= 1) continue;
    for (int c = 0; c < copies; ++c) cells.push_back({s, c});
  }
  long combinations = 1;
  for (const auto& [s, c] : cells) {
    long arity = static_cast<long>(menus[s].size());
    if (combinations > options.budget / arity) {
      throw BudgetExceeded("controller enumeration exceeds the budget");
    }
    combinations *= arity;
  }

  EvalOptions eval_options;
  eval_options.budget = options.budget;
  eval_options.precision = options.precision;

  std::vector<int> pick(cells.size(), 0);
  bool first = true;
  for (long iter = 0; iter < combinations; ++iter) {
    Strategy pi;
    pi.role = Role::Controller;
    pi.counter = options.k_max >= 0 ? options.k_max : Strategy::kMemoryless;
    for (int s = 0; s < n; ++s) {
      if (game.states[s].owner != Player::One) continue;
      for (int c = 0; c < copies; ++c) {
        pi.rule[{s, c}] = {Weighted{menus[s][0], Rational(1)}};
      }
    }
    for (size_t i = 0; i < cells.size(); ++i) {
      pi.rule[{cells[i].first, cells[i].second}] = {
          Weighted{menus[cells[i].first][pick[i]], Rational(1)}};
    }
    EvalReport eval = semantics == Semantics::WorstCase
                          ? worst_case_breaking_point(game, phi, pi, eval_options)
                          : expected_breaking_point(game, phi, pi, eval_options);
    ++rep.enumerated;
    if (first || compare_breaking_points(eval.breaking_point, rep.breaking_point) > 0) {
      rep.breaking_point = eval.breaking_point;
      rep.strategy = std::move(pi);
      first = false;
    }
    for (size_t i = 0; i < pick.size(); ++i) {
      if (++pick[i] < static_cast<int>(menus[cells[i].first].size())) break;
      pick[i] = 0;
    }
  }
  return rep;
}

}  // namespace resil
