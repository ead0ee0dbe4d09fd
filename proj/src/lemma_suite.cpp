#include "resil/lemma_suite.hpp"

#include <algorithm>
#include <random>
#include <utility>

#include "resil/chain.hpp"
#include "resil/errors.hpp"
#include "resil/eval.hpp"
#include "resil/generator.hpp"
#include "resil/induced.hpp"
#include "resil/lp.hpp"
#include "resil/reach.hpp"
#include "resil/sets.hpp"
#include "resil/transforms.hpp"

namespace resil {

namespace {

Rational weighted(const Distribution& initial, const std::vector<Rational>& values) {
  Rational out;
  for (const Outcome& o : initial) out += o.prob * values[o.state];
  return out;
}

// Objective clone whose breaks() never fires, so level programs run to their
// full depth instead of stopping at the first breaking level.
Objective never_breaking(const Objective& phi) {
  Objective out = phi;
  out.p = Rational(-1);
  out.strict = false;
  return out;
}

int draw(std::mt19937_64& rng, int bound) { return static_cast<int>(rng() % bound); }

Strategy random_controller(const Model& model, std::mt19937_64& rng) {
  std::map<int, int> picks;
  for (int s = 0; s < model.state_count(); ++s) {
    if (model.states[s].owner != Player::One) continue;
    std::vector<int> normals = model.normal_actions(s);
    picks[s] = normals[draw(rng, static_cast<int>(normals.size()))];
  }
  return Strategy::pure_memoryless(Role::Controller, std::move(picks));
}

Strategy random_disturber(const Model& model, std::mt19937_64& rng) {
  std::map<int, int> picks;
  for (int s = 0; s < model.state_count(); ++s) {
    if (model.states[s].owner != Player::One) continue;
    std::vector<int> ds = model.disturbance_actions(s);
    if (ds.empty() || draw(rng, 2) == 0) continue;
    picks[s] = ds[draw(rng, static_cast<int>(ds.size()))];
  }
  return Strategy::pure_memoryless(Role::Disturber, std::move(picks));
}

Strategy random_adversary(const Model& model, std::mt19937_64& rng) {
  std::map<int, int> picks;
  for (int s = 0; s < model.state_count(); ++s) {
    if (model.states[s].owner != Player::Two) continue;
    std::vector<int> normals = model.normal_actions(s);
    picks[s] = normals[draw(rng, static_cast<int>(normals.size()))];
  }
  return Strategy::pure_memoryless(Role::Adversary, std::move(picks));
}

// Copy with every multi-action Player-1 state cut down to one random normal
// action, which turns game values into induced-view values.
Model restrict_player1_single(const Model& model, std::mt19937_64& rng) {
  Model out = model;
  for (int s = 0; s < out.state_count(); ++s) {
    State& state = out.states[s];
    if (state.owner != Player::One) continue;
    std::vector<int> normals = out.normal_actions(s);
    if (normals.size() <= 1) continue;
    int keep = normals[draw(rng, static_cast<int>(normals.size()))];
    std::vector<Action> kept;
    for (size_t a = 0; a < state.actions.size(); ++a) {
      if (static_cast<int>(a) == keep || state.actions[a].kind == ActionKind::Disturbance) {
        kept.push_back(state.actions[a]);
      }
    }
    state.actions = std::move(kept);
  }
  return out;
}

// Violation value of a disturbance-free game: how much probability the
// adversary forces against the objective when Player 1 plays optimally.
Rational game_violation_value(const Model& game, const Objective& phi) {
  std::vector<int> lab = game.labeled(phi.label);
  if (phi.kind == ObjectiveKind::Safety) {
    SgReach reach = max_reach_sg(game, lab, Player::Two);
    return weighted(game.initial, reach.values);
  }
  SgReach reach = max_reach_sg(game, lab, Player::One);
  return Rational(1) - weighted(game.initial, reach.values);
}

// Induced view prepared the way the evaluation pipelines prepare it, plus
// the violation target inside it.
struct PreparedView {
  Model view;
  std::vector<int> target;
};

PreparedView prepare_view(const Model& model, const Objective& phi, const Strategy& pi) {
  PreparedView out;
  out.view = induced_mdp(model, pi).model;
  normalize_sinks(out.view, {phi.label});
  std::vector<int> lab = out.view.labeled(phi.label);
  out.target = phi.kind == ObjectiveKind::Safety ? lab : silent_core(out.view, lab);
  return out;
}

// Maximal probability of reaching the violation target with at most k
// disturbances, solved over the explicit budget product.
Rational product_level_value(const Model& view, const std::vector<int>& target, int k) {
  std::vector<char> in_target(view.state_count(), 0);
  for (int s : target) in_target[s] = 1;
  CounterProduct product = product_with_counter(view, k);
  std::vector<int> lifted;
  for (int p = 0; p < product.model.state_count(); ++p) {
    if (in_target[product.origin[p]]) lifted.push_back(p);
  }
  std::vector<Rational> values = max_reach_exact(product.model, lifted);
  return weighted(product.model.initial, values);
}

// Reversal of the override order: the disturber commits at a gate before the
// state instead of after seeing the chosen action. Gates are skipped on
// states carrying the objective label, where arrival already decides.
Model reversed_gadget(const Model& game, const std::string& skip_label) {
  int n = game.state_count();
  std::vector<int> gate(n, -1);
  int next = n;
  for (int s = 0; s < n; ++s) {
    const State& state = game.states[s];
    bool skip = std::find(state.labels.begin(), state.labels.end(), skip_label) !=
                state.labels.end();
    if (!skip && state.owner == Player::One && !game.disturbance_actions(s).empty()) {
      gate[s] = next++;
    }
  }
  auto gated = [&](int s) { return gate[s] >= 0 ? gate[s] : s; };

  Model out;
  out.name = game.name;
  for (int s = 0; s < n; ++s) {
    const State& base = game.states[s];
    State state;
    state.name = base.name;
    state.owner = base.owner;
    state.labels = base.labels;
    for (const Action& action : base.actions) {
      if (action.kind == ActionKind::Disturbance) continue;
      Action copy;
      copy.name = action.name;
      copy.kind = ActionKind::Normal;
      for (const Outcome& o : action.to) copy.to.push_back({gated(o.state), o.prob});
      state.actions.push_back(std::move(copy));
    }
    out.states.push_back(std::move(state));
  }
  for (int s = 0; s < n; ++s) {
    if (gate[s] < 0) continue;
    State state;
    state.name = game.states[s].name + "^pre";
    state.owner = Player::Two;
    Action release;
    release.name = "bot";
    release.kind = ActionKind::Normal;
    release.to = {{s, Rational(1)}};
    state.actions.push_back(std::move(release));
    for (int a : game.disturbance_actions(s)) {
      const Action& action = game.states[s].actions[a];
      Action jump;
      jump.name = action.name;
      jump.kind = ActionKind::Normal;
      for (const Outcome& o : action.to) jump.to.push_back({gated(o.state), o.prob});
      state.actions.push_back(std::move(jump));
    }
    out.states.push_back(std::move(state));
  }
  for (const Outcome& o : game.initial) out.initial.push_back({gated(o.state), o.prob});
  return out;
}

template <class Fn>
void run_check(LemmaSuiteReport& report, const std::string& lemma, Fn&& fn) {
  report.checks += 1;
  try {
    std::optional<std::string> note = fn();
    if (note) report.failures.push_back({lemma, *note});
  } catch (const std::exception& error) {
    report.failures.push_back({lemma, std::string("exception: ") + error.what()});
  }
}

// Chain over the view induced by one pure antagonist policy, with the step
// costs of the picked actions.
Chain policy_chain(const Model& view, const std::vector<int>& picks) {
  Chain chain;
  for (int s = 0; s < view.state_count(); ++s) {
    const Action& action = view.states[s].actions[picks[s]];
    chain.names.push_back(view.states[s].name);
    chain.rows.push_back(action.to);
    chain.step_cost.push_back(action.kind == ActionKind::Disturbance ? Rational(1)
                                                                     : Rational(0));
  }
  chain.initial = view.initial;
  return chain;
}

}  // namespace

std::optional<int> oracle_transient_level(const Model& model, const Objective& phi,
                                          const Strategy& pi, int k_max) {
  PreparedView prepared = prepare_view(model, phi, pi);
  for (int k = 0; k <= k_max; ++k) {
    Rational value = product_level_value(prepared.view, prepared.target, k);
    if (phi.breaks(value)) return k;
  }
  return std::nullopt;
}

OracleExpectation oracle_expected_cost(const Model& model, const Objective& phi,
                                       const Strategy& pi) {
  PreparedView prepared = prepare_view(model, phi, pi);
  const Model& view = prepared.view;
  int n = view.state_count();
  std::vector<char> in_target(n, 0);
  for (int s : prepared.target) in_target[s] = 1;

  long combinations = 1;
  for (int s = 0; s < n; ++s) {
    long arity = static_cast<long>(view.states[s].actions.size());
    if (combinations > 200000 / arity) {
      throw BudgetExceeded("antagonist policy enumeration exceeds the budget");
    }
    combinations *= arity;
  }

  OracleExpectation out;
  std::vector<Rational> violations;
  std::vector<Rational> costs;
  std::vector<int> picks(n, 0);
  for (long index = 0; index < combinations; ++index) {
    long rest = index;
    for (int s = 0; s < n; ++s) {
      long arity = static_cast<long>(view.states[s].actions.size());
      picks[s] = static_cast<int>(rest % arity);
      rest /= arity;
    }
    Chain chain = policy_chain(view, picks);
    std::optional<Rational> cost = chain_expected_cost(chain);
    if (!cost) continue;  // diverging policies cannot enter an optimal mixture
    violations.push_back(chain_reach_initial(chain, prepared.target));
    costs.push_back(*cost);
    out.policies += 1;
  }

  Rational best(0);
  for (const Rational& v : violations) best = std::max(best, v);
  if (!phi.breaks(best)) return out;
  out.breakable = true;

  LinearProgram lp;
  std::vector<LinearTerm> mass_terms;
  std::vector<LinearTerm> reach_terms;
  for (size_t i = 0; i < violations.size(); ++i) {
    int var = lp.add_variable("lambda_" + std::to_string(i));
    lp.add_objective_term(var, costs[i]);
    mass_terms.push_back({var, Rational(1)});
    reach_terms.push_back({var, violations[i]});
  }
  lp.add_constraint("mass", Relation::Equal, Rational(1)).terms = std::move(mass_terms);
  lp.add_constraint("violation", Relation::GreaterEq, phi.theta()).terms = std::move(reach_terms);
  LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::Optimal) {
    throw Error("policy mixture program did not solve to optimality");
  }
  out.value = sol.value;
  return out;
}

void check_lemma_suite(const Model& model, const Objective& phi, std::uint64_t seed,
                       LemmaSuiteReport& report) {
  report.trials += 1;
  std::mt19937_64 rng(seed);
  Strategy pi = random_controller(model, rng);
  Strategy delta = random_disturber(model, rng);
  Strategy sigma = random_adversary(model, rng);
  const int depth = 3;

  run_check(report, "induced-chain-matches-restricted-view", [&]() -> std::optional<std::string> {
    Induced induced = induced_mdp(model, pi);
    const Model& view = induced.model;
    std::vector<std::vector<char>> allowed(view.state_count());
    for (int s = 0; s < view.state_count(); ++s) {
      const State& state = view.states[s];
      allowed[s].assign(state.actions.size(), 0);
      int origin = induced.origin[s];
      if (state.owner == Player::One) {
        int pick = 0;  // the merged controller action
        if (const Choice* dc = delta.choice(origin, 0)) {
          int chosen = (*dc)[0].action;
          if (chosen != kBottom) {
            std::vector<int> ds = model.disturbance_actions(origin);
            for (size_t rank = 0; rank < ds.size(); ++rank) {
              if (ds[rank] == chosen) pick = 1 + static_cast<int>(rank);
            }
          }
        }
        allowed[s][pick] = 1;
      } else {
        int pick = model.normal_actions(origin)[0];
        if (const Choice* ac = sigma.choice(origin, 0)) pick = (*ac)[0].action;
        allowed[s][pick] = 1;
      }
    }
    std::vector<int> targets = view.labeled(phi.label);
    Rational restricted = weighted(view.initial, max_reach_exact(view, targets, {}, allowed));

    InducedChain mc = induced_mc(model, pi, delta, &sigma);
    std::vector<char> is_target(model.state_count(), 0);
    for (int s : model.labeled(phi.label)) is_target[s] = 1;
    std::vector<int> chain_targets;
    for (int p = 0; p < mc.chain.size(); ++p) {
      if (is_target[mc.origin[p]]) chain_targets.push_back(p);
    }
    Rational direct = chain_reach_initial(mc.chain, chain_targets);
    if (direct != restricted) {
      return "chain reach " + rational_to_string(direct) + " vs restricted view " +
             rational_to_string(restricted);
    }
    return std::nullopt;
  });

  run_check(report, "unfold-levels-match-budget-products", [&]() -> std::optional<std::string> {
    std::mt19937_64 solo_rng(seed ^ 0x9e3779b97f4a7c15ull);
    Model solo = restrict_player1_single(model, solo_rng);
    Strategy trivial = Strategy::pure_memoryless(Role::Controller, {});
    PreparedView prepared = prepare_view(solo, phi, trivial);
    TransientLevels levels =
        transient_iterative_lp(prepared.view, prepared.target, never_breaking(phi), depth);
    for (int k = 0; k <= depth; ++k) {
      Rational full = game_violation_value(unfold(solo, k, false).model, phi);
      Rational trimmed = game_violation_value(unfold(solo, k, true).model, phi);
      if (full != trimmed) {
        return "level " + std::to_string(k) + ": trimming changed the value from " +
               rational_to_string(full) + " to " + rational_to_string(trimmed);
      }
      if (trimmed != levels.initial_values[k]) {
        return "level " + std::to_string(k) + ": unfolding gives " +
               rational_to_string(trimmed) + ", the level program " +
               rational_to_string(levels.initial_values[k]);
      }
      if (k > 0 && levels.initial_values[k] < levels.initial_values[k - 1]) {
        return "level values decreased at level " + std::to_string(k);
      }
    }
    return std::nullopt;
  });

  run_check(report, "gadget-override-order-commutes", [&]() -> std::optional<std::string> {
    Rational after = game_violation_value(expected_gadget_game(model).model, phi);
    Rational before = game_violation_value(reversed_gadget(model, phi.label), phi);
    if (after != before) {
      return "override after the choice gives " + rational_to_string(after) +
             ", before it " + rational_to_string(before);
    }
    return std::nullopt;
  });

  run_check(report, "level-program-matches-counter-products", [&]() -> std::optional<std::string> {
    PreparedView prepared = prepare_view(model, phi, pi);
    TransientLevels levels =
        transient_iterative_lp(prepared.view, prepared.target, never_breaking(phi), depth);
    for (int k = 0; k <= depth; ++k) {
      Rational product = product_level_value(prepared.view, prepared.target, k);
      if (product != levels.initial_values[k]) {
        return "level " + std::to_string(k) + ": budget product gives " +
               rational_to_string(product) + ", the level program " +
               rational_to_string(levels.initial_values[k]);
      }
    }
    std::optional<int> oracle = oracle_transient_level(model, phi, pi, depth);
    EvalReport eval = worst_case_breaking_point(model, phi, pi);
    bool finite = eval.breaking_point.transient.is_finite();
    if (finite && eval.breaking_point.transient.value <= Rational(depth)) {
      if (!oracle || Rational(*oracle) != eval.breaking_point.transient.value) {
        return "evaluation breaks at level " +
               rational_to_string(eval.breaking_point.transient.value) +
               ", the product oracle at " +
               (oracle ? std::to_string(*oracle) : std::string("none"));
      }
    } else if (!finite && oracle) {
      return "evaluation reports no finite level, the product oracle level " +
             std::to_string(*oracle);
    }
    return std::nullopt;
  });

  run_check(report, "expected-value-matches-policy-mixtures", [&]() -> std::optional<std::string> {
    OracleExpectation oracle = oracle_expected_cost(model, phi, pi);
    EvalReport eval = expected_breaking_point(model, phi, pi);
    bool finite = eval.breaking_point.transient.is_finite();
    if (finite != oracle.breakable) {
      return std::string("evaluation case ") + to_string(eval.case_taken) +
             (oracle.breakable ? " but the mixture oracle breaks"
                               : " but the mixture oracle cannot break");
    }
    if (finite && eval.breaking_point.transient.value != oracle.value) {
      return "evaluation expects " + rational_to_string(eval.breaking_point.transient.value) +
             ", the mixture oracle " + rational_to_string(oracle.value);
    }
    return std::nullopt;
  });
}

LemmaSuiteReport check_lemma_suite(int trials, std::uint64_t seed) {
  LemmaSuiteReport report;
  std::mt19937_64 top(seed);
  for (int t = 0; t < trials; ++t) {
    RandomModelSpec spec;
    spec.seed = top();
    Model model = generate(spec);
    Objective phi;
    switch (t % 4) {
      case 0: phi = parse_objective("reach:G:>=1/2"); break;
      case 1: phi = parse_objective("reach:G:>2/5"); break;
      case 2: phi = parse_objective("safety:B:>=3/4"); break;
      default: phi = parse_objective("reach:G:>=3/4"); break;
    }
    report.seeds.push_back(spec.seed);
    check_lemma_suite(model, phi, top(), report);
  }
  return report;
}

bool lemma_suite_detects_mutation(std::uint64_t seed) {
  std::mt19937_64 top(seed);
  Objective phi = parse_objective("reach:G:>=1/2");
  for (int attempt = 0; attempt < 32; ++attempt) {
    RandomModelSpec spec;
    spec.seed = top();
    Model model = generate(spec);
    std::mt19937_64 rng(top());
    Strategy pi = random_controller(model, rng);

    Model corrupt = model;
    bool mutated = false;
    for (State& state : corrupt.states) {
      for (Action& action : state.actions) {
        if (action.to.size() < 2) continue;
        Rational shift = std::min(action.to[0].prob, action.to[1].prob) / 2;
        if (shift == 0) continue;
        action.to[0].prob += shift;
        action.to[1].prob -= shift;
        if (action.to[1].prob == 0) action.to.erase(action.to.begin() + 1);
        mutated = true;
        break;
      }
      if (mutated) break;
    }
    if (!mutated) continue;

    EvalReport eval = expected_breaking_point(model, phi, pi);
    OracleExpectation oracle = oracle_expected_cost(corrupt, phi, pi);
    bool finite = eval.breaking_point.transient.is_finite();
    if (finite != oracle.breakable) return true;
    if (finite && eval.breaking_point.transient.value != oracle.value) return true;
  }
  return false;
}

}  // namespace resil
