#pragma once

#include <optional>
#include <string>
#include <vector>

#include "resil/model.hpp"

namespace resil {

// A finite Markov chain with exact transition probabilities. step_cost holds
// the expected number of disturbances incurred when leaving each state.
struct Chain {
  std::vector<std::string> names;
  std::vector<Distribution> rows;
  std::vector<Rational> step_cost;
  Distribution initial;

  int size() const { return static_cast<int>(rows.size()); }
};

// Probability of eventually visiting `targets`, per state (exact).
std::vector<Rational> chain_reach(const Chain& chain, const std::vector<int>& targets);

// chain_reach weighted by the initial distribution.
Rational chain_reach_initial(const Chain& chain, const std::vector<int>& targets);

// Expected total step cost accumulated forever; nullopt when infinite (a
// positive-cost recurrent class is reachable).
std::optional<Rational> chain_expected_cost(const Chain& chain);

// Recurrent classes (bottom SCCs over positive-probability edges), each
// sorted; classes ordered by smallest member.
std::vector<std::vector<int>> chain_recurrent_classes(const Chain& chain);

// Stationary distribution of one recurrent class, indexed like the class.
std::vector<Rational> chain_stationary(const Chain& chain, const std::vector<int>& cls);

// Long-run average step cost inside one recurrent class.
Rational chain_class_mean_cost(const Chain& chain, const std::vector<int>& cls);

// Largest number of positive-cost steps along any positive-probability path
// from the initial distribution; nullopt when unbounded (a positive-cost
// state lies on a reachable cycle).
std::optional<int> chain_max_disturbances(const Chain& chain);

// Solves A x = b exactly by Gaussian elimination; A is square and
// nonsingular. Throws Error otherwise.
std::vector<Rational> solve_linear_system(std::vector<std::vector<Rational>> a,
                                          std::vector<Rational> b);

}  // namespace resil
