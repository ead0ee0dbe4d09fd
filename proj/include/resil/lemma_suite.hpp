#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "resil/model.hpp"
#include "resil/objective.hpp"
#include "resil/strategy.hpp"

namespace resil {

// One failed cross-check: which identity broke and on what input.
struct LemmaFailure {
  std::string lemma;
  std::string note;
};

struct LemmaSuiteReport {
  int trials = 0;
  int checks = 0;
  std::vector<LemmaFailure> failures;
  std::vector<std::uint64_t> seeds;

  bool clean() const { return failures.empty(); }
};

// First disturbance budget at which the objective breaks against the fixed
// controller, computed over explicit budget products and exact single-player
// reachability (no level program involved); nullopt when no budget up to
// k_max breaks.
std::optional<int> oracle_transient_level(const Model& model, const Objective& phi,
                                          const Strategy& pi, int k_max);

// Expected-count oracle: enumerates the pure memoryless antagonist policies
// of the induced view, prices each by exact chain evaluation (dropping the
// divergent ones), and mixes them with a two-row linear program. breakable
// is false when no finite-cost mixture reaches the violation threshold.
struct OracleExpectation {
  bool breakable = false;
  Rational value;
  long policies = 0;
};

OracleExpectation oracle_expected_cost(const Model& model, const Objective& phi,
                                       const Strategy& pi);

// Runs every cross-check once on one model/objective pair, sampling the
// strategies involved from `seed`; appends to `report`.
void check_lemma_suite(const Model& model, const Objective& phi, std::uint64_t seed,
                       LemmaSuiteReport& report);

// Random-model harness: `trials` seeded models, every check on each.
LemmaSuiteReport check_lemma_suite(int trials, std::uint64_t seed);

// Sanity check on the suite itself: evaluates a generated model but feeds the
// oracles a copy with one transition distribution perturbed, and reports
// whether any cross-equality notices. True means the corruption was caught.
bool lemma_suite_detects_mutation(std::uint64_t seed);

}  // namespace resil
