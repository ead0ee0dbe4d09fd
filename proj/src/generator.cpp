#include "resil/generator.hpp"

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "resil/errors.hpp"

namespace resil {

namespace {

// std::uniform_int_distribution is implementation-defined, so seeds would
// not reproduce across standard libraries. Plain modulo keeps the stream
// identical everywhere and the bias is irrelevant for test inputs.
int pick(std::mt19937_64& rng, int n) {
  return static_cast<int>(rng() % static_cast<std::uint64_t>(n));
}

int pick_in(std::mt19937_64& rng, int lo, int hi) {
  if (hi < lo) throw Error("random model spec has an empty range");
  return lo + pick(rng, hi - lo + 1);
}

std::vector<std::pair<std::string, Rational>> random_outcomes(
    std::mt19937_64& rng, int support_lo, int support_hi,
    const std::vector<std::string>& universe) {
  int n = static_cast<int>(universe.size());
  int want = pick_in(rng, support_lo, support_hi);
  if (want > n) want = n;
  std::vector<int> order(n);
  for (int s = 0; s < n; ++s) order[s] = s;
  for (int i = 0; i < want; ++i) {
    int j = i + pick(rng, n - i);
    std::swap(order[i], order[j]);
  }
  std::vector<long long> weights(want);
  long long total = 0;
  for (int i = 0; i < want; ++i) {
    weights[i] = 1 + pick(rng, 3);
    total += weights[i];
  }
  std::vector<std::pair<std::string, Rational>> outcomes;
  outcomes.reserve(want);
  for (int i = 0; i < want; ++i)
    outcomes.emplace_back(universe[order[i]], Rational(weights[i], total));
  return outcomes;
}

}  // namespace

Model generate(const RandomModelSpec& spec) {
  if (spec.min_states < 1) throw Error("random model spec needs a state");
  if (spec.min_normal < 1)
    throw Error("random model spec needs a normal action per state");
  std::mt19937_64 rng(spec.seed);

  int core = pick_in(rng, spec.min_states, spec.max_states);

  std::vector<std::string> names;
  std::vector<Player> owners;
  for (int s = 0; s < core; ++s) {
    names.push_back("s" + std::to_string(s));
    owners.push_back(pick(rng, 2) == 0 ? Player::One : Player::Two);
  }
  if (spec.ensure_sinks) {
    names.push_back("G");
    names.push_back("B");
  }

  ModelBuilder builder("random" + std::to_string(spec.seed));
  for (int s = 0; s < core; ++s) builder.state(names[s], owners[s]);
  if (spec.ensure_sinks) {
    builder.state("G", Player::Two, {"G"});
    builder.state("B", Player::Two, {"B"});
  }

  const char* action_names[] = {"a", "b", "c", "e", "f"};
  for (int s = 0; s < core; ++s) {
    int normals = pick_in(rng, spec.min_normal, spec.max_normal);
    for (int i = 0; i < normals; ++i) {
      builder.action(names[s], action_names[i % 5], ActionKind::Normal,
                     random_outcomes(rng, spec.min_support, spec.max_support,
                                     names));
    }
    if (owners[s] == Player::One && spec.max_disturbances > 0 &&
        pick(rng, 100) < spec.disturbance_percent) {
      int count = pick_in(rng, 1, spec.max_disturbances);
      for (int i = 0; i < count; ++i) {
        builder.action(names[s],
                       "d" + std::string(i == 0 ? "" : action_names[i % 5]),
                       ActionKind::Disturbance,
                       random_outcomes(rng, spec.min_support, spec.max_support,
                                       names));
      }
    }
  }
  if (spec.ensure_sinks) {
    builder.action("G", "loop", ActionKind::Normal, {{"G", Rational(1)}});
    builder.action("B", "loop", ActionKind::Normal, {{"B", Rational(1)}});
  }
  builder.initial(names[0], Rational(1));
  return builder.build();
}

}  // namespace resil
