#pragma once

#include <cstdint>

#include "resil/model.hpp"

namespace resil {

// Knobs for seeded random model generation. Generated models always pass
// validate; when ensure_sinks is set (the default) a G-labeled and a
// B-labeled absorbing sink are appended.
struct RandomModelSpec {
  int min_states = 3;
  int max_states = 5;
  int min_normal = 1;
  int max_normal = 2;
  int disturbance_percent = 60;  // chance a Player-1 state gets one disturbance
  int max_disturbances = 1;
  int min_support = 1;
  int max_support = 2;
  bool ensure_sinks = true;
  std::uint64_t seed = 0;
};

// Same spec (including seed) yields an identical model on every platform.
Model generate(const RandomModelSpec& spec);

}  // namespace resil
