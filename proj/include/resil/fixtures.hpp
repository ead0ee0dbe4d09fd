#pragma once

#include <map>
#include <string>

#include "resil/model.hpp"
#include "resil/objective.hpp"
#include "resil/strategy.hpp"

namespace resil {

// A named example model bundled with its objective and the strategies the
// documentation refers to. reference_values carries externally documented
// numbers that reports quote next to computed ones.
struct Fixture {
  Model model;
  Objective objective;
  std::map<std::string, Strategy> strategies;
  std::map<std::string, Rational> reference_values;
};

// FIG4, FIG6L, FIG6R, FREQ19, NODIST.
const std::map<std::string, Fixture>& fixtures();

}  // namespace resil
