#pragma once

#include <string>

#include "resil/numeric.hpp"
#include "resil/rational.hpp"

namespace resil {

enum class ObjectiveKind { Reach, Safety };

// A threshold objective: reach the target label (or avoid the bad label)
// with probability > p (strict) or >= p.
struct Objective {
  ObjectiveKind kind = ObjectiveKind::Reach;
  std::string label = "G";
  Rational p;
  bool strict = false;

  // Violation threshold: the adversary needs this much violation probability.
  Rational theta() const { return Rational(1) - p; }

  // Does a violation probability x break the objective? Strict objectives
  // ("> p") break at x >= 1-p; non-strict ("≥ p") need x > 1-p.
  template <class T>
  bool breaks(const T& x) const {
    T t = num_from<T>(theta());
    if (strict) return !num_lt(x, t);
    return num_lt(t, x);
  }

  // Mini-syntax `kind:label:cmp+threshold`, e.g. "reach:G:>2/5".
  std::string to_string() const;
};

Objective parse_objective(const std::string& text);

}  // namespace resil
