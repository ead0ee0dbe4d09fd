#pragma once

#include <string>
#include <utility>
#include <vector>

#include "resil/lp.hpp"
#include "resil/model.hpp"

namespace resil {

struct LinearForm {
  std::vector<LinearTerm> terms;
  Rational constant;
};

// Quadratic program over nonnegative variables whose objective is a sum of
// pairwise products of linear forms, each product nonnegative on the feasible
// set. No solver is attached; the type exists as a checkable certificate:
// objective_at/feasible_at evaluate a candidate point exactly, and the text
// form round-trips through parse_qp.
struct QuadraticProgram {
  std::string name;
  std::vector<std::string> variables;
  std::vector<LinearConstraint> constraints;
  std::vector<std::pair<LinearForm, LinearForm>> products;

  int add_variable(const std::string& name);
  Rational objective_at(const std::vector<Rational>& point) const;
  bool feasible_at(const std::vector<Rational>& point) const;
  std::string to_text() const;
};

QuadraticProgram parse_qp(const std::string& text);

// Level-i certificate program for the budgeted game values: one variable per
// state (goal states fixed to 1, bad states fixed to 0 by equality rows) and,
// when `previous` is nonempty, one variable per Player-1 choice capturing the
// pass-through-or-disturb pick, with the level-(i-1) disturbance payoff baked
// in as a constant from `previous`. The feasible points with objective 0 are
// exactly the level-i value vectors. Requires the normalized shape: two
// normal actions everywhere, exactly one disturbance per Player-1 state and
// none elsewhere, and every action leaking to a bad-labeled state; violations
// throw AssumptionViolated. `previous` is indexed by state and must either be
// empty (level 0) or cover every state.
QuadraticProgram build_iterative_qp(const Model& game, const std::vector<Rational>& previous,
                                    int level, const std::string& goal_label = "G",
                                    const std::string& bad_label = "B");

}  // namespace resil
