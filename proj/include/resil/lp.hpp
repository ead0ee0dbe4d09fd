#pragma once

#include <string>
#include <vector>

#include "resil/rational.hpp"

namespace resil {

enum class Relation { LessEq, Equal, GreaterEq };
enum class Sense { Minimize, Maximize };

struct LinearTerm {
  int var = -1;
  Rational coeff;
};

struct LinearConstraint {
  std::string name;
  std::vector<LinearTerm> terms;
  Relation relation = Relation::LessEq;
  Rational bound;
};

// A linear program over nonnegative variables. Everything solved through
// this type (probabilities, flows, stationary frequencies) is nonnegative,
// so the implicit x >= 0 bound is part of the contract.
struct LinearProgram {
  std::vector<std::string> variables;
  Sense sense = Sense::Minimize;
  std::vector<LinearTerm> objective;
  std::vector<LinearConstraint> constraints;

  int add_variable(const std::string& name);
  void add_objective_term(int var, const Rational& coeff);
  LinearConstraint& add_constraint(const std::string& name, Relation relation,
                                   const Rational& bound);

  // LP-format text for external inspection.
  std::string to_text() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Rational value;
  std::vector<Rational> point;
};

// Exact dense two-phase simplex with Bland's rule.
LpSolution solve_lp(const LinearProgram& lp);

}  // namespace resil
