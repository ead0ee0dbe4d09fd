#include "resil/lp.hpp"

#include <sstream>

#include "resil/errors.hpp"

namespace resil {

int LinearProgram::add_variable(const std::string& name) {
  variables.push_back(name);
  return static_cast<int>(variables.size()) - 1;
}

void LinearProgram::add_objective_term(int var, const Rational& coeff) {
  if (coeff != 0) objective.push_back({var, coeff});
}

LinearConstraint& LinearProgram::add_constraint(const std::string& name,
                                                Relation relation,
                                                const Rational& bound) {
  constraints.push_back({name, {}, relation, bound});
  return constraints.back();
}

namespace {

void write_linear(std::ostringstream& out, const std::vector<LinearTerm>& terms,
                  const std::vector<std::string>& names) {
  bool first = true;
  for (const auto& term : terms) {
    if (term.coeff == 0) continue;
    Rational c = term.coeff;
    if (first) {
      if (c < 0) {
        out << "- ";
        c = -c;
      }
      first = false;
    } else {
      out << (c < 0 ? " - " : " + ");
      if (c < 0) c = -c;
    }
    if (c != 1) out << rational_to_string(c) << " ";
    out << names[term.var];
  }
  if (first) out << "0";
}

}  // namespace

std::string LinearProgram::to_text() const {
  std::ostringstream out;
  out << (sense == Sense::Minimize ? "Minimize" : "Maximize") << "\n obj: ";
  write_linear(out, objective, variables);
  out << "\nSubject To\n";
  int anon = 0;
  for (const auto& c : constraints) {
    std::string name = c.name.empty() ? "c" + std::to_string(anon++) : c.name;
    out << " " << name << ": ";
    write_linear(out, c.terms, variables);
    switch (c.relation) {
      case Relation::LessEq: out << " <= "; break;
      case Relation::Equal: out << " = "; break;
      case Relation::GreaterEq: out << " >= "; break;
    }
    out << rational_to_string(c.bound) << "\n";
  }
  out << "Bounds\n";
  for (const auto& v : variables) out << " " << v << " >= 0\n";
  out << "End\n";
  return out.str();
}

namespace {

// Full-tableau simplex. Columns: the LP's variables, then one slack per
// inequality row, then artificials as needed; the last column is the
// right-hand side.
struct Tableau {
  int rows = 0;
  int cols = 0;  // excluding rhs
  std::vector<std::vector<Rational>> a;
  std::vector<Rational> rhs;
  std::vector<int> basis;

  void pivot(int row, int col) {
    Rational p = a[row][col];
    for (auto& v : a[row]) v /= p;
    rhs[row] /= p;
    for (int r = 0; r < rows; ++r) {
      if (r == row) continue;
      Rational f = a[r][col];
      if (f == 0) continue;
      for (int c = 0; c < cols; ++c) a[r][c] -= f * a[row][c];
      rhs[r] -= f * rhs[row];
    }
    basis[row] = col;
  }
};

// Minimizes cost over the tableau's feasible region with Bland's rule.
// `usable` masks out columns that may not enter (retired artificials).
// Returns false when unbounded.
bool run_simplex(Tableau& t, const std::vector<Rational>& cost,
                 const std::vector<char>& usable) {
  while (true) {
    // Reduced costs from scratch; the tableau stays small enough that
    // recomputation beats maintaining an objective row through phases.
    int enter = -1;
    for (int c = 0; c < t.cols && enter < 0; ++c) {
      if (!usable[c]) continue;
      Rational reduced = cost[c];
      for (int r = 0; r < t.rows; ++r) {
        if (cost[t.basis[r]] != 0) reduced -= cost[t.basis[r]] * t.a[r][c];
      }
      if (reduced < 0) enter = c;
    }
    if (enter < 0) return true;
    int leave = -1;
    Rational best;
    for (int r = 0; r < t.rows; ++r) {
      if (t.a[r][enter] <= 0) continue;
      Rational ratio = t.rhs[r] / t.a[r][enter];
      if (leave < 0 || ratio < best ||
          (ratio == best && t.basis[r] < t.basis[leave])) {
        leave = r;
        best = ratio;
      }
    }
    if (leave < 0) return false;
    t.pivot(leave, enter);
  }
}

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
  int n = static_cast<int>(lp.variables.size());
  int m = static_cast<int>(lp.constraints.size());

  // Row form with nonnegative rhs.
  std::vector<std::vector<Rational>> rows(m, std::vector<Rational>(n, Rational(0)));
  std::vector<Rational> rhs(m);
  std::vector<Relation> rel(m);
  for (int i = 0; i < m; ++i) {
    const auto& c = lp.constraints[i];
    for (const auto& term : c.terms) {
      if (term.var < 0 || term.var >= n) throw Error("constraint references unknown variable");
      rows[i][term.var] += term.coeff;
    }
    rhs[i] = c.bound;
    rel[i] = c.relation;
    if (rhs[i] < 0) {
      for (auto& v : rows[i]) v = -v;
      rhs[i] = -rhs[i];
      if (rel[i] == Relation::LessEq) rel[i] = Relation::GreaterEq;
      else if (rel[i] == Relation::GreaterEq) rel[i] = Relation::LessEq;
    }
  }

  int slack_count = 0;
  for (int i = 0; i < m; ++i)
    if (rel[i] != Relation::Equal) ++slack_count;

  Tableau t;
  t.rows = m;
  t.cols = n + slack_count + m;  // artificial column reserved per row
  t.a.assign(m, std::vector<Rational>(t.cols, Rational(0)));
  t.rhs = rhs;
  t.basis.assign(m, -1);

  std::vector<int> artificial(m, -1);
  int next_slack = n;
  for (int i = 0; i < m; ++i) {
    for (int c = 0; c < n; ++c) t.a[i][c] = rows[i][c];
    int slack = -1;
    if (rel[i] == Relation::LessEq) {
      slack = next_slack++;
      t.a[i][slack] = 1;
      t.basis[i] = slack;
    } else if (rel[i] == Relation::GreaterEq) {
      slack = next_slack++;
      t.a[i][slack] = -1;
    }
    if (t.basis[i] < 0) {
      int art = n + slack_count + i;
      artificial[i] = art;
      t.a[i][art] = 1;
      t.basis[i] = art;
    }
  }

  std::vector<char> usable(t.cols, 1);

  // Phase 1: drive the artificials to zero.
  bool need_phase1 = false;
  for (int i = 0; i < m; ++i)
    if (artificial[i] >= 0) need_phase1 = true;
  if (need_phase1) {
    std::vector<Rational> cost(t.cols, Rational(0));
    for (int i = 0; i < m; ++i)
      if (artificial[i] >= 0) cost[artificial[i]] = 1;
    if (!run_simplex(t, cost, usable)) throw Error("phase-1 simplex unbounded");
    Rational infeas(0);
    for (int r = 0; r < t.rows; ++r)
      if (cost[t.basis[r]] != 0) infeas += t.rhs[r];
    if (infeas != 0) return {LpStatus::Infeasible, Rational(0), {}};
    // Pivot surviving artificials out of the basis; rows that offer no
    // other column are redundant and keep a zero artificial harmlessly.
    for (int r = 0; r < t.rows; ++r) {
      if (t.basis[r] < n + slack_count) continue;
      for (int c = 0; c < n + slack_count; ++c) {
        if (t.a[r][c] != 0) {
          t.pivot(r, c);
          break;
        }
      }
    }
    for (int i = 0; i < m; ++i)
      if (artificial[i] >= 0) usable[artificial[i]] = 0;
  }

  // Phase 2.
  std::vector<Rational> cost(t.cols, Rational(0));
  for (const auto& term : lp.objective) {
    Rational c = term.coeff;
    if (lp.sense == Sense::Maximize) c = -c;
    cost[term.var] += c;
  }
  if (!run_simplex(t, cost, usable)) return {LpStatus::Unbounded, Rational(0), {}};

  LpSolution solution;
  solution.status = LpStatus::Optimal;
  solution.point.assign(n, Rational(0));
  for (int r = 0; r < t.rows; ++r)
    if (t.basis[r] < n) solution.point[t.basis[r]] = t.rhs[r];
  Rational value(0);
  for (const auto& term : lp.objective) value += term.coeff * solution.point[term.var];
  solution.value = value;
  return solution;
}

}  // namespace resil
