#include "resil/qp.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "resil/errors.hpp"

namespace resil {

namespace {

std::string sanitize(const std::string& raw) {
  std::string out = raw;
  for (char& c : out) {
    if (c == ' ' || c == '\t' || c == '(' || c == ')' || c == '+' || c == ':') c = '_';
  }
  return out;
}

void add_term(LinearForm& form, int var, const Rational& coeff) {
  for (LinearTerm& term : form.terms) {
    if (term.var == var) {
      term.coeff += coeff;
      return;
    }
  }
  form.terms.push_back({var, coeff});
}

Rational form_at(const LinearForm& form, const std::vector<Rational>& point) {
  Rational value = form.constant;
  for (const LinearTerm& term : form.terms) value += term.coeff * point[term.var];
  return value;
}

std::string form_to_text(const LinearForm& form, const std::vector<std::string>& variables) {
  std::ostringstream out;
  bool first = true;
  for (const LinearTerm& term : form.terms) {
    if (!first) out << " + ";
    out << rational_to_string(term.coeff) << " " << variables[term.var];
    first = false;
  }
  if (!(form.constant == 0) || first) {
    if (!first) out << " + ";
    out << rational_to_string(form.constant);
  }
  return out.str();
}

std::vector<std::string> split(const std::string& text, const std::string& sep) {
  std::vector<std::string> parts;
  size_t start = 0;
  while (true) {
    size_t at = text.find(sep, start);
    if (at == std::string::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, at - start));
    start = at + sep.size();
  }
}

LinearForm parse_form(const std::string& text, const std::map<std::string, int>& index) {
  LinearForm form;
  for (const std::string& chunk : split(text, " + ")) {
    std::istringstream in(chunk);
    std::string first, second, extra;
    in >> first >> second >> extra;
    if (first.empty() || !extra.empty()) throw Error("malformed linear form: " + text);
    if (second.empty()) {
      form.constant += parse_rational(first);
      continue;
    }
    auto found = index.find(second);
    if (found == index.end()) throw Error("unknown variable in form: " + second);
    form.terms.push_back({found->second, parse_rational(first)});
  }
  return form;
}

}  // namespace

int QuadraticProgram::add_variable(const std::string& name) {
  variables.push_back(name);
  return static_cast<int>(variables.size()) - 1;
}

Rational QuadraticProgram::objective_at(const std::vector<Rational>& point) const {
  if (point.size() != variables.size()) throw Error("objective_at: point size mismatch");
  Rational total;
  for (const auto& product : products) {
    total += form_at(product.first, point) * form_at(product.second, point);
  }
  return total;
}

bool QuadraticProgram::feasible_at(const std::vector<Rational>& point) const {
  if (point.size() != variables.size()) throw Error("feasible_at: point size mismatch");
  for (const Rational& value : point) {
    if (value < 0) return false;
  }
  for (const LinearConstraint& row : constraints) {
    Rational lhs;
    for (const LinearTerm& term : row.terms) lhs += term.coeff * point[term.var];
    switch (row.relation) {
      case Relation::LessEq:
        if (lhs > row.bound) return false;
        break;
      case Relation::Equal:
        if (!(lhs == row.bound)) return false;
        break;
      case Relation::GreaterEq:
        if (lhs < row.bound) return false;
        break;
    }
  }
  return true;
}

std::string QuadraticProgram::to_text() const {
  std::ostringstream out;
  out << "qp " << name << "\n";
  for (const std::string& v : variables) out << "var " << v << "\n";
  for (const LinearConstraint& row : constraints) {
    LinearForm lhs{row.terms, Rational(0)};
    out << "row " << row.name << " : " << form_to_text(lhs, variables);
    switch (row.relation) {
      case Relation::LessEq: out << " <= "; break;
      case Relation::Equal: out << " = "; break;
      case Relation::GreaterEq: out << " >= "; break;
    }
    out << rational_to_string(row.bound) << "\n";
  }
  for (const auto& product : products) {
    out << "product ( " << form_to_text(product.first, variables) << " ) ( "
        << form_to_text(product.second, variables) << " )\n";
  }
  out << "end\n";
  return out.str();
}

QuadraticProgram parse_qp(const std::string& text) {
  QuadraticProgram qp;
  std::map<std::string, int> index;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty()) continue;
    if (line == "end") break;
    if (line.rfind("qp ", 0) == 0) {
      qp.name = line.substr(3);
      continue;
    }
    if (line.rfind("var ", 0) == 0) {
      std::string name = line.substr(4);
      index[name] = qp.add_variable(name);
      continue;
    }
    if (line.rfind("row ", 0) == 0) {
      std::string rest = line.substr(4);
      size_t split_at = rest.find(" : ");
      if (split_at == std::string::npos) throw Error("malformed row: " + line);
      LinearConstraint row;
      row.name = rest.substr(0, split_at);
      std::string body = rest.substr(split_at + 3);
      Relation relation = Relation::Equal;
      size_t rel_at = body.find(" <= ");
      size_t rel_len = 4;
      if (rel_at != std::string::npos) {
        relation = Relation::LessEq;
      } else if ((rel_at = body.find(" >= ")) != std::string::npos) {
        relation = Relation::GreaterEq;
      } else if ((rel_at = body.find(" = ")) != std::string::npos) {
        relation = Relation::Equal;
        rel_len = 3;
      } else {
        throw Error("malformed row: " + line);
      }
      LinearForm lhs = parse_form(body.substr(0, rel_at), index);
      if (!(lhs.constant == 0)) throw Error("row left side must be constant-free: " + line);
      row.terms = lhs.terms;
      row.relation = relation;
      row.bound = parse_rational(body.substr(rel_at + rel_len));
      qp.constraints.push_back(std::move(row));
      continue;
    }
    if (line.rfind("product ( ", 0) == 0) {
      if (line.size() < 12 || line.substr(line.size() - 2) != " )") {
        throw Error("malformed product: " + line);
      }
      std::string body = line.substr(10, line.size() - 12);
      std::vector<std::string> sides = split(body, " ) ( ");
      if (sides.size() != 2) throw Error("malformed product: " + line);
      qp.products.emplace_back(parse_form(sides[0], index), parse_form(sides[1], index));
      continue;
    }
    throw Error("unrecognized qp line: " + line);
  }
  return qp;
}

QuadraticProgram build_iterative_qp(const Model& game, const std::vector<Rational>& previous,
                                    int level, const std::string& goal_label,
                                    const std::string& bad_label) {
  int n = game.state_count();
  if (!previous.empty() && static_cast<int>(previous.size()) != n) {
    throw Error("build_iterative_qp: previous level values must cover every state");
  }
  std::vector<char> bad(n, 0);
  for (int s : game.labeled(bad_label)) bad[s] = 1;
  std::vector<char> fixed(n, 0);
  for (int s : game.labeled(goal_label)) {
    if (bad[s]) {
      throw Error("build_iterative_qp: state '" + game.states[s].name +
                  "' carries both the goal and the bad label");
    }
    fixed[s] = 1;
  }

  std::vector<std::vector<int>> normals(n);
  std::vector<int> disturbance(n, -1);
  for (int s = 0; s < n; ++s) {
    const State& state = game.states[s];
    for (size_t a = 0; a < state.actions.size(); ++a) {
      if (state.actions[a].kind == ActionKind::Normal) {
        normals[s].push_back(static_cast<int>(a));
        continue;
      }
      if (state.owner != Player::One) {
        throw AssumptionViolated("disturbance at adversary state '" + state.name + "'");
      }
      if (disturbance[s] != -1) {
        throw AssumptionViolated("state '" + state.name + "' has two disturbance actions");
      }
      disturbance[s] = static_cast<int>(a);
    }
    if (normals[s].size() != 2) {
      throw AssumptionViolated("state '" + state.name + "' needs exactly two normal actions");
    }
    if (state.owner == Player::One && disturbance[s] == -1) {
      throw AssumptionViolated("state '" + state.name + "' needs a disturbance action");
    }
    for (const Action& action : state.actions) {
      bool leaks = false;
      for (const Outcome& o : action.to) {
        if (bad[o.state]) leaks = true;
      }
      if (!leaks) {
        throw AssumptionViolated("action '" + action.name + "' at '" + state.name +
                                 "' never reaches a '" + bad_label + "' state");
      }
    }
  }

  QuadraticProgram qp;
  qp.name = sanitize(game.name) + "-level-" + std::to_string(level);
  std::string prefix = "V" + std::to_string(level);
  std::vector<int> vs(n, -1);
  for (int s = 0; s < n; ++s) {
    vs[s] = qp.add_variable(prefix + "[" + sanitize(game.states[s].name) + "]");
  }

  for (int s = 0; s < n; ++s) {
    if (!fixed[s] && !bad[s]) continue;
    LinearConstraint& row = qp.constraints.emplace_back();
    row.name = (fixed[s] ? "goal_" : "bad_") + sanitize(game.states[s].name);
    row.terms = {{vs[s], Rational(1)}};
    row.relation = Relation::Equal;
    row.bound = fixed[s] ? Rational(1) : Rational(0);
  }

  auto gap_form = [&](int lead, const Distribution& dist) {
    LinearForm form;
    add_term(form, lead, Rational(1));
    for (const Outcome& o : dist) add_term(form, vs[o.state], -o.prob);
    return form;
  };
  auto add_row = [&](const std::string& name, const LinearForm& lhs, Relation relation,
                     const Rational& bound) {
    LinearConstraint& row = qp.constraints.emplace_back();
    row.name = name;
    row.terms = lhs.terms;
    row.relation = relation;
    row.bound = bound;
  };

  for (int s = 0; s < n; ++s) {
    if (fixed[s] || bad[s]) continue;
    const State& state = game.states[s];
    std::string here = sanitize(state.name);
    bool gadgets = state.owner == Player::One && !previous.empty();
    if (!gadgets) {
      Relation relation = state.owner == Player::One ? Relation::GreaterEq : Relation::LessEq;
      std::vector<LinearForm> factors;
      for (int a : normals[s]) {
        LinearForm form = gap_form(vs[s], state.actions[a].to);
        add_row("choice_" + here + "_" + sanitize(state.actions[a].name), form, relation,
                Rational(0));
        factors.push_back(std::move(form));
      }
      qp.products.emplace_back(std::move(factors[0]), std::move(factors[1]));
      continue;
    }

    Rational dconst;
    for (const Outcome& o : state.actions[disturbance[s]].to) {
      dconst += o.prob * previous[o.state];
    }
    std::vector<LinearForm> picks;
    for (int a : normals[s]) {
      const Action& action = state.actions[a];
      std::string tag = here + "_" + sanitize(action.name);
      int va = qp.add_variable(prefix + "[" + here + "][" + sanitize(action.name) + "]");
      LinearForm pick;
      add_term(pick, vs[s], Rational(1));
      add_term(pick, va, Rational(-1));
      add_row("choice_" + tag, pick, Relation::GreaterEq, Rational(0));
      picks.push_back(std::move(pick));

      LinearForm pass = gap_form(va, action.to);
      add_row("pass_" + tag, pass, Relation::LessEq, Rational(0));
      LinearForm disturb;
      add_term(disturb, va, Rational(1));
      add_row("disturb_" + tag, disturb, Relation::LessEq, dconst);
      disturb.constant = -dconst;
      qp.products.emplace_back(std::move(pass), std::move(disturb));
    }
    qp.products.emplace_back(std::move(picks[0]), std::move(picks[1]));
  }
  return qp;
}

}  // namespace resil
