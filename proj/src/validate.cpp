#include <set>

#include "resil/model.hpp"

namespace resil {

namespace {

void check_distribution(const Distribution& dist, const std::string& where,
                        int state_count, std::vector<Diagnostic>& out) {
  if (dist.empty()) {
    out.push_back({true, "empty distribution at " + where});
    return;
  }
  Rational sum = 0;
  std::set<int> seen;
  for (const auto& o : dist) {
    if (o.state < 0 || o.state >= state_count) {
      out.push_back({true, "dangling state reference at " + where});
      return;
    }
    if (!seen.insert(o.state).second) {
      out.push_back({true, "duplicate outcome state at " + where});
    }
    if (o.prob <= 0) {
      out.push_back({true, "non-positive probability at " + where});
    }
    sum += o.prob;
  }
  if (sum != 1) {
    out.push_back({true, "distribution not normalized at " + where +
                             " (sums to " + rational_to_string(sum) + ")"});
  }
}

}  // namespace

std::vector<Diagnostic> validate(const Model& model) {
  std::vector<Diagnostic> out;
  if (model.states.empty()) {
    out.push_back({true, "model has no states"});
    return out;
  }
  std::set<std::string> names;
  for (const auto& s : model.states) {
    if (!names.insert(s.name).second) {
      out.push_back({true, "duplicate state name '" + s.name + "'"});
    }
  }
  for (int i = 0; i < model.state_count(); ++i) {
    const State& s = model.states[i];
    if (s.normal_count() == 0) {
      out.push_back({true, "state '" + s.name + "' has no normal action"});
    }
    if (s.owner == Player::Two && s.disturbance_count() > 0) {
      out.push_back({true, "disturbance on Player-2 state '" + s.name + "'"});
    }
    std::set<std::string> action_names;
    for (const auto& a : s.actions) {
      if (!action_names.insert(a.name).second) {
        out.push_back({true, "duplicate action '" + a.name + "' at state '" + s.name + "'"});
      }
      check_distribution(a.to, "action '" + a.name + "' of state '" + s.name + "'",
                         model.state_count(), out);
    }
  }
  check_distribution(model.initial, "initial distribution", model.state_count(), out);
  return out;
}

bool diagnostics_clean(const std::vector<Diagnostic>& diagnostics) {
  for (const auto& d : diagnostics) {
    if (d.error) return false;
  }
  return true;
}

}  // namespace resil
