#include "resil/model.hpp"

#include <algorithm>

#include "resil/errors.hpp"

namespace resil {

bool State::has_label(const std::string& label) const {
  return std::find(labels.begin(), labels.end(), label) != labels.end();
}

int State::normal_count() const {
  int n = 0;
  for (const auto& a : actions) n += a.kind == ActionKind::Normal ? 1 : 0;
  return n;
}

int State::disturbance_count() const {
  return static_cast<int>(actions.size()) - normal_count();
}

int Model::state_id(const std::string& state_name) const {
  for (int i = 0; i < state_count(); ++i) {
    if (states[i].name == state_name) return i;
  }
  return -1;
}

int Model::require_state(const std::string& state_name) const {
  int id = state_id(state_name);
  if (id < 0) throw ParseError("unknown state reference '" + state_name + "'");
  return id;
}

std::vector<int> Model::labeled(const std::string& label) const {
  std::vector<int> out;
  for (int i = 0; i < state_count(); ++i) {
    if (states[i].has_label(label)) out.push_back(i);
  }
  return out;
}

int Model::find_action(int state, const std::string& action_name) const {
  const auto& acts = states[state].actions;
  for (int i = 0; i < static_cast<int>(acts.size()); ++i) {
    if (acts[i].name == action_name) return i;
  }
  return -1;
}

std::vector<int> Model::normal_actions(int state) const {
  std::vector<int> out;
  const auto& acts = states[state].actions;
  for (int i = 0; i < static_cast<int>(acts.size()); ++i) {
    if (acts[i].kind == ActionKind::Normal) out.push_back(i);
  }
  return out;
}

std::vector<int> Model::disturbance_actions(int state) const {
  std::vector<int> out;
  const auto& acts = states[state].actions;
  for (int i = 0; i < static_cast<int>(acts.size()); ++i) {
    if (acts[i].kind == ActionKind::Disturbance) out.push_back(i);
  }
  return out;
}

void normalize_distribution(Distribution& dist) {
  std::sort(dist.begin(), dist.end(),
            [](const Outcome& a, const Outcome& b) { return a.state < b.state; });
  Distribution merged;
  for (const auto& o : dist) {
    if (!merged.empty() && merged.back().state == o.state) {
      merged.back().prob += o.prob;
    } else {
      merged.push_back(o);
    }
  }
  dist = std::move(merged);
}

ModelBuilder::ModelBuilder(std::string name) : name_(std::move(name)) {}

ModelBuilder& ModelBuilder::state(const std::string& state_name, Player owner,
                                  std::vector<std::string> labels) {
  if (index_.count(state_name)) throw ParseError("duplicate state '" + state_name + "'");
  index_[state_name] = static_cast<int>(states_.size());
  State s;
  s.name = state_name;
  s.owner = owner;
  s.labels = std::move(labels);
  states_.push_back(std::move(s));
  return *this;
}

ModelBuilder& ModelBuilder::action(const std::string& from, const std::string& action_name,
                                   ActionKind kind,
                                   std::vector<std::pair<std::string, Rational>> outcomes) {
  actions_.push_back({from, action_name, kind, std::move(outcomes)});
  return *this;
}

ModelBuilder& ModelBuilder::initial(const std::string& state_name, const Rational& prob) {
  initial_.emplace_back(state_name, prob);
  return *this;
}

Model ModelBuilder::build() const {
  Model m;
  m.name = name_;
  m.states = states_;
  for (const auto& pa : actions_) {
    auto it = index_.find(pa.from);
    if (it == index_.end()) throw ParseError("unknown state reference '" + pa.from + "'");
    Action act;
    act.name = pa.name;
    act.kind = pa.kind;
    for (const auto& [to, prob] : pa.outcomes) {
      auto jt = index_.find(to);
      if (jt == index_.end()) throw ParseError("unknown state reference '" + to + "'");
      act.to.push_back({jt->second, prob});
    }
    normalize_distribution(act.to);
    m.states[it->second].actions.push_back(std::move(act));
  }
  for (const auto& [state_name, prob] : initial_) {
    auto it = index_.find(state_name);
    if (it == index_.end()) throw ParseError("unknown state reference '" + state_name + "'");
    m.initial.push_back({it->second, prob});
  }
  normalize_distribution(m.initial);
  return m;
}

std::vector<std::string> normalize_sinks(Model& model, const std::vector<std::string>& labels) {
  std::vector<std::string> rewritten;
  for (int s = 0; s < model.state_count(); ++s) {
    bool marked = false;
    for (const auto& l : labels) {
      if (model.states[s].has_label(l)) marked = true;
    }
    if (!marked) continue;
    bool sink = model.states[s].actions.size() == 1 &&
                model.states[s].actions[0].kind == ActionKind::Normal &&
                model.states[s].actions[0].to.size() == 1 &&
                model.states[s].actions[0].to[0].state == s;
    if (sink) continue;
    Action loop;
    loop.name = "loop";
    loop.kind = ActionKind::Normal;
    loop.to = {{s, Rational(1)}};
    model.states[s].actions = {loop};
    rewritten.push_back(model.states[s].name);
  }
  return rewritten;
}

}  // namespace resil
