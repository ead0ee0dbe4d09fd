#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "resil/rational.hpp"

namespace resil {

enum class Player { One, Two };
enum class ActionKind { Normal, Disturbance };

struct Outcome {
  int state = -1;
  Rational prob;
};

// Sparse distribution over state ids, kept sorted by state.
using Distribution = std::vector<Outcome>;

struct Action {
  std::string name;
  ActionKind kind = ActionKind::Normal;
  Distribution to;
};

struct State {
  std::string name;
  Player owner = Player::One;
  std::vector<std::string> labels;
  std::vector<Action> actions;

  bool has_label(const std::string& label) const;
  int normal_count() const;
  int disturbance_count() const;
};

// A stochastic game with disturbances. Player-1 states may carry disturbance
// actions in addition to their normal ones; Player-2 states carry only normal
// actions. Plain MDPs and Markov chains are represented as degenerate games.
struct Model {
  std::string name = "model";
  std::vector<State> states;
  Distribution initial;

  int state_count() const { return static_cast<int>(states.size()); }
  // Id lookup by name; -1 when absent.
  int state_id(const std::string& state_name) const;
  // Like state_id but throws ParseError naming the reference.
  int require_state(const std::string& state_name) const;
  // Sorted ids of states carrying the label.
  std::vector<int> labeled(const std::string& label) const;
  // Index of the named action at the state; -1 when absent.
  int find_action(int state, const std::string& action_name) const;
  // Indices of all normal / disturbance actions at the state.
  std::vector<int> normal_actions(int state) const;
  std::vector<int> disturbance_actions(int state) const;
};

// Sorts a distribution by state id, merging duplicate entries.
void normalize_distribution(Distribution& dist);

// Name-based construction helper used by fixtures, tests, and the generator.
class ModelBuilder {
 public:
  explicit ModelBuilder(std::string name);

  ModelBuilder& state(const std::string& state_name, Player owner,
                      std::vector<std::string> labels = {});
  ModelBuilder& action(const std::string& from, const std::string& action_name,
                       ActionKind kind,
                       std::vector<std::pair<std::string, Rational>> outcomes);
  ModelBuilder& initial(const std::string& state_name, const Rational& prob);

  // Resolves all names; throws ParseError on dangling references.
  Model build() const;

 private:
  struct PendingAction {
    std::string from;
    std::string name;
    ActionKind kind;
    std::vector<std::pair<std::string, Rational>> outcomes;
  };
  std::string name_;
  std::vector<State> states_;          // actions filled at build()
  std::map<std::string, int> index_;
  std::vector<PendingAction> actions_;
  std::vector<std::pair<std::string, Rational>> initial_;
};

struct Diagnostic {
  bool error = true;
  std::string message;
};

// Checks every structural invariant of the model; empty result means valid.
std::vector<Diagnostic> validate(const Model& model);

// True iff no diagnostic has error severity.
bool diagnostics_clean(const std::vector<Diagnostic>& diagnostics);

// Rewrites every state carrying one of the given labels into an absorbing
// sink (single normal self-loop), returning the names of rewritten states.
std::vector<std::string> normalize_sinks(Model& model, const std::vector<std::string>& labels);

}  // namespace resil
