#include "resil/fixtures.hpp"

namespace resil {

namespace {

Rational half() { return Rational(1, 2); }

Fixture make_fig4() {
  ModelBuilder b("FIG4");
  b.state("s0", Player::One)
      .state("s1", Player::One)
      .state("G", Player::Two, {"G"})
      .state("B", Player::Two, {"B"});
  b.action("s0", "a", ActionKind::Normal, {{"G", 1}});
  b.action("s0", "d", ActionKind::Disturbance, {{"s1", half()}, {"B", half()}});
  b.action("s1", "a", ActionKind::Normal, {{"G", 1}});
  b.action("s1", "d", ActionKind::Disturbance, {{"G", half()}, {"B", half()}});
  b.action("G", "loop", ActionKind::Normal, {{"G", 1}});
  b.action("B", "loop", ActionKind::Normal, {{"B", 1}});
  b.initial("s0", 1);

  Fixture f;
  f.model = b.build();
  f.objective = parse_objective("reach:G:>2/5");
  f.strategies["all-a"] = uniform_controller(f.model, "a");
  f.strategies["always-disturb"] = disturber_at(f.model, {"s0", "s1"});
  // Documented expected transient value; the computed infimum differs.
  f.reference_values["expected-transient"] = Rational(11, 10);
  return f;
}

Fixture make_fig6l() {
  ModelBuilder b("FIG6L");
  b.state("s0", Player::One)
      .state("s1", Player::One)
      .state("s2", Player::Two)
      .state("s3", Player::One)
      .state("G", Player::Two, {"G"})
      .state("B", Player::Two, {"B"});
  b.action("s0", "a", ActionKind::Normal, {{"G", 1}});
  b.action("s0", "d", ActionKind::Disturbance, {{"s1", 1}});
  b.action("s1", "a1", ActionKind::Normal, {{"s2", 1}});
  b.action("s1", "a2", ActionKind::Normal, {{"s3", 1}});
  b.action("s2", "a", ActionKind::Normal, {{"G", half()}, {"B", half()}});
  b.action("s3", "a", ActionKind::Normal, {{"G", 1}});
  b.action("s3", "d", ActionKind::Disturbance, {{"B", 1}});
  b.action("G", "loop", ActionKind::Normal, {{"G", 1}});
  b.action("B", "loop", ActionKind::Normal, {{"B", 1}});
  b.initial("s0", half()).initial("s1", half());

  Fixture f;
  f.model = b.build();
  f.objective = parse_objective("reach:G:>=3/4");

  int s1 = f.model.state_id("s1");
  int a1 = f.model.find_action(s1, "a1");
  int a2 = f.model.find_action(s1, "a2");

  // Tolerates one disturbance: coin branch while a disturbance remains,
  // safe branch through s3 once none does.
  Strategy star;
  star.role = Role::Controller;
  star.counter = 1;
  star.rule[{s1, 0}] = {Weighted{a2, Rational(1)}};
  star.rule[{s1, 1}] = {Weighted{a1, Rational(1)}};
  f.strategies["star"] = star;

  f.strategies["memoryless-a1"] = Strategy::pure_memoryless(Role::Controller, {{s1, a1}});
  f.strategies["memoryless-a2"] = Strategy::pure_memoryless(Role::Controller, {{s1, a2}});
  return f;
}

Fixture make_fig6r() {
  ModelBuilder b("FIG6R");
  b.state("s1", Player::One)
      .state("s2", Player::One)
      .state("s3", Player::One)
      .state("G", Player::Two, {"G"})
      .state("B", Player::Two, {"B"});
  b.action("s1", "a", ActionKind::Normal, {{"s2", 1}});
  b.action("s1", "d", ActionKind::Disturbance, {{"G", half()}, {"B", half()}});
  b.action("s2", "a", ActionKind::Normal, {{"G", 1}});
  b.action("s2", "d", ActionKind::Disturbance, {{"s3", 1}});
  b.action("s3", "a", ActionKind::Normal, {{"G", 1}});
  b.action("s3", "d", ActionKind::Disturbance, {{"B", half()}, {"s1", half()}});
  b.action("G", "loop", ActionKind::Normal, {{"G", 1}});
  b.action("B", "loop", ActionKind::Normal, {{"B", 1}});
  b.initial("s1", 1);

  Fixture f;
  f.model = b.build();
  f.objective = parse_objective("reach:G:>=1/2");
  f.strategies["all-a"] = uniform_controller(f.model, "a");

  // Step-counting disturber that needs the recycle through s1: disturb at s2
  // and s3 first, then at s1 once two disturbances are spent.
  int s1 = f.model.state_id("s1");
  int s2 = f.model.state_id("s2");
  int s3 = f.model.state_id("s3");
  int d1 = f.model.find_action(s1, "d");
  int d2 = f.model.find_action(s2, "d");
  int d3 = f.model.find_action(s3, "d");
  Strategy delta;
  delta.role = Role::Disturber;
  delta.counter = 3;
  auto bottom = Choice{Weighted{kBottom, Rational(1)}};
  delta.rule[{s1, 3}] = bottom;
  delta.rule[{s1, 2}] = {Weighted{d1, Rational(1)}};
  delta.rule[{s1, 1}] = {Weighted{d1, Rational(1)}};
  delta.rule[{s1, 0}] = bottom;
  for (int c : {1, 2, 3}) {
    delta.rule[{s2, c}] = {Weighted{d2, Rational(1)}};
    delta.rule[{s3, c}] = {Weighted{d3, Rational(1)}};
  }
  delta.rule[{s2, 0}] = bottom;
  delta.rule[{s3, 0}] = bottom;
  f.strategies["delta-recycle"] = delta;
  return f;
}

Fixture make_freq19() {
  ModelBuilder b("FREQ19");
  b.state("s1", Player::One).state("s2", Player::Two).state("G", Player::Two, {"G"});
  b.action("s1", "a", ActionKind::Normal, {{"G", 1}});
  b.action("s1", "d", ActionKind::Disturbance, {{"s1", Rational(1, 10)}, {"s2", Rational(9, 10)}});
  b.action("s2", "a", ActionKind::Normal, {{"s1", 1}});
  b.action("G", "loop", ActionKind::Normal, {{"G", 1}});
  b.initial("s1", 1);

  Fixture f;
  f.model = b.build();
  f.objective = parse_objective("reach:G:>=3/4");
  f.strategies["all-a"] = uniform_controller(f.model, "a");
  f.strategies["always-d"] = disturber_at(f.model, {"s1"});
  return f;
}

Fixture make_nodist() {
  ModelBuilder b("NODIST");
  b.state("s0", Player::One).state("s1", Player::Two).state("G", Player::Two, {"G"});
  b.action("s0", "a", ActionKind::Normal, {{"s1", 1}});
  b.action("s1", "a", ActionKind::Normal, {{"G", 1}});
  b.action("G", "loop", ActionKind::Normal, {{"G", 1}});
  b.initial("s0", 1);

  Fixture f;
  f.model = b.build();
  f.objective = parse_objective("reach:G:>=1/2");
  f.strategies["all-a"] = uniform_controller(f.model, "a");
  return f;
}

}  // namespace

const std::map<std::string, Fixture>& fixtures() {
  static const std::map<std::string, Fixture> all = [] {
    std::map<std::string, Fixture> m;
    m["FIG4"] = make_fig4();
    m["FIG6L"] = make_fig6l();
    m["FIG6R"] = make_fig6r();
    m["FREQ19"] = make_freq19();
    m["NODIST"] = make_nodist();
    return m;
  }();
  return all;
}

}  // namespace resil
