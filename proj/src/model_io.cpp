#include "resil/model_io.hpp"

#include <algorithm>
#include <cstdint>
#include <set>

#include "resil/errors.hpp"

namespace resil {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.count(key)) {
      throw ParseError("unknown field '" + key + "' in " + where);
    }
  }
}

Rational prob_field(const json& j, const std::string& where) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  // Shortest round-trip text of the number parses to the intended rational.
  if (j.is_number()) return parse_rational(j.dump());
  throw ParseError("probability must be a string or number in " + where);
}

std::string require_string(const json& obj, const char* field, const std::string& where) {
  auto it = obj.find(field);
  if (it == obj.end() || !it->is_string()) {
    throw ParseError(std::string("missing or non-string field '") + field + "' in " + where);
  }
  return it->get<std::string>();
}

}  // namespace

Model parse_model(const std::string& text) { return parse_model(text, ParseOptions{}); }

Model parse_model(const std::string& text, const ParseOptions& options) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("model document: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("model document: top level must be an object");
  reject_unknown(doc, {"version", "states", "transitions", "initial"}, "model document");
  if (!doc.contains("version") || !doc["version"].is_string()) {
    throw ParseError("model document: missing string field 'version'");
  }
  if (!doc.contains("states") || !doc["states"].is_array() || doc["states"].empty()) {
    throw ParseError("model document: missing or empty 'states'");
  }
  if (!doc.contains("transitions") || !doc["transitions"].is_array()) {
    throw ParseError("model document: missing 'transitions'");
  }
  if (!doc.contains("initial") || !doc["initial"].is_array() || doc["initial"].empty()) {
    throw ParseError("model document: missing or empty 'initial'");
  }

  Model m;
  for (const auto& js : doc["states"]) {
    if (!js.is_object()) throw ParseError("model document: state entries must be objects");
    reject_unknown(js, {"id", "player", "labels"}, "state entry");
    State s;
    s.name = require_string(js, "id", "state entry");
    auto pit = js.find("player");
    if (pit == js.end() || !pit->is_number_integer()) {
      throw ParseError("state '" + s.name + "': missing integer field 'player'");
    }
    int player = pit->get<int>();
    if (player != 1 && player != 2) {
      throw ParseError("state '" + s.name + "': player must be 1 or 2");
    }
    s.owner = player == 1 ? Player::One : Player::Two;
    if (js.contains("labels")) {
      if (!js["labels"].is_array()) throw ParseError("state '" + s.name + "': labels must be an array");
      for (const auto& l : js["labels"]) {
        if (!l.is_string()) throw ParseError("state '" + s.name + "': labels must be strings");
        s.labels.push_back(l.get<std::string>());
      }
    }
    if (m.state_id(s.name) >= 0) throw ParseError("duplicate state id '" + s.name + "'");
    m.states.push_back(std::move(s));
  }

  for (const auto& jt : doc["transitions"]) {
    if (!jt.is_object()) throw ParseError("model document: transition entries must be objects");
    reject_unknown(jt, {"from", "action", "kind", "to"}, "transition entry");
    std::string from = require_string(jt, "from", "transition entry");
    int src = m.state_id(from);
    if (src < 0) throw ParseError("unknown state reference '" + from + "' in transition");
    Action act;
    act.name = require_string(jt, "action", "transition entry");
    std::string kind = require_string(jt, "kind", "transition entry");
    if (kind == "normal") {
      act.kind = ActionKind::Normal;
    } else if (kind == "disturbance") {
      act.kind = ActionKind::Disturbance;
    } else {
      throw ParseError("transition '" + from + "/" + act.name + "': kind must be normal or disturbance");
    }
    auto tit = jt.find("to");
    if (tit == jt.end() || !tit->is_array() || tit->empty()) {
      throw ParseError("transition '" + from + "/" + act.name + "': missing outcomes");
    }
    for (const auto& jo : *tit) {
      if (!jo.is_object()) throw ParseError("transition outcomes must be objects");
      reject_unknown(jo, {"state", "prob"}, "transition outcome");
      std::string to = require_string(jo, "state", "transition outcome");
      int dst = m.state_id(to);
      if (dst < 0) throw ParseError("unknown state reference '" + to + "' in transition");
      if (!jo.contains("prob")) throw ParseError("transition outcome missing 'prob'");
      act.to.push_back({dst, prob_field(jo["prob"], "transition '" + from + "/" + act.name + "'")});
    }
    normalize_distribution(act.to);
    m.states[src].actions.push_back(std::move(act));
  }

  for (const auto& ji : doc["initial"]) {
    if (!ji.is_object()) throw ParseError("initial entries must be objects");
    reject_unknown(ji, {"state", "prob"}, "initial entry");
    std::string name = require_string(ji, "state", "initial entry");
    int id = m.state_id(name);
    if (id < 0) throw ParseError("unknown state reference '" + name + "' in initial");
    if (!ji.contains("prob")) throw ParseError("initial entry missing 'prob'");
    m.initial.push_back({id, prob_field(ji["prob"], "initial entry")});
  }
  normalize_distribution(m.initial);

  if (!options.sink_labels.empty()) {
    auto rewritten = normalize_sinks(m, options.sink_labels);
    if (options.notes) {
      for (const auto& name : rewritten) {
        options.notes->push_back("state '" + name + "' rewritten into an absorbing sink");
      }
    }
  }

  auto diagnostics = validate(m);
  if (!diagnostics_clean(diagnostics)) {
    std::string msg = "model rejected:";
    for (const auto& d : diagnostics) {
      if (d.error) msg += "\n  " + d.message;
    }
    throw ValidationError(msg);
  }
  return m;
}

std::string serialize_model(const Model& model) {
  ordered_json doc;
  doc["version"] = "1";
  doc["states"] = ordered_json::array();
  for (const auto& s : model.states) {
    ordered_json js;
    js["id"] = s.name;
    js["player"] = s.owner == Player::One ? 1 : 2;
    js["labels"] = s.labels;
    doc["states"].push_back(std::move(js));
  }
  doc["transitions"] = ordered_json::array();
  for (const auto& s : model.states) {
    for (const auto& a : s.actions) {
      ordered_json jt;
      jt["from"] = s.name;
      jt["action"] = a.name;
      jt["kind"] = a.kind == ActionKind::Normal ? "normal" : "disturbance";
      jt["to"] = ordered_json::array();
      for (const auto& o : a.to) {
        ordered_json jo;
        jo["state"] = model.states[o.state].name;
        jo["prob"] = rational_to_string(o.prob);
        jt["to"].push_back(std::move(jo));
      }
      doc["transitions"].push_back(std::move(jt));
    }
  }
  doc["initial"] = ordered_json::array();
  for (const auto& o : model.initial) {
    ordered_json jo;
    jo["state"] = model.states[o.state].name;
    jo["prob"] = rational_to_string(o.prob);
    doc["initial"].push_back(std::move(jo));
  }
  return doc.dump(2) + "\n";
}

namespace {

// Splits "name" or "(name,counter)" into its parts; counter -1 = memoryless.
std::pair<std::string, int> split_strategy_key(const std::string& key) {
  if (key.size() >= 2 && key.front() == '(' && key.back() == ')') {
    auto comma = key.rfind(',');
    if (comma == std::string::npos || comma < 1) {
      throw StrategyIncompatible("malformed strategy key '" + key + "'");
    }
    std::string name = key.substr(1, comma - 1);
    std::string counter = key.substr(comma + 1, key.size() - comma - 2);
    if (counter.empty() ||
        counter.find_first_not_of("0123456789") != std::string::npos) {
      throw StrategyIncompatible("malformed counter in strategy key '" + key + "'");
    }
    return {name, std::stoi(counter)};
  }
  return {key, -1};
}

struct RoleVote {
  bool controller = false, adversary = false, disturber = false;
  void require_single(const std::string& where) {
    if (controller + adversary + disturber > 1) {
      throw StrategyIncompatible("rule mixes roles at " + where);
    }
  }
};

}  // namespace

Strategy parse_strategy(const std::string& text, const Model& model) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw StrategyIncompatible(std::string("strategy document: ") + e.what());
  }
  if (!doc.is_object()) throw StrategyIncompatible("strategy document must be a flat object");

  RoleVote vote;
  bool any_counter = false, any_plain = false;
  int max_counter = 0;
  Strategy s;

  for (const auto& [key, value] : doc.items()) {
    auto [state_name, counter] = split_strategy_key(key);
    int st = model.state_id(state_name);
    if (st < 0) throw StrategyIncompatible("rule references missing state '" + state_name + "'");
    if (counter >= 0) {
      any_counter = true;
      max_counter = std::max(max_counter, counter);
    } else {
      any_plain = true;
      counter = 0;
    }

    Choice choice;
    auto add_entry = [&](const std::string& action_name, const Rational& weight) {
      if (action_name == "~") {
        vote.disturber = true;
        choice.push_back({kBottom, weight});
        return;
      }
      int a = model.find_action(st, action_name);
      if (a < 0) {
        throw StrategyIncompatible("illegal action '" + action_name + "' at state '" +
                                   state_name + "'");
      }
      if (model.states[st].actions[a].kind == ActionKind::Disturbance) {
        vote.disturber = true;
      } else if (model.states[st].owner == Player::One) {
        vote.controller = true;
      } else {
        vote.adversary = true;
      }
      choice.push_back({a, weight});
    };

    if (value.is_string()) {
      add_entry(value.get<std::string>(), Rational(1));
    } else if (value.is_object()) {
      for (const auto& [action_name, weight] : value.items()) {
        add_entry(action_name, prob_field(weight, "strategy entry '" + key + "'"));
      }
    } else {
      throw StrategyIncompatible("strategy entry '" + key + "' must be a string or object");
    }
    vote.require_single("state '" + state_name + "'");
    s.rule[{st, counter}] = std::move(choice);
  }

  if (any_counter && any_plain) {
    throw StrategyIncompatible("rule mixes memoryless and step-counting keys");
  }
  s.counter = any_counter ? max_counter : Strategy::kMemoryless;
  s.role = vote.disturber ? Role::Disturber
                          : (vote.adversary ? Role::Adversary : Role::Controller);
  check_strategy(model, s);
  return s;
}

ordered_json strategy_document(const Strategy& strategy, const Model& model) {
  ordered_json doc = ordered_json::object();
  for (const auto& [key, choice] : strategy.rule) {
    auto [st, counter] = key;
    std::string name = model.states[st].name;
    std::string doc_key =
        strategy.memoryless() ? name : "(" + name + "," + std::to_string(counter) + ")";
    auto action_name = [&](int a) {
      return a == kBottom ? std::string("~") : model.states[st].actions[a].name;
    };
    if (choice.size() == 1) {
      doc[doc_key] = action_name(choice[0].action);
    } else {
      Choice sorted = choice;
      std::sort(sorted.begin(), sorted.end(),
                [](const Weighted& a, const Weighted& b) { return a.action < b.action; });
      ordered_json mixed = ordered_json::object();
      for (const auto& w : sorted) {
        mixed[action_name(w.action)] = rational_to_string(w.weight);
      }
      doc[doc_key] = std::move(mixed);
    }
  }
  return doc;
}

std::string serialize_strategy(const Strategy& strategy, const Model& model) {
  return strategy_document(strategy, model).dump(2) + "\n";
}

Objective parse_objective(const std::string& text) {
  auto first = text.find(':');
  auto last = text.rfind(':');
  if (first == std::string::npos || first == last) {
    throw ParseError("objective '" + text + "': expected kind:label:cmp+threshold");
  }
  Objective o;
  std::string kind = text.substr(0, first);
  if (kind == "reach") {
    o.kind = ObjectiveKind::Reach;
  } else if (kind == "safety") {
    o.kind = ObjectiveKind::Safety;
  } else {
    throw ParseError("objective '" + text + "': kind must be reach or safety");
  }
  o.label = text.substr(first + 1, last - first - 1);
  if (o.label.empty()) throw ParseError("objective '" + text + "': empty label");
  std::string cmp = text.substr(last + 1);
  if (cmp.rfind(">=", 0) == 0) {
    o.strict = false;
    o.p = parse_rational(cmp.substr(2));
  } else if (cmp.rfind(">", 0) == 0) {
    o.strict = true;
    o.p = parse_rational(cmp.substr(1));
  } else {
    throw ParseError("objective '" + text + "': comparator must be > or >=");
  }
  if (o.p < 0 || o.p > 1) throw ParseError("objective '" + text + "': threshold outside [0,1]");
  return o;
}

std::string Objective::to_string() const {
  std::string kind_name = kind == ObjectiveKind::Reach ? "reach" : "safety";
  return kind_name + ":" + label + ":" + (strict ? ">" : ">=") + rational_to_string(p);
}

ordered_json rational_json(const Rational& value) {
  if (boost::multiprecision::denominator(value) == 1) {
    BigInt num = boost::multiprecision::numerator(value);
    if (num >= std::numeric_limits<std::int64_t>::min() &&
        num <= std::numeric_limits<std::int64_t>::max()) {
      return ordered_json(num.convert_to<std::int64_t>());
    }
  }
  return ordered_json(rational_to_string(value));
}

namespace {

template <class T, class Render>
ordered_json count_json(const ExtendedCount<T>& c, Render render) {
  switch (c.tag) {
    case ExtendedCount<T>::Tag::Finite: return render(c.value);
    case ExtendedCount<T>::Tag::Omega: return ordered_json("omega");
    default: return ordered_json("unbreakable");
  }
}

template <class T, class Render>
ordered_json bp_json(const BreakingPoint<T>& bp, Render render) {
  ordered_json doc;
  doc["transient"] = count_json(bp.transient, render);
  doc["frequency"] = count_json(bp.frequency, render);
  doc["attained"] = bp.attained;
  return doc;
}

}  // namespace

ordered_json breaking_point_json(const BreakingPoint<Rational>& bp) {
  return bp_json(bp, [](const Rational& v) { return rational_json(v); });
}

ordered_json breaking_point_json(const BreakingPoint<double>& bp) {
  return bp_json(bp, [](double v) { return ordered_json(v); });
}

ordered_json result_document(const std::string& semantics,
                             const ordered_json& breaking_point,
                             const ordered_json& witness,
                             const std::vector<std::string>& diagnostics) {
  ordered_json doc;
  doc["semantics"] = semantics;
  for (const auto& [key, value] : breaking_point.items()) {
    doc[key] = value;
  }
  if (!witness.is_null()) doc["witness"] = witness;
  doc["diagnostics"] = diagnostics;
  return doc;
}

}  // namespace resil
