#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "resil/breaking_point.hpp"
#include "resil/model.hpp"
#include "resil/objective.hpp"
#include "resil/strategy.hpp"

namespace resil {

struct ParseOptions {
  // States carrying one of these labels are rewritten into absorbing sinks.
  std::vector<std::string> sink_labels;
  // Receives a note per rewritten state when non-null.
  std::vector<std::string>* notes = nullptr;
};

// Parses a model document. Throws ParseError on malformed input and
// ValidationError when the parsed model violates a structural invariant.
Model parse_model(const std::string& text);
Model parse_model(const std::string& text, const ParseOptions& options);

// Canonical serialization; parse ∘ serialize is the identity on its output.
std::string serialize_model(const Model& model);

// Parses a flat strategy document ({"s0":"a"} or {"(s1,0)":"a2"}), inferring
// the role from the referenced states and actions. Throws
// StrategyIncompatible on missing states, illegal actions, or partial rules.
Strategy parse_strategy(const std::string& text, const Model& model);

std::string serialize_strategy(const Strategy& strategy, const Model& model);
nlohmann::ordered_json strategy_document(const Strategy& strategy, const Model& model);

// Rational rendered as a JSON number when integral (and small enough), else
// as a canonical "p/q" string.
nlohmann::ordered_json rational_json(const Rational& value);

nlohmann::ordered_json breaking_point_json(const BreakingPoint<Rational>& bp);
nlohmann::ordered_json breaking_point_json(const BreakingPoint<double>& bp);

// Assembles a ResultDocument. Pass a null witness to omit the field.
nlohmann::ordered_json result_document(const std::string& semantics,
                                       const nlohmann::ordered_json& breaking_point,
                                       const nlohmann::ordered_json& witness,
                                       const std::vector<std::string>& diagnostics);

}  // namespace resil
