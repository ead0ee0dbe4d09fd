// Command-line front end: evaluate / synthesize / transform / oracle /
// fixtures. Exit codes: 0 computed, 1 usage or parse error, 2 budget
// exceeded, 3 not converged. In rational mode the emitted documents are
// deterministic byte for byte.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "resil/errors.hpp"
#include "resil/eval.hpp"
#include "resil/fixtures.hpp"
#include "resil/induced.hpp"
#include "resil/lemma_suite.hpp"
#include "resil/mcmp.hpp"
#include "resil/mean_payoff.hpp"
#include "resil/mec.hpp"
#include "resil/model_io.hpp"
#include "resil/synthesis.hpp"
#include "resil/transforms.hpp"

using nlohmann::ordered_json;
using namespace resil;

namespace {

struct Args {
  std::string model;
  std::string strategy;
  std::string objective;
  std::string semantics = "worst";
  std::string mode = "rational";
  std::string transform;
  std::string epsilon = "1/1000";
  std::string label;
  std::string name;
  std::string out = "-";
  std::string emit_qp;
  int k = -1;
  double precision = 1e-8;
  long budget = 1000000;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out << text;
}

struct LoadedModel {
  Model model;
  const Fixture* fixture = nullptr;  // set when the spec named a bundled fixture
};

LoadedModel load_model(const std::string& spec) {
  auto it = fixtures().find(spec);
  if (it != fixtures().end()) return {it->second.model, &it->second};
  return {parse_model(read_file(spec)), nullptr};
}

Objective resolve_objective(const std::string& text, const LoadedModel& loaded) {
  if (!text.empty()) return parse_objective(text);
  if (loaded.fixture != nullptr) return loaded.fixture->objective;
  throw ParseError("--objective is required unless --model names a fixture");
}

Strategy resolve_strategy(const std::string& spec, const LoadedModel& loaded) {
  if (loaded.fixture != nullptr) {
    auto it = loaded.fixture->strategies.find(spec);
    if (it != loaded.fixture->strategies.end()) return it->second;
  }
  return parse_strategy(read_file(spec), loaded.model);
}

std::string objective_text(const Objective& phi) {
  std::string kind = phi.kind == ObjectiveKind::Reach ? "reach" : "safety";
  return kind + ":" + phi.label + ":" + (phi.strict ? ">" : ">=") + rational_to_string(phi.p);
}

const char* method_name(SynthesisMethod method) {
  switch (method) {
    case SynthesisMethod::LevelUnfolding: return "level-unfolding";
    case SynthesisMethod::GadgetSsp: return "gadget-ssp";
    case SynthesisMethod::MecRemoval: return "mec-removal";
    default: return "exact-enumeration";
  }
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

BreakingPoint<double> to_float(const BreakingPoint<Rational>& bp) {
  BreakingPoint<double> out;
  if (bp.transient.is_finite()) {
    out = BreakingPoint<double>::finite(to_double(bp.transient.value));
  } else if (bp.transient.is_omega()) {
    out.transient = ExtendedCount<double>::omega();
    out.frequency = bp.frequency.is_finite()
                        ? ExtendedCount<double>::finite(to_double(bp.frequency.value))
                        : ExtendedCount<double>::never();
  } else {
    out = BreakingPoint<double>::unbreakable();
  }
  out.attained = bp.attained;
  return out;
}

ordered_json eval_witness(const EvalReport& rep, const Model& model) {
  if (!rep.witness_adversary && !rep.witness_disturber) return ordered_json();
  ordered_json doc = ordered_json::object();
  if (rep.witness_adversary) doc["adversary"] = strategy_document(*rep.witness_adversary, model);
  if (rep.witness_disturber) doc["disturber"] = strategy_document(*rep.witness_disturber, model);
  return doc;
}

void run_evaluate(const Args& args) {
  LoadedModel loaded = load_model(args.model);
  Objective phi = resolve_objective(args.objective, loaded);
  Strategy pi = resolve_strategy(args.strategy, loaded);

  EvalOptions options;
  options.mode = args.mode == "float" ? NumericMode::Float : NumericMode::Exact;
  options.precision = args.precision;
  options.budget = args.budget;
  EvalReport rep = args.semantics == "expected"
                       ? expected_breaking_point(loaded.model, phi, pi, options)
                       : worst_case_breaking_point(loaded.model, phi, pi, options);

  std::vector<std::string> diagnostics;
  diagnostics.push_back("objective " + objective_text(phi));
  diagnostics.push_back(std::string("case ") + to_string(rep.case_taken));
  if (options.mode == NumericMode::Float) {
    diagnostics.push_back("float mode, precision " + std::to_string(options.precision));
  }
  if (!rep.diagnostic.empty()) diagnostics.push_back(rep.diagnostic);
  if (loaded.fixture != nullptr) {
    for (const auto& [key, value] : loaded.fixture->reference_values) {
      diagnostics.push_back("reference " + key + " = " + rational_to_string(value));
    }
  }

  ordered_json bp = options.mode == NumericMode::Float
                        ? breaking_point_json(to_float(rep.breaking_point))
                        : breaking_point_json(rep.breaking_point);
  ordered_json doc =
      result_document(args.semantics, bp, eval_witness(rep, loaded.model), diagnostics);
  write_output(args.out, doc.dump(2) + "\n");
}

void run_synthesize(const Args& args) {
  LoadedModel loaded = load_model(args.model);
  Objective phi = resolve_objective(args.objective, loaded);

  SynthesisOptions options;
  options.k_max = args.k;
  options.budget = args.budget;
  options.precision = args.precision;
  options.emit_qp = !args.emit_qp.empty();

  SynthesisReport rep;
  if (args.semantics == "expected") {
    rep = synthesize_expected(loaded.model, phi, options);
  } else {
    rep = synthesize_worst_transient(loaded.model, phi, options);
    if (rep.breaking_point.transient.is_omega()) {
      // No finite budget protects the best controller, so the answer is a
      // frequency; keep the transient run's certificates.
      try {
        SynthesisReport freq = synthesize_worst_frequency(loaded.model, phi, options);
        freq.qp_texts = std::move(rep.qp_texts);
        freq.level_values = std::move(rep.level_values);
        rep = std::move(freq);
      } catch (const PreconditionViolated&) {
      }
    }
  }

  std::vector<std::string> diagnostics;
  diagnostics.push_back("objective " + objective_text(phi));
  diagnostics.push_back(std::string("method ") + method_name(rep.method));
  if (rep.enumerated > 0) {
    diagnostics.push_back("enumerated " + std::to_string(rep.enumerated) + " controllers");
  }
  if (!rep.diagnostic.empty()) diagnostics.push_back(rep.diagnostic);
  if (!args.emit_qp.empty()) {
    std::string bundle;
    for (const std::string& text : rep.qp_texts) {
      bundle += text;
      if (bundle.empty() || bundle.back() != '\n') bundle += '\n';
      bundle += '\n';
    }
    write_output(args.emit_qp, bundle);
    diagnostics.push_back("wrote " + std::to_string(rep.qp_texts.size()) + " certificate programs");
  }

  ordered_json witness = rep.strategy ? strategy_document(*rep.strategy, loaded.model)
                                      : ordered_json();
  ordered_json doc = result_document(args.semantics, breaking_point_json(rep.breaking_point),
                                     witness, diagnostics);
  write_output(args.out, doc.dump(2) + "\n");
}

void run_transform(const Args& args) {
  LoadedModel loaded = load_model(args.model);

  std::string text;
  if (args.transform == "unfold") {
    text = serialize_model(unfold(loaded.model, args.k < 0 ? 1 : args.k).model);
  } else if (args.transform == "gadget") {
    text = serialize_model(expected_gadget_game(loaded.model).model);
  } else if (args.transform == "stopping") {
    std::string trap = args.label.empty() ? "B" : args.label;
    text = serialize_model(make_stopping(loaded.model, parse_rational(args.epsilon), trap));
  } else if (args.transform == "binarize") {
    std::string goal = args.label.empty() ? "G" : args.label;
    text = serialize_model(binarize_actions(loaded.model, goal));
  } else {
    // Component quotient of the induced view, weighted by the minimal
    // stationary disturbance frequency of each non-goal component.
    if (args.strategy.empty()) {
      throw ParseError("transform quotient requires --strategy");
    }
    Objective phi = resolve_objective(args.objective, loaded);
    Strategy pi = resolve_strategy(args.strategy, loaded);
    Model view = induced_mdp(loaded.model, pi).model;
    normalize_sinks(view, {phi.label});
    std::vector<char> allowed(view.state_count(), 1);
    for (int s : view.labeled(phi.label)) allowed[s] = 0;
    std::vector<EndComponent> pool = maximal_end_components(view, allowed, {});
    CostFunction costs = disturbance_costs(view);
    std::vector<Rational> f;
    f.reserve(pool.size());
    for (const EndComponent& component : pool) {
      f.push_back(min_mean_payoff_mec(view, component, costs).value);
    }
    text = serialize_model(weighted_mec_quotient(view, pool, f).model);
  }
  write_output(args.out, text);
}

void run_oracle(const Args& args) {
  LoadedModel loaded = load_model(args.model);
  Objective phi = resolve_objective(args.objective, loaded);

  if (!args.strategy.empty()) {
    Strategy pi = resolve_strategy(args.strategy, loaded);
    ordered_json doc;
    doc["semantics"] = args.semantics;
    if (args.semantics == "expected") {
      doc["oracle"] = "expected-cost";
      OracleExpectation expectation = oracle_expected_cost(loaded.model, phi, pi);
      doc["breakable"] = expectation.breakable;
      if (expectation.breakable) doc["value"] = rational_json(expectation.value);
      doc["policies"] = expectation.policies;
    } else {
      int depth = args.k < 0 ? 8 : args.k;
      doc["oracle"] = "transient-level";
      doc["depth"] = depth;
      std::optional<int> level = oracle_transient_level(loaded.model, phi, pi, depth);
      doc["level"] = level ? ordered_json(*level) : ordered_json();
    }
    doc["objective"] = objective_text(phi);
    write_output(args.out, doc.dump(2) + "\n");
    return;
  }

  SynthesisOptions options;
  options.k_max = args.k;
  options.budget = args.budget;
  Semantics semantics = args.semantics == "expected" ? Semantics::Expected : Semantics::WorstCase;
  SynthesisReport rep = oracle_enumerate(loaded.model, phi, semantics, options);

  std::vector<std::string> diagnostics;
  diagnostics.push_back("objective " + objective_text(phi));
  diagnostics.push_back(std::string("method ") + method_name(rep.method));
  diagnostics.push_back("enumerated " + std::to_string(rep.enumerated) + " controllers");
  if (!rep.diagnostic.empty()) diagnostics.push_back(rep.diagnostic);
  ordered_json witness = rep.strategy ? strategy_document(*rep.strategy, loaded.model)
                                      : ordered_json();
  ordered_json doc = result_document(args.semantics, breaking_point_json(rep.breaking_point),
                                     witness, diagnostics);
  write_output(args.out, doc.dump(2) + "\n");
}

void run_fixtures(const Args& args) {
  if (args.name.empty()) {
    ordered_json list = ordered_json::array();
    for (const auto& [name, fixture] : fixtures()) {
      ordered_json row;
      row["name"] = name;
      row["states"] = fixture.model.state_count();
      row["objective"] = objective_text(fixture.objective);
      ordered_json keys = ordered_json::array();
      for (const auto& [key, strategy] : fixture.strategies) keys.push_back(key);
      row["strategies"] = keys;
      list.push_back(row);
    }
    write_output(args.out, list.dump(2) + "\n");
    return;
  }

  auto it = fixtures().find(args.name);
  if (it == fixtures().end()) throw ParseError("unknown fixture " + args.name);
  const Fixture& fixture = it->second;
  ordered_json doc;
  doc["name"] = args.name;
  doc["objective"] = objective_text(fixture.objective);
  doc["model"] = ordered_json::parse(serialize_model(fixture.model));
  ordered_json strategies = ordered_json::object();
  for (const auto& [key, strategy] : fixture.strategies) {
    strategies[key] = strategy_document(strategy, fixture.model);
  }
  doc["strategies"] = strategies;
  if (!fixture.reference_values.empty()) {
    ordered_json references = ordered_json::object();
    for (const auto& [key, value] : fixture.reference_values) {
      references[key] = rational_json(value);
    }
    doc["reference"] = references;
  }
  write_output(args.out, doc.dump(2) + "\n");
}

long budget_from_env() {
  const char* env = std::getenv("RESIL_BUDGET");
  if (env == nullptr || *env == '\0') return 1000000;
  char* end = nullptr;
  long value = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || value <= 0) {
    throw ParseError("RESIL_BUDGET must be a positive integer");
  }
  return value;
}

int fail(const std::string& kind, const std::exception& error, int code) {
  ordered_json doc;
  doc["error"] = kind;
  doc["message"] = error.what();
  std::cerr << doc.dump() << "\n";
  return code;
}

std::string error_kind(const Error& error) {
  if (dynamic_cast<const ParseError*>(&error)) return "parse";
  if (dynamic_cast<const ValidationError*>(&error)) return "validation";
  if (dynamic_cast<const StrategyIncompatible*>(&error)) return "strategy";
  if (dynamic_cast<const Infeasible*>(&error)) return "infeasible";
  if (dynamic_cast<const PreconditionViolated*>(&error)) return "precondition";
  if (dynamic_cast<const AssumptionViolated*>(&error)) return "assumption";
  if (dynamic_cast<const OverlappingComponents*>(&error)) return "components";
  return "error";
}

}  // namespace

int main(int argc, char** argv) {
  Args args;
  try {
    args.budget = budget_from_env();
  } catch (const Error& error) {
    return fail("parse", error, 1);
  }

  CLI::App app{"Breaking-point analysis for stochastic games with disturbances"};
  app.require_subcommand(1);

  auto semantics_flag = [&](CLI::App* sub) {
    sub->add_option("--semantics", args.semantics, "expected or worst")
        ->check(CLI::IsMember({"expected", "worst"}));
  };
  auto objective_flag = [&](CLI::App* sub) {
    sub->add_option("--objective", args.objective,
                    "kind:label:cmp+threshold, e.g. reach:G:>2/5 (default: fixture objective)");
  };
  auto common_flags = [&](CLI::App* sub) {
    sub->add_option("--model", args.model, "fixture name or model document path")->required();
    sub->add_option("--budget", args.budget, "enumeration and iteration cap");
    sub->add_option("--out", args.out, "output path, - for stdout");
  };

  CLI::App* evaluate = app.add_subcommand("evaluate", "Breaking point of a fixed controller");
  common_flags(evaluate);
  evaluate->add_option("--strategy", args.strategy, "fixture strategy key or document path")
      ->required();
  objective_flag(evaluate);
  semantics_flag(evaluate);
  evaluate->add_option("--mode", args.mode, "rational or float")
      ->check(CLI::IsMember({"rational", "float"}));
  evaluate->add_option("--precision", args.precision, "float-mode precision");

  CLI::App* synthesize = app.add_subcommand("synthesize", "Most resilient controller");
  common_flags(synthesize);
  objective_flag(synthesize);
  semantics_flag(synthesize);
  synthesize->add_option("--k", args.k, "worst-case level search ceiling");
  synthesize->add_option("--emit-qp", args.emit_qp, "write per-level certificate programs here");
  synthesize->add_option("--precision", args.precision, "diagnostic precision");

  CLI::App* transform = app.add_subcommand("transform", "Emit a derived model document");
  common_flags(transform);
  transform
      ->add_option("--transform", args.transform,
                   "unfold, gadget, quotient, stopping, or binarize")
      ->required()
      ->check(CLI::IsMember({"unfold", "gadget", "quotient", "stopping", "binarize"}));
  transform->add_option("--k", args.k, "unfold budget");
  transform->add_option("--epsilon", args.epsilon, "stopping restart mass");
  transform->add_option("--label", args.label, "trap or goal label override");
  transform->add_option("--strategy", args.strategy, "controller for the quotient view");
  objective_flag(transform);

  CLI::App* oracle = app.add_subcommand(
      "oracle", "Ground-truth answers by explicit enumeration");
  common_flags(oracle);
  oracle->add_option("--strategy", args.strategy,
                     "check this controller instead of enumerating all of them");
  objective_flag(oracle);
  semantics_flag(oracle);
  oracle->add_option("--k", args.k, "budget depth (with --strategy) or counter bound");

  CLI::App* fixtures_cmd = app.add_subcommand("fixtures", "List or dump bundled examples");
  fixtures_cmd->add_option("--name", args.name, "dump this fixture as a document bundle");
  fixtures_cmd->add_option("--out", args.out, "output path, - for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& parse_error) {
    int code = app.exit(parse_error);
    return code == 0 ? 0 : 1;
  }

  try {
    if (evaluate->parsed()) run_evaluate(args);
    if (synthesize->parsed()) run_synthesize(args);
    if (transform->parsed()) run_transform(args);
    if (oracle->parsed()) run_oracle(args);
    if (fixtures_cmd->parsed()) run_fixtures(args);
  } catch (const BudgetExceeded& error) {
    return fail("budget-exceeded", error, 2);
  } catch (const NotConverged& error) {
    return fail("not-converged", error, 3);
  } catch (const Error& error) {
    return fail(error_kind(error), error, 1);
  } catch (const std::exception& error) {
    return fail("internal", error, 1);
  }
  return 0;
}
