#pragma once

#include "recourse/cfe.hpp"
#include "recourse/rulelang.hpp"
#include "recourse/schema.hpp"

#include <map>
#include <random>
#include <string>
#include <vector>

namespace toy {

using recourse::Program;
using recourse::Value;

/// Ground evaluator for non-recursive programs, independent of the engine.
/// Variables left unbound by a clause head range over `universe`.
class GroundOracle {
 public:
  GroundOracle(const Program& program, std::vector<Value> universe);

  bool holds(const std::string& pred, const std::vector<Value>& args);

 private:
  using Env = std::map<std::string, Value>;

  bool body_holds(const std::vector<recourse::Literal>& body, std::size_t i, Env& env);
  bool atom_holds(const recourse::Atom& atom, Env& env, std::size_t k,
                  std::vector<Value>& args);

  const Program& program_;
  std::vector<Value> universe_;
  std::map<std::pair<std::string, std::vector<Value>>, bool> memo_;
};

/// A generated program over a small typed universe.
struct Generated {
  recourse::FeatureSchema schema;
  Program program;
  std::string text;
  struct Pred {
    std::string name;
    std::vector<std::size_t> types;  // feature index per argument
  };
  std::vector<Pred> preds;  // bottom-up

  /// Constants a feature takes in a ground scan: the categorical domain, or
  /// min, max and every comparison constant ±1 within range.
  std::vector<Value> scan_values(std::size_t feature) const;
  std::vector<Value> universe() const;
};

struct GenOptions {
  std::size_t max_features = 3;
  std::size_t max_domain = 4;
  int max_range = 20;
  std::size_t max_preds = 4;
  std::size_t max_clauses = 3;
  std::size_t max_body = 3;
  bool var_var = true;
};

/// Random admissible, stratified program: every body variable occurs in the
/// clause head, and bodies only call earlier predicates.
Generated generate(std::mt19937& rng, const GenOptions& options = {});

/// Random program exercising the whole surface syntax for round-trip tests.
Program generate_syntax(std::mt19937& rng, int scale);

/// Cross product of per-position value lists.
std::vector<std::vector<Value>> tuples(const std::vector<std::vector<Value>>& columns);

/// Small schema plus decision and optional causal rules for minimality checks.
struct ToyModel {
  std::string schema_json;
  std::string rules;
  recourse::FeatureSchema schema;
  Program program;  // decision and causal rules, no schema facts
  std::string decision;
  std::vector<std::string> causal;  // causal predicates over all features
};

ToyModel generate_model(std::mt19937& rng);

/// All worlds of a toy schema (numeric features enumerated point by point).
std::vector<recourse::Instance> worlds(const recourse::FeatureSchema& schema);

/// Minimum number of changed features over causally valid desired worlds
/// respecting `spec`; -1 when none exists.
struct BruteForce {
  int min_cost = -1;
  std::vector<std::vector<int>> minimal_controls;  // distinct, sorted
};

BruteForce brute_force_cfe(const ToyModel& model, const recourse::Instance& factual,
                           const recourse::ControlSpec& spec);

bool oracle_undesired(const ToyModel& model, const recourse::Instance& world);
bool oracle_causal(const ToyModel& model, const recourse::Instance& world);
std::vector<int> oracle_controls(const recourse::FeatureSchema& schema,
                                 const recourse::Instance& pre, const recourse::Instance& post);

}  // namespace toy
