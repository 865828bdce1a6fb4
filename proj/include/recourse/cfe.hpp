#pragma once

#include "recourse/causal.hpp"
#include "recourse/engine.hpp"
#include "recourse/schema.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace recourse {

/// Per-feature mutability policy. Features absent from a ControlSpec are `any`.
enum class Control : std::uint8_t { any, immutable, must_change, must_increase, must_decrease };

const char* to_string(Control control);
Control parse_control(std::string_view text);

using ControlSpec = std::map<std::string, Control>;

/// The classifier under explanation: `predicate(features...)` holds exactly
/// for worlds that receive the undesired label.
struct Decision {
  std::string predicate;
  std::vector<std::string> features;
  std::string undesired = "undesired";
  std::string desired = "desired";
};

/// Schema, decision, causal rules and the dualized program they run on.
class Model {
 public:
  /// Appends schema facts and causal rules to `rules`, then dualizes.
  /// Throws Error(arity_mismatch) when the decision predicate disagrees with
  /// its feature list.
  Model(FeatureSchema schema, Program rules, Decision decision, CausalRuleSet causal);

  const FeatureSchema& schema() const { return schema_; }
  const Decision& decision() const { return decision_; }
  const CausalRuleSet& causal() const { return causal_; }
  const Engine& engine() const { return engine_; }
  int scale() const { return scale_; }

  /// Program text the engine runs (source clauses only).
  const Program& program() const { return engine_.program().source; }

 private:
  FeatureSchema schema_;
  Decision decision_;
  CausalRuleSet causal_;
  Engine engine_;
  int scale_ = 0;
};

struct Classification {
  bool undesired = false;
  std::string label;
  Justification justification;  // for the decision atom or its negation
};

struct CfeResult {
  Instance factual;
  Instance counterfactual;
  std::map<std::string, NumericRange> intervals;          // counterfactual numeric residuals
  std::map<std::string, NumericRange> factual_intervals;  // residuals of the factual world
  std::vector<int> controls;                              // schema order
  int cost = 0;
  Justification factual_justification;
  Justification counterfactual_justification;
};

struct InterpolantResult {
  bool no_recourse = false;
  int cost = 0;                     // X*, 0 when no_recourse
  std::vector<CfeResult> results;   // all results at X*
  std::vector<int> empty_levels;    // levels tried without a result
};

int compare_categorical(const FeatureDef& feature, const Value& pre, const Value& post);
int compare_numeric(Scaled pre, Scaled post);
int intervention_cost(std::span<const int> controls);

/// Label of a total instance, proved positively or through the dual. The two
/// proofs are cross-checked. Throws Error(partial_instance).
Classification classify(const Model& model, const Instance& instance);

/// Counterfactual worlds for a (possibly partial) factual instance, ordered by
/// cost level, then controls, then counterfactual and factual witnesses.
/// `cost_bound` restricts output to that exact cost; no `limit` is unbounded.
/// Throws Error(already_desired), Error(control_conflict),
/// Error(no_mutable_feature).
std::vector<CfeResult> counterfactuals(const Model& model, const Instance& factual,
                                       const ControlSpec& spec,
                                       std::optional<int> cost_bound = std::nullopt,
                                       std::optional<std::size_t> limit = std::nullopt);

/// Lowest cost level admitting a counterfactual, with every result at it.
InterpolantResult craig_interpolant(const Model& model, const Instance& factual,
                                    const ControlSpec& spec);

/// Transitions between any undesired world and any desired one. A limit of 0
/// yields nothing; no limit enumerates everything.
std::vector<CfeResult> enumerate_transitions(const Model& model, std::optional<std::size_t> limit,
                                             const ControlSpec& spec = {});

}  // namespace recourse
