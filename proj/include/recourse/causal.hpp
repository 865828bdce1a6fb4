#pragma once

#include "recourse/rulelang.hpp"
#include "recourse/schema.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace recourse {

struct CausalPredicate {
  std::string predicate;
  std::vector<std::string> features;  // argument position → feature
};

/// Causal constraint rules plus the argument map of each constraint predicate.
struct CausalRuleSet {
  Program rules;
  std::vector<CausalPredicate> predicates;

  bool empty() const { return predicates.empty(); }
};

struct TotalityReport {
  struct Gap {
    std::string predicate;
    std::vector<Value> tuple;
    std::size_t count = 0;  // uncovered tuples in the scan
  };
  struct DeadValue {
    std::string predicate;
    std::string feature;
    Value value;
  };
  std::vector<Gap> gaps;            // first uncovered tuple per predicate
  std::vector<DeadValue> dead;      // values no world can take
  std::size_t tuples_scanned = 0;

  bool total() const { return gaps.empty(); }
  bool sound() const { return dead.empty(); }
  std::string str() const;
};

/// Values scanned for a feature: the categorical domain, or min, max and every
/// numeric rule constant ±1 inside the range.
std::vector<Value> discretize(const FeatureDef& feature, const Program& rules);

/// Whether some clause of `predicate` holds for the ground tuple.
bool covers(const CausalRuleSet& causal, const FeatureSchema& schema, const std::string& predicate,
            const std::vector<Value>& tuple);

/// Scans the cross product of each predicate's mapped domains for uncovered
/// tuples, and checks that every single feature value admits some completion.
/// Throws Error(unknown_feature) for an unmapped argument.
TotalityReport check_totality(const CausalRuleSet& causal, const FeatureSchema& schema);

/// Appends one constraint atom per predicate per world. Each world maps
/// feature names to the terms that carry them in the query.
std::vector<Literal> apply_causal(std::vector<Literal> goal, const CausalRuleSet& causal,
                                  std::span<const std::map<std::string, Term>> worlds);

}  // namespace recourse
