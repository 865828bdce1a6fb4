#pragma once

#include "recourse/cfe.hpp"
#include "recourse/error.hpp"
#include "recourse/justification.hpp"
#include "recourse/schema.hpp"

#include <json.hpp>

namespace recourse {

using Json = nlohmann::ordered_json;

/// Thrown for request bodies that are not shaped as expected.
class MalformedRequest : public Error {
 public:
  explicit MalformedRequest(const std::string& message) : Error(ErrorCode::usage, message) {}
};

Json to_json(const FeatureSchema& schema);
FeatureSchema schema_from_json(const Json& j);

Json to_json(const Value& value, int scale);
Json to_json(const Instance& instance, const FeatureSchema& schema);
/// Categorical values are normalized; numeric values may be JSON numbers or
/// decimal strings.
Instance instance_from_json(const Json& j, const FeatureSchema& schema);

/// {"feature": "immutable" | "must_increase" | ...}
ControlSpec controls_from_json(const Json& j);
Json to_json(const ControlSpec& spec);

Decision decision_from_json(const Json& j);
std::vector<CausalPredicate> causal_from_json(const Json& j);

Json to_json(const Justification& tree);
Json to_json(const Classification& c);
Json to_json(const CfeResult& result, const FeatureSchema& schema);
Json to_json(const InterpolantResult& result, const FeatureSchema& schema);

Json error_json(ErrorCode code, const std::string& message);

}  // namespace recourse
