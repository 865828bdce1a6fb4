#include "recourse/json_io.hpp"

namespace recourse {

namespace {

const Json& member(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw MalformedRequest(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

Scaled scaled_from_json(const Json& j, int scale, const std::string& what) {
  std::string text;
  if (j.is_number_integer()) {
    text = std::to_string(j.get<std::int64_t>());
  } else if (j.is_number()) {
    text = j.dump();
  } else if (j.is_string()) {
    text = j.get<std::string>();
  } else {
    throw MalformedRequest(what + " must be a number");
  }
  auto v = parse_scaled(text, scale);
  if (!v) {
    throw Error(ErrorCode::out_of_domain,
                what + ": '" + text + "' is not a number at precision " + std::to_string(scale));
  }
  return *v;
}

Json range_json(const NumericRange& r, int scale) {
  Json out;
  out["min"] = to_json(Value::number(r.lo), scale);
  out["max"] = to_json(Value::number(r.hi), scale);
  if (!r.excluded.empty()) {
    Json ex = Json::array();
    for (Scaled x : r.excluded) ex.push_back(to_json(Value::number(x), scale));
    out["excluded"] = ex;
  }
  return out;
}

}  // namespace

Json to_json(const FeatureSchema& schema) {
  Json features = Json::array();
  for (const auto& f : schema.features()) {
    Json jf;
    jf["name"] = f.name;
    if (f.is_categorical()) {
      jf["kind"] = "categorical";
      jf["values"] = f.values;
    } else {
      jf["kind"] = "numeric";
      jf["min"] = to_json(Value::number(f.min), f.scale);
      jf["max"] = to_json(Value::number(f.max), f.scale);
      jf["scale"] = f.scale;
    }
    features.push_back(std::move(jf));
  }
  Json out;
  out["features"] = std::move(features);
  return out;
}

FeatureSchema schema_from_json(const Json& j) {
  try {
    std::vector<FeatureDef> defs;
    for (const auto& jf : j.at("features")) {
      std::string name = jf.at("name").get<std::string>();
      std::string kind = jf.at("kind").get<std::string>();
      if (kind == "categorical") {
        std::vector<std::string> values;
        for (const auto& v : jf.at("values")) values.push_back(normalize_symbol(v.get<std::string>()));
        defs.push_back(FeatureDef::categorical(name, std::move(values)));
      } else if (kind == "numeric") {
        int scale = jf.value("scale", 0);
        defs.push_back(FeatureDef::numeric(name, scaled_from_json(jf.at("min"), scale, name + ".min"),
                                           scaled_from_json(jf.at("max"), scale, name + ".max"),
                                           scale));
      } else {
        throw Error(ErrorCode::schema, "feature '" + name + "' has unknown kind '" + kind + "'");
      }
    }
    return FeatureSchema(std::move(defs));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::schema, std::string("malformed schema: ") + e.what());
  } catch (const MalformedRequest& e) {
    throw Error(ErrorCode::schema, e.what());
  }
}

Json to_json(const Value& value, int scale) {
  if (value.is_symbol()) return value.as_symbol();
  if (scale == 0) return value.as_number();
  return Json::parse(format_scaled(value.as_number(), scale));
}

Json to_json(const Instance& instance, const FeatureSchema& schema) {
  Json out = Json::object();
  for (const auto& f : schema.features()) {
    auto it = instance.find(f.name);
    if (it != instance.end()) out[f.name] = to_json(it->second, f.scale);
  }
  return out;
}

Instance instance_from_json(const Json& j, const FeatureSchema& schema) {
  if (!j.is_object()) throw MalformedRequest("instance must be an object");
  Instance out;
  for (const auto& [name, v] : j.items()) {
    const FeatureDef& f = schema.at(name);
    if (v.is_null()) continue;
    if (f.is_categorical()) {
      if (!v.is_string()) throw MalformedRequest("value of '" + name + "' must be a string");
      out[name] = Value::symbol(normalize_symbol(v.get<std::string>()));
    } else {
      out[name] = Value::number(scaled_from_json(v, f.scale, name));
    }
  }
  return validate_instance(schema, out);
}

ControlSpec controls_from_json(const Json& j) {
  ControlSpec out;
  if (j.is_null()) return out;
  if (!j.is_object()) throw MalformedRequest("controls must be an object");
  for (const auto& [name, v] : j.items()) {
    if (!v.is_string()) throw MalformedRequest("control of '" + name + "' must be a string");
    try {
      out[name] = parse_control(v.get<std::string>());
    } catch (const Error& e) {
      throw MalformedRequest(e.what());
    }
  }
  return out;
}

Json to_json(const ControlSpec& spec) {
  Json out = Json::object();
  for (const auto& [name, c] : spec) out[name] = to_string(c);
  return out;
}

Decision decision_from_json(const Json& j) {
  try {
    Decision d;
    d.predicate = j.at("predicate").get<std::string>();
    d.features = j.at("features").get<std::vector<std::string>>();
    d.undesired = j.value("undesired", d.undesired);
    d.desired = j.value("desired", d.desired);
    return d;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::schema, std::string("malformed decision: ") + e.what());
  }
}

std::vector<CausalPredicate> causal_from_json(const Json& j) {
  std::vector<CausalPredicate> out;
  if (j.is_null()) return out;
  try {
    for (const auto& jc : j) {
      out.push_back({jc.at("predicate").get<std::string>(),
                     jc.at("features").get<std::vector<std::string>>()});
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::schema, std::string("malformed causal map: ") + e.what());
  }
  return out;
}

Json to_json(const Justification& tree) {
  Json out;
  out["goal"] = tree.goal;
  out["outcome"] = tree.outcome_text();
  Json children = Json::array();
  for (const auto& c : tree.children) children.push_back(to_json(c));
  out["children"] = std::move(children);
  return out;
}

Json to_json(const Classification& c) {
  Json out;
  out["label"] = c.label;
  out["undesired"] = c.undesired;
  out["justification"] = to_json(c.justification);
  return out;
}

Json to_json(const CfeResult& r, const FeatureSchema& schema) {
  Json out;
  out["factual"] = to_json(r.factual, schema);
  Json cf;
  cf["values"] = to_json(r.counterfactual, schema);
  Json intervals = Json::object();
  for (const auto& f : schema.features()) {
    auto it = r.intervals.find(f.name);
    if (it != r.intervals.end()) intervals[f.name] = range_json(it->second, f.scale);
  }
  cf["intervals"] = std::move(intervals);
  out["counterfactual"] = std::move(cf);
  Json controls = Json::object();
  for (std::size_t i = 0; i < schema.size() && i < r.controls.size(); ++i) {
    controls[schema.features()[i].name] = r.controls[i];
  }
  out["controls"] = std::move(controls);
  out["cost"] = r.cost;
  out["justifications"] = {{"factual", to_json(r.factual_justification)},
                           {"counterfactual", to_json(r.counterfactual_justification)}};
  return out;
}

Json to_json(const InterpolantResult& r, const FeatureSchema& schema) {
  Json out;
  if (r.no_recourse) {
    out["no_recourse"] = true;
    out["empty_levels"] = r.empty_levels;
    return out;
  }
  out["cost"] = r.cost;
  out["empty_levels"] = r.empty_levels;
  Json results = Json::array();
  for (const auto& x : r.results) results.push_back(to_json(x, schema));
  out["results"] = std::move(results);
  return out;
}

Json error_json(ErrorCode code, const std::string& message) {
  Json out;
  out["error"] = {{"code", to_string(code)}, {"message", message}};
  return out;
}

}  // namespace recourse
