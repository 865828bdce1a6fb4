#include "recourse/schema.hpp"

#include "recourse/error.hpp"

#include <algorithm>
#include <set>

namespace recourse {

std::optional<std::size_t> FeatureDef::value_index(std::string_view symbol) const {
  auto it = std::find(values.begin(), values.end(), symbol);
  if (it == values.end()) return std::nullopt;
  return static_cast<std::size_t>(it - values.begin());
}

bool FeatureDef::contains(const Value& v) const {
  if (is_categorical()) return v.is_symbol() && value_index(v.as_symbol()).has_value();
  return v.is_number() && v.as_number() >= min && v.as_number() <= max;
}

FeatureDef FeatureDef::categorical(std::string name, std::vector<std::string> values) {
  FeatureDef f;
  f.name = std::move(name);
  f.kind = FeatureKind::categorical;
  f.values = std::move(values);
  return f;
}

FeatureDef FeatureDef::numeric(std::string name, Scaled min, Scaled max, int scale) {
  FeatureDef f;
  f.name = std::move(name);
  f.kind = FeatureKind::numeric;
  f.min = min;
  f.max = max;
  f.scale = scale;
  return f;
}

FeatureSchema::FeatureSchema(std::vector<FeatureDef> features) : features_(std::move(features)) {
  for (std::size_t i = 0; i < features_.size(); ++i) {
    const auto& f = features_[i];
    if (f.name.empty()) throw Error(ErrorCode::schema, "feature name must be non-empty");
    if (!index_.emplace(f.name, i).second) {
      throw Error(ErrorCode::schema, "duplicate feature '" + f.name + "'");
    }
    if (f.is_categorical()) {
      if (f.values.empty()) {
        throw Error(ErrorCode::schema, "categorical feature '" + f.name + "' has an empty domain");
      }
      std::set<std::string> seen;
      for (const auto& v : f.values) {
        if (!seen.insert(v).second) {
          throw Error(ErrorCode::schema,
                      "feature '" + f.name + "' lists value '" + v + "' more than once");
        }
      }
    } else {
      if (f.min > f.max) {
        throw Error(ErrorCode::schema, "numeric feature '" + f.name + "' has min > max");
      }
      if (f.scale < 0) throw Error(ErrorCode::schema, "negative scale on '" + f.name + "'");
    }
  }
}

const FeatureDef* FeatureSchema::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? nullptr : &features_[it->second];
}

const FeatureDef& FeatureSchema::at(std::string_view name) const {
  return features_[index_of(name)];
}

std::size_t FeatureSchema::index_of(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) {
    throw Error(ErrorCode::unknown_feature, "unknown feature '" + std::string(name) + "'");
  }
  return it->second;
}

int FeatureSchema::numeric_scale() const {
  std::optional<int> scale;
  for (const auto& f : features_) {
    if (!f.is_numeric()) continue;
    if (scale && *scale != f.scale) {
      throw Error(ErrorCode::schema, "numeric features must share one scale");
    }
    scale = f.scale;
  }
  return scale.value_or(0);
}

Instance validate_instance(const FeatureSchema& schema, const Instance& inst) {
  for (const auto& [name, value] : inst) {
    const FeatureDef& f = schema.at(name);
    if (f.is_categorical()) {
      if (!value.is_symbol() || !f.value_index(value.as_symbol())) {
        throw Error(ErrorCode::out_of_domain,
                    "value " + value.str() + " is not in the domain of '" + name + "'");
      }
    } else {
      if (!value.is_number()) {
        throw Error(ErrorCode::out_of_domain, "feature '" + name + "' expects a number");
      }
      if (value.as_number() < f.min || value.as_number() > f.max) {
        throw Error(ErrorCode::out_of_domain,
                    "value " + format_scaled(value.as_number(), f.scale) + " of '" + name +
                        "' is outside [" + format_scaled(f.min, f.scale) + ", " +
                        format_scaled(f.max, f.scale) + "]");
      }
    }
  }
  return inst;
}

bool is_total(const FeatureSchema& schema, const Instance& inst) {
  return std::all_of(schema.features().begin(), schema.features().end(),
                     [&](const FeatureDef& f) { return inst.contains(f.name); });
}

FeatureSchema derive_schema(const CsvTable& table, const std::map<std::string, FeatureKind>& kinds,
                            const std::map<std::string, int>& precision,
                            const std::vector<std::string>& order) {
  if (table.rows.empty()) throw Error(ErrorCode::schema, "dataset has no records");

  std::vector<std::string> names = order;
  if (names.empty()) {
    for (const auto& h : table.header) {
      if (kinds.contains(h)) names.push_back(h);
    }
  }
  for (const auto& [name, kind] : kinds) {
    if (!table.column(name)) {
      throw Error(ErrorCode::unknown_feature, "declared column '" + name + "' is not in the header");
    }
    if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);
  }

  std::vector<FeatureDef> features;
  for (const auto& name : names) {
    auto kind_it = kinds.find(name);
    if (kind_it == kinds.end()) {
      throw Error(ErrorCode::unknown_feature, "column '" + name + "' has no declared kind");
    }
    std::size_t col = *table.column(name);
    if (kind_it->second == FeatureKind::categorical) {
      std::vector<std::string> values;
      std::set<std::string> seen;
      for (const auto& row : table.rows) {
        std::string v = normalize_symbol(col < row.size() ? row[col] : "");
        if (seen.insert(v).second) values.push_back(v);
      }
      features.push_back(FeatureDef::categorical(name, std::move(values)));
    } else {
      int scale = 0;
      if (auto p = precision.find(name); p != precision.end()) scale = p->second;
      Scaled lo = kScaledLimit, hi = -kScaledLimit;
      for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        std::string cell = col < row.size() ? row[col] : "";
        while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
        while (!cell.empty() && cell.back() == ' ') cell.pop_back();
        auto v = parse_scaled(cell, scale);
        if (!v) {
          throw Error(ErrorCode::schema, "non-numeric token '" + cell + "' in column '" + name +
                                             "' (record " + std::to_string(r + 1) + ")");
        }
        lo = std::min(lo, *v);
        hi = std::max(hi, *v);
      }
      features.push_back(FeatureDef::numeric(name, lo, hi, scale));
    }
  }
  return FeatureSchema(std::move(features));
}

Program schema_to_facts(const FeatureSchema& schema) {
  Program out;
  for (const auto& f : schema.features()) {
    if (f.is_categorical()) {
      for (const auto& v : f.values) {
        Rule r;
        r.head = Atom{"f_domain", {Term::symbol(f.name), Term::symbol(v)}};
        out.add(std::move(r));
      }
    } else {
      Rule r;
      r.head = Atom{f.name, {Term::variable("X")}};
      r.body.push_back(Literal::compare(Term::variable("X"), CmpOp::ge, Term::num(f.min)));
      r.body.push_back(Literal::compare(Term::variable("X"), CmpOp::le, Term::num(f.max)));
      out.add(std::move(r));
    }
  }
  return out;
}

}  // namespace recourse
