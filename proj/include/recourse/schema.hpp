#pragma once

#include "recourse/rulelang.hpp"
#include "recourse/value.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace recourse {

enum class FeatureKind : std::uint8_t { categorical, numeric };

struct FeatureDef {
  std::string name;
  FeatureKind kind = FeatureKind::categorical;
  std::vector<std::string> values;  // categorical domain, declaration order
  Scaled min = 0;                   // numeric bounds, scaled
  Scaled max = 0;
  int scale = 0;

  bool is_categorical() const { return kind == FeatureKind::categorical; }
  bool is_numeric() const { return kind == FeatureKind::numeric; }
  std::optional<std::size_t> value_index(std::string_view symbol) const;
  bool contains(const Value& v) const;

  static FeatureDef categorical(std::string name, std::vector<std::string> values);
  static FeatureDef numeric(std::string name, Scaled min, Scaled max, int scale = 0);
};

/// Ordered feature universe. The order is the canonical control-vector order.
class FeatureSchema {
 public:
  FeatureSchema() = default;
  explicit FeatureSchema(std::vector<FeatureDef> features);

  std::span<const FeatureDef> features() const { return features_; }
  std::size_t size() const { return features_.size(); }
  bool empty() const { return features_.empty(); }

  const FeatureDef* find(std::string_view name) const;
  const FeatureDef& at(std::string_view name) const;  // throws unknown_feature
  std::size_t index_of(std::string_view name) const;  // throws unknown_feature

  /// Shared numeric scale; 0 when there are no numeric features. Throws when
  /// numeric features disagree.
  int numeric_scale() const;

 private:
  std::vector<FeatureDef> features_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Partial assignment feature-name → value.
using Instance = std::map<std::string, Value>;

/// Returns `inst` when every assignment is in-domain; partial instances pass.
Instance validate_instance(const FeatureSchema& schema, const Instance& inst);
bool is_total(const FeatureSchema& schema, const Instance& inst);

/// RFC-4180 table: header plus rows, all fields as text.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> column(std::string_view name) const;
};

CsvTable parse_csv(std::string_view text);

/// Numeric columns get [min, max] over the data; categorical columns the
/// distinct values in first-occurrence order. Column order follows `kinds`
/// declaration order as given by `order` (or header order when empty).
FeatureSchema derive_schema(const CsvTable& table, const std::map<std::string, FeatureKind>& kinds,
                            const std::map<std::string, int>& precision = {},
                            const std::vector<std::string>& order = {});

/// `f_domain(name, value).` per categorical value and
/// `name(X) :- X #>= min, X #=< max.` per numeric feature, in schema order.
Program schema_to_facts(const FeatureSchema& schema);

}  // namespace recourse
