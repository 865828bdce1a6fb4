#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace recourse {

/// Numeric feature values are fixed-point integers: raw = stored / 10^scale.
using Scaled = std::int64_t;

/// Largest magnitude the constraint store accepts for a numeric constant.
inline constexpr Scaled kScaledLimit = 1'000'000'000'000'000;  // 1e15

/// A ground value: either a categorical symbol or a scaled integer.
class Value {
 public:
  Value() : v_(Scaled{0}) {}

  static Value symbol(std::string s) { return Value(std::move(s)); }
  static Value number(Scaled n) { return Value(n); }

  bool is_symbol() const { return std::holds_alternative<std::string>(v_); }
  bool is_number() const { return std::holds_alternative<Scaled>(v_); }

  const std::string& as_symbol() const { return std::get<std::string>(v_); }
  Scaled as_number() const { return std::get<Scaled>(v_); }

  /// Source-form rendering at scale 0 (symbols quoted when not bare).
  std::string str() const;

  friend bool operator==(const Value&, const Value&) = default;
  friend std::strong_ordering operator<=>(const Value& a, const Value& b);

 private:
  explicit Value(std::string s) : v_(std::move(s)) {}
  explicit Value(Scaled n) : v_(n) {}

  std::variant<std::string, Scaled> v_;
};

/// Lower-cases and maps '-' and ' ' to '_', so 'Married-civ-spouse' and
/// married_civ_spouse denote the same value.
std::string normalize_symbol(std::string_view text);

/// True when `s` can be printed without quotes (lowercase identifier).
bool is_bare_symbol(std::string_view s);

/// Parses a decimal literal ("6849", "6849.0", "-1", "12.50") into a scaled
/// integer. Returns nullopt when the literal carries more non-zero fractional
/// digits than `scale` allows or is out of range.
std::optional<Scaled> parse_scaled(std::string_view text, int scale);

/// Formats a scaled integer back to decimal ("6849" at scale 0, "12.50" at 2).
std::string format_scaled(Scaled value, int scale);

}  // namespace recourse
