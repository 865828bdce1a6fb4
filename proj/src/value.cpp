#include "recourse/value.hpp"

#include "recourse/error.hpp"

#include <cctype>
#include <cstdlib>

namespace recourse {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse: return "parse_error";
    case ErrorCode::inadmissible: return "inadmissible_program";
    case ErrorCode::schema: return "schema_error";
    case ErrorCode::out_of_domain: return "out_of_domain";
    case ErrorCode::unknown_feature: return "unknown_feature";
    case ErrorCode::undeclared_feature: return "undeclared_feature";
    case ErrorCode::unsupported_clause: return "unsupported_clause";
    case ErrorCode::kind_mismatch: return "kind_mismatch";
    case ErrorCode::undefined_predicate: return "undefined_predicate";
    case ErrorCode::store_overflow: return "store_overflow";
    case ErrorCode::infeasible: return "infeasible";
    case ErrorCode::partial_instance: return "partial_instance";
    case ErrorCode::already_desired: return "already_desired";
    case ErrorCode::control_conflict: return "control_conflict";
    case ErrorCode::no_mutable_feature: return "no_mutable_feature";
    case ErrorCode::arity_mismatch: return "arity_mismatch";
    case ErrorCode::io: return "io_error";
    case ErrorCode::usage: return "usage_error";
    case ErrorCode::internal: return "internal_error";
  }
  return "unknown";
}

std::strong_ordering operator<=>(const Value& a, const Value& b) {
  if (a.is_number() != b.is_number()) {
    return a.is_number() ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  if (a.is_number()) return a.as_number() <=> b.as_number();
  return a.as_symbol().compare(b.as_symbol()) <=> 0;
}

std::string Value::str() const {
  if (is_number()) return std::to_string(as_number());
  const auto& s = as_symbol();
  if (is_bare_symbol(s)) return s;
  return "'" + s + "'";
}

std::string normalize_symbol(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (c == '-' || c == ' ') {
      out.push_back('_');
    } else {
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  return out;
}

bool is_bare_symbol(std::string_view s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s.front()))) return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  // `not` is a keyword in the rule language
  return s != "not";
}

std::optional<Scaled> parse_scaled(std::string_view text, int scale) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  std::size_t i = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    ++i;
  }
  if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i]))) return std::nullopt;

  __int128 acc = 0;
  for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
    acc = acc * 10 + (text[i] - '0');
    if (acc > kScaledLimit) return std::nullopt;
  }
  int frac_digits = 0;
  if (i < text.size() && text[i] == '.') {
    ++i;
    for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
      int d = text[i] - '0';
      if (frac_digits < scale) {
        acc = acc * 10 + d;
        ++frac_digits;
      } else if (d != 0) {
        return std::nullopt;
      }
    }
  }
  if (i != text.size()) return std::nullopt;
  for (; frac_digits < scale; ++frac_digits) acc *= 10;
  if (acc > kScaledLimit) return std::nullopt;
  Scaled v = static_cast<Scaled>(acc);
  return negative ? -v : v;
}

std::string format_scaled(Scaled value, int scale) {
  if (scale <= 0) return std::to_string(value);
  bool negative = value < 0;
  std::string digits = std::to_string(negative ? -value : value);
  if (static_cast<int>(digits.size()) <= scale) {
    digits.insert(0, static_cast<std::size_t>(scale) + 1 - digits.size(), '0');
  }
  digits.insert(digits.size() - static_cast<std::size_t>(scale), ".");
  return negative ? "-" + digits : digits;
}

}  // namespace recourse
