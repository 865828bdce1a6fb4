#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace recourse {

enum class Outcome : std::uint8_t {
  query,                 // synthetic root
  proved,                // clause or fact
  proved_via_dual,       // `not p` proved through a dual clause
  abduced,               // even-loop choice
  constraint_satisfied,  // comparison posted to the store
};

/// Proof tree recorded for one solution. Leaves are facts, comparisons, or
/// abduced choices.
struct Justification {
  std::string goal;
  Outcome outcome = Outcome::proved;
  std::string feature;  // abduced only
  std::string value;    // abduced only
  std::vector<Justification> children;

  std::string outcome_text() const;
  std::size_t size() const;
  /// Pre-order search for a node whose goal text equals `goal`.
  const Justification* find(const std::string& goal) const;
};

/// Indented text: two spaces per level, `<goal> ← <outcome>` per line.
std::string render_text(const Justification& tree);

}  // namespace recourse
