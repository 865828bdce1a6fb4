#include "recourse/justification.hpp"

#include <sstream>

namespace recourse {

std::string Justification::outcome_text() const {
  switch (outcome) {
    case Outcome::query: return "query";
    case Outcome::proved: return "proved";
    case Outcome::proved_via_dual: return "proved-via-dual";
    case Outcome::abduced: return "abduced(" + feature + ", " + value + ")";
    case Outcome::constraint_satisfied: return "constraint-satisfied";
  }
  return "?";
}

std::size_t Justification::size() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.size();
  return n;
}

const Justification* Justification::find(const std::string& g) const {
  if (goal == g) return this;
  for (const auto& c : children) {
    if (const auto* hit = c.find(g)) return hit;
  }
  return nullptr;
}

namespace {

void render(std::ostringstream& os, const Justification& node, int depth) {
  os << std::string(static_cast<std::size_t>(depth) * 2, ' ') << node.goal << " ← "
     << node.outcome_text() << '\n';
  for (const auto& c : node.children) render(os, c, depth + 1);
}

}  // namespace

std::string render_text(const Justification& tree) {
  std::ostringstream os;
  render(os, tree, 0);
  return os.str();
}

}  // namespace recourse
