#pragma once

#include "recourse/dual.hpp"
#include "recourse/justification.hpp"
#include "recourse/store.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace recourse {

struct SolveOptions {
  /// nullopt = unlimited (brute-force test mode).
  std::optional<std::size_t> max_solutions = 64;
  bool deduplicate = true;
  int scale = 0;  // for rendering numeric values in justifications
};

/// One answer: residual constraints over the query variables, the abduced
/// partial model, and the proof tree.
struct Solution {
  std::vector<std::string> variables;  // query variables, first-occurrence order
  std::vector<VarId> ids;
  ConstraintStore store;
  std::vector<std::string> model;  // e.g. teaches_db(mary), not teaches_db(john)
  std::vector<std::pair<std::string, Value>> choices;  // abducible predicate → value
  Justification justification;

  std::optional<VarId> id(const std::string& var) const;
  std::optional<Value> value(const std::string& var) const;
  std::string residual(const std::string& var, int scale = 0) const;
  /// Whether the solution's constraint region contains the assignment.
  bool admits(const std::map<std::string, Value>& assignment) const;
  /// Canonical text used for deduplication.
  std::string canonical() const;
};

/// Return false to stop the enumeration.
using SolutionSink = std::function<bool(const Solution&)>;

/// Goal-directed evaluator over a program and its duals. Holds only immutable
/// compiled program data; concurrent solve() calls are safe.
class Engine {
 public:
  explicit Engine(const DualProgram& program);
  ~Engine();
  Engine(Engine&&) noexcept;
  Engine& operator=(Engine&&) noexcept;

  /// Streams solutions in deterministic order (clause order × abducible
  /// domain order) and returns how many were emitted. Throws
  /// Error(undefined_predicate) / Error(kind_mismatch) / Error(store_overflow).
  std::size_t solve(std::span<const Literal> goal, const SolveOptions& options,
                    const SolutionSink& sink) const;

  std::vector<Solution> solve_all(std::span<const Literal> goal, const SolveOptions& options = {}) const;

  bool provable(std::span<const Literal> goal) const;

  const DualProgram& program() const;

 private:
  struct Compiled;
  std::unique_ptr<Compiled> compiled_;
};

}  // namespace recourse
