#pragma once

#include "recourse/rulelang.hpp"

#include <span>
#include <vector>

namespace recourse {

/// Source program plus generated `not p` clauses. The engine resolves
/// positive goals against `source` and negated goals against `duals`.
struct DualProgram {
  Program source;
  Program duals;
};

/// ≤↔>, <↔≥, =↔≠ on comparisons; p ↔ not p on atoms. An involution.
Literal negate_literal(const Literal& literal);

/// Name of the helper predicate for the i-th (1-based) clause of `pred`.
std::string clause_helper(const std::string& pred, std::size_t index);

/// Umbrella `not p(Var0..) :- not o_p_1(Var0..), ..., not o_p_k(Var0..).`
/// followed by, per clause i with normalized body L1..Lm, the m clauses
/// `not o_p_i(Var0..) :- L1, ..., L(j-1), negate(Lj).`
/// Throws Error(unsupported_clause) for a body-only variable.
std::vector<Rule> dualize_predicate(const Program& program, const PredKey& pred);

/// Duals for every predicate negated in a body of `program` or in `goals`,
/// closed under the positive atoms those duals negate in turn. Abducible
/// loop predicates are handled natively by the engine and are skipped.
DualProgram dualize_program(const Program& program, std::span<const Literal> goals = {});

}  // namespace recourse
