#pragma once

#include "recourse/rulelang.hpp"
#include "recourse/value.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace recourse {

using VarId = std::uint32_t;

enum class VarKind : std::uint8_t { unknown, categorical, numeric };

/// A store variable or a constant.
struct Operand {
  std::variant<VarId, Value> v;

  static Operand var(VarId id) { return {id}; }
  static Operand constant(Value value) { return {std::move(value)}; }
  bool is_var() const { return std::holds_alternative<VarId>(v); }
};

/// Closed interval of scaled integers minus excluded points.
struct NumericRange {
  Scaled lo = -kScaledLimit;
  Scaled hi = kScaledLimit;
  std::vector<Scaled> excluded;  // sorted, all within [lo, hi]

  bool contains(Scaled x) const;
  friend bool operator==(const NumericRange&, const NumericRange&) = default;
};

/// Per-variable feasible sets accumulated during evaluation: numeric
/// intervals with excluded points, categorical bindings or exclusion sets over
/// an optional domain, equalities as union-find classes, and suspended binary
/// relations (≠ and orderings) between unbound variables.
///
/// Feasible iff every numeric interval minus exclusions is non-empty and every
/// categorical domain minus exclusions is non-empty. Posting a constraint
/// never enlarges a feasible set.
class ConstraintStore {
 public:
  VarId new_var();
  VarId new_numeric(Scaled lo, Scaled hi);
  VarId new_categorical(std::vector<std::string> domain);

  /// Pure refinement: the refined copy, or nullopt when infeasible.
  /// Throws Error(kind_mismatch) for an ordering over symbols and
  /// Error(store_overflow) for constants beyond ±1e15.
  std::optional<ConstraintStore> add(const Operand& lhs, CmpOp op, const Operand& rhs) const;

  /// In-place refinement; returns false (and leaves the store unusable) when
  /// the result is infeasible.
  bool post(const Operand& lhs, CmpOp op, const Operand& rhs);

  bool feasible() const { return ok_; }
  std::size_t size() const { return vars_.size(); }

  VarId find(VarId id) const;
  VarKind kind(VarId id) const { return vars_[find(id)].kind; }
  std::optional<Value> value(VarId id) const;
  bool is_bound(VarId id) const { return value(id).has_value(); }

  NumericRange numeric_range(VarId id) const;
  /// Remaining categorical candidates in domain order; nullopt without a domain.
  std::optional<std::vector<std::string>> candidates(VarId id) const;
  std::vector<std::string> excluded_symbols(VarId id) const;

  /// Suspended relations `a op b` whose endpoints are both unbound.
  struct Relation {
    VarId a;
    CmpOp op;
    VarId b;
  };
  std::vector<Relation> relations() const;

  /// Deterministic witness: numeric → smallest feasible value, categorical →
  /// first feasible symbol in domain order. Throws Error(infeasible) when the
  /// store is infeasible or the variable has no finite domain.
  Value witness(VarId id) const;

  /// Joint witnesses for `ids`, chosen left to right with propagation and
  /// bounded backtracking; nullopt when no joint assignment is found.
  std::optional<std::vector<Value>> witness_all(std::span<const VarId> ids) const;

  /// Number of feasible values (saturating; UINT64_MAX when unbounded).
  std::uint64_t feasible_size(VarId id) const;

  /// Residual text such as `5014..99999`, `\= divorced`, or a bound value.
  std::string describe(VarId id, int scale = 0) const;

 private:
  struct Var {
    VarId parent = 0;
    VarKind kind = VarKind::unknown;
    std::optional<Value> value;
    Scaled lo = -kScaledLimit;
    Scaled hi = kScaledLimit;
    std::vector<Scaled> excluded_nums;
    std::shared_ptr<const std::vector<std::string>> domain;
    std::vector<std::string> excluded_syms;
  };

  VarId root(VarId id);
  bool bind(VarId r, const Value& v);
  bool exclude(VarId r, const Value& v);
  bool tighten(VarId r, Scaled lo, Scaled hi, bool& changed);
  bool make_numeric(VarId r);
  bool normalize(VarId r);
  bool unify(VarId a, VarId b);
  bool propagate();
  bool fail() {
    ok_ = false;
    return false;
  }

  std::vector<Var> vars_;
  std::vector<Relation> relations_;
  bool ok_ = true;
};

}  // namespace recourse
