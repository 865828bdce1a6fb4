#pragma once

#include "recourse/value.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace recourse {

class FeatureSchema;

/// Variable, symbol constant, or scaled numeric constant.
struct Term {
  enum class Kind : std::uint8_t { variable, symbol, number };

  Kind kind = Kind::symbol;
  std::string text;  // variable name or symbol
  Scaled number = 0;
  int anon = -1;  // per-clause index of an anonymous `_`, -1 otherwise

  static Term variable(std::string name) { return {Kind::variable, std::move(name), 0, -1}; }
  static Term anonymous(int index) { return {Kind::variable, "_", 0, index}; }
  static Term symbol(std::string s) { return {Kind::symbol, std::move(s), 0, -1}; }
  static Term num(Scaled n) { return {Kind::number, {}, n, -1}; }
  static Term constant(const Value& v) {
    return v.is_number() ? num(v.as_number()) : symbol(v.as_symbol());
  }

  bool is_var() const { return kind == Kind::variable; }
  bool is_const() const { return kind != Kind::variable; }
  Value value() const { return kind == Kind::number ? Value::number(number) : Value::symbol(text); }

  /// Unique key for a variable within its clause (anonymous ones included).
  std::string var_key() const { return anon >= 0 ? "_#" + std::to_string(anon) : text; }

  friend bool operator==(const Term&, const Term&) = default;
};

enum class CmpOp : std::uint8_t { eq, ne, lt, le, gt, ge };

/// Complement: ≤↔>, <↔≥, =↔≠.
CmpOp complement(CmpOp op);
/// Operand swap: a < b  ⇔  b > a.
CmpOp mirror(CmpOp op);
bool is_ordering(CmpOp op);
/// Canonical source spelling (`=`, `\=`, `#<`, `#=<`, `#>`, `#>=`).
const char* spelling(CmpOp op);

struct Atom {
  std::string pred;
  std::vector<Term> args;

  std::size_t arity() const { return args.size(); }
  friend bool operator==(const Atom&, const Atom&) = default;
};

struct Comparison {
  Term lhs;
  CmpOp op = CmpOp::eq;
  Term rhs;

  friend bool operator==(const Comparison&, const Comparison&) = default;
};

/// Body literal: positive atom, negation-as-failure atom, or comparison.
struct Literal {
  enum class Kind : std::uint8_t { positive, naf, comparison };

  Kind kind = Kind::positive;
  Atom atom;
  Comparison cmp;

  static Literal positive(Atom a) { return {Kind::positive, std::move(a), {}}; }
  static Literal naf(Atom a) { return {Kind::naf, std::move(a), {}}; }
  static Literal compare(Term l, CmpOp op, Term r) {
    return {Kind::comparison, {}, Comparison{std::move(l), op, std::move(r)}};
  }

  bool is_atom() const { return kind != Kind::comparison; }

  friend bool operator==(const Literal&, const Literal&) = default;
};

enum class HeadKind : std::uint8_t {
  atom,     // p(...) :- body.
  negated,  // not p(...) :- body.   (generated duals)
  none,     // :- body.              (integrity constraint)
};

struct Rule {
  HeadKind head_kind = HeadKind::atom;
  Atom head;
  std::vector<Literal> body;
  int line = 0;  // source line, 0 when synthesized; not part of equality

  bool is_fact() const { return head_kind != HeadKind::none && body.empty(); }
  bool is_constraint() const { return head_kind == HeadKind::none; }

  friend bool operator==(const Rule& a, const Rule& b) {
    return a.head_kind == b.head_kind && a.head == b.head && a.body == b.body;
  }
};

enum class Phase : std::uint8_t { pre, post, none };
const char* to_string(Phase phase);

/// An even loop over negation normalized into a choice point: exactly one
/// value of the domain holds per derivation.
struct Abducible {
  std::string pred;                   // p in `p(X) :- not np(X).`
  std::string complement;             // np; equal to `pred` for self-loops
  std::optional<std::string> feature; // domain taken from f_domain(feature, _)
  std::vector<Value> values;          // explicit domain for self-loops
  Phase phase = Phase::none;

  friend bool operator==(const Abducible&, const Abducible&) = default;
};

using PredKey = std::pair<std::string, std::size_t>;
std::string to_string(const PredKey& key);

/// Ordered rule set with a clause index. Clause order is textual order.
class Program {
 public:
  Program() = default;
  explicit Program(std::vector<Rule> rules);

  const std::vector<Rule>& rules() const { return rules_; }
  const std::vector<Abducible>& abducibles() const { return abducibles_; }

  void add(Rule rule);
  void append(const Program& other);
  void set_abducibles(std::vector<Abducible> a) { abducibles_ = std::move(a); }

  /// Positive clauses for pred/arity in textual order.
  const std::vector<std::size_t>& clauses(const PredKey& key) const;
  /// `not pred/arity` clauses (dual heads).
  const std::vector<std::size_t>& negated_clauses(const PredKey& key) const;
  std::vector<const Rule*> constraints() const;

  bool defines(const PredKey& key) const { return positive_.contains(key); }
  bool defines_negation(const PredKey& key) const { return negated_.contains(key); }

  /// The abducible whose predicate or complement predicate is `key`.
  const Abducible* abducible(const PredKey& key) const;

  /// Values of `f_domain(feature, V)` facts in program order.
  std::vector<Value> domain_facts(std::string_view feature) const;

  std::set<PredKey> predicates() const;

  friend bool operator==(const Program& a, const Program& b) { return a.rules_ == b.rules_; }

 private:
  std::vector<Rule> rules_;
  std::vector<Abducible> abducibles_;
  std::map<PredKey, std::vector<std::size_t>> positive_;
  std::map<PredKey, std::vector<std::size_t>> negated_;
};

struct ParseOptions {
  int scale = 0;          // decimal digits kept by numeric literals
  bool check_admissible = true;
};

/// Parses a rule file. Recognizes even-loop pairs as abducibles and, unless
/// disabled, rejects recursion and non-range-restricted clauses.
Program parse_program(std::string_view text, const ParseOptions& options = {});

/// Parses `?- l1, ..., ln.` (the `?-` and final period are optional).
std::vector<Literal> parse_query(std::string_view text, const ParseOptions& options = {});

/// Canonical text: one rule per line, single space after commas.
std::string print_program(const Program& program, int scale = 0);
std::string print_rule(const Rule& rule, int scale = 0);
std::string print_literal(const Literal& literal, int scale = 0);
std::string print_atom(const Atom& atom, int scale = 0);
std::string print_term(const Term& term, int scale = 0);

/// Detects even-loop pairs; called by parse_program.
std::vector<Abducible> find_abducibles(const std::vector<Rule>& rules);

/// Throws Error(inadmissible) on recursion outside abducible loops or on a
/// body variable that occurs neither in the head nor in a positive atom.
void check_admissible(const Program& program);

struct AnalysisReport {
  std::map<PredKey, std::set<PredKey>> dependencies;
  std::vector<std::vector<PredKey>> strata;  // bottom-up layers
  std::vector<Abducible> abducibles;
  std::map<PredKey, std::set<std::string>> constrained_features;
  std::set<PredKey> undefined;  // called but neither defined nor abducible

  std::string str() const;
};

/// Dependency analysis against a schema; fails on inadmissible programs and
/// on feature names the schema does not declare.
AnalysisReport check_program(const Program& program, const FeatureSchema& schema);

}  // namespace recourse
