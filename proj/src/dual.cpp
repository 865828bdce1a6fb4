#include "recourse/dual.hpp"

#include "recourse/error.hpp"

#include <deque>
#include <map>
#include <set>

namespace recourse {

Literal negate_literal(const Literal& literal) {
  switch (literal.kind) {
    case Literal::Kind::positive: return Literal::naf(literal.atom);
    case Literal::Kind::naf: return Literal::positive(literal.atom);
    case Literal::Kind::comparison:
      return Literal::compare(literal.cmp.lhs, complement(literal.cmp.op), literal.cmp.rhs);
  }
  return literal;
}

std::string clause_helper(const std::string& pred, std::size_t index) {
  return "o_" + pred + "_" + std::to_string(index);
}

namespace {

std::vector<Term> head_vars(std::size_t arity) {
  std::vector<Term> vars;
  for (std::size_t i = 0; i < arity; ++i) vars.push_back(Term::variable("Var" + std::to_string(i)));
  return vars;
}

// Rewrites the clause so that its head is p(Var0..Var(n-1)): first
// occurrences of head variables are renamed, constants and repeated variables
// become leading equalities.
std::vector<Literal> normalized_body(const Rule& clause) {
  const std::size_t n = clause.head.arity();
  std::map<std::string, Term> rename;
  std::vector<Literal> prefix;
  for (std::size_t i = 0; i < n; ++i) {
    const Term& t = clause.head.args[i];
    Term v = Term::variable("Var" + std::to_string(i));
    if (t.is_var() && !rename.contains(t.var_key())) {
      rename.emplace(t.var_key(), v);
    } else if (t.is_var()) {
      prefix.push_back(Literal::compare(v, CmpOp::eq, rename.at(t.var_key())));
    } else {
      prefix.push_back(Literal::compare(v, CmpOp::eq, t));
    }
  }

  auto subst = [&](const Term& t) {
    if (!t.is_var()) return t;
    auto it = rename.find(t.var_key());
    if (it == rename.end()) {
      throw Error(ErrorCode::unsupported_clause,
                  "variable " + t.text + " of clause `" + print_rule(clause) +
                      "` does not occur in the head; its dual would need universal quantification");
    }
    return it->second;
  };

  std::vector<Literal> body = std::move(prefix);
  for (const auto& lit : clause.body) {
    Literal out = lit;
    if (lit.is_atom()) {
      for (auto& a : out.atom.args) a = subst(a);
    } else {
      out.cmp.lhs = subst(lit.cmp.lhs);
      out.cmp.rhs = subst(lit.cmp.rhs);
    }
    body.push_back(std::move(out));
  }
  return body;
}

}  // namespace

std::vector<Rule> dualize_predicate(const Program& program, const PredKey& pred) {
  const auto& [name, arity] = pred;
  const auto& idx = program.clauses(pred);
  std::vector<Rule> out;

  Rule umbrella;
  umbrella.head_kind = HeadKind::negated;
  umbrella.head = Atom{name, head_vars(arity)};
  for (std::size_t i = 0; i < idx.size(); ++i) {
    umbrella.body.push_back(Literal::naf(Atom{clause_helper(name, i + 1), head_vars(arity)}));
  }
  out.push_back(std::move(umbrella));

  for (std::size_t i = 0; i < idx.size(); ++i) {
    const Rule& clause = program.rules()[idx[i]];
    std::vector<Literal> body = normalized_body(clause);
    for (std::size_t j = 0; j < body.size(); ++j) {
      Rule dual;
      dual.head_kind = HeadKind::negated;
      dual.head = Atom{clause_helper(name, i + 1), head_vars(arity)};
      dual.body.assign(body.begin(), body.begin() + static_cast<std::ptrdiff_t>(j));
      dual.body.push_back(negate_literal(body[j]));
      out.push_back(std::move(dual));
    }
  }
  return out;
}

DualProgram dualize_program(const Program& program, std::span<const Literal> goals) {
  std::deque<PredKey> work;
  std::set<PredKey> queued;
  auto want = [&](const Atom& a) {
    PredKey k{a.pred, a.arity()};
    if (program.abducible(k)) return;
    if (queued.insert(k).second) work.push_back(k);
  };

  for (const auto& r : program.rules()) {
    for (const auto& lit : r.body) {
      if (lit.kind == Literal::Kind::naf) want(lit.atom);
    }
  }
  for (const auto& lit : goals) {
    if (lit.kind == Literal::Kind::naf) want(lit.atom);
  }

  DualProgram dp;
  dp.source = program;
  while (!work.empty()) {
    PredKey k = work.front();
    work.pop_front();
    auto rules = dualize_predicate(program, k);
    for (std::size_t i = 0; i < rules.size(); ++i) {
      // rules[0] is the umbrella; its `not o_` helpers are defined alongside
      if (i > 0) {
        for (const auto& lit : rules[i].body) {
          if (lit.kind == Literal::Kind::naf) want(lit.atom);
        }
      }
      dp.duals.add(std::move(rules[i]));
    }
  }
  return dp;
}

}  // namespace recourse
