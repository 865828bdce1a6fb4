#include "recourse/causal.hpp"

#include "recourse/dual.hpp"
#include "recourse/engine.hpp"
#include "recourse/error.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace recourse {

namespace {

void collect_constants(const Program& rules, std::set<Scaled>& out) {
  for (const auto& r : rules.rules()) {
    for (const auto& lit : r.body) {
      if (lit.kind != Literal::Kind::comparison) continue;
      for (const Term* t : {&lit.cmp.lhs, &lit.cmp.rhs}) {
        if (t->kind == Term::Kind::number) out.insert(t->number);
      }
    }
  }
}

std::size_t clause_arity(const Program& rules, const std::string& pred) {
  for (const auto& r : rules.rules()) {
    if (r.head_kind == HeadKind::atom && r.head.pred == pred) return r.head.arity();
  }
  throw Error(ErrorCode::undefined_predicate, "causal predicate " + pred + " has no clauses");
}

Engine make_engine(const CausalRuleSet& causal, const FeatureSchema& schema) {
  Program p = schema_to_facts(schema);
  p.append(causal.rules);
  return Engine(dualize_program(p));
}

Literal ground_atom(const std::string& pred, const std::vector<Value>& tuple) {
  Atom a{pred, {}};
  for (const auto& v : tuple) a.args.push_back(Term::constant(v));
  return Literal::positive(std::move(a));
}

void check_map(const CausalPredicate& cp, const CausalRuleSet& causal, const FeatureSchema& schema) {
  std::size_t arity = clause_arity(causal.rules, cp.predicate);
  if (arity != cp.features.size()) {
    throw Error(ErrorCode::arity_mismatch, cp.predicate + " has arity " + std::to_string(arity) +
                                               " but maps " + std::to_string(cp.features.size()) +
                                               " features");
  }
  for (const auto& f : cp.features) schema.at(f);
}

}  // namespace

std::string TotalityReport::str() const {
  std::ostringstream os;
  os << "scanned " << tuples_scanned << " tuples\n";
  if (total()) os << "total\n";
  for (const auto& g : gaps) {
    os << g.predicate << ": " << g.count << " uncovered, e.g. (";
    for (std::size_t i = 0; i < g.tuple.size(); ++i) os << (i ? ", " : "") << g.tuple[i].str();
    os << ")\n";
  }
  for (const auto& d : dead) {
    os << d.predicate << ": " << d.feature << " = " << d.value.str() << " is never satisfiable\n";
  }
  return os.str();
}

std::vector<Value> discretize(const FeatureDef& feature, const Program& rules) {
  std::vector<Value> out;
  if (feature.is_categorical()) {
    for (const auto& v : feature.values) out.push_back(Value::symbol(v));
    return out;
  }
  std::set<Scaled> points{feature.min, feature.max};
  std::set<Scaled> constants;
  collect_constants(rules, constants);
  for (Scaled c : constants) {
    for (Scaled d : {c - 1, c, c + 1}) {
      if (d >= feature.min && d <= feature.max) points.insert(d);
    }
  }
  for (Scaled p : points) out.push_back(Value::number(p));
  return out;
}

bool covers(const CausalRuleSet& causal, const FeatureSchema& schema, const std::string& predicate,
            const std::vector<Value>& tuple) {
  Engine engine = make_engine(causal, schema);
  std::vector<Literal> goal{ground_atom(predicate, tuple)};
  return engine.provable(goal);
}

TotalityReport check_totality(const CausalRuleSet& causal, const FeatureSchema& schema) {
  TotalityReport report;
  if (causal.empty()) return report;
  Engine engine = make_engine(causal, schema);

  for (const auto& cp : causal.predicates) {
    check_map(cp, causal, schema);
    std::vector<std::vector<Value>> axes;
    for (const auto& f : cp.features) axes.push_back(discretize(schema.at(f), causal.rules));

    // strict scan over the cross product
    std::vector<std::size_t> idx(axes.size(), 0);
    std::optional<TotalityReport::Gap> gap;
    bool done = std::any_of(axes.begin(), axes.end(), [](const auto& a) { return a.empty(); });
    while (!done) {
      std::vector<Value> tuple;
      for (std::size_t i = 0; i < axes.size(); ++i) tuple.push_back(axes[i][idx[i]]);
      ++report.tuples_scanned;
      std::vector<Literal> goal{ground_atom(cp.predicate, tuple)};
      if (!engine.provable(goal)) {
        if (!gap) gap = TotalityReport::Gap{cp.predicate, tuple, 0};
        ++gap->count;
      }
      std::size_t i = axes.size();
      while (i > 0) {
        --i;
        if (++idx[i] < axes[i].size()) break;
        idx[i] = 0;
        if (i == 0) done = true;
      }
      if (axes.empty()) done = true;
    }
    if (gap) report.gaps.push_back(std::move(*gap));

    // refined check: each single value must admit a completion
    for (std::size_t pos = 0; pos < cp.features.size(); ++pos) {
      for (const auto& v : axes[pos]) {
        std::vector<Literal> goal;
        Atom a{cp.predicate, {}};
        for (std::size_t j = 0; j < cp.features.size(); ++j) {
          if (j == pos) {
            a.args.push_back(Term::constant(v));
            continue;
          }
          Term var = Term::variable("V" + std::to_string(j));
          a.args.push_back(var);
          const FeatureDef& f = schema.at(cp.features[j]);
          if (f.is_categorical()) {
            goal.push_back(Literal::positive(Atom{"f_domain", {Term::symbol(f.name), var}}));
          } else {
            goal.push_back(Literal::positive(Atom{f.name, {var}}));
          }
        }
        goal.push_back(Literal::positive(std::move(a)));
        if (!engine.provable(goal)) {
          report.dead.push_back({cp.predicate, cp.features[pos], v});
        }
      }
    }
  }
  return report;
}

std::vector<Literal> apply_causal(std::vector<Literal> goal, const CausalRuleSet& causal,
                                  std::span<const std::map<std::string, Term>> worlds) {
  for (const auto& cp : causal.predicates) {
    std::size_t arity = clause_arity(causal.rules, cp.predicate);
    if (arity != cp.features.size()) {
      throw Error(ErrorCode::arity_mismatch, cp.predicate + " has arity " + std::to_string(arity) +
                                                 " but maps " +
                                                 std::to_string(cp.features.size()) + " features");
    }
  }
  for (const auto& world : worlds) {
    for (const auto& cp : causal.predicates) {
      Atom a{cp.predicate, {}};
      for (const auto& f : cp.features) {
        auto it = world.find(f);
        if (it == world.end()) {
          throw Error(ErrorCode::arity_mismatch,
                      cp.predicate + " needs feature " + f + " which the query does not carry");
        }
        a.args.push_back(it->second);
      }
      goal.push_back(Literal::positive(std::move(a)));
    }
  }
  return goal;
}

}  // namespace recourse
