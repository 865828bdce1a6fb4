#include "recourse/error.hpp"
#include "recourse/rulelang.hpp"
#include "recourse/schema.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace recourse {

namespace {

const std::vector<std::size_t> kNoClauses;

PredKey key_of(const Atom& a) { return {a.pred, a.arity()}; }

std::string clause_ref(const Rule& r) {
  std::string where = r.line > 0 ? "clause at line " + std::to_string(r.line) : "clause";
  return where + " `" + print_rule(r) + "`";
}

Phase phase_from_name(std::string_view pred) {
  if (pred.starts_with("before_int_")) return Phase::pre;
  if (pred.starts_with("after_int_")) return Phase::post;
  return Phase::none;
}

bool single_var_head(const Rule& r) {
  return r.head_kind == HeadKind::atom && r.head.arity() == 1 && r.head.args[0].is_var() &&
         r.head.args[0].anon < 0;
}

// np(X) :- f_domain(F, Y), p(Y), Y \= X.   (literals in any order)
std::optional<std::string> loop_feature(const Rule& np_rule, const std::string& p) {
  if (!single_var_head(np_rule) || np_rule.body.size() != 3) return std::nullopt;
  const Term& x = np_rule.head.args[0];
  std::optional<std::string> feature;
  std::optional<Term> y_domain, y_call;
  bool diseq = false;
  std::optional<std::pair<Term, Term>> ne_pair;
  for (const auto& lit : np_rule.body) {
    if (lit.kind == Literal::Kind::positive && lit.atom.pred == "f_domain" && lit.atom.arity() == 2 &&
        lit.atom.args[0].kind == Term::Kind::symbol && lit.atom.args[1].is_var()) {
      feature = lit.atom.args[0].text;
      y_domain = lit.atom.args[1];
    } else if (lit.kind == Literal::Kind::positive && lit.atom.pred == p && lit.atom.arity() == 1 &&
               lit.atom.args[0].is_var()) {
      y_call = lit.atom.args[0];
    } else if (lit.kind == Literal::Kind::comparison && lit.cmp.op == CmpOp::ne &&
               lit.cmp.lhs.is_var() && lit.cmp.rhs.is_var()) {
      diseq = true;
      ne_pair = {lit.cmp.lhs, lit.cmp.rhs};
    } else {
      return std::nullopt;
    }
  }
  if (!feature || !y_domain || !y_call || !diseq) return std::nullopt;
  if (*y_domain != *y_call || *y_domain == x) return std::nullopt;
  const auto& [a, b] = *ne_pair;
  if (!((a == *y_domain && b == x) || (a == x && b == *y_domain))) return std::nullopt;
  return feature;
}

}  // namespace

Program::Program(std::vector<Rule> rules) {
  for (auto& r : rules) add(std::move(r));
  abducibles_ = find_abducibles(rules_);
}

void Program::add(Rule rule) {
  std::size_t idx = rules_.size();
  if (rule.head_kind == HeadKind::atom) positive_[key_of(rule.head)].push_back(idx);
  if (rule.head_kind == HeadKind::negated) negated_[key_of(rule.head)].push_back(idx);
  rules_.push_back(std::move(rule));
}

void Program::append(const Program& other) {
  for (const auto& r : other.rules()) add(r);
  abducibles_ = find_abducibles(rules_);
}

const std::vector<std::size_t>& Program::clauses(const PredKey& key) const {
  auto it = positive_.find(key);
  return it == positive_.end() ? kNoClauses : it->second;
}

const std::vector<std::size_t>& Program::negated_clauses(const PredKey& key) const {
  auto it = negated_.find(key);
  return it == negated_.end() ? kNoClauses : it->second;
}

std::vector<const Rule*> Program::constraints() const {
  std::vector<const Rule*> out;
  for (const auto& r : rules_) {
    if (r.is_constraint()) out.push_back(&r);
  }
  return out;
}

const Abducible* Program::abducible(const PredKey& key) const {
  if (key.second != 1) return nullptr;
  for (const auto& a : abducibles_) {
    if (a.pred == key.first || a.complement == key.first) return &a;
  }
  return nullptr;
}

std::vector<Value> Program::domain_facts(std::string_view feature) const {
  std::vector<Value> out;
  for (std::size_t idx : clauses({"f_domain", 2})) {
    const Rule& r = rules_[idx];
    if (!r.is_fact()) continue;
    const auto& args = r.head.args;
    if (args[0].kind == Term::Kind::symbol && args[0].text == feature && args[1].is_const()) {
      Value v = args[1].value();
      if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    }
  }
  return out;
}

std::set<PredKey> Program::predicates() const {
  std::set<PredKey> out;
  for (const auto& r : rules_) {
    if (r.head_kind != HeadKind::none) out.insert(key_of(r.head));
  }
  return out;
}

std::vector<Abducible> find_abducibles(const std::vector<Rule>& rules) {
  std::map<PredKey, std::vector<const Rule*>> by_pred;
  for (const auto& r : rules) {
    if (r.head_kind == HeadKind::atom) by_pred[key_of(r.head)].push_back(&r);
  }

  std::vector<Abducible> out;
  for (const auto& [key, defs] : by_pred) {
    if (key.second != 1) continue;

    // p(X) :- not np(X).   np(X) :- f_domain(F, Y), p(Y), Y \= X.
    if (defs.size() == 1 && single_var_head(*defs[0]) && defs[0]->body.size() == 1) {
      const Literal& lit = defs[0]->body[0];
      if (lit.kind == Literal::Kind::naf && lit.atom.arity() == 1 &&
          lit.atom.args[0] == defs[0]->head.args[0] && lit.atom.pred != key.first) {
        auto np = by_pred.find({lit.atom.pred, 1});
        if (np != by_pred.end() && np->second.size() == 1) {
          if (auto feature = loop_feature(*np->second[0], key.first)) {
            Abducible a;
            a.pred = key.first;
            a.complement = lit.atom.pred;
            a.feature = *feature;
            a.phase = phase_from_name(key.first);
            out.push_back(std::move(a));
            continue;
          }
        }
      }
    }

    // p(a) :- not p(b).   p(b) :- not p(a).
    if (defs.size() == 2) {
      const Rule& r1 = *defs[0];
      const Rule& r2 = *defs[1];
      auto shape = [&](const Rule& r) {
        return r.head.args[0].is_const() && r.body.size() == 1 &&
               r.body[0].kind == Literal::Kind::naf && r.body[0].atom.pred == key.first &&
               r.body[0].atom.arity() == 1 && r.body[0].atom.args[0].is_const();
      };
      if (shape(r1) && shape(r2)) {
        const Term& a = r1.head.args[0];
        const Term& b = r2.head.args[0];
        if (a != b && r1.body[0].atom.args[0] == b && r2.body[0].atom.args[0] == a) {
          Abducible ab;
          ab.pred = key.first;
          ab.complement = key.first;
          ab.values = {a.value(), b.value()};
          ab.phase = phase_from_name(key.first);
          out.push_back(std::move(ab));
        }
      }
    }
  }
  // declaration order follows first clause occurrence
  auto first_line = [&](const Abducible& a) {
    for (std::size_t i = 0; i < rules.size(); ++i) {
      if (rules[i].head_kind == HeadKind::atom && rules[i].head.pred == a.pred) return i;
    }
    return rules.size();
  };
  std::stable_sort(out.begin(), out.end(), [&](const Abducible& x, const Abducible& y) {
    return first_line(x) < first_line(y);
  });
  return out;
}

namespace {

bool in_abducible_loop(const Program& p, const Rule& r) {
  return r.head_kind == HeadKind::atom && p.abducible(key_of(r.head)) != nullptr;
}

std::map<PredKey, std::set<PredKey>> dependency_graph(const Program& program) {
  std::map<PredKey, std::set<PredKey>> deps;
  for (const auto& r : program.rules()) {
    if (r.head_kind == HeadKind::none || in_abducible_loop(program, r)) continue;
    auto& out = deps[key_of(r.head)];
    for (const auto& lit : r.body) {
      if (lit.is_atom()) out.insert(key_of(lit.atom));
    }
  }
  return deps;
}

void check_range_restricted(const Rule& r) {
  std::set<std::string> safe;
  if (r.head_kind != HeadKind::none) {
    for (const auto& t : r.head.args) {
      if (t.is_var()) safe.insert(t.var_key());
    }
  }
  for (const auto& lit : r.body) {
    if (lit.kind != Literal::Kind::positive) continue;
    for (const auto& t : lit.atom.args) {
      if (t.is_var()) safe.insert(t.var_key());
    }
  }
  auto check = [&](const Term& t) {
    if (t.is_var() && !safe.contains(t.var_key())) {
      throw Error(ErrorCode::inadmissible,
                  "variable " + t.text + " in " + clause_ref(r) +
                      " occurs neither in the head nor in a positive body atom");
    }
  };
  for (const auto& lit : r.body) {
    if (lit.kind == Literal::Kind::comparison) {
      check(lit.cmp.lhs);
      check(lit.cmp.rhs);
    } else if (lit.kind == Literal::Kind::naf) {
      for (const auto& t : lit.atom.args) check(t);
    }
  }
}

}  // namespace

void check_admissible(const Program& program) {
  for (const auto& r : program.rules()) check_range_restricted(r);

  auto deps = dependency_graph(program);
  enum class Mark { none, active, done };
  std::map<PredKey, Mark> mark;
  std::vector<PredKey> stack;

  std::function<void(const PredKey&)> visit = [&](const PredKey& k) {
    mark[k] = Mark::active;
    stack.push_back(k);
    if (auto it = deps.find(k); it != deps.end()) {
      for (const auto& d : it->second) {
        if (program.abducible(d)) continue;
        if (mark[d] == Mark::active) {
          std::string cycle;
          auto from = std::find(stack.begin(), stack.end(), d);
          for (auto s = from; s != stack.end(); ++s) cycle += to_string(*s) + " -> ";
          cycle += to_string(d);
          const Rule* offending = nullptr;
          for (const auto& r : program.rules()) {
            if (r.head_kind != HeadKind::none && key_of(r.head) == k) {
              for (const auto& lit : r.body) {
                if (lit.is_atom() && key_of(lit.atom) == d) offending = &r;
              }
            }
          }
          throw Error(ErrorCode::inadmissible,
                      "recursion is only supported as an even loop over a domain: " + cycle +
                          (offending ? " (" + clause_ref(*offending) + ")" : ""));
        }
        if (mark[d] == Mark::none) visit(d);
      }
    }
    stack.pop_back();
    mark[k] = Mark::done;
  };
  for (const auto& [k, _] : deps) {
    if (mark[k] == Mark::none) visit(k);
  }
}

AnalysisReport check_program(const Program& program, const FeatureSchema& schema) {
  check_admissible(program);

  AnalysisReport report;
  report.dependencies = dependency_graph(program);
  report.abducibles = program.abducibles();

  for (const auto& a : report.abducibles) {
    if (!a.feature) continue;
    const FeatureDef* f = schema.find(*a.feature);
    if (!f || !f->is_categorical()) {
      throw Error(ErrorCode::undeclared_feature,
                  "abducible " + a.pred + " ranges over undeclared categorical feature '" +
                      *a.feature + "'");
    }
  }

  auto check_domain_atom = [&](const Atom& atom, const Rule& r) {
    if (atom.pred != "f_domain" || atom.arity() != 2) return;
    const Term& f = atom.args[0];
    if (f.kind != Term::Kind::symbol) return;
    const FeatureDef* def = schema.find(f.text);
    if (!def || !def->is_categorical()) {
      throw Error(ErrorCode::undeclared_feature,
                  "f_domain refers to undeclared feature '" + f.text + "' in " + clause_ref(r));
    }
  };
  for (const auto& r : program.rules()) {
    if (r.head_kind == HeadKind::atom) check_domain_atom(r.head, r);
    for (const auto& lit : r.body) {
      if (lit.is_atom()) check_domain_atom(lit.atom, r);
    }
  }

  // direct feature references, then transitive closure over the call graph
  std::map<PredKey, std::set<std::string>> direct;
  for (const auto& r : program.rules()) {
    if (r.head_kind == HeadKind::none) continue;
    auto& feats = direct[key_of(r.head)];
    for (const auto& lit : r.body) {
      if (!lit.is_atom()) continue;
      const Atom& a = lit.atom;
      if (a.pred == "f_domain" && a.arity() == 2 && a.args[0].kind == Term::Kind::symbol) {
        feats.insert(a.args[0].text);
      } else if (const FeatureDef* f = schema.find(a.pred); f && f->is_numeric() && a.arity() == 1) {
        feats.insert(f->name);
      } else if (const Abducible* ab = program.abducible(key_of(a)); ab && ab->feature) {
        feats.insert(*ab->feature);
      }
    }
  }
  std::function<std::set<std::string>(const PredKey&, std::set<PredKey>&)> collect =
      [&](const PredKey& k, std::set<PredKey>& seen) {
        std::set<std::string> out = direct[k];
        if (!seen.insert(k).second) return out;
        if (auto it = report.dependencies.find(k); it != report.dependencies.end()) {
          for (const auto& d : it->second) {
            auto sub = collect(d, seen);
            out.insert(sub.begin(), sub.end());
          }
        }
        return out;
      };
  for (const auto& [k, _] : report.dependencies) {
    std::set<PredKey> seen;
    auto feats = collect(k, seen);
    if (!feats.empty()) report.constrained_features[k] = std::move(feats);
  }

  // strata: level = 1 + max level of callees
  std::map<PredKey, int> level;
  std::function<int(const PredKey&)> depth = [&](const PredKey& k) -> int {
    if (auto it = level.find(k); it != level.end()) return it->second;
    int lv = 0;
    if (auto it = report.dependencies.find(k); it != report.dependencies.end()) {
      for (const auto& d : it->second) {
        if (program.abducible(d)) continue;
        lv = std::max(lv, depth(d) + 1);
      }
    }
    level[k] = lv;
    return lv;
  };
  for (const auto& [k, _] : report.dependencies) depth(k);
  for (const auto& [k, lv] : level) {
    if (static_cast<std::size_t>(lv) >= report.strata.size()) report.strata.resize(lv + 1);
    report.strata[lv].push_back(k);
  }

  for (const auto& [k, callees] : report.dependencies) {
    for (const auto& d : callees) {
      if (!program.defines(d) && !program.defines_negation(d) && !program.abducible(d)) {
        report.undefined.insert(d);
      }
    }
  }
  for (const auto& r : program.rules()) {
    if (!r.is_constraint()) continue;
    for (const auto& lit : r.body) {
      if (!lit.is_atom()) continue;
      auto d = key_of(lit.atom);
      if (!program.defines(d) && !program.defines_negation(d) && !program.abducible(d)) {
        report.undefined.insert(d);
      }
    }
  }
  return report;
}

std::string AnalysisReport::str() const {
  std::ostringstream os;
  os << "strata:\n";
  for (std::size_t i = 0; i < strata.size(); ++i) {
    os << "  " << i << ":";
    for (const auto& k : strata[i]) os << ' ' << to_string(k);
    os << '\n';
  }
  os << "abducibles:\n";
  for (const auto& a : abducibles) {
    os << "  " << a.pred << "/1";
    if (a.feature) {
      os << " over feature " << *a.feature;
    } else {
      os << " over {";
      for (std::size_t i = 0; i < a.values.size(); ++i) os << (i ? ", " : "") << a.values[i].str();
      os << '}';
    }
    os << " (phase " << to_string(a.phase) << ")\n";
  }
  os << "constrained features:\n";
  for (const auto& [k, feats] : constrained_features) {
    os << "  " << to_string(k) << ":";
    for (const auto& f : feats) os << ' ' << f;
    os << '\n';
  }
  if (!undefined.empty()) {
    os << "undefined predicates:\n";
    for (const auto& k : undefined) os << "  " << to_string(k) << '\n';
  }
  return os.str();
}

}  // namespace recourse
