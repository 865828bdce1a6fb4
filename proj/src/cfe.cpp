#include "recourse/cfe.hpp"

#include "recourse/dual.hpp"
#include "recourse/error.hpp"

#include <algorithm>
#include <set>

namespace recourse {

const char* to_string(Control control) {
  switch (control) {
    case Control::any: return "any";
    case Control::immutable: return "immutable";
    case Control::must_change: return "must_change";
    case Control::must_increase: return "must_increase";
    case Control::must_decrease: return "must_decrease";
  }
  return "any";
}

Control parse_control(std::string_view text) {
  for (Control c : {Control::any, Control::immutable, Control::must_change, Control::must_increase,
                    Control::must_decrease}) {
    if (text == to_string(c)) return c;
  }
  throw Error(ErrorCode::usage, "unknown control '" + std::string(text) + "'");
}

namespace {

Term pre_var(std::size_t i) { return Term::variable("P" + std::to_string(i)); }
Term post_var(std::size_t i) { return Term::variable("Q" + std::to_string(i)); }

Literal domain_atom(const FeatureDef& f, const Term& v) {
  if (f.is_categorical()) return Literal::positive(Atom{"f_domain", {Term::symbol(f.name), v}});
  return Literal::positive(Atom{f.name, {v}});
}

Atom decision_atom(const Model& m, const std::function<Term(std::size_t)>& var) {
  Atom a{m.decision().predicate, {}};
  for (const auto& f : m.decision().features) a.args.push_back(var(m.schema().index_of(f)));
  return a;
}

// Domain atoms, phase abducibles and causal atoms for one world.
void append_world(const Model& m, Phase phase, const std::function<Term(std::size_t)>& var,
                  std::vector<Literal>& goal) {
  const auto& features = m.schema().features();
  for (std::size_t i = 0; i < features.size(); ++i) goal.push_back(domain_atom(features[i], var(i)));
  for (std::size_t i = 0; i < features.size(); ++i) {
    for (const auto& a : m.program().abducibles()) {
      if (a.feature && *a.feature == features[i].name && a.phase == phase) {
        goal.push_back(Literal::positive(Atom{a.pred, {var(i)}}));
      }
    }
  }
  std::map<std::string, Term> world;
  for (std::size_t i = 0; i < features.size(); ++i) world.emplace(features[i].name, var(i));
  std::vector<std::map<std::string, Term>> worlds{world};
  goal = apply_causal(std::move(goal), m.causal(), worlds);
}

void append_bindings(const Model& m, const Instance& factual, std::vector<Literal>& goal) {
  for (std::size_t i = 0; i < m.schema().size(); ++i) {
    auto it = factual.find(m.schema().features()[i].name);
    if (it != factual.end()) {
      goal.push_back(Literal::compare(pre_var(i), CmpOp::eq, Term::constant(it->second)));
    }
  }
}

std::vector<Literal> factual_goal(const Model& m, const Instance& factual) {
  std::vector<Literal> goal;
  append_bindings(m, factual, goal);
  append_world(m, Phase::pre, pre_var, goal);
  goal.push_back(Literal::positive(decision_atom(m, pre_var)));
  return goal;
}

std::vector<Literal> pair_goal(const Model& m, const Instance& factual, const std::vector<int>& z) {
  std::vector<Literal> goal = factual_goal(m, factual);
  const auto& features = m.schema().features();
  for (std::size_t i = 0; i < features.size(); ++i) {
    CmpOp op = CmpOp::eq;
    if (z[i] != 0) op = features[i].is_categorical() ? CmpOp::ne : (z[i] > 0 ? CmpOp::gt : CmpOp::lt);
    goal.push_back(Literal::compare(post_var(i), op, pre_var(i)));
  }
  append_world(m, Phase::post, post_var, goal);
  goal.push_back(Literal::naf(decision_atom(m, post_var)));
  return goal;
}

Scaled rank(const FeatureDef& f, const Value& v) {
  if (f.is_numeric()) return v.as_number();
  return static_cast<Scaled>(f.value_index(v.as_symbol()).value_or(f.values.size()));
}

std::vector<Scaled> sort_key(const Model& m, const CfeResult& r) {
  std::vector<Scaled> key(r.controls.begin(), r.controls.end());
  for (const auto& f : m.schema().features()) key.push_back(rank(f, r.counterfactual.at(f.name)));
  for (const auto& f : m.schema().features()) key.push_back(rank(f, r.factual.at(f.name)));
  return key;
}

std::optional<CfeResult> realize(const Model& m, const Solution& s, const std::vector<int>& z) {
  const auto& features = m.schema().features();
  std::size_t n = features.size();
  std::vector<VarId> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back(*s.id(pre_var(i).text));
  for (std::size_t i = 0; i < n; ++i) ids.push_back(*s.id(post_var(i).text));
  auto w = s.store.witness_all(ids);
  if (!w) return std::nullopt;

  CfeResult r;
  ConstraintStore fixed = s.store;
  for (std::size_t i = 0; i < n; ++i) {
    if (features[i].is_numeric()) r.factual_intervals[features[i].name] = s.store.numeric_range(ids[i]);
    if (!fixed.post(Operand::var(ids[i]), CmpOp::eq, Operand::constant((*w)[i]))) return std::nullopt;
  }
  for (std::size_t i = 0; i < n; ++i) {
    r.factual[features[i].name] = (*w)[i];
    r.counterfactual[features[i].name] = (*w)[n + i];
    if (features[i].is_numeric()) r.intervals[features[i].name] = fixed.numeric_range(ids[n + i]);
  }
  r.controls = z;
  r.cost = intervention_cost(z);
  return r;
}

bool causal_holds(const Model& m, const Instance& world) {
  for (const auto& cp : m.causal().predicates) {
    Atom a{cp.predicate, {}};
    for (const auto& f : cp.features) a.args.push_back(Term::constant(world.at(f)));
    std::vector<Literal> goal{Literal::positive(std::move(a))};
    if (!m.engine().provable(goal)) return false;
  }
  return true;
}

// Re-derives every invariant from the witnessed worlds and attaches proofs.
void certify(const Model& m, CfeResult& r) {
  Classification f = classify(m, r.factual);
  Classification c = classify(m, r.counterfactual);
  if (!f.undesired || c.undesired) {
    throw Error(ErrorCode::internal, "witnessed worlds do not flip the decision");
  }
  const auto& features = m.schema().features();
  for (std::size_t i = 0; i < features.size(); ++i) {
    const Value& pre = r.factual.at(features[i].name);
    const Value& post = r.counterfactual.at(features[i].name);
    int z = features[i].is_categorical() ? compare_categorical(features[i], pre, post)
                                         : compare_numeric(pre.as_number(), post.as_number());
    if (z != r.controls[i]) throw Error(ErrorCode::internal, "control mismatch on " + features[i].name);
  }
  if (r.cost < 1 || r.cost != intervention_cost(r.controls)) {
    throw Error(ErrorCode::internal, "cost identity violated");
  }
  if (!causal_holds(m, r.factual) || !causal_holds(m, r.counterfactual)) {
    throw Error(ErrorCode::internal, "witnessed world violates a causal constraint");
  }
  r.factual_justification = std::move(f.justification);
  r.counterfactual_justification = std::move(c.justification);
}

struct Plan {
  std::vector<std::vector<int>> allowed;  // per feature, ascending
  bool any_mutable = false;
};

Plan prepare(const Model& m, const Instance& factual, const ControlSpec& spec) {
  validate_instance(m.schema(), factual);
  for (const auto& [name, control] : spec) {
    const FeatureDef& f = m.schema().at(name);
    bool numeric_only = control == Control::must_increase || control == Control::must_decrease;
    if (numeric_only && !f.is_numeric()) {
      throw Error(ErrorCode::control_conflict, std::string(to_string(control)) +
                                                   " needs a numeric feature, " + name +
                                                   " is categorical");
    }
    if (control == Control::must_change && !f.is_categorical()) {
      throw Error(ErrorCode::control_conflict,
                  "must_change needs a categorical feature, " + name + " is numeric");
    }
    auto it = factual.find(name);
    if (it != factual.end()) {
      Scaled v = f.is_numeric() ? it->second.as_number() : 0;
      if (control == Control::must_increase && v >= f.max) {
        throw Error(ErrorCode::control_conflict, name + " is already at its maximum");
      }
      if (control == Control::must_decrease && v <= f.min) {
        throw Error(ErrorCode::control_conflict, name + " is already at its minimum");
      }
      if (control == Control::must_change && f.values.size() < 2) {
        throw Error(ErrorCode::control_conflict, name + " has no other value");
      }
    }
  }
  Plan plan;
  for (const auto& f : m.schema().features()) {
    auto it = spec.find(f.name);
    Control c = it == spec.end() ? Control::any : it->second;
    std::vector<int> z;
    switch (c) {
      case Control::any: z = f.is_categorical() ? std::vector<int>{0, 1} : std::vector<int>{-1, 0, 1}; break;
      case Control::immutable: z = {0}; break;
      case Control::must_change: z = {1}; break;
      case Control::must_increase: z = {1}; break;
      case Control::must_decrease: z = {-1}; break;
    }
    if (std::any_of(z.begin(), z.end(), [](int v) { return v != 0; })) plan.any_mutable = true;
    plan.allowed.push_back(std::move(z));
  }
  return plan;
}

void control_vectors(const Plan& plan, int k, std::vector<int>& current,
                     std::vector<std::vector<int>>& out) {
  std::size_t i = current.size();
  int used = static_cast<int>(std::count_if(current.begin(), current.end(), [](int v) { return v; }));
  int remaining = static_cast<int>(plan.allowed.size() - i);
  if (used > k || used + remaining < k) return;
  if (i == plan.allowed.size()) {
    out.push_back(current);
    return;
  }
  for (int z : plan.allowed[i]) {
    current.push_back(z);
    control_vectors(plan, k, current, out);
    current.pop_back();
  }
}

void require_undesired(const Model& m, const Instance& factual) {
  if (is_total(m.schema(), factual)) {
    Classification c = classify(m, factual);
    if (!c.undesired) {
      throw Error(ErrorCode::already_desired,
                  "the instance is already classified " + c.label + "; nothing to explain");
    }
    return;
  }
  auto goal = factual_goal(m, factual);
  if (!m.engine().provable(goal)) {
    throw Error(ErrorCode::already_desired,
                "no completion of the instance is classified " + m.decision().undesired);
  }
}

std::vector<CfeResult> level(const Model& m, const Instance& factual, const Plan& plan, int k) {
  std::vector<std::vector<int>> vectors;
  std::vector<int> current;
  control_vectors(plan, k, current, vectors);

  SolveOptions opts;
  opts.max_solutions = std::nullopt;
  opts.scale = m.scale();

  std::vector<std::pair<std::vector<Scaled>, CfeResult>> found;
  std::set<std::vector<Scaled>> seen;
  for (const auto& z : vectors) {
    auto goal = pair_goal(m, factual, z);
    m.engine().solve(goal, opts, [&](const Solution& s) {
      if (auto r = realize(m, s, z)) {
        auto key = sort_key(m, *r);
        if (seen.insert(key).second) found.emplace_back(std::move(key), std::move(*r));
      }
      return true;
    });
  }
  std::stable_sort(found.begin(), found.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<CfeResult> out;
  out.reserve(found.size());
  for (auto& [key, r] : found) {
    certify(m, r);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

Model::Model(FeatureSchema schema, Program rules, Decision decision, CausalRuleSet causal)
    : schema_(std::move(schema)), decision_(std::move(decision)), causal_(std::move(causal)),
      engine_([&] {
        for (const auto& f : decision_.features) schema_.at(f);
        for (const auto& cp : causal_.predicates) {
          for (const auto& f : cp.features) schema_.at(f);
        }
        Program program = schema_to_facts(schema_);
        program.append(rules);
        program.append(causal_.rules);
        PredKey key{decision_.predicate, decision_.features.size()};
        if (!program.defines(key)) {
          for (const auto& p : program.predicates()) {
            if (p.first == key.first) {
              throw Error(ErrorCode::arity_mismatch,
                          "decision " + to_string(key) + " is defined as " + to_string(p));
            }
          }
          throw Error(ErrorCode::undefined_predicate, "decision predicate " + to_string(key) +
                                                          " is not defined");
        }
        Atom head{key.first, {}};
        for (std::size_t i = 0; i < key.second; ++i) {
          head.args.push_back(Term::variable("Var" + std::to_string(i)));
        }
        std::vector<Literal> goals{Literal::naf(head)};
        return Engine(dualize_program(program, goals));
      }()),
      scale_(schema_.numeric_scale()) {}

int compare_categorical(const FeatureDef& feature, const Value& pre, const Value& post) {
  if (!feature.is_categorical() || !feature.contains(pre) || !feature.contains(post)) {
    throw Error(ErrorCode::out_of_domain,
                "compare_categorical: " + pre.str() + " and " + post.str() + " are not both in " +
                    feature.name);
  }
  return pre == post ? 0 : 1;
}

int compare_numeric(Scaled pre, Scaled post) { return pre == post ? 0 : (post > pre ? 1 : -1); }

int intervention_cost(std::span<const int> controls) {
  int cost = 0;
  for (int z : controls) cost += z * z;
  return cost;
}

Classification classify(const Model& model, const Instance& instance) {
  validate_instance(model.schema(), instance);
  if (!is_total(model.schema(), instance)) {
    std::string missing;
    for (const auto& f : model.schema().features()) {
      if (!instance.contains(f.name)) missing += (missing.empty() ? "" : ", ") + f.name;
    }
    throw Error(ErrorCode::partial_instance, "classify needs every feature; missing " + missing);
  }
  Atom atom{model.decision().predicate, {}};
  for (const auto& f : model.decision().features) atom.args.push_back(Term::constant(instance.at(f)));

  SolveOptions opts;
  opts.max_solutions = 1;
  opts.scale = model.scale();
  std::vector<Literal> pos{Literal::positive(atom)};
  std::vector<Literal> neg{Literal::naf(atom)};
  auto proved = model.engine().solve_all(pos, opts);
  auto refuted = model.engine().solve_all(neg, opts);
  if (proved.empty() == refuted.empty()) {
    throw Error(ErrorCode::internal,
                "decision and its dual disagree on " + print_atom(atom, model.scale()));
  }
  Classification c;
  c.undesired = !proved.empty();
  c.label = c.undesired ? model.decision().undesired : model.decision().desired;
  const Solution& s = c.undesired ? proved.front() : refuted.front();
  c.justification = s.justification.children.empty() ? s.justification
                                                      : s.justification.children.front();
  return c;
}

std::vector<CfeResult> counterfactuals(const Model& model, const Instance& factual,
                                       const ControlSpec& spec, std::optional<int> cost_bound,
                                       std::optional<std::size_t> limit) {
  Plan plan = prepare(model, factual, spec);
  if (!plan.any_mutable) {
    throw Error(ErrorCode::no_mutable_feature, "every feature is immutable");
  }
  require_undesired(model, factual);
  std::vector<CfeResult> out;
  if (limit && *limit == 0) return out;

  int n = static_cast<int>(model.schema().size());
  int lo = cost_bound ? *cost_bound : 1;
  int hi = cost_bound ? *cost_bound : n;
  for (int k = std::max(lo, 1); k <= std::min(hi, n); ++k) {
    for (auto& r : level(model, factual, plan, k)) {
      out.push_back(std::move(r));
      if (limit && out.size() >= *limit) return out;
    }
  }
  return out;
}

InterpolantResult craig_interpolant(const Model& model, const Instance& factual,
                                    const ControlSpec& spec) {
  Plan plan = prepare(model, factual, spec);
  InterpolantResult out;
  if (!plan.any_mutable) {
    out.no_recourse = true;
    return out;
  }
  require_undesired(model, factual);
  int n = static_cast<int>(model.schema().size());
  for (int k = 1; k <= n; ++k) {
    auto results = level(model, factual, plan, k);
    if (results.empty()) {
      out.empty_levels.push_back(k);
      continue;
    }
    out.cost = k;
    out.results = std::move(results);
    return out;
  }
  out.no_recourse = true;
  return out;
}

std::vector<CfeResult> enumerate_transitions(const Model& model, std::optional<std::size_t> limit,
                                             const ControlSpec& spec) {
  if (limit && *limit == 0) return {};
  return counterfactuals(model, {}, spec, std::nullopt, limit);
}

}  // namespace recourse
