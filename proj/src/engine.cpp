#include "recourse/engine.hpp"

#include "recourse/error.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace recourse {

namespace {

struct CTerm {
  bool is_var = false;
  std::uint32_t local = 0;
  Value constant;
};

struct CLit {
  Literal::Kind kind = Literal::Kind::positive;
  PredKey key;
  std::vector<CTerm> args;
  CTerm lhs;
  CmpOp op = CmpOp::eq;
  CTerm rhs;
};

struct CClause {
  std::vector<CTerm> head;
  std::vector<CLit> body;
  std::uint32_t nvars = 0;
};

class Scope {
 public:
  CTerm term(const Term& t) {
    CTerm out;
    if (!t.is_var()) {
      out.constant = t.value();
      return out;
    }
    out.is_var = true;
    if (t.anon >= 0) {
      out.local = next_++;
      return out;
    }
    auto [it, inserted] = names_.emplace(t.text, next_);
    if (inserted) {
      ++next_;
      order_.push_back(t.text);
    }
    out.local = it->second;
    return out;
  }

  CLit literal(const Literal& lit) {
    CLit out;
    out.kind = lit.kind;
    if (lit.is_atom()) {
      out.key = {lit.atom.pred, lit.atom.arity()};
      for (const auto& a : lit.atom.args) out.args.push_back(term(a));
    } else {
      out.lhs = term(lit.cmp.lhs);
      out.op = lit.cmp.op;
      out.rhs = term(lit.cmp.rhs);
    }
    return out;
  }

  std::uint32_t size() const { return next_; }
  const std::vector<std::string>& order() const { return order_; }
  std::uint32_t local(const std::string& name) const { return names_.at(name); }

 private:
  std::map<std::string, std::uint32_t> names_;
  std::vector<std::string> order_;
  std::uint32_t next_ = 0;
};

CClause compile_rule(const Rule& r) {
  Scope scope;
  CClause c;
  if (r.head_kind != HeadKind::none) {
    for (const auto& a : r.head.args) c.head.push_back(scope.term(a));
  }
  for (const auto& lit : r.body) c.body.push_back(scope.literal(lit));
  c.nvars = scope.size();
  return c;
}

Operand operand(const CTerm& t, VarId base) {
  return t.is_var ? Operand::var(base + t.local) : Operand::constant(t.constant);
}

struct GoalItem {
  const CLit* lit;
  VarId base;
  int parent;
};

struct JNode {
  const CLit* lit = nullptr;
  VarId base = 0;
  Outcome outcome = Outcome::proved;
  int parent = -1;
  int abducible = -1;
  Value chosen;
};

struct State {
  ConstraintStore store;
  std::vector<GoalItem> goals;  // stack, back() is next
  std::vector<JNode> nodes;
  std::vector<std::pair<int, Value>> choices;  // abducible index → value
};

VarId allocate(State& st, std::uint32_t n) {
  VarId base = static_cast<VarId>(st.store.size());
  for (std::uint32_t i = 0; i < n; ++i) st.store.new_var();
  return base;
}

struct CompiledProgram {
  struct AbducibleInfo {
    const Abducible* decl;
    std::string label;  // feature name or predicate
    std::vector<Value> domain;
  };

  DualProgram program;
  std::map<PredKey, std::vector<CClause>> positive;
  std::map<PredKey, std::vector<CClause>> negated;
  std::vector<CClause> constraints;
  std::vector<AbducibleInfo> abducibles;
  std::map<std::string, int> abducible_by_pred;

  explicit CompiledProgram(const DualProgram& dp) : program(dp) {
    for (std::size_t i = 0; i < program.source.abducibles().size(); ++i) {
      const Abducible& a = program.source.abducibles()[i];
      AbducibleInfo info{&a, a.feature.value_or(a.pred),
                         a.feature ? program.source.domain_facts(*a.feature) : a.values};
      abducibles.push_back(std::move(info));
      abducible_by_pred[a.pred] = static_cast<int>(i);
      abducible_by_pred[a.complement] = static_cast<int>(i);
    }
    for (const auto& r : program.source.rules()) {
      if (r.head_kind == HeadKind::none) {
        constraints.push_back(compile_rule(r));
      } else if (r.head_kind == HeadKind::atom) {
        if (abducible({r.head.pred, r.head.arity()}) >= 0) continue;
        positive[{r.head.pred, r.head.arity()}].push_back(compile_rule(r));
      } else {
        negated[{r.head.pred, r.head.arity()}].push_back(compile_rule(r));
      }
    }
    for (const auto& r : program.duals.rules()) {
      if (r.head_kind == HeadKind::negated) {
        negated[{r.head.pred, r.head.arity()}].push_back(compile_rule(r));
      }
    }
    // A clause with an empty body has no dual clauses: its negation fails.
    for (const auto& r : program.duals.rules()) {
      for (const auto& l : r.body) {
        if (l.kind == Literal::Kind::naf) negated.try_emplace({l.atom.pred, l.atom.arity()});
      }
    }
  }

  int abducible(const PredKey& key) const {
    if (key.second != 1) return -1;
    auto it = abducible_by_pred.find(key.first);
    return it == abducible_by_pred.end() ? -1 : it->second;
  }
};

class Search {
 public:
  using Compiled = CompiledProgram;

  Search(const Compiled& c, const SolveOptions& opts, const SolutionSink* sink,
         bool check_constraints)
      : c_(c), opts_(opts), sink_(sink), check_constraints_(check_constraints) {}

  void set_query(std::vector<std::string> names, std::vector<VarId> ids) {
    qnames_ = std::move(names);
    qids_ = std::move(ids);
  }

  std::size_t emitted() const { return emitted_; }
  bool found() const { return found_; }

  // Returns false once the enumeration must stop.
  bool run(State& st) {
    while (!st.goals.empty()) {
      GoalItem g = st.goals.back();
      st.goals.pop_back();
      const CLit& lit = *g.lit;

      if (lit.kind == Literal::Kind::comparison) {
        add_node(st, g, Outcome::constraint_satisfied);
        if (!st.store.post(operand(lit.lhs, g.base), lit.op, operand(lit.rhs, g.base))) return true;
        continue;
      }

      bool positive = lit.kind == Literal::Kind::positive;
      if (int ab = c_.abducible(lit.key); ab >= 0) return abduce(st, g, ab, positive);

      const auto& table = positive ? c_.positive : c_.negated;
      auto it = table.find(lit.key);
      if (it == table.end()) {
        if (positive && !c_.program.source.defines_negation(lit.key)) {
          throw Error(ErrorCode::undefined_predicate,
                      "undefined predicate " + to_string(lit.key));
        }
        if (!positive) {
          throw Error(ErrorCode::undefined_predicate,
                      "no dual rules for not " + to_string(lit.key) +
                          (c_.program.source.defines(lit.key) ? "" : " (predicate undefined)"));
        }
        return true;
      }
      const auto& clauses = it->second;
      Outcome outcome = positive ? Outcome::proved : Outcome::proved_via_dual;

      std::vector<const CClause*> live;
      for (const auto& cl : clauses) {
        if (!quick_reject(st, g, cl)) live.push_back(&cl);
      }
      if (live.empty()) return true;
      if (live.size() == 1) {
        if (!resolve(st, g, *live.front(), outcome)) return true;
        continue;
      }
      for (const CClause* cl : live) {
        State branch = st;
        if (resolve(branch, g, *cl, outcome) && !run(branch)) return false;
      }
      return true;
    }
    return emit(st);
  }

  // Builds the public justification tree rooted at a synthetic query node.
  Justification justification(const State& st) const {
    std::vector<std::vector<int>> kids(st.nodes.size());
    std::vector<int> roots;
    for (std::size_t i = 0; i < st.nodes.size(); ++i) {
      int p = st.nodes[i].parent;
      (p < 0 ? roots : kids[static_cast<std::size_t>(p)]).push_back(static_cast<int>(i));
    }
    std::function<Justification(int)> build = [&](int i) {
      const JNode& n = st.nodes[static_cast<std::size_t>(i)];
      Justification j;
      j.goal = render(st, *n.lit, n.base);
      j.outcome = n.outcome;
      if (n.abducible >= 0) {
        j.feature = c_.abducibles[static_cast<std::size_t>(n.abducible)].label;
        j.value = n.chosen.str();
      }
      for (int k : kids[static_cast<std::size_t>(i)]) j.children.push_back(build(k));
      return j;
    };
    Justification root;
    root.goal = "query";
    root.outcome = Outcome::query;
    for (int r : roots) root.children.push_back(build(r));
    return root;
  }

 private:
  int add_node(State& st, const GoalItem& g, Outcome outcome, int abducible = -1,
               Value chosen = {}) {
    if (!sink_) return -1;  // constraint probes record no proofs
    st.nodes.push_back(JNode{g.lit, g.base, outcome, g.parent, abducible, std::move(chosen)});
    return static_cast<int>(st.nodes.size() - 1);
  }

  bool quick_reject(const State& st, const GoalItem& g, const CClause& cl) const {
    for (std::size_t i = 0; i < cl.head.size(); ++i) {
      const CTerm& h = cl.head[i];
      if (h.is_var) continue;
      const CTerm& a = g.lit->args[i];
      std::optional<Value> v = a.is_var ? st.store.value(g.base + a.local) : a.constant;
      if (v && *v != h.constant) return true;
    }
    return false;
  }

  bool resolve(State& st, const GoalItem& g, const CClause& cl, Outcome outcome) {
    VarId base = allocate(st, cl.nvars);
    for (std::size_t i = 0; i < cl.head.size(); ++i) {
      if (!st.store.post(operand(g.lit->args[i], g.base), CmpOp::eq, operand(cl.head[i], base))) {
        return false;
      }
    }
    int node = add_node(st, g, outcome);
    for (auto it = cl.body.rbegin(); it != cl.body.rend(); ++it) {
      st.goals.push_back(GoalItem{&*it, base, node});
    }
    return true;
  }

  // Even-loop semantics: one value per abducible per derivation.
  bool abduce(State& st, const GoalItem& g, int ab, bool positive) {
    const auto& info = c_.abducibles[static_cast<std::size_t>(ab)];
    const Abducible& decl = *info.decl;
    bool complement = g.lit->key.first == decl.complement && decl.complement != decl.pred;
    bool equal = positive != complement;  // holds(t) ⇔ t = choice
    Operand t = operand(g.lit->args[0], g.base);

    auto apply = [&](State& s, const Value& v) {
      if (!s.store.post(t, equal ? CmpOp::eq : CmpOp::ne, Operand::constant(v))) return false;
      add_node(s, g, Outcome::abduced, ab, v);
      return true;
    };

    for (const auto& [idx, v] : st.choices) {
      if (idx == ab) {
        if (!apply(st, v)) return true;
        return run(st);
      }
    }
    if (!sink_) return true;  // constraint probes only see committed choices
    for (const auto& v : info.domain) {
      State branch = st;
      branch.choices.emplace_back(ab, v);
      if (apply(branch, v) && !run(branch)) return false;
    }
    return true;
  }

  bool violates_constraints(const State& st) const {
    for (const auto& ic : c_.constraints) {
      State probe;
      probe.store = st.store;
      probe.choices = st.choices;
      VarId base = allocate(probe, ic.nvars);
      for (auto it = ic.body.rbegin(); it != ic.body.rend(); ++it) {
        probe.goals.push_back(GoalItem{&*it, base, -1});
      }
      SolveOptions o;
      o.max_solutions = 1;
      Search sub(c_, o, nullptr, false);
      sub.run(probe);
      if (sub.found()) return true;
    }
    return false;
  }

  bool emit(State& st) {
    if (!sink_) {
      found_ = true;
      return false;
    }
    if (check_constraints_ && violates_constraints(st)) return true;

    Solution sol;
    sol.variables = qnames_;
    sol.ids = qids_;
    for (const auto& [idx, v] : st.choices) {
      const auto& info = c_.abducibles[static_cast<std::size_t>(idx)];
      const Abducible& decl = *info.decl;
      sol.choices.emplace_back(decl.pred, v);
      sol.model.push_back(decl.pred + "(" + v.str() + ")");
      if (!decl.feature) {
        for (const auto& w : info.domain) {
          if (w != v) sol.model.push_back("not " + decl.pred + "(" + w.str() + ")");
        }
      }
    }
    sol.store = st.store;
    if (opts_.deduplicate && !seen_.insert(sol.canonical()).second) return true;
    sol.justification = justification(st);
    ++emitted_;
    if (!(*sink_)(sol)) return false;
    return !(opts_.max_solutions && emitted_ >= *opts_.max_solutions);
  }

  std::string render_term(const State& st, const CTerm& t, VarId base) const {
    if (!t.is_var) {
      return t.constant.is_number() ? format_scaled(t.constant.as_number(), opts_.scale)
                                    : t.constant.str();
    }
    VarId id = base + t.local;
    if (auto v = st.store.value(id)) {
      return v->is_number() ? format_scaled(v->as_number(), opts_.scale) : v->str();
    }
    VarId root = st.store.find(id);
    for (std::size_t i = 0; i < qids_.size(); ++i) {
      if (st.store.find(qids_[i]) == root) return qnames_[i];
    }
    return "_V" + std::to_string(root);
  }

  std::string render(const State& st, const CLit& lit, VarId base) const {
    if (lit.kind == Literal::Kind::comparison) {
      return render_term(st, lit.lhs, base) + " " + spelling(lit.op) + " " +
             render_term(st, lit.rhs, base);
    }
    std::string out = lit.kind == Literal::Kind::naf ? "not " : "";
    out += lit.key.first;
    if (!lit.args.empty()) {
      out += "(";
      for (std::size_t i = 0; i < lit.args.size(); ++i) {
        if (i) out += ", ";
        out += render_term(st, lit.args[i], base);
      }
      out += ")";
    }
    return out;
  }

  const Compiled& c_;
  const SolveOptions& opts_;
  const SolutionSink* sink_;
  bool check_constraints_;
  std::vector<std::string> qnames_;
  std::vector<VarId> qids_;
  std::set<std::string> seen_;
  std::size_t emitted_ = 0;
  bool found_ = false;
};

}  // namespace

struct Engine::Compiled : CompiledProgram {
  using CompiledProgram::CompiledProgram;
};

std::optional<VarId> Solution::id(const std::string& var) const {
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (variables[i] == var) return ids[i];
  }
  return std::nullopt;
}

std::optional<Value> Solution::value(const std::string& var) const {
  auto i = id(var);
  if (!i) return std::nullopt;
  return store.value(*i);
}

std::string Solution::residual(const std::string& var, int scale) const {
  auto i = id(var);
  if (!i) return "_";
  return store.describe(*i, scale);
}

bool Solution::admits(const std::map<std::string, Value>& assignment) const {
  ConstraintStore s = store;
  for (const auto& [name, v] : assignment) {
    auto i = id(name);
    if (!i) continue;
    if (!s.post(Operand::var(*i), CmpOp::eq, Operand::constant(v))) return false;
  }
  return s.feasible();
}

std::string Solution::canonical() const {
  std::ostringstream os;
  std::map<VarId, std::string> root_name;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    VarId r = store.find(ids[i]);
    auto [it, inserted] = root_name.emplace(r, variables[i]);
    os << variables[i] << '=';
    if (!inserted) {
      os << '@' << it->second;
    } else {
      os << store.describe(ids[i]);
      auto ex = store.excluded_symbols(ids[i]);
      if (!store.is_bound(ids[i]) && store.kind(ids[i]) == VarKind::categorical) {
        for (const auto& s : ex) os << "!" << s;
      }
    }
    os << ';';
  }
  for (const auto& rel : store.relations()) {
    auto a = root_name.find(rel.a), b = root_name.find(rel.b);
    if (a != root_name.end() && b != root_name.end()) {
      os << a->second << spelling(rel.op) << b->second << ';';
    }
  }
  for (const auto& m : model) os << m << ';';
  return os.str();
}

Engine::Engine(const DualProgram& program) : compiled_(std::make_unique<Compiled>(program)) {}
Engine::~Engine() = default;
Engine::Engine(Engine&&) noexcept = default;
Engine& Engine::operator=(Engine&&) noexcept = default;

const DualProgram& Engine::program() const { return compiled_->program; }

std::size_t Engine::solve(std::span<const Literal> goal, const SolveOptions& options,
                          const SolutionSink& sink) const {
  if (options.max_solutions && *options.max_solutions == 0) return 0;
  Scope scope;
  std::vector<CLit> lits;
  lits.reserve(goal.size());
  for (const auto& l : goal) lits.push_back(scope.literal(l));

  State st;
  VarId base = allocate(st, scope.size());
  std::vector<VarId> ids;
  for (const auto& name : scope.order()) ids.push_back(base + scope.local(name));
  for (auto it = lits.rbegin(); it != lits.rend(); ++it) st.goals.push_back(GoalItem{&*it, base, -1});

  Search search(*compiled_, options, &sink, true);
  search.set_query(scope.order(), std::move(ids));
  search.run(st);
  return search.emitted();
}

std::vector<Solution> Engine::solve_all(std::span<const Literal> goal,
                                        const SolveOptions& options) const {
  std::vector<Solution> out;
  solve(goal, options, [&](const Solution& s) {
    out.push_back(s);
    return true;
  });
  return out;
}

bool Engine::provable(std::span<const Literal> goal) const {
  SolveOptions o;
  o.max_solutions = 1;
  o.deduplicate = false;
  return solve(goal, o, [](const Solution&) { return false; }) > 0;
}

}  // namespace recourse
