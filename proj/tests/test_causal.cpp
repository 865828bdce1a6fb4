#include "recourse/causal.hpp"
#include "recourse/cfe.hpp"
#include "recourse/error.hpp"
#include "recourse/workspace.hpp"

#include <doctest.h>

using namespace recourse;

namespace {

const Workspace& adult() {
  static const Workspace ws = Workspace::load_fixture("adult");
  return ws;
}

std::vector<Value> tuple(std::initializer_list<const char*> syms, Scaled age) {
  std::vector<Value> out;
  for (const char* s : syms) out.push_back(Value::symbol(s));
  out.push_back(Value::number(age));
  return out;
}

const CausalRuleSet& rules() { return adult().model().causal(); }

}  // namespace

TEST_SUITE("causal") {

TEST_CASE("covers follows the clauses") {
  const FeatureSchema& s = adult().schema();
  for (Scaled age : {17, 40, 90}) {
    CHECK(covers(rules(), s, "constraint_ms_reln_age", tuple({"married_civ_spouse", "husband"}, age)));
  }
  CHECK_FALSE(covers(rules(), s, "constraint_reln_sex_age", tuple({"husband", "female"}, 30)));
  CHECK(covers(rules(), s, "constraint_reln_sex_age", tuple({"husband", "male"}, 30)));
  CHECK_FALSE(covers(rules(), s, "constraint_reln_sex_age", tuple({"husband", "male"}, 27)));
  CHECK(covers(rules(), s, "constraint_ms_reln_age", tuple({"never_married", "unmarried"}, 29)));
  CHECK_FALSE(covers(rules(), s, "constraint_ms_reln_age", tuple({"never_married", "unmarried"}, 35)));
  CHECK_FALSE(covers(rules(), s, "constraint_ms_reln_age", tuple({"divorced", "wife"}, 35)));
}

TEST_CASE("strict scan finds the uncovered tuples") {
  TotalityReport r = check_totality(rules(), adult().schema());
  CHECK_FALSE(r.total());
  bool ms = false;
  for (const auto& g : r.gaps) {
    if (g.predicate == "constraint_ms_reln_age") ms = true;
    CHECK_FALSE(covers(rules(), adult().schema(), g.predicate, g.tuple));
    CHECK(g.count > 0);
  }
  CHECK(ms);
  CHECK(r.tuples_scanned > 0);
  CHECK(r.sound());
}

TEST_CASE("discretization uses rule boundaries") {
  auto ages = discretize(adult().schema().at("age"), rules().rules);
  for (Scaled x : {17, 27, 28, 29, 30, 90}) {
    CHECK(std::find(ages.begin(), ages.end(), Value::number(x)) != ages.end());
  }
  CHECK(discretize(adult().schema().at("sex"), rules().rules).size() == 2);
}

TEST_CASE("dead values are reported") {
  Workspace ws = Workspace::from_text(
      "dead",
      R"({"features": [{"name": "c", "kind": "categorical", "values": ["a", "b"]},
                       {"name": "n", "kind": "numeric", "min": 0, "max": 5}],
          "decision": {"predicate": "d", "features": ["c", "n"]},
          "causal": [{"predicate": "k", "features": ["c", "n"]}]})",
      "d(C, N) :- N #< 2.\n% causal\nk(C, N) :- C = a.\n");
  TotalityReport r = ws.totality();
  CHECK_FALSE(r.total());
  REQUIRE(r.dead.size() == 1);
  CHECK(r.dead[0].feature == "c");
  CHECK(r.dead[0].value == Value::symbol("b"));
}

TEST_CASE("empty rule set is vacuously total") {
  TotalityReport r = check_totality(CausalRuleSet{}, adult().schema());
  CHECK(r.total());
  CHECK(r.sound());
}

TEST_CASE("unmapped features are rejected") {
  CausalRuleSet bad = rules();
  bad.predicates[0].features[1] = "height";
  CHECK_THROWS_AS(check_totality(bad, adult().schema()), Error);
}

TEST_CASE("apply_causal appends one atom per predicate per world") {
  std::map<std::string, Term> pre, post;
  for (const auto& f : adult().schema().features()) {
    pre[f.name] = Term::variable("P_" + f.name);
    post[f.name] = Term::variable("Q_" + f.name);
  }
  std::vector<std::map<std::string, Term>> worlds{pre, post};
  std::vector<Literal> goal = parse_query("d(X)");
  auto full = apply_causal(goal, rules(), worlds);
  REQUIRE(full.size() == 5);
  CHECK(print_literal(full[1]) == "constraint_ms_reln_age(P_marital_status, P_relationship, P_age)");
  CHECK(print_literal(full[4]) == "constraint_reln_sex_age(Q_relationship, Q_sex, Q_age)");

  CHECK(apply_causal(goal, CausalRuleSet{}, worlds) == goal);

  CausalRuleSet single = rules();
  single.predicates.resize(1);
  CHECK(apply_causal(goal, single, worlds).size() == 3);

  CausalRuleSet wrong = rules();
  wrong.predicates[0].features.pop_back();
  try {
    apply_causal(goal, wrong, worlds);
    FAIL("expected arity_mismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::arity_mismatch);
  }
}

TEST_CASE("causal filtering only removes worlds") {
  Workspace plain = Workspace::load_fixture("adult_noncausal");
  Instance f = instance_from_json(
      Json::parse(R"({"marital_status": "never_married", "capital_gain": 6000, "education_num": 4})"),
      plain.schema());
  auto without = counterfactuals(plain.model(), f, {}, std::nullopt, std::nullopt);
  std::set<std::vector<std::string>> free;
  for (const auto& r : without) {
    free.insert({r.counterfactual.at("marital_status").as_symbol()});
  }
  Instance g = f;
  g["relationship"] = Value::symbol("not_in_family");
  g["sex"] = Value::symbol("male");
  g["age"] = Value::number(28);
  auto with = counterfactuals(adult().model(), g, {{"relationship", Control::immutable},
                                                   {"sex", Control::immutable},
                                                   {"age", Control::immutable}});
  REQUIRE_FALSE(with.empty());
  for (const auto& r : with) {
    CHECK(free.contains({r.counterfactual.at("marital_status").as_symbol()}));
  }
  CHECK(with.size() <= without.size());
}

}  // TEST_SUITE
