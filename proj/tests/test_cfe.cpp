#include "recourse/causal.hpp"
#include "recourse/cfe.hpp"
#include "recourse/error.hpp"
#include "recourse/workspace.hpp"

#include <doctest.h>

#include <set>

using namespace recourse;

namespace {

const Workspace& adult() {
  static const Workspace ws = Workspace::load_fixture("adult");
  return ws;
}

Instance inst(const char* json) { return instance_from_json(Json::parse(json), adult().schema()); }

Instance worked_individual() {
  return inst(R"({"marital_status": "never_married", "capital_gain": 6000, "education_num": 4,
                  "relationship": "not_in_family", "sex": "male", "age": 28})");
}

const ControlSpec kLocked{{"capital_gain", Control::immutable},
                          {"education_num", Control::immutable}};

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::internal;
}

// Flip, control consistency, cost identity and causal closure.
void check_invariants(const Workspace& ws, const CfeResult& r) {
  const Model& m = ws.model();
  CHECK(classify(m, r.factual).undesired);
  CHECK_FALSE(classify(m, r.counterfactual).undesired);
  int nonzero = 0;
  for (std::size_t i = 0; i < ws.schema().size(); ++i) {
    const FeatureDef& f = ws.schema().features()[i];
    const Value& a = r.factual.at(f.name);
    const Value& b = r.counterfactual.at(f.name);
    int z = f.is_categorical() ? compare_categorical(f, a, b)
                               : compare_numeric(a.as_number(), b.as_number());
    CHECK(z == r.controls[i]);
    nonzero += z != 0;
  }
  CHECK(r.cost == nonzero);
  CHECK(r.cost == intervention_cost(r.controls));
  CHECK(r.cost >= 1);
  for (const auto& cp : m.causal().predicates) {
    for (const Instance* w : {&r.factual, &r.counterfactual}) {
      std::vector<Value> t;
      for (const auto& f : cp.features) t.push_back(w->at(f));
      CHECK(covers(m.causal(), ws.schema(), cp.predicate, t));
    }
  }
  for (const auto& [name, range] : r.intervals) CHECK(range.contains(r.counterfactual.at(name).as_number()));
}

}  // namespace

TEST_SUITE("cfe") {

TEST_CASE("compare and cost") {
  const FeatureDef& m = adult().schema().at("marital_status");
  auto s = [](const char* x) { return Value::symbol(x); };
  CHECK(compare_categorical(m, s("divorced"), s("divorced")) == 0);
  CHECK(compare_categorical(m, s("never_married"), s("married_civ_spouse")) == 1);
  CHECK(compare_categorical(m, s("divorced"), s("widowed")) ==
        compare_categorical(m, s("widowed"), s("divorced")));
  CHECK(code_of([&] { compare_categorical(m, s("male"), s("divorced")); }) ==
        ErrorCode::out_of_domain);
  CHECK(compare_numeric(4, 4) == 0);
  CHECK(compare_numeric(6000, 7000) == 1);
  CHECK(compare_numeric(30, 28) == -1);
  CHECK(intervention_cost(std::vector<int>{1, 0, 0, 1, 0, 0}) == 2);
  CHECK(intervention_cost(std::vector<int>{0, 0, 0, 0, 0, 0}) == 0);
  CHECK(intervention_cost(std::vector<int>{1, -1, 1, 1, 1, -1}) == 6);
}

TEST_CASE("controls parse") {
  CHECK(parse_control("immutable") == Control::immutable);
  CHECK(parse_control("must_increase") == Control::must_increase);
  CHECK(std::string(to_string(Control::must_change)) == "must_change");
  CHECK(code_of([] { parse_control("sometimes"); }) == ErrorCode::usage);
}

TEST_CASE("classify") {
  Classification c = classify(adult().model(), worked_individual());
  CHECK(c.undesired);
  CHECK(c.label == "<=50K");
  CHECK(c.justification.goal == "lite_le_50K(never_married, 6000, 4)");
  CHECK(c.justification.find("6000 #=< 6849") != nullptr);
  CHECK(c.justification.find("never_married \\= married_civ_spouse") != nullptr);

  Classification d = classify(adult().model(),
                              inst(R"({"marital_status": "married_civ_spouse", "capital_gain": 5500,
                                       "education_num": 13, "relationship": "husband",
                                       "sex": "male", "age": 40})"));
  CHECK_FALSE(d.undesired);
  CHECK(d.label == ">50K");
  CHECK(d.justification.goal == "not lite_le_50K(married_civ_spouse, 5500, 13)");

  CHECK_FALSE(classify(adult().model(),
                       inst(R"({"marital_status": "never_married", "capital_gain": 7000,
                                "education_num": 4, "relationship": "unmarried",
                                "sex": "female", "age": 30})"))
                  .undesired);
  CHECK(code_of([] { classify(adult().model(), inst(R"({"capital_gain": 6000})")); }) ==
        ErrorCode::partial_instance);
}

TEST_CASE("counterfactuals for the worked individual") {
  auto any = counterfactuals(adult().model(), worked_individual(), {}, std::nullopt, 50);
  REQUIRE_FALSE(any.empty());
  for (const auto& r : any) check_invariants(adult(), r);
  for (std::size_t i = 1; i < any.size(); ++i) CHECK(any[i - 1].cost <= any[i].cost);

  CHECK(counterfactuals(adult().model(), worked_individual(), kLocked, 1).empty());

  auto two = counterfactuals(adult().model(), worked_individual(), kLocked, 2);
  REQUIRE_FALSE(two.empty());
  bool found = false;
  for (const auto& r : two) {
    check_invariants(adult(), r);
    CHECK(r.cost == 2);
    CHECK(r.controls[1] == 0);
    CHECK(r.controls[2] == 0);
    if (r.controls == std::vector<int>{1, 0, 0, 1, 0, 0} &&
        r.counterfactual.at("marital_status") == Value::symbol("married_civ_spouse") &&
        r.counterfactual.at("relationship") == Value::symbol("husband")) {
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("control directions are enforced") {
  ControlSpec spec{{"age", Control::must_increase}};
  auto rs = counterfactuals(adult().model(), worked_individual(), spec, std::nullopt, 20);
  REQUIRE_FALSE(rs.empty());
  for (const auto& r : rs) {
    CHECK(r.controls[5] == 1);
    CHECK(r.counterfactual.at("age").as_number() > 28);
  }
  ControlSpec change{{"sex", Control::must_change}};
  for (const auto& r : counterfactuals(adult().model(), worked_individual(), change, std::nullopt, 20)) {
    CHECK(r.counterfactual.at("sex") == Value::symbol("female"));
  }
}

TEST_CASE("counterfactual errors") {
  const Model& m = adult().model();
  Instance desired = inst(R"({"marital_status": "married_civ_spouse", "capital_gain": 5500,
                              "education_num": 13, "relationship": "husband", "sex": "male",
                              "age": 40})");
  CHECK(code_of([&] { counterfactuals(m, desired, {}); }) == ErrorCode::already_desired);
  CHECK(code_of([&] {
          counterfactuals(m, worked_individual(), {{"sex", Control::must_increase}});
        }) == ErrorCode::control_conflict);
  CHECK(code_of([&] {
          counterfactuals(m, worked_individual(), {{"age", Control::must_change}});
        }) == ErrorCode::control_conflict);
  Instance old = worked_individual();
  old["age"] = Value::number(90);
  CHECK(code_of([&] { counterfactuals(m, old, {{"age", Control::must_increase}}); }) ==
        ErrorCode::control_conflict);
  ControlSpec all;
  for (const auto& f : adult().schema().features()) all[f.name] = Control::immutable;
  CHECK(code_of([&] { counterfactuals(m, worked_individual(), all); }) ==
        ErrorCode::no_mutable_feature);
  CHECK(counterfactuals(m, worked_individual(), {}, std::nullopt, 0).empty());
}

TEST_CASE("partial factual instances are solved for") {
  Instance partial = inst(R"({"capital_gain": 6000, "education_num": 4, "sex": "male", "age": 28})");
  auto rs = counterfactuals(adult().model(), partial, kLocked, 2, 10);
  REQUIRE_FALSE(rs.empty());
  for (const auto& r : rs) {
    check_invariants(adult(), r);
    CHECK(r.factual.size() == 6);
    CHECK(r.factual.at("capital_gain") == Value::number(6000));
  }
}

TEST_CASE("craig interpolant") {
  auto r = craig_interpolant(adult().model(), worked_individual(), kLocked);
  CHECK_FALSE(r.no_recourse);
  CHECK(r.cost == 2);
  CHECK(r.empty_levels == std::vector<int>{1});
  REQUIRE(r.results.size() == 1);
  CHECK(r.results[0].controls == std::vector<int>{1, 0, 0, 1, 0, 0});
  CHECK(r.results[0].counterfactual.at("marital_status") == Value::symbol("married_civ_spouse"));
  CHECK(r.results[0].counterfactual.at("relationship") == Value::symbol("husband"));

  ControlSpec all;
  for (const auto& f : adult().schema().features()) all[f.name] = Control::immutable;
  auto none = craig_interpolant(adult().model(), worked_individual(), all);
  CHECK(none.no_recourse);
  CHECK(none.results.empty());

  auto one = craig_interpolant(adult().model(),
                               inst(R"({"marital_status": "married_civ_spouse", "capital_gain": 4000,
                                        "education_num": 10, "relationship": "husband",
                                        "sex": "male", "age": 40})"),
                               {});
  CHECK(one.cost == 1);
  bool gain = false;
  for (const auto& res : one.results) {
    check_invariants(adult(), res);
    if (res.controls == std::vector<int>{0, 1, 0, 0, 0, 0}) {
      gain = true;
      CHECK(res.counterfactual.at("capital_gain") == Value::number(5014));
      CHECK(res.intervals.at("capital_gain") == NumericRange{5014, 99999, {}});
    }
  }
  CHECK(gain);

  auto relaxed = craig_interpolant(adult().model(), worked_individual(), {});
  CHECK(relaxed.cost <= r.cost);
}

TEST_CASE("enumerate transitions") {
  auto rs = enumerate_transitions(adult().model(), 10);
  CHECK(rs.size() == 10);
  for (const auto& r : rs) check_invariants(adult(), r);
  CHECK(enumerate_transitions(adult().model(), 0).empty());
}

TEST_CASE("enumeration matches the exhaustive pair set on a two-feature model") {
  Workspace ws = Workspace::from_text(
      "pair",
      R"({"features": [{"name": "f", "kind": "categorical", "values": ["a", "b"]},
                       {"name": "n", "kind": "numeric", "min": 0, "max": 4}],
          "decision": {"predicate": "lite", "features": ["f", "n"]}})",
      "lite(F, N) :- F = a, N #=< 2.\n");
  auto undesired = [](const Value& f, Scaled n) { return f == Value::symbol("a") && n <= 2; };
  std::set<std::tuple<std::string, Scaled, std::string, Scaled>> oracle, covered;
  for (const char* f : {"a", "b"}) {
    for (Scaled n = 0; n <= 4; ++n) {
      for (const char* g : {"a", "b"}) {
        for (Scaled k = 0; k <= 4; ++k) {
          if (undesired(Value::symbol(f), n) && !undesired(Value::symbol(g), k)) {
            oracle.insert({f, n, g, k});
          }
        }
      }
    }
  }
  CHECK(oracle.size() == 21);
  auto rs = enumerate_transitions(ws.model(), std::nullopt);
  REQUIRE_FALSE(rs.empty());
  // Factual ranges are unconditional; counterfactual ranges hold for the factual witness.
  using Sig = std::tuple<std::string, std::string, int>;
  std::set<Sig> sigs;
  for (const auto& r : rs) {
    const NumericRange& fn = r.factual_intervals.at("n");
    const NumericRange& cn = r.intervals.at("n");
    std::string f = r.factual.at("f").as_symbol(), g = r.counterfactual.at("f").as_symbol();
    Scaled w = r.factual.at("n").as_number();
    CHECK(fn.contains(w));
    CHECK(sigs.insert({f, g, r.controls[1]}).second);
    for (Scaled k = 0; k <= 4; ++k) {
      if (cn.contains(k)) CHECK(oracle.contains({f, w, g, k}));
    }
    for (Scaled n = 0; n <= 4; ++n) {
      bool any = false;
      for (Scaled k = 0; k <= 4; ++k) {
        any = any || (compare_numeric(n, k) == r.controls[1] && oracle.contains({f, n, g, k}));
      }
      CHECK(fn.contains(n) == any);
    }
  }
  for (const auto& [f, n, g, k] : oracle) {
    if (sigs.contains({f, g, compare_numeric(n, k)})) covered.insert({f, n, g, k});
  }
  CHECK(covered == oracle);
}

}  // TEST_SUITE
