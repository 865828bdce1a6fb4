#include "recourse/error.hpp"
#include "recourse/json_io.hpp"
#include "recourse/schema.hpp"
#include "recourse/workspace.hpp"

#include <doctest.h>

using namespace recourse;

namespace {

FeatureSchema adult() { return Workspace::load_fixture("adult").schema(); }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::internal;
}

}  // namespace

TEST_SUITE("schema") {

TEST_CASE("derive_schema from records") {
  CsvTable t = parse_csv("age,sex,note\n39,male,\"a, b\"\n17,female,x\n90,male,y\n");
  FeatureSchema s = derive_schema(t, {{"age", FeatureKind::numeric}, {"sex", FeatureKind::categorical}});
  const FeatureDef& age = s.at("age");
  CHECK(age.is_numeric());
  CHECK(age.min == 17);
  CHECK(age.max == 90);
  CHECK(age.scale == 0);
  CHECK(s.at("sex").values == std::vector<std::string>{"male", "female"});
  CHECK(t.rows[0][2] == "a, b");
}

TEST_CASE("derive_schema edge cases") {
  FeatureSchema one = derive_schema(parse_csv("n\n5\n"), {{"n", FeatureKind::numeric}});
  CHECK(one.at("n").min == 5);
  CHECK(one.at("n").max == 5);
  FeatureSchema dec =
      derive_schema(parse_csv("n\n1.25\n3\n"), {{"n", FeatureKind::numeric}}, {{"n", 2}});
  CHECK(dec.at("n").min == 125);
  CHECK(dec.at("n").max == 300);
  CHECK(code_of([] { derive_schema(parse_csv("n\n"), {{"n", FeatureKind::numeric}}); }) ==
        ErrorCode::schema);
  CHECK(code_of([] { derive_schema(parse_csv("n\nabc\n"), {{"n", FeatureKind::numeric}}); }) ==
        ErrorCode::schema);
  CHECK(code_of([] { derive_schema(parse_csv("n\n1\n"), {{"m", FeatureKind::numeric}}); }) ==
        ErrorCode::unknown_feature);
}

TEST_CASE("validate_instance") {
  FeatureSchema s = adult();
  CHECK_NOTHROW(validate_instance(s, {{"capital_gain", Value::number(6000)}}));
  CHECK(code_of([&] { validate_instance(s, {{"capital_gain", Value::number(100000)}}); }) ==
        ErrorCode::out_of_domain);
  CHECK(code_of([&] { validate_instance(s, {{"marital_status", Value::symbol("single")}}); }) ==
        ErrorCode::out_of_domain);
  CHECK(code_of([&] { validate_instance(s, {{"height", Value::number(1)}}); }) ==
        ErrorCode::unknown_feature);
  CHECK_FALSE(is_total(s, {{"capital_gain", Value::number(6000)}}));
}

TEST_CASE("schema_to_facts") {
  FeatureSchema s({FeatureDef::categorical("sex", {"male", "female"}),
                   FeatureDef::numeric("education_num", 1, 16)});
  CHECK(print_program(schema_to_facts(s)) ==
        "f_domain(sex, male).\n"
        "f_domain(sex, female).\n"
        "education_num(X) :- X #>= 1, X #=< 16.\n");
  CHECK(schema_to_facts(FeatureSchema()).rules().empty());
}

TEST_CASE("schema json round trip and normalization") {
  FeatureSchema s = adult();
  CHECK(s.size() == 6);
  FeatureSchema back = schema_from_json(to_json(s));
  CHECK(back.size() == s.size());
  CHECK(back.at("marital_status").values == s.at("marital_status").values);
  Json j = Json::parse(R"({"features": [{"name": "m", "kind": "categorical",
                            "values": ["Married-civ-spouse", "Divorced"]}]})");
  CHECK(schema_from_json(j).at("m").values ==
        std::vector<std::string>{"married_civ_spouse", "divorced"});
  CHECK(code_of([] { schema_from_json(Json::parse(R"({"features": [{"name": "x"}]})")); }) ==
        ErrorCode::schema);
}

TEST_CASE("instance json accepts strings, numbers and decimal strings") {
  FeatureSchema s = adult();
  Instance i = instance_from_json(
      Json::parse(R"({"marital_status": "Never-married", "capital_gain": "6000", "age": 28})"), s);
  CHECK(i.at("marital_status") == Value::symbol("never_married"));
  CHECK(i.at("capital_gain") == Value::number(6000));
  CHECK(to_json(i, s).dump() == R"({"marital_status":"never_married","capital_gain":6000,"age":28})");
}

TEST_CASE("fixture lookup") {
  CHECK(std::filesystem::exists(find_fixture("adult") / "schema.json"));
  CHECK(code_of([] { find_fixture("no_such_fixture"); }) == ErrorCode::io);
}

TEST_CASE("causal section split keeps line numbers") {
  auto [decision, causal] = split_causal_section("a.\n% causal\nb.\n");
  CHECK(decision == "a.\n\n\n");
  CHECK(causal == "\n% causal\nb.\n");
}

TEST_CASE("domain resizing") {
  Workspace ws = Workspace::load_fixture("adult");
  Workspace small = ws.with_domain_size("marital_status", 2);
  CHECK(small.schema().at("marital_status").values ==
        std::vector<std::string>{"married_civ_spouse", "divorced"});
  Workspace big = ws.with_domain_size("sex", 4);
  CHECK(big.schema().at("sex").values ==
        std::vector<std::string>{"male", "female", "synth_1", "synth_2"});
  CHECK(code_of([&] { ws.with_domain_size("age", 3); }) == ErrorCode::kind_mismatch);
  CHECK(code_of([&] { ws.with_domain_size("sex", 0); }) == ErrorCode::schema);
}

}  // TEST_SUITE
