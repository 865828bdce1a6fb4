#include "recourse/error.hpp"
#include "recourse/store.hpp"

#include <doctest.h>

using namespace recourse;

namespace {

Operand num(Scaled n) { return Operand::constant(Value::number(n)); }
Operand sym(const char* s) { return Operand::constant(Value::symbol(s)); }
Operand var(VarId id) { return Operand::var(id); }

const std::vector<std::string> kMarital{"married_civ_spouse", "divorced", "never_married",
                                        "separated", "widowed"};

}  // namespace

TEST_SUITE("store") {

TEST_CASE("interval intersection of the decision thresholds") {
  ConstraintStore s;
  VarId g = s.new_numeric(0, 99999);
  auto r = s.add(var(g), CmpOp::le, num(6849));
  REQUIRE(r);
  r = r->add(var(g), CmpOp::gt, num(5013));
  REQUIRE(r);
  CHECK(r->numeric_range(g) == NumericRange{5014, 6849, {}});
  CHECK(r->describe(g) == "5014..6849");
  CHECK(s.numeric_range(g) == NumericRange{0, 99999, {}});  // add is pure
}

TEST_CASE("empty intersection") {
  ConstraintStore s;
  VarId e = s.new_numeric(1, 16);
  auto r = s.add(var(e), CmpOp::gt, num(12));
  REQUIRE(r);
  CHECK_FALSE(r->add(var(e), CmpOp::le, num(12)));
}

TEST_CASE("exclusions narrow a categorical domain to a binding") {
  ConstraintStore s;
  VarId rel = s.new_categorical({"husband", "wife", "unmarried"});
  REQUIRE(s.post(var(rel), CmpOp::ne, sym("husband")));
  CHECK_FALSE(s.is_bound(rel));
  REQUIRE(s.post(var(rel), CmpOp::ne, sym("wife")));
  CHECK(s.value(rel) == Value::symbol("unmarried"));
  CHECK_FALSE(s.add(var(rel), CmpOp::ne, sym("unmarried")));
}

TEST_CASE("witnesses") {
  ConstraintStore s;
  VarId g = s.new_numeric(0, 99999);
  REQUIRE(s.post(var(g), CmpOp::gt, num(6849)));
  CHECK(s.witness(g) == Value::number(6850));
  VarId age = s.new_numeric(17, 90);
  CHECK(s.witness(age) == Value::number(17));
  VarId m = s.new_categorical(kMarital);
  REQUIRE(s.post(var(m), CmpOp::ne, sym("married_civ_spouse")));
  CHECK(s.witness(m) == Value::symbol("divorced"));
  VarId m2 = s.new_categorical(kMarital);
  REQUIRE(s.post(var(m2), CmpOp::ne, sym("divorced")));
  CHECK(s.witness(m2) == Value::symbol("married_civ_spouse"));
}

TEST_CASE("excluded points") {
  ConstraintStore s;
  VarId x = s.new_numeric(0, 5);
  REQUIRE(s.post(var(x), CmpOp::ne, num(0)));
  CHECK(s.numeric_range(x).lo == 1);
  REQUIRE(s.post(var(x), CmpOp::ne, num(3)));
  CHECK(s.numeric_range(x) == NumericRange{1, 5, {3}});
  REQUIRE(s.post(var(x), CmpOp::le, num(4)));
  CHECK(s.feasible_size(x) == 3);
  CHECK(s.describe(x) == "1..4 \\ {3}");
}

TEST_CASE("equality classes share constraints") {
  ConstraintStore s;
  VarId a = s.new_numeric(0, 10);
  VarId b = s.new_numeric(5, 20);
  REQUIRE(s.post(var(a), CmpOp::eq, var(b)));
  CHECK(s.find(a) == s.find(b));
  CHECK(s.numeric_range(b) == NumericRange{5, 10, {}});
  REQUIRE(s.post(var(a), CmpOp::eq, num(7)));
  CHECK(s.value(b) == Value::number(7));
}

TEST_CASE("suspended disequality between unbound categorical variables") {
  ConstraintStore s;
  VarId p = s.new_categorical({"male", "female"});
  VarId q = s.new_categorical({"male", "female"});
  REQUIRE(s.post(var(p), CmpOp::ne, var(q)));
  CHECK(s.relations().size() == 1);
  REQUIRE(s.post(var(p), CmpOp::eq, sym("male")));
  CHECK(s.value(q) == Value::symbol("female"));
  CHECK_FALSE(s.add(var(q), CmpOp::eq, sym("male")));
}

TEST_CASE("suspended ordering propagates bounds") {
  ConstraintStore s;
  VarId p = s.new_numeric(0, 10);
  VarId q = s.new_numeric(0, 10);
  REQUIRE(s.post(var(q), CmpOp::gt, var(p)));
  CHECK(s.numeric_range(q).lo == 1);
  CHECK(s.numeric_range(p).hi == 9);
  REQUIRE(s.post(var(p), CmpOp::ge, num(4)));
  CHECK(s.numeric_range(q).lo == 5);
  auto w = s.witness_all(std::vector<VarId>{p, q});
  REQUIRE(w);
  CHECK((*w)[0] == Value::number(4));
  CHECK((*w)[1] == Value::number(5));
}

TEST_CASE("joint witnesses respect disequalities") {
  ConstraintStore s;
  VarId p = s.new_categorical({"a", "b"});
  VarId q = s.new_categorical({"a", "b"});
  REQUIRE(s.post(var(p), CmpOp::ne, var(q)));
  auto w = s.witness_all(std::vector<VarId>{p, q});
  REQUIRE(w);
  CHECK((*w)[0] == Value::symbol("a"));
  CHECK((*w)[1] == Value::symbol("b"));
}

TEST_CASE("errors") {
  ConstraintStore s;
  VarId c = s.new_categorical({"a", "b"});
  CHECK_THROWS_AS(s.add(var(c), CmpOp::lt, num(3)), Error);
  VarId x = s.new_var();
  try {
    s.add(var(x), CmpOp::le, num(kScaledLimit * 2));
    FAIL("expected store_overflow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::store_overflow);
  }
  CHECK_THROWS_AS(s.witness(x), Error);
}

TEST_CASE("monotonicity along a derivation") {
  ConstraintStore s;
  VarId x = s.new_numeric(0, 100);
  std::uint64_t last = s.feasible_size(x);
  const std::pair<CmpOp, Scaled> steps[] = {
      {CmpOp::ge, 10}, {CmpOp::ne, 50}, {CmpOp::lt, 90}, {CmpOp::le, 95}, {CmpOp::ne, 12}};
  for (auto [op, c] : steps) {
    REQUIRE(s.post(var(x), op, num(c)));
    CHECK(s.feasible_size(x) <= last);
    last = s.feasible_size(x);
  }
  CHECK(last == 78);
}

}  // TEST_SUITE
