#include "recourse/bench.hpp"
#include "recourse/error.hpp"

#include <doctest.h>

using namespace recourse;

namespace {

const Workspace& adult() {
  static const Workspace ws = Workspace::load_fixture("adult");
  return ws;
}

BenchCase adult_case() { return load_bench_case(adult(), find_fixture("adult") / "bench.json"); }

}  // namespace

TEST_SUITE("bench") {

TEST_CASE("bench case loading") {
  BenchCase c = adult_case();
  CHECK(c.factual.at("marital_status") == Value::symbol("divorced"));
  CHECK(c.controls.at("capital_gain") == Control::immutable);
}

TEST_CASE("single size gives one row") {
  BenchReport r = run_domain_scaling(adult(), adult_case(), "marital_status", {3}, 1);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].domain_size == 3);
  CHECK(r.rows[0].samples_ms.size() == 1);
  CHECK(r.rows[0].mean_ms > 0);
  CHECK(r.low_confidence());
  CHECK(r.table().find("low confidence") != std::string::npos);
}

TEST_CASE("report formats") {
  BenchReport r = run_domain_scaling(adult(), adult_case(), "marital_status", {2, 3}, 5);
  CHECK_FALSE(r.low_confidence());
  CHECK(r.rows.size() == 2);
  for (const auto& row : r.rows) {
    CHECK(row.samples_ms.size() == 5);
    CHECK(row.stddev_ms >= 0);
  }
  std::string lines = r.json_lines();
  CHECK(std::count(lines.begin(), lines.end(), '\n') == 2);
  Json first = Json::parse(lines.substr(0, lines.find('\n')));
  CHECK(first["domain_size"] == 2);
  CHECK(first["samples_ms"].size() == 5);
  CHECK(first["version"] == r.version);
}

TEST_CASE("causal comparison rows") {
  Workspace plain = Workspace::load_fixture("adult_noncausal");
  BenchCase pc = load_bench_case(plain, find_fixture("adult_noncausal") / "instance.json");
  BenchReport r = run_causal_comparison(plain, pc, adult(), adult_case(), 1);
  REQUIRE(r.rows.size() == 2);
  CHECK(r.rows[0].feature == "non-causal");
  CHECK(r.rows[0].categorical == 1);
  CHECK(r.rows[1].feature == "causal");
  CHECK(r.rows[1].categorical == 3);
  CHECK(r.low_confidence());
}

TEST_CASE("identical configurations time alike") {
  BenchReport r = run_causal_comparison(adult(), adult_case(), adult(), adult_case(), 5);
  double ratio = r.rows[1].mean_ms / r.rows[0].mean_ms;
  // Loose: same workload on both sides, shared machine noise.
  CHECK(ratio > 0.5);
  CHECK(ratio < 2.0);
}

TEST_CASE("invalid arguments") {
  CHECK_THROWS_AS(run_domain_scaling(adult(), adult_case(), "marital_status", {2}, 0), Error);
  CHECK_THROWS_AS(run_domain_scaling(adult(), adult_case(), "age", {2}, 1), Error);
}

}  // TEST_SUITE
