#include "suites.hpp"

#include <doctest.h>

#include <iostream>

namespace {

void report(const char* name, const toy::SuiteReport& r) {
  MESSAGE(std::string(name) << ": " << r.cases << " cases, " << r.checks << " checks, " << r.violations
                << " violations, " << r.skipped << " skipped");
  if (!r.first_failure.empty()) std::cerr << r.first_failure << "\n";
}

}  // namespace

TEST_CASE("duality on ground atoms and open queries") {
  auto r = toy::duality_suite(11, 300, true);
  report("duality", r);
  CHECK(r.cases == 300);
  CHECK(r.violations == 0);
}

TEST_CASE("parse and print round trip") {
  auto r = toy::roundtrip_suite(12, 1000, FIXTURES_DIR);
  report("round trip", r);
  CHECK(r.cases >= 1000);
  CHECK(r.violations == 0);
}

TEST_CASE("interpolant minimality against exhaustive search") {
  auto r = toy::minimality_suite(13, 200);
  report("minimality", r);
  CHECK(r.cases >= 150);
  CHECK(r.violations == 0);
}
