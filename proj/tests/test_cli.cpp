#include "recourse/service.hpp"
#include "recourse/workspace.hpp"

#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sys/wait.h>

using namespace recourse;

namespace {

struct Run {
  int status;
  std::string out;
};

Run cli(const std::string& args) {
  std::string cmd = std::string(RECOURSE_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  int rc = pclose(pipe);
  return {WIFEXITED(rc) ? WEXITSTATUS(rc) : -1, out};
}

const char* kSet =
    "--set marital_status=never_married --set capital_gain=6000 --set education_num=4 "
    "--set relationship=not_in_family --set sex=male --set age=28";

std::string trim(std::string s) {
  while (!s.empty() && s.back() == '\n') s.pop_back();
  return s;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("classify prints the label and the tree") {
  Run r = cli(std::string("classify -f adult ") + kSet);
  CHECK(r.status == 0);
  CHECK(r.out.find("label: <=50K") != std::string::npos);
  CHECK(r.out.find("6000 #=< 6849 ← constraint-satisfied") != std::string::npos);
}

TEST_CASE("interpolant with locked features") {
  Run r = cli(std::string("interpolant -f adult --immutable capital_gain,education_num ") + kSet);
  CHECK(r.status == 0);
  CHECK(r.out.find("X=1: no model") != std::string::npos);
  CHECK(r.out.find("X* = 2") != std::string::npos);
  CHECK(r.out.find("controls (1,0,0,1,0,0)") != std::string::npos);
}

TEST_CASE("fixture example is the default instance") {
  Run r = cli("interpolant -f adult");
  CHECK(r.status == 0);
  CHECK(r.out.find("X* = 2") != std::string::npos);
}

TEST_CASE("schema, rules and instance files") {
  std::string dir = std::string(FIXTURES_DIR) + "/adult/";
  Run r = cli("classify -s " + dir + "schema.json -r " + dir + "rules.lp -i " + dir + "instance.json");
  CHECK(r.status == 0);
  CHECK(r.out.find("label: <=50K") != std::string::npos);
}

TEST_CASE("json output is byte-identical to the service") {
  Workspace ws = Workspace::load_fixture("adult");
  Json req;
  req["instance"] = Json::parse(R"({"marital_status": "never_married", "capital_gain": "6000",
      "education_num": "4", "relationship": "not_in_family", "sex": "male", "age": "28"})");
  req["controls"] = Json::parse(R"({"capital_gain": "immutable", "education_num": "immutable"})");
  Response direct = handle(ws, {"POST", "/api/interpolant", req.dump()});
  Run r = cli(std::string("interpolant --json -f adult --immutable capital_gain,education_num ") + kSet);
  CHECK(r.status == 0);
  CHECK(trim(r.out) == direct.body);

  Response cls = handle(ws, {"POST", "/api/classify", R"({"instance": )" + req["instance"].dump() + "}"});
  CHECK(trim(cli(std::string("classify --json -f adult ") + kSet).out) == cls.body);

  Json ex = req;
  ex["controls"] = Json::object();
  ex["limit"] = 7;
  Response explain = handle(ws, {"POST", "/api/explain", ex.dump()});
  CHECK(trim(cli(std::string("explain --json --limit 7 -f adult ") + kSet).out) == explain.body);
}

TEST_CASE("dualize prints the dual listing") {
  Run r = cli(std::string("dualize -r ") + FIXTURES_DIR + "/programs/lite_le_50K.lp");
  CHECK(r.status == 0);
  CHECK(r.out ==
        "not lite_le_50K(Var0, Var1, Var2) :- not o_lite_le_50K_1(Var0, Var1, Var2), "
        "not o_lite_le_50K_2(Var0, Var1, Var2).\n"
        "not o_lite_le_50K_1(Var0, Var1, Var2) :- Var0 = married_civ_spouse.\n"
        "not o_lite_le_50K_1(Var0, Var1, Var2) :- Var0 \\= married_civ_spouse, Var1 #> 6849.\n"
        "not o_lite_le_50K_2(Var0, Var1, Var2) :- Var0 \\= married_civ_spouse.\n"
        "not o_lite_le_50K_2(Var0, Var1, Var2) :- Var0 = married_civ_spouse, Var1 #> 5013.\n"
        "not o_lite_le_50K_2(Var0, Var1, Var2) :- Var0 = married_civ_spouse, Var1 #=< 5013, "
        "Var2 #> 12.\n");
  Run one = cli(std::string("dualize -p lite_le_50K/3 -r ") + FIXTURES_DIR + "/programs/lite_le_50K.lp");
  CHECK(one.out == r.out);
}

TEST_CASE("exit codes") {
  Run desired = cli(
      "explain -f adult --set marital_status=married_civ_spouse --set capital_gain=5500 "
      "--set education_num=13 --set relationship=husband --set sex=male --set age=40");
  CHECK(desired.status == 1);
  CHECK(cli("explain -f adult --set colour=red").status == 1);
  CHECK(cli("frobnicate").status == 2);
  CHECK(cli("explain --no-such-flag").status == 2);
  CHECK(cli("classify -s only_schema.json").status == 2);
  CHECK(cli("--help").status == 0);
}

TEST_CASE("enumerate and explain limits") {
  Run r = cli("enumerate -f adult --limit 3");
  CHECK(r.status == 0);
  CHECK(r.out.find("result 3:") != std::string::npos);
  CHECK(r.out.find("result 4:") == std::string::npos);
  Run all = cli(std::string("explain --limit 0 --json -f adult ") + kSet);
  CHECK(all.status == 0);
  CHECK(Json::parse(all.out)["results"].size() > 64);
}

TEST_CASE("check and derive-schema") {
  Run c = cli("check -f adult");
  CHECK(c.status == 0);
  CHECK(c.out.find("abducibles:") != std::string::npos);
  CHECK(c.out.find("constraint_ms_reln_age") != std::string::npos);

  std::string csv = "/tmp/recourse_cli_test.csv";
  std::ofstream(csv) << "age,sex\n39,male\n17,female\n";
  Run d = cli("derive-schema --csv " + csv + " --numeric age --categorical sex");
  CHECK(d.status == 0);
  Json j = Json::parse(d.out);
  CHECK(j["features"][0]["name"] == "age");
  CHECK(j["features"][0]["min"] == 17);
  CHECK(j["features"][1]["values"] == Json::array({"male", "female"}));
}

TEST_CASE("bench subcommands") {
  Run r = cli("bench domain -f adult --sizes 2,3 --reps 1 --json");
  CHECK(r.status == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 2);
  Run c = cli("bench causal --reps 1");
  CHECK(c.status == 0);
  CHECK(c.out.find("non-causal") != std::string::npos);
}

}  // TEST_SUITE
