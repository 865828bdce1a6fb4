#include "recourse/bench.hpp"
#include "recourse/dual.hpp"
#include "recourse/error.hpp"
#include "recourse/json_io.hpp"
#include "recourse/service.hpp"
#include "recourse/workspace.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace recourse;

namespace {

struct Source {
  std::string fixture;
  std::string schema;
  std::string rules;
  std::string instance;
  std::vector<std::string> set;
  bool json = false;

  void add(CLI::App* cmd, bool with_instance) {
    cmd->add_option("-f,--fixture", fixture, "Fixture name (see RECOURSE_FIXTURE_DIR)");
    cmd->add_option("-s,--schema", schema, "Schema JSON file");
    cmd->add_option("-r,--rules", rules, "Rule file");
    if (with_instance) {
      cmd->add_option("-i,--instance", instance, "Instance JSON file");
      cmd->add_option("--set", set, "Feature assignment name=value (repeatable)");
    }
    cmd->add_flag("--json", json, "Print the JSON payload");
  }

  Workspace workspace() const {
    if (!schema.empty() || !rules.empty()) {
      if (schema.empty() || rules.empty()) {
        throw Error(ErrorCode::usage, "--schema and --rules go together");
      }
      return Workspace::load(schema, rules);
    }
    return Workspace::load_fixture(fixture.empty() ? "adult" : fixture);
  }

  // Instance as JSON, taken from -i, --set, or the fixture example.
  Json instance_json(const Workspace& ws) const {
    Json out = Json::object();
    if (!instance.empty()) {
      Json j = Json::parse(read_file(instance));
      out = j.contains("instance") ? j.at("instance") : j;
    } else if (set.empty() && ws.example()) {
      out = ws.example()->value("instance", Json::object());
    }
    for (const auto& kv : set) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) throw Error(ErrorCode::usage, "--set expects name=value: " + kv);
      std::string name = kv.substr(0, eq), value = kv.substr(eq + 1);
      (void)ws.schema().at(name);
      out[name] = value;
    }
    return out;
  }
};

struct Controls {
  std::vector<std::string> immutable, increase, decrease, change;

  void add(CLI::App* cmd) {
    cmd->add_option("--immutable", immutable, "Features that must not change")->delimiter(',');
    cmd->add_option("--must-increase", increase, "Numeric features that must increase")->delimiter(',');
    cmd->add_option("--must-decrease", decrease, "Numeric features that must decrease")->delimiter(',');
    cmd->add_option("--must-change", change, "Categorical features that must change")->delimiter(',');
  }

  Json json() const {
    Json out = Json::object();
    for (const auto& f : immutable) out[f] = "immutable";
    for (const auto& f : increase) out[f] = "must_increase";
    for (const auto& f : decrease) out[f] = "must_decrease";
    for (const auto& f : change) out[f] = "must_change";
    return out;
  }
};

int exit_code(int status) {
  if (status == 200) return 0;
  return status == 422 ? 2 : 1;
}

std::string show(const Value& v, const FeatureDef& f) {
  return v.is_number() ? format_scaled(v.as_number(), f.scale) : v.as_symbol();
}

std::string show_range(const NumericRange& r, int scale) {
  std::string out = "[" + format_scaled(r.lo, scale) + ", " + format_scaled(r.hi, scale) + "]";
  for (Scaled x : r.excluded) out += " \\ " + format_scaled(x, scale);
  return out;
}

std::string controls_text(const std::vector<int>& z) {
  std::string out = "(";
  for (std::size_t i = 0; i < z.size(); ++i) out += (i ? "," : "") + std::to_string(z[i]);
  return out + ")";
}

void print_result(const Workspace& ws, const CfeResult& r, std::size_t index) {
  std::cout << "result " << index << ": cost " << r.cost << ", controls " << controls_text(r.controls)
            << "\n";
  std::cout << "  " << std::left << std::setw(18) << "feature" << std::setw(22) << "factual"
            << std::setw(22) << "counterfactual" << "Z\n";
  for (std::size_t i = 0; i < ws.schema().size(); ++i) {
    const FeatureDef& f = ws.schema().features()[i];
    std::string cf = show(r.counterfactual.at(f.name), f);
    auto it = r.intervals.find(f.name);
    if (it != r.intervals.end() && it->second.lo != it->second.hi) {
      cf += " " + show_range(it->second, f.scale);
    }
    std::cout << "  " << std::setw(18) << f.name << std::setw(22) << show(r.factual.at(f.name), f)
              << std::setw(22) << cf << r.controls[i] << "\n";
  }
  std::cout << std::right;
}

Json results_payload(const Workspace& ws, const std::vector<CfeResult>& results) {
  Json arr = Json::array();
  for (const auto& r : results) arr.push_back(to_json(r, ws.schema()));
  Json out;
  out["results"] = std::move(arr);
  return out;
}

std::vector<PredKey> defined_predicates(const Program& p) {
  std::vector<PredKey> out;
  for (const auto& r : p.rules()) {
    if (r.head_kind != HeadKind::atom) continue;
    PredKey key{r.head.pred, r.head.arity()};
    if (p.abducible(key)) continue;
    if (std::find(out.begin(), out.end(), key) == out.end()) out.push_back(key);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Counterfactual explanations for rule-based classifiers"};
  app.require_subcommand(1);

  Source src;
  Controls controls;
  int cost = 0;
  std::size_t limit = 64;
  std::string pred, csv;
  std::vector<std::string> numeric_cols, categorical_cols, precision;
  std::string feature;
  std::vector<std::size_t> sizes;
  std::size_t reps = 5;
  ServeOptions serve_opts;

  auto* classify_cmd = app.add_subcommand("classify", "Classify an instance and justify the label");
  src.add(classify_cmd, true);

  auto* explain_cmd = app.add_subcommand("explain", "Counterfactual explanations for an instance");
  src.add(explain_cmd, true);
  controls.add(explain_cmd);
  explain_cmd->add_option("--cost", cost, "Exact intervention cost");
  explain_cmd->add_option("--limit", limit, "Maximum results, 0 for no limit");

  auto* interp_cmd = app.add_subcommand("interpolant", "Minimal-cost interventions");
  src.add(interp_cmd, true);
  controls.add(interp_cmd);

  auto* enum_cmd = app.add_subcommand("enumerate", "All transitions to the desired label");
  src.add(enum_cmd, false);
  controls.add(enum_cmd);
  enum_cmd->add_option("--limit", limit, "Maximum results, 0 for no limit");

  auto* dual_cmd = app.add_subcommand("dualize", "Print dual rules for a rule file");
  dual_cmd->add_option("-r,--rules", src.rules, "Rule file")->required();
  dual_cmd->add_option("-p,--pred", pred, "Only this predicate, as name/arity");

  auto* check_cmd = app.add_subcommand("check", "Analyze a workspace");
  src.add(check_cmd, false);

  auto* bench_cmd = app.add_subcommand("bench", "Timing experiments");
  bench_cmd->require_subcommand(1);
  auto* bench_domain = bench_cmd->add_subcommand("domain", "Time versus domain size");
  bench_domain->add_option("-f,--fixture", src.fixture, "Fixture name")->default_val("adult");
  bench_domain->add_option("--feature", feature, "Categorical feature to resize");
  bench_domain->add_option("--sizes", sizes, "Domain sizes")->delimiter(',');
  bench_domain->add_option("--reps", reps, "Timed repetitions")->default_val(5);
  bench_domain->add_flag("--json", src.json, "JSON lines output");
  auto* bench_causal = bench_cmd->add_subcommand("causal", "Non-causal versus causal configuration");
  bench_causal->add_option("--reps", reps, "Timed repetitions")->default_val(5);
  bench_causal->add_flag("--json", src.json, "JSON lines output");

  auto* serve_cmd = app.add_subcommand("serve", "Run the JSON service");
  src.add(serve_cmd, false);
  serve_cmd->add_option("--host", serve_opts.host, "Bind address");
  serve_cmd->add_option("--port", serve_opts.port, "Port");
  serve_cmd->add_option("--max-concurrent", serve_opts.max_concurrent, "Concurrent evaluations");

  auto* derive_cmd = app.add_subcommand("derive-schema", "Derive a schema from a CSV file");
  derive_cmd->add_option("--csv", csv, "CSV file with a header row")->required();
  derive_cmd->add_option("--numeric", numeric_cols, "Numeric columns")->delimiter(',');
  derive_cmd->add_option("--categorical", categorical_cols, "Categorical columns")->delimiter(',');
  derive_cmd->add_option("--precision", precision, "Decimal digits as column=digits")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*classify_cmd || *explain_cmd || *interp_cmd) {
      Workspace ws = src.workspace();
      Json body;
      body["instance"] = src.instance_json(ws);
      std::string path = "/api/classify";
      if (*explain_cmd || *interp_cmd) {
        body["controls"] = controls.json();
        bool from_example = src.instance.empty() && src.set.empty() && ws.example();
        if (body["controls"].empty() && from_example && ws.example()->contains("controls")) {
          body["controls"] = ws.example()->at("controls");
        }
      }
      if (*explain_cmd) {
        path = "/api/explain";
        if (cost > 0) body["cost"] = cost;
      }
      if (*interp_cmd) path = "/api/interpolant";

      if (*explain_cmd && limit == 0) {
        Instance inst = instance_from_json(body["instance"], ws.schema());
        auto results = counterfactuals(ws.model(), inst, controls_from_json(body["controls"]),
                                       cost > 0 ? std::optional<int>(cost) : std::nullopt);
        if (src.json) {
          std::cout << results_payload(ws, results).dump() << "\n";
        } else {
          for (std::size_t i = 0; i < results.size(); ++i) print_result(ws, results[i], i + 1);
        }
        return 0;
      }
      if (*explain_cmd) body["limit"] = limit;

      Response res = handle(ws, Request{"POST", path, body.dump()});
      if (src.json || res.status != 200) {
        (res.status == 200 ? std::cout : std::cerr) << res.body << "\n";
        return exit_code(res.status);
      }
      Instance inst = instance_from_json(body["instance"], ws.schema());
      if (*classify_cmd) {
        Classification c = classify(ws.model(), inst);
        std::cout << "label: " << c.label << "\n" << render_text(c.justification);
      } else if (*explain_cmd) {
        auto results = counterfactuals(ws.model(), inst, controls_from_json(body["controls"]),
                                       cost > 0 ? std::optional<int>(cost) : std::nullopt, limit);
        if (results.empty()) std::cout << "no counterfactual\n";
        for (std::size_t i = 0; i < results.size(); ++i) print_result(ws, results[i], i + 1);
      } else {
        auto r = craig_interpolant(ws.model(), inst, controls_from_json(body["controls"]));
        for (int k : r.empty_levels) std::cout << "X=" << k << ": no model\n";
        if (r.no_recourse) {
          std::cout << "no recourse\n";
        } else {
          std::cout << "X* = " << r.cost << "\n";
          for (std::size_t i = 0; i < r.results.size(); ++i) print_result(ws, r.results[i], i + 1);
        }
      }
      return 0;
    }

    if (*enum_cmd) {
      Workspace ws = src.workspace();
      auto lim = limit == 0 ? std::nullopt : std::optional<std::size_t>(limit);
      auto results = enumerate_transitions(ws.model(), lim, controls_from_json(controls.json()));
      if (src.json) {
        std::cout << results_payload(ws, results).dump() << "\n";
      } else {
        for (std::size_t i = 0; i < results.size(); ++i) print_result(ws, results[i], i + 1);
      }
      return 0;
    }

    if (*dual_cmd) {
      Program p = parse_program(read_file(src.rules));
      std::vector<Rule> duals;
      std::vector<PredKey> keys;
      if (!pred.empty()) {
        auto slash = pred.rfind('/');
        if (slash == std::string::npos) throw Error(ErrorCode::usage, "--pred expects name/arity");
        keys.push_back({pred.substr(0, slash), std::stoul(pred.substr(slash + 1))});
      } else {
        keys = defined_predicates(p);
      }
      for (const auto& k : keys) {
        for (auto& r : dualize_predicate(p, k)) duals.push_back(std::move(r));
      }
      std::cout << print_program(Program(std::move(duals)));
      return 0;
    }

    if (*check_cmd) {
      Workspace ws = src.workspace();
      std::cout << ws.analysis().str() << "causal:\n" << ws.totality().str();
      return 0;
    }

    if (*bench_domain) {
      Workspace ws = Workspace::load_fixture(src.fixture);
      auto dir = find_fixture(src.fixture);
      Json spec = Json::parse(read_file(dir / "bench.json"));
      if (feature.empty()) feature = spec.at("feature").get<std::string>();
      if (sizes.empty()) sizes = spec.at("sizes").get<std::vector<std::size_t>>();
      BenchCase bench = load_bench_case(ws, dir / "bench.json");
      auto report = run_domain_scaling(ws, bench, feature, sizes, reps);
      std::cout << (src.json ? report.json_lines() : report.table());
      return 0;
    }

    if (*bench_causal) {
      Workspace small = Workspace::load_fixture("adult_noncausal");
      Workspace full = Workspace::load_fixture("adult");
      BenchCase small_case = load_bench_case(small, find_fixture("adult_noncausal") / "instance.json");
      BenchCase full_case = load_bench_case(full, find_fixture("adult") / "bench.json");
      auto report = run_causal_comparison(small, small_case, full, full_case, reps);
      std::cout << (src.json ? report.json_lines() : report.table());
      return 0;
    }

    if (*serve_cmd) {
      Workspace ws = src.workspace();
      Server server(ws, serve_opts);
      std::cerr << "serving " << ws.name() << " on " << serve_opts.host << ":" << serve_opts.port
                << "\n";
      server.run();
      return 0;
    }

    if (*derive_cmd) {
      std::map<std::string, FeatureKind> kinds;
      std::vector<std::string> order;
      for (const auto& c : numeric_cols) kinds[c] = FeatureKind::numeric;
      for (const auto& c : categorical_cols) kinds[c] = FeatureKind::categorical;
      std::map<std::string, int> digits;
      for (const auto& p : precision) {
        auto eq = p.find('=');
        if (eq == std::string::npos) throw Error(ErrorCode::usage, "--precision expects column=digits");
        digits[p.substr(0, eq)] = std::stoi(p.substr(eq + 1));
      }
      CsvTable table = parse_csv(read_file(csv));
      for (const auto& h : table.header) {
        if (kinds.contains(h)) order.push_back(h);
      }
      for (const auto& [name, kind] : kinds) {
        if (std::find(order.begin(), order.end(), name) == order.end()) order.push_back(name);
      }
      std::cout << to_json(derive_schema(table, kinds, digits, order)).dump(2) << "\n";
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return e.code() == ErrorCode::usage ? 2 : 1;
  } catch (const Json::exception& e) {
    std::cerr << "error (io): " << e.what() << "\n";
    return 1;
  }
  return 0;
}
