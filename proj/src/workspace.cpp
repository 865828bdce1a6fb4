#include "recourse/workspace.hpp"

#include "recourse/error.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#ifndef RECOURSE_DEFAULT_FIXTURES
#define RECOURSE_DEFAULT_FIXTURES "fixtures"
#endif

namespace recourse {

namespace {

bool is_causal_header(std::string_view line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
    line.remove_suffix(1);
  }
  while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
  return line == "% causal";
}

}  // namespace

std::pair<std::string, std::string> split_causal_section(std::string_view text) {
  std::string rules, causal;
  bool in_causal = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    bool last = end == std::string_view::npos;
    std::string_view line = text.substr(pos, last ? std::string_view::npos : end - pos);
    if (is_causal_header(line)) in_causal = true;
    (in_causal ? causal : rules) += line;
    if (!last) {
      rules += '\n';
      causal += '\n';
    }
    if (last) break;
    pos = end + 1;
  }
  return {rules, causal};
}

std::vector<std::filesystem::path> fixture_path() {
  std::vector<std::filesystem::path> out;
  if (const char* env = std::getenv("RECOURSE_FIXTURE_DIR")) {
    std::stringstream ss(env);
    std::string dir;
    while (std::getline(ss, dir, ':')) {
      if (!dir.empty()) out.emplace_back(dir);
    }
  }
  out.emplace_back(RECOURSE_DEFAULT_FIXTURES);
  return out;
}

std::filesystem::path find_fixture(std::string_view name) {
  for (const auto& dir : fixture_path()) {
    auto candidate = dir / std::string(name);
    if (std::filesystem::is_directory(candidate)) return candidate;
  }
  throw Error(ErrorCode::io, "fixture '" + std::string(name) + "' not found");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Workspace Workspace::build(std::string name, FeatureSchema schema, Program rules, Decision decision,
                           CausalRuleSet causal) {
  Workspace ws;
  ws.name_ = std::move(name);
  ws.rules_ = rules;
  ws.model_ = std::make_shared<const Model>(std::move(schema), std::move(rules), std::move(decision),
                                            std::move(causal));
  ws.analysis_ = check_program(ws.model_->program(), ws.model_->schema());
  ws.totality_ = check_totality(ws.model_->causal(), ws.model_->schema());
  return ws;
}

Workspace Workspace::from_text(std::string name, std::string_view schema_json,
                               std::string_view rules_text) {
  Json j;
  try {
    j = Json::parse(schema_json);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::schema, std::string("schema is not valid JSON: ") + e.what());
  }
  FeatureSchema schema = schema_from_json(j);
  if (!j.contains("decision")) throw Error(ErrorCode::schema, "schema has no decision entry");
  Decision decision = decision_from_json(j.at("decision"));

  ParseOptions opts;
  opts.scale = schema.numeric_scale();
  auto [rule_text, causal_text] = split_causal_section(rules_text);
  Program rules = parse_program(rule_text, opts);
  CausalRuleSet causal;
  causal.rules = parse_program(causal_text, opts);
  causal.predicates = causal_from_json(j.value("causal", Json()));
  for (const auto& cp : causal.predicates) {
    if (!causal.rules.defines({cp.predicate, cp.features.size()})) {
      throw Error(ErrorCode::arity_mismatch, "causal predicate " + cp.predicate + "/" +
                                                 std::to_string(cp.features.size()) +
                                                 " has no clauses in the causal section");
    }
  }
  Workspace ws = build(std::move(name), std::move(schema), std::move(rules), std::move(decision),
                       std::move(causal));
  return ws;
}

Workspace Workspace::load(const std::filesystem::path& schema_file,
                          const std::filesystem::path& rules_file) {
  std::string name = schema_file.parent_path().filename().string();
  Workspace ws = from_text(name, read_file(schema_file), read_file(rules_file));
  auto example = schema_file.parent_path() / "instance.json";
  if (std::filesystem::exists(example)) {
    try {
      ws.example_ = Json::parse(read_file(example));
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::io, example.string() + ": " + e.what());
    }
  }
  return ws;
}

Workspace Workspace::load_fixture(std::string_view name) {
  auto dir = find_fixture(name);
  return load(dir / "schema.json", dir / "rules.lp");
}

Workspace Workspace::with_domain_size(const std::string& feature, std::size_t size) const {
  if (size == 0) throw Error(ErrorCode::schema, "domain size must be at least 1");
  const FeatureDef& target = schema().at(feature);
  if (!target.is_categorical()) {
    throw Error(ErrorCode::kind_mismatch, feature + " is not categorical");
  }
  std::vector<FeatureDef> defs(schema().features().begin(), schema().features().end());
  for (auto& f : defs) {
    if (f.name != feature) continue;
    std::vector<std::string> values(f.values.begin(),
                                    f.values.begin() + static_cast<std::ptrdiff_t>(
                                                           std::min(size, f.values.size())));
    for (std::size_t k = 1; values.size() < size; ++k) values.push_back("synth_" + std::to_string(k));
    f = FeatureDef::categorical(f.name, std::move(values));
  }
  Workspace ws = build(name_ + "@" + feature + "=" + std::to_string(size), FeatureSchema(defs),
                       rules_, model().decision(), model().causal());
  ws.example_ = example_;
  return ws;
}

}  // namespace recourse
