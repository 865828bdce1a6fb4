#pragma once

#include "recourse/causal.hpp"
#include "recourse/cfe.hpp"
#include "recourse/json_io.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <utility>

namespace recourse {

/// Rule text split at the `% causal` header line. Both parts keep the
/// original line numbering (the other part's lines are blanked).
std::pair<std::string, std::string> split_causal_section(std::string_view text);

/// Directories searched for named fixtures: RECOURSE_FIXTURE_DIR
/// (colon-separated) first, then the built-in fixture directory.
std::vector<std::filesystem::path> fixture_path();
std::filesystem::path find_fixture(std::string_view name);

std::string read_file(const std::filesystem::path& path);

/// A loaded fixture: schema, decision rules, causal rules and the model built
/// from them. Immutable and shareable once loaded.
class Workspace {
 public:
  static Workspace from_text(std::string name, std::string_view schema_json,
                             std::string_view rules_text);
  static Workspace load(const std::filesystem::path& schema_file,
                        const std::filesystem::path& rules_file);
  static Workspace load_fixture(std::string_view name);

  const std::string& name() const { return name_; }
  const FeatureSchema& schema() const { return model_->schema(); }
  const Model& model() const { return *model_; }
  const Program& rules() const { return rules_; }
  const AnalysisReport& analysis() const { return analysis_; }
  const TotalityReport& totality() const { return totality_; }

  /// Sample instance and controls shipped with the fixture, if any.
  const std::optional<Json>& example() const { return example_; }
  void set_example(Json example) { example_ = std::move(example); }

  /// Same workspace with a categorical feature cut to its first `size` values,
  /// padded with synth_1, synth_2, ... when the domain is shorter.
  Workspace with_domain_size(const std::string& feature, std::size_t size) const;

 private:
  Workspace() = default;
  static Workspace build(std::string name, FeatureSchema schema, Program rules, Decision decision,
                         CausalRuleSet causal);

  std::string name_;
  Program rules_;
  AnalysisReport analysis_;
  TotalityReport totality_;
  std::optional<Json> example_;
  std::shared_ptr<const Model> model_;
};

}  // namespace recourse
