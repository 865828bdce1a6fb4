#pragma once

#include "recourse/workspace.hpp"

#include <string>
#include <vector>

namespace recourse {

struct BenchRow {
  std::string fixture;
  std::string feature;     // scaled feature, or the configuration label
  std::size_t domain_size = 0;
  std::size_t features = 0;
  std::size_t categorical = 0;  // categorical features generating worlds
  std::size_t reps = 0;
  std::size_t inner = 1;        // evaluations per timed sample
  double mean_ms = 0;           // per evaluation
  double stddev_ms = 0;
  std::vector<double> samples_ms;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::string version;
  std::string timestamp;

  /// Fewer than five repetitions in some row.
  bool low_confidence() const;
  std::string table() const;
  std::string json_lines() const;
};

struct BenchCase {
  Instance factual;
  ControlSpec controls;
};

/// Reads `bench.json` (or `instance.json`) from a fixture directory.
BenchCase load_bench_case(const Workspace& ws, const std::filesystem::path& file);

/// Times craig_interpolant on a fixed instance while the feature's domain is
/// cut or padded to each size.
BenchReport run_domain_scaling(const Workspace& ws, const BenchCase& bench,
                               const std::string& feature, const std::vector<std::size_t>& sizes,
                               std::size_t reps);

/// Times the same query on a decision-only configuration and on the full
/// causal one.
BenchReport run_causal_comparison(const Workspace& noncausal, const BenchCase& noncausal_case,
                                  const Workspace& causal, const BenchCase& causal_case,
                                  std::size_t reps);

}  // namespace recourse
