#include "recourse/bench.hpp"

#include "recourse/error.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <numeric>
#include <sstream>

namespace recourse {

namespace {

constexpr const char* kVersion = "recourse 0.1.0";
constexpr double kMinSampleMs = 20.0;

using Clock = std::chrono::steady_clock;

double time_once(const Workspace& ws, const BenchCase& bench, std::size_t inner) {
  auto start = Clock::now();
  for (std::size_t i = 0; i < inner; ++i) {
    auto r = craig_interpolant(ws.model(), bench.factual, bench.controls);
    if (r.no_recourse && r.empty_levels.empty()) {
      throw Error(ErrorCode::internal, "bench instance has no mutable feature");
    }
  }
  std::chrono::duration<double, std::milli> d = Clock::now() - start;
  return d.count();
}

struct Config {
  const Workspace* ws;
  const BenchCase* bench;
};

// Calibrates each configuration, then samples them round-robin so drift in
// machine load spreads evenly across rows.
std::vector<BenchRow> measure(const std::vector<Config>& configs, std::size_t reps) {
  std::vector<BenchRow> rows(configs.size());
  for (std::size_t c = 0; c < configs.size(); ++c) {
    const auto& [ws, bench] = configs[c];
    BenchRow& row = rows[c];
    row.fixture = ws->name();
    row.features = ws->schema().size();
    for (const auto& f : ws->schema().features()) row.categorical += f.is_categorical();
    time_once(*ws, *bench, 1);  // warm-up
    double single = time_once(*ws, *bench, 1);
    row.inner = single >= kMinSampleMs
                    ? 1
                    : static_cast<std::size_t>(std::ceil(kMinSampleMs / std::max(single, 0.01)));
    row.reps = reps;
  }
  for (std::size_t r = 0; r < reps; ++r) {
    for (std::size_t c = 0; c < configs.size(); ++c) {
      BenchRow& row = rows[c];
      double ms = time_once(*configs[c].ws, *configs[c].bench, row.inner);
      row.samples_ms.push_back(ms / static_cast<double>(row.inner));
    }
  }
  for (auto& row : rows) {
    double n = static_cast<double>(reps);
    row.mean_ms = std::accumulate(row.samples_ms.begin(), row.samples_ms.end(), 0.0) / n;
    double var = 0;
    for (double x : row.samples_ms) var += (x - row.mean_ms) * (x - row.mean_ms);
    row.stddev_ms = reps > 1 ? std::sqrt(var / (n - 1)) : 0.0;
  }
  return rows;
}

BenchReport stamped() {
  BenchReport report;
  report.version = kVersion;
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream ts;
  ts << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  report.timestamp = ts.str();
  return report;
}

}  // namespace

bool BenchReport::low_confidence() const {
  for (const auto& r : rows) {
    if (r.reps < 5) return true;
  }
  return false;
}

std::string BenchReport::table() const {
  std::ostringstream os;
  os << std::left << std::setw(28) << "fixture" << std::setw(30) << "feature" << std::right
     << std::setw(7) << "size" << std::setw(7) << "feat" << std::setw(7) << "cat" << std::setw(6) << "reps" << std::setw(12)
     << "mean ms" << std::setw(12) << "stddev ms" << "\n";
  os << std::fixed << std::setprecision(3);
  for (const auto& r : rows) {
    os << std::left << std::setw(28) << r.fixture << std::setw(30) << r.feature << std::right
       << std::setw(7) << r.domain_size << std::setw(7) << r.features << std::setw(7) << r.categorical << std::setw(6) << r.reps
       << std::setw(12) << r.mean_ms << std::setw(12) << r.stddev_ms << "\n";
  }
  os << version << ", " << timestamp;
  if (low_confidence()) os << ", low confidence (fewer than 5 repetitions)";
  os << "\n";
  return os.str();
}

std::string BenchReport::json_lines() const {
  std::ostringstream os;
  for (const auto& r : rows) {
    Json j;
    j["fixture"] = r.fixture;
    j["feature"] = r.feature;
    j["domain_size"] = r.domain_size;
    j["features"] = r.features;
    j["categorical"] = r.categorical;
    j["reps"] = r.reps;
    j["inner"] = r.inner;
    j["mean_ms"] = r.mean_ms;
    j["stddev_ms"] = r.stddev_ms;
    j["samples_ms"] = r.samples_ms;
    j["version"] = version;
    j["timestamp"] = timestamp;
    j["low_confidence"] = r.reps < 5;
    os << j.dump() << "\n";
  }
  return os.str();
}

BenchCase load_bench_case(const Workspace& ws, const std::filesystem::path& file) {
  Json j;
  try {
    j = Json::parse(read_file(file));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::io, file.string() + ": " + e.what());
  }
  BenchCase out;
  out.factual = instance_from_json(j.value("instance", Json::object()), ws.schema());
  out.controls = controls_from_json(j.value("controls", Json()));
  return out;
}

BenchReport run_domain_scaling(const Workspace& ws, const BenchCase& bench,
                               const std::string& feature, const std::vector<std::size_t>& sizes,
                               std::size_t reps) {
  if (reps == 0) throw Error(ErrorCode::usage, "reps must be positive");
  BenchReport report = stamped();
  std::vector<Workspace> sized;
  sized.reserve(sizes.size());
  for (std::size_t size : sizes) sized.push_back(ws.with_domain_size(feature, size));
  std::vector<Config> configs;
  for (const auto& w : sized) configs.push_back({&w, &bench});
  report.rows = measure(configs, reps);
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    report.rows[i].fixture = ws.name();
    report.rows[i].feature = feature;
    report.rows[i].domain_size = sizes[i];
  }
  return report;
}

BenchReport run_causal_comparison(const Workspace& noncausal, const BenchCase& noncausal_case,
                                  const Workspace& causal, const BenchCase& causal_case,
                                  std::size_t reps) {
  if (reps == 0) throw Error(ErrorCode::usage, "reps must be positive");
  BenchReport report = stamped();
  report.rows = measure({{&noncausal, &noncausal_case}, {&causal, &causal_case}}, reps);
  report.rows[0].feature = "non-causal";
  report.rows[1].feature = "causal";
  return report;
}

}  // namespace recourse
