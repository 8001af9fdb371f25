#pragma once

#include "mocondg/problem.hpp"
#include "mocondg/robust.hpp"
#include "mocondg/solvers.hpp"

#include "json.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mocondg {

/// Points i.i.d. uniform in the box. The stream depends on `tag` only, so
/// every solver sees the same starts for a given problem and seed.
std::vector<Vector> generate_starts(const BoxDomain& box, int count, std::uint64_t seed, const std::string& tag = "starts");

enum class BenchMode { Profile, Frontier };

struct BenchmarkConfig {
  std::vector<std::string> problems;
  std::map<std::string, int> dims;  // per-problem n, registry default otherwise
  std::vector<Method> solvers{Method::CondG, Method::ProxGrad};
  SolverOptions solver;
  int starts = 100;
  std::uint64_t seed = 1;
  bool robust = true;
  std::optional<double> delta_bar;  // empty: drawn from the seed
  /// Non-empty: one run per listed value with common B_j and starts.
  std::vector<double> delta_bars;
  AnchorPolicy anchor = AnchorPolicy::UpperBound;
  BenchMode mode = BenchMode::Profile;
  /// Frontier mode: per problem and solver, stop launching starts after this
  /// many seconds or starts, whichever comes first.
  double frontier_seconds = 10.0;
  int frontier_starts = 50;
  int jobs = 1;
  std::string out_dir = "out";
  bool write_traces = true;
  bool resume = true;

  void validate() const;
  nlohmann::ordered_json to_json() const;
  /// Unknown keys are rejected (InvalidArgument).
  static BenchmarkConfig from_json(const nlohmann::json& j);
};

const char* to_string(BenchMode m);

struct InstanceSpec {
  std::string id;
  std::string problem;
  Method solver = Method::CondG;
  int start = 0;
  std::optional<double> delta_bar;  // set when the config lists several
};

struct InstanceResult {
  InstanceSpec spec;
  StopReason stop_reason = StopReason::MaxIterations;
  bool success = false;
  bool skipped = false;  // frontier budget exhausted before this start
  int iterations = 0;
  EvalCounters counters;
  double seconds = 0.0;
  Vector x0;
  Vector F_final;
  Vector x_final;
  std::optional<double> theta_pg_final;
};

struct BenchmarkResult {
  BenchmarkConfig config;
  std::vector<InstanceResult> instances;
};

/// problems x delta values x solvers x starts, in that nesting order.
std::vector<InstanceSpec> plan_instances(const BenchmarkConfig& config);

/// The problem an instance runs on (robustified per the config).
CompositeProblem build_instance_problem(const BenchmarkConfig& config, const std::string& name,
                                        std::optional<double> delta_bar);

using ProgressFn = std::function<void(const InstanceResult&, std::size_t done, std::size_t total)>;

/// Runs every planned instance on `jobs` threads. Each finished instance is
/// persisted to <out>/results/instances/<id>.json (plus a trace CSV); the
/// manifest at <out>/results/manifest.json lists them all. With resume on and
/// an identical config, instances whose files exist are loaded, not rerun.
BenchmarkResult run_benchmark(const BenchmarkConfig& config, const ProgressFn& progress = {});

/// Reads a finished (or partial) run back from <out_dir>/results.
BenchmarkResult load_results(const std::string& out_dir);

nlohmann::ordered_json instance_json(const InstanceResult& r);
InstanceResult instance_from_json(const nlohmann::json& j);

}  // namespace mocondg
