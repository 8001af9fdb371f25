#pragma once

#include "mocondg/benchmark.hpp"
#include "mocondg/metrics.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace mocondg {

struct ScatterLayer {
  std::string label;
  std::vector<Vector> points;  // first two objectives are drawn
};

/// Step plots of rho_s(tau) on a log2 tau axis.
std::string profile_svg(const std::vector<ProfileCurve>& curves, const std::string& title);
std::string scatter_svg(const std::vector<ScatterLayer>& layers, const std::string& title);

/// Rows (problem, delta, start) with every solver present; cost is
/// max(1, iterations) or f_evals. Failures are runs that did not succeed.
struct ProfileInput {
  Matrix costs;
  std::vector<std::vector<bool>> failed;
  std::vector<std::string> solvers;
  std::vector<std::string> rows;
};
ProfileInput profile_input(const BenchmarkResult& result, const std::string& measure);

/// Per problem and solver: success counts, frontier, purity, spread; plus
/// profile summaries. Pure function of the results (no timings).
nlohmann::ordered_json summarize(const BenchmarkResult& result);

/// Writes <dir>/summary.json, instances.csv, metrics.csv, profile_iterations.svg,
/// profile_f_evals.svg and one frontier_<problem>.svg per problem.
/// Throws IoFailure.
std::vector<std::string> emit_report(const BenchmarkResult& result, const std::string& dir);

}  // namespace mocondg
