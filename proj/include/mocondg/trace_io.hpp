#pragma once

#include "mocondg/solvers.hpp"

#include "json.hpp"

#include <string>

namespace mocondg {

/// Column order: k, lambda, theta, theta_pg, inner_evals, step_ratio,
/// F_1..F_m, x_1..x_n. One row per iteration; empty cells for missing values.
std::string trace_csv(const SolverTrace& trace);

/// Full run. Everything outside "metadata" is a pure function of the inputs;
/// wall-clock times live under "metadata" only.
nlohmann::ordered_json trace_json(const SolverTrace& trace, const nlohmann::ordered_json& config = {});

/// Compact per-run summary used by the benchmark manifest.
nlohmann::ordered_json trace_summary_json(const SolverTrace& trace);

/// Shortest round-trip decimal form; "nan", "inf" and "-inf" for non-finite values.
std::string format_double(double v);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace mocondg
