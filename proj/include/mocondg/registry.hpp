#pragma once

#include "mocondg/problem.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace mocondg {

struct ProblemInfo {
  std::string name;
  int n = 0;            // default dimension
  int m = 0;
  bool convex = false;  // convexity of every h_j over the box
  bool variable_n = false;
  std::string source;   // literature reference for the formulas
  std::string note;     // deviations from the usual statement, if any
};

/// Builds the smooth problem (Zero nonsmooth term). n <= 0 selects the default.
using ProblemFactory = std::function<CompositeProblem(int n)>;

const std::vector<ProblemInfo>& registry_manifest();
std::vector<std::string> registry_names();
const ProblemInfo& registry_info(const std::string& name);

/// Throws UnknownProblem.
ProblemFactory registry_lookup(const std::string& name);
CompositeProblem make_problem(const std::string& name, int n = 0);

/// JSON manifest: name, n, m, convex, lb, ub, source (and note when present).
std::string manifest_json();

/// Sampled gradient Lipschitz constants: max over `pairs` random pairs of
/// ||grad h_j(x) - grad h_j(y)|| / ||x - y||, times `safety`. Half of the pairs
/// are short (relative length 1e-3) to catch local curvature.
Vector estimate_lipschitz(const SmoothObjective& smooth, const BoxDomain& box, int pairs = 1000, double safety = 1.5,
                          std::uint64_t seed = 0x5eedULL);

}  // namespace mocondg
