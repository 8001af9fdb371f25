#pragma once

#include "mocondg/problem.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mocondg {

enum class AnchorPolicy { UpperBound, BoxMidpoint, Explicit };

const char* to_string(AnchorPolicy a);
AnchorPolicy anchor_from_string(const std::string& s);

struct RobustConfig {
  std::uint64_t seed = 1;
  /// Empty means "random": drawn uniformly from [0.02, 0.10] with the seed.
  std::optional<double> delta_bar;
  /// The default anchors delta at ub, since the midpoint of a symmetric box is
  /// the origin and would give delta = 0.
  AnchorPolicy anchor = AnchorPolicy::UpperBound;
  Vector anchor_point;  // used by Explicit

  void validate() const;
};

inline constexpr double kDeltaBarMin = 0.02;
inline constexpr double kDeltaBarMax = 0.10;

double resolve_delta_bar(const RobustConfig& config);
Vector resolve_anchor(const RobustConfig& config, const BoxDomain& box);
/// delta = delta_bar * ||anchor||.
double resolve_delta(const RobustConfig& config, const BoxDomain& box);

/// m sets with B_j uniform on [0,1]^{n x n}, one generator stream per objective.
/// Throws DegenerateMatrix after 100 failed redraws of one B_j.
std::vector<PolyhedralUncertaintySet> build_uncertainty(const RobustConfig& config, int n, int m, const BoxDomain& box);

/// Same B_j draws with an explicit delta (used for delta studies with common data).
std::vector<PolyhedralUncertaintySet> build_uncertainty_with_delta(std::uint64_t seed, int n, int m, double delta);

/// Attaches the support-function term. Throws DimensionMismatch.
CompositeProblem robustify(const CompositeProblem& base, std::vector<PolyhedralUncertaintySet> sets);

/// Registry problem robustified with `config`.
CompositeProblem make_robust_problem(const std::string& name, const RobustConfig& config, int n = 0);

/// Audit export of the sets and the parameters that produced them.
std::string uncertainty_json(const std::vector<PolyhedralUncertaintySet>& sets, const RobustConfig& config);

}  // namespace mocondg
