#pragma once

#include "mocondg/types.hpp"

#include <string>
#include <vector>

namespace mocondg {

/// a dominates b: a <= b componentwise with at least one strict inequality.
bool dominates(const Vector& a, const Vector& b);

/// Indices of the members not dominated by any other member, in input order.
/// Exact duplicates do not dominate each other and are all kept.
std::vector<std::size_t> nondominated_indices(const std::vector<Vector>& points);
std::vector<Vector> nondominated(const std::vector<Vector>& points);

struct FrontierPoint {
  Vector F;
  std::string solver;
  std::string instance;
};

/// Filtered to mutually nondominated members.
struct FrontierApproximation {
  std::vector<FrontierPoint> points;

  static FrontierApproximation from(std::vector<FrontierPoint> candidates);
  std::vector<Vector> values() const;
};

/// Per solver: (own frontier points that survive in the reference frontier of
/// the union) / (own frontier size). Throws UndefinedMetric when a solver has
/// no points, or fewer than two solvers are given.
std::vector<double> purity(const std::vector<std::vector<Vector>>& frontiers);

struct Extremes {
  Vector lo;  // per objective
  Vector hi;
};

/// Per-objective min and max over all given points.
Extremes extremes_of(const std::vector<std::vector<Vector>>& sets);

struct Spread {
  double gamma = 0.0;
  double delta = 0.0;
};

/// Gamma: largest gap between consecutive values of any objective once the
/// frontier is sorted by it and the extremes are appended at both ends.
/// Delta: max over objectives of
///   (d_0 + d_N + sum_{i=1}^{N-1} |d_i - mean|) / (d_0 + d_N + (N - 1) mean),
/// with d_0, d_N the gaps to the extremes and mean the average inner gap.
/// Throws UndefinedMetric for fewer than two points.
Spread spread_metrics(const std::vector<Vector>& frontier, const Extremes& extremes);
Spread spread_metrics(const std::vector<Vector>& frontier);

/// Step function rho_s(tau) = share of instances with ratio <= tau.
struct ProfileCurve {
  std::string solver;
  std::vector<double> ratios;  // sorted performance ratios, +inf for failures

  double value(double tau) const;
  /// Distinct finite ratios where the curve jumps, with the value after each jump.
  std::vector<std::pair<double, double>> steps() const;
  double efficiency() const { return value(1.0); }
  double robustness() const;
};

/// costs(p, s) > 0 for successes; failed(p, s) marks failures (ratio +inf).
/// Ties count as best for every tied solver. An instance where every solver
/// fails gives +inf for all.
std::vector<ProfileCurve> performance_profile(const Matrix& costs, const std::vector<std::vector<bool>>& failed,
                                              const std::vector<std::string>& solvers);

}  // namespace mocondg
