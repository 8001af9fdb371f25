#include "mocondg/metrics.hpp"

#include "mocondg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mocondg {

bool dominates(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw DimensionMismatch("dominates: vectors differ in length");
  bool strict = false;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) > b(i)) return false;
    if (a(i) < b(i)) strict = true;
  }
  return strict;
}

std::vector<std::size_t> nondominated_indices(const std::vector<Vector>& points) {
  // Sort by the first objective (then lexicographically) so only earlier points
  // can dominate later ones; equal keys are compared both ways.
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Vector& u = points[a];
    const Vector& v = points[b];
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      if (u(i) < v(i)) return true;
      if (u(i) > v(i)) return false;
    }
    return false;
  });
  std::vector<std::size_t> kept;
  std::vector<char> keep(points.size(), 0);
  for (std::size_t idx : order) {
    bool dominated = false;
    for (std::size_t k : kept)
      if (dominates(points[k], points[idx])) {
        dominated = true;
        break;
      }
    if (!dominated) {
      kept.push_back(idx);
      keep[idx] = 1;
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < points.size(); ++i)
    if (keep[i]) out.push_back(i);
  return out;
}

std::vector<Vector> nondominated(const std::vector<Vector>& points) {
  std::vector<Vector> out;
  for (std::size_t i : nondominated_indices(points)) out.push_back(points[i]);
  return out;
}

FrontierApproximation FrontierApproximation::from(std::vector<FrontierPoint> candidates) {
  std::vector<Vector> vals;
  vals.reserve(candidates.size());
  for (const auto& c : candidates) vals.push_back(c.F);
  FrontierApproximation f;
  for (std::size_t i : nondominated_indices(vals)) f.points.push_back(std::move(candidates[i]));
  return f;
}

std::vector<Vector> FrontierApproximation::values() const {
  std::vector<Vector> v;
  for (const auto& p : points) v.push_back(p.F);
  return v;
}

std::vector<double> purity(const std::vector<std::vector<Vector>>& frontiers) {
  if (frontiers.size() < 2) throw UndefinedMetric("purity needs at least two solvers");
  std::vector<std::vector<Vector>> own;
  std::vector<Vector> all;
  for (const auto& f : frontiers) {
    if (f.empty()) throw UndefinedMetric("purity: a solver contributed no points");
    own.push_back(nondominated(f));
    all.insert(all.end(), own.back().begin(), own.back().end());
  }
  std::vector<double> out;
  for (const auto& f : own) {
    std::size_t hit = 0;
    for (const auto& p : f) {
      bool dominated = false;
      for (const auto& q : all)
        if (dominates(q, p)) {
          dominated = true;
          break;
        }
      if (!dominated) ++hit;
    }
    out.push_back(static_cast<double>(hit) / static_cast<double>(f.size()));
  }
  return out;
}

Extremes extremes_of(const std::vector<std::vector<Vector>>& sets) {
  Extremes e;
  for (const auto& s : sets)
    for (const auto& p : s) {
      if (e.lo.size() == 0) {
        e.lo = p;
        e.hi = p;
      } else {
        e.lo = e.lo.cwiseMin(p);
        e.hi = e.hi.cwiseMax(p);
      }
    }
  return e;
}

Spread spread_metrics(const std::vector<Vector>& frontier, const Extremes& ext) {
  const std::size_t N = frontier.size();
  if (N < 2) throw UndefinedMetric("spread needs at least two points");
  const Eigen::Index m = frontier[0].size();
  if (ext.lo.size() != m || ext.hi.size() != m) throw DimensionMismatch("spread: extremes have wrong length");
  Spread s;
  double delta = 0.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    std::vector<double> v;
    v.reserve(N + 2);
    for (const auto& p : frontier) v.push_back(p(j));
    std::sort(v.begin(), v.end());
    v.insert(v.begin(), std::min(ext.lo(j), v.front()));
    v.push_back(std::max(ext.hi(j), v.back()));
    std::vector<double> d(N + 1);
    for (std::size_t i = 0; i <= N; ++i) d[i] = v[i + 1] - v[i];
    s.gamma = std::max(s.gamma, *std::max_element(d.begin(), d.end()));
    double mean = 0.0;
    for (std::size_t i = 1; i < N; ++i) mean += d[i];
    mean /= static_cast<double>(N - 1);
    double num = d[0] + d[N];
    for (std::size_t i = 1; i < N; ++i) num += std::abs(d[i] - mean);
    const double den = d[0] + d[N] + static_cast<double>(N - 1) * mean;
    if (!(den > 0.0)) throw UndefinedMetric("spread: all points coincide in one objective");
    delta = std::max(delta, num / den);
  }
  s.delta = delta;
  return s;
}

Spread spread_metrics(const std::vector<Vector>& frontier) { return spread_metrics(frontier, extremes_of({frontier})); }

double ProfileCurve::value(double tau) const {
  if (ratios.empty()) return 0.0;
  const auto it = std::upper_bound(ratios.begin(), ratios.end(), tau);
  return static_cast<double>(it - ratios.begin()) / static_cast<double>(ratios.size());
}

std::vector<std::pair<double, double>> ProfileCurve::steps() const {
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    if (!std::isfinite(ratios[i])) break;
    if (i + 1 < ratios.size() && ratios[i + 1] == ratios[i]) continue;
    out.emplace_back(ratios[i], static_cast<double>(i + 1) / static_cast<double>(ratios.size()));
  }
  return out;
}

double ProfileCurve::robustness() const {
  if (ratios.empty()) return 0.0;
  const auto finite = std::count_if(ratios.begin(), ratios.end(), [](double r) { return std::isfinite(r); });
  return static_cast<double>(finite) / static_cast<double>(ratios.size());
}

std::vector<ProfileCurve> performance_profile(const Matrix& costs, const std::vector<std::vector<bool>>& failed,
                                              const std::vector<std::string>& solvers) {
  const Eigen::Index P = costs.rows();
  const Eigen::Index S = costs.cols();
  if (static_cast<Eigen::Index>(solvers.size()) != S) throw DimensionMismatch("profile: one name per solver column");
  if (static_cast<Eigen::Index>(failed.size()) != P) throw DimensionMismatch("profile: failure mask has wrong rows");
  std::vector<ProfileCurve> curves(S);
  for (Eigen::Index s = 0; s < S; ++s) curves[s].solver = solvers[s];
  for (Eigen::Index p = 0; p < P; ++p) {
    if (static_cast<Eigen::Index>(failed[p].size()) != S) throw DimensionMismatch("profile: failure mask has wrong columns");
    double best = kInf;
    for (Eigen::Index s = 0; s < S; ++s) {
      if (failed[p][s]) continue;
      if (!(costs(p, s) > 0.0) || !std::isfinite(costs(p, s))) throw InvalidArgument("profile: costs must be positive");
      best = std::min(best, costs(p, s));
    }
    for (Eigen::Index s = 0; s < S; ++s)
      curves[s].ratios.push_back(failed[p][s] || !std::isfinite(best) ? kInf : costs(p, s) / best);
  }
  for (auto& c : curves) std::sort(c.ratios.begin(), c.ratios.end());
  return curves;
}

}  // namespace mocondg
