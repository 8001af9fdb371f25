#include "mocondg/robust.hpp"

#include "mocondg/errors.hpp"
#include "mocondg/registry.hpp"
#include "mocondg/rng.hpp"

#include "json.hpp"

#include <cmath>

namespace mocondg {

const char* to_string(AnchorPolicy a) {
  switch (a) {
    case AnchorPolicy::UpperBound: return "upper_bound";
    case AnchorPolicy::BoxMidpoint: return "box_midpoint";
    case AnchorPolicy::Explicit: return "explicit";
  }
  return "?";
}

AnchorPolicy anchor_from_string(const std::string& s) {
  if (s == "upper_bound" || s == "ub") return AnchorPolicy::UpperBound;
  if (s == "box_midpoint" || s == "midpoint") return AnchorPolicy::BoxMidpoint;
  if (s == "explicit") return AnchorPolicy::Explicit;
  throw InvalidArgument("unknown anchor policy: " + s);
}

void RobustConfig::validate() const {
  if (delta_bar && !(*delta_bar >= kDeltaBarMin && *delta_bar <= kDeltaBarMax))
    throw InvalidArgument("delta_bar must lie in [0.02, 0.10]");
  if (anchor == AnchorPolicy::Explicit && anchor_point.size() == 0)
    throw InvalidArgument("explicit anchor requires a point");
}

double resolve_delta_bar(const RobustConfig& config) {
  config.validate();
  if (config.delta_bar) return *config.delta_bar;
  Rng rng(config.seed, stream_id("delta_bar"));
  return rng.uniform(kDeltaBarMin, kDeltaBarMax);
}

Vector resolve_anchor(const RobustConfig& config, const BoxDomain& box) {
  switch (config.anchor) {
    case AnchorPolicy::UpperBound: return box.ub();
    case AnchorPolicy::BoxMidpoint: return box.midpoint();
    case AnchorPolicy::Explicit:
      if (config.anchor_point.size() != box.dim()) throw DimensionMismatch("anchor point has wrong dimension");
      if (!box.contains(config.anchor_point)) throw OutOfDomain("anchor point lies outside the box");
      return config.anchor_point;
  }
  return box.ub();
}

double resolve_delta(const RobustConfig& config, const BoxDomain& box) {
  const double delta = resolve_delta_bar(config) * resolve_anchor(config, box).norm();
  if (!(delta > 0.0)) throw InvalidArgument("anchor point at the origin gives delta = 0; choose another anchor");
  return delta;
}

std::vector<PolyhedralUncertaintySet> build_uncertainty_with_delta(std::uint64_t seed, int n, int m, double delta) {
  if (n < 1 || m < 1) throw InvalidArgument("build_uncertainty: n and m must be positive");
  std::vector<PolyhedralUncertaintySet> sets;
  sets.reserve(m);
  for (int j = 0; j < m; ++j) {
    Rng rng(seed, stream_id("uncertainty_B", static_cast<std::uint64_t>(j)));
    bool done = false;
    for (int attempt = 0; attempt <= 100 && !done; ++attempt) {
      Matrix B(n, n);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) B(r, c) = rng.uniform();
      try {
        sets.emplace_back(std::move(B), delta);
        done = true;
      } catch (const DegenerateMatrix&) {
      }
    }
    if (!done) throw DegenerateMatrix("build_uncertainty: no nonsingular B after 100 redraws");
  }
  return sets;
}

std::vector<PolyhedralUncertaintySet> build_uncertainty(const RobustConfig& config, int n, int m, const BoxDomain& box) {
  if (box.dim() != n) throw DimensionMismatch("build_uncertainty: box dimension differs from n");
  return build_uncertainty_with_delta(config.seed, n, m, resolve_delta(config, box));
}

CompositeProblem robustify(const CompositeProblem& base, std::vector<PolyhedralUncertaintySet> sets) {
  if (!base.nonsmooth.is_zero()) throw InvalidArgument("robustify: base problem already has a nonsmooth term");
  if (static_cast<int>(sets.size()) != base.m()) throw DimensionMismatch("robustify: need one set per objective");
  for (const auto& s : sets)
    if (s.dim() != base.n()) throw DimensionMismatch("robustify: set dimension differs from n");
  return CompositeProblem(base.name, base.smooth, NonsmoothTerm::support(std::move(sets)), base.box);
}

CompositeProblem make_robust_problem(const std::string& name, const RobustConfig& config, int n) {
  CompositeProblem base = make_problem(name, n);
  return robustify(base, build_uncertainty(config, base.n(), base.m(), base.box));
}

std::string uncertainty_json(const std::vector<PolyhedralUncertaintySet>& sets, const RobustConfig& config) {
  nlohmann::ordered_json j;
  j["rng"] = std::string(kRngVersion);
  j["seed"] = config.seed;
  if (config.delta_bar) j["delta_bar"] = *config.delta_bar;
  else j["delta_bar"] = "random";
  j["resolved_delta_bar"] = resolve_delta_bar(config);
  j["anchor"] = to_string(config.anchor);
  auto arr = nlohmann::ordered_json::array();
  for (const auto& s : sets) {
    nlohmann::ordered_json e;
    e["delta"] = s.delta();
    auto rows = nlohmann::ordered_json::array();
    for (int r = 0; r < s.dim(); ++r) {
      std::vector<double> row(s.dim());
      for (int c = 0; c < s.dim(); ++c) row[c] = s.B()(r, c);
      rows.push_back(row);
    }
    e["B"] = rows;
    e["max_norm"] = s.max_norm();
    arr.push_back(e);
  }
  j["sets"] = arr;
  return j.dump(2);
}

}  // namespace mocondg
