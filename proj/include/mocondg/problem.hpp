#pragma once

#include "mocondg/types.hpp"
#include "mocondg/uncertainty_set.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace mocondg {

/// Axis-aligned box { x : lb <= x <= ub } with finite bounds.
class BoxDomain {
 public:
  BoxDomain(Vector lb, Vector ub);

  const Vector& lb() const { return lb_; }
  const Vector& ub() const { return ub_; }
  int dim() const { return static_cast<int>(lb_.size()); }

  double diameter() const { return (ub_ - lb_).norm(); }
  Vector midpoint() const { return 0.5 * (lb_ + ub_); }

  /// Per-coordinate tolerance is tol * max(1, |bound|).
  bool contains(const Vector& x, double tol = 1e-12) const;
  Vector clamp(const Vector& x) const;

 private:
  Vector lb_;
  Vector ub_;
};

/// H = (h_1, ..., h_m), differentiable.
struct SmoothObjective {
  int n = 0;
  int m = 0;
  std::function<Vector(const Vector&)> eval;
  /// Jacobian, m x n; row j is grad h_j.
  std::function<Matrix(const Vector&)> grad;
  /// Per-objective gradient Lipschitz constants, when known analytically.
  std::optional<Vector> lipschitz;
  /// Upper bound on sup ||grad h_j|| over the problem box, when derivable.
  std::optional<double> grad_norm_bound;
  bool convex = false;
};

/// G = (g_1, ..., g_m): either identically zero or g_j = support function of Z_j.
class NonsmoothTerm {
 public:
  enum class Kind { Zero, SupportFunction };

  static NonsmoothTerm zero() { return NonsmoothTerm{}; }
  static NonsmoothTerm support(std::vector<PolyhedralUncertaintySet> sets);

  Kind kind() const { return sets_.empty() ? Kind::Zero : Kind::SupportFunction; }
  bool is_zero() const { return sets_.empty(); }
  const std::vector<PolyhedralUncertaintySet>& sets() const { return sets_; }

  /// L_G = max_j sup ||z||, zero for the Zero variant.
  double lipschitz() const;

 private:
  std::vector<PolyhedralUncertaintySet> sets_;
};

struct CompositeProblem {
  CompositeProblem(std::string name, SmoothObjective smooth, NonsmoothTerm nonsmooth, BoxDomain box);

  std::string name;
  SmoothObjective smooth;
  NonsmoothTerm nonsmooth;
  BoxDomain box;

  int n() const { return smooth.n; }
  int m() const { return smooth.m; }
};

struct Evaluation {
  Vector F;
  Vector H;
  Vector G;
};

/// F = G + H at x. Throws OutOfDomain when x leaves the box.
Evaluation evaluate(const CompositeProblem& problem, const Vector& x, EvalCounters* counters = nullptr);

/// H only (no counters touched for G).
Vector evaluate_smooth(const CompositeProblem& problem, const Vector& x, EvalCounters* counters = nullptr);

/// G only; solves one support-function LP per objective.
Vector evaluate_nonsmooth(const CompositeProblem& problem, const Vector& x, EvalCounters* counters = nullptr);

Matrix jacobian(const CompositeProblem& problem, const Vector& x, EvalCounters* counters = nullptr);

void require_in_box(const CompositeProblem& problem, const Vector& x);

}  // namespace mocondg
