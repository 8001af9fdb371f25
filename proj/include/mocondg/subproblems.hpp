#pragma once

#include "mocondg/problem.hpp"
#include "mocondg/qp.hpp"

namespace mocondg {

enum class GapKind { CondG, ProxGrad };

const char* to_string(GapKind k);

struct GapSolution {
  Vector p;
  /// max_j g_j(p) - g_j(x) + <grad h_j(x), p - x> (+ mu/2 ||p - x||^2 for
  /// ProxGrad), evaluated at the returned p with exact support values.
  double theta = 0.0;
  /// Optimal value reported by the LP/QP itself (tau*, plus the proximal term).
  double solver_value = 0.0;
  Vector direction;  // p - x
  GapKind kind = GapKind::CondG;
  double mu = 0.0;   // proximal weight, ProxGrad only
};

/// Linearization data at x, shared by both subproblems in one iteration.
struct LinearModel {
  Vector x;
  Matrix J;   // Jacobian of H at x
  Vector Gx;  // G(x)
};

LinearModel linear_model(const CompositeProblem& problem, const Vector& x, EvalCounters* counters = nullptr);

/// max { <x, z> : z in Z } through the dual LP min <b, w> s.t. A'w = x, w >= 0.
double support_value(const PolyhedralUncertaintySet& set, const Vector& x, EvalCounters* counters = nullptr);

/// Objective of the direct gap formulation at a trial u:
/// max_j g_j(u) - g_j(x) + <grad h_j(x), u - x>.
double linearized_gap(const CompositeProblem& problem, const LinearModel& model, const Vector& u,
                      EvalCounters* counters = nullptr);

/// Conditional gradient subproblem as an LP over (tau, u, w_1..w_m).
GapSolution condg_direction(const CompositeProblem& problem, const LinearModel& model, EvalCounters* counters = nullptr);
GapSolution condg_direction(const CompositeProblem& problem, const Vector& x, EvalCounters* counters = nullptr);

/// Proximal gradient subproblem: the same layout plus (mu/2)||u - x||^2.
/// theta includes the proximal term.
GapSolution proxgrad_direction(const CompositeProblem& problem, const LinearModel& model, double mu,
                               EvalCounters* counters = nullptr);
GapSolution proxgrad_direction(const CompositeProblem& problem, const Vector& x, double mu,
                               EvalCounters* counters = nullptr);

/// Tolerance for the last QP solved by proxgrad_direction; stored in run metadata.
inline constexpr double kQpKktTolerance = 1e-7;

}  // namespace mocondg
