#pragma once

#include "mocondg/types.hpp"

#include <vector>

namespace mocondg {

enum class RowSense { LessEqual, Equal, GreaterEqual };

/// min c'x  s.t.  rows(i) x {<=,=,>=} rhs(i),  lower <= x <= upper.
/// Bounds may be infinite; everything else must be finite.
struct LinearProgram {
  Vector cost;
  Matrix rows;
  std::vector<RowSense> sense;
  Vector rhs;
  Vector lower;
  Vector upper;

  int num_vars() const { return static_cast<int>(cost.size()); }
  int num_rows() const { return static_cast<int>(rows.rows()); }

  /// Creates a program with n variables, no rows and bounds [0, +inf).
  static LinearProgram with_vars(int n);
  void add_row(const Vector& coeffs, RowSense s, double b);
  void validate() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

const char* to_string(LpStatus s);

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Vector x;
  double value = 0.0;
  /// Row multipliers y with reduced costs d = c - rows' y.
  Vector duals;
  Vector reduced_costs;
  int iterations = 0;
  // Diagnostics for the optimality contract (all scaled).
  double primal_residual = 0.0;
  double complementarity = 0.0;
  double duality_gap = 0.0;
};

struct LpOptions {
  double pivot_tol = 1e-10;
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  int refactor_every = 200;
  /// Dantzig pricing switches to Bland after this many iterations per phase;
  /// a non-positive value means 3 * (vars + rows).
  int bland_after = 0;
  /// Forces Bland's rule from the first iteration (testing anti-cycling).
  bool always_bland = false;
  /// Optional starting basis: one entry per row, either a structural column
  /// index or -1 for the row's slack (inequality rows only). Nonbasic
  /// structurals sit at their upper bound where upper_hint is nonzero.
  /// Ignored, with a silent fall back to phase 1, unless the hinted basis is
  /// nonsingular and primal feasible.
  std::vector<int> basis_hint;
  std::vector<char> upper_hint;
};

/// Bounded-variable two-phase primal simplex (revised, dense basis inverse).
/// Throws NumericalFailure when the pivot tolerance cannot be met.
LpSolution solve_lp(const LinearProgram& lp, const LpOptions& options = {});

}  // namespace mocondg
