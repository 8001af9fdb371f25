#pragma once

#include "mocondg/lp.hpp"
#include "mocondg/types.hpp"

#include <vector>

namespace mocondg {

/// min 1/2 x'Qx + c'x  s.t. rows(i) x {<=,=,>=} rhs(i),  lower <= x <= upper.
/// Q must be symmetric positive semidefinite.
struct QuadraticProgram {
  Matrix Q;
  Vector c;
  Matrix rows;
  std::vector<RowSense> sense;
  Vector rhs;
  Vector lower;
  Vector upper;

  int num_vars() const { return static_cast<int>(c.size()); }
  int num_rows() const { return static_cast<int>(rows.rows()); }

  static QuadraticProgram with_vars(int n);
  void add_row(const Vector& coeffs, RowSense s, double b);
  /// Checks dimensions, symmetry (1e-12) and the eigenvalue floor (-1e-10).
  void validate() const;
};

enum class QpStatus { Optimal, Infeasible };

const char* to_string(QpStatus s);

struct QpSolution {
  QpStatus status = QpStatus::Infeasible;
  Vector x;
  double value = 0.0;
  /// Row multipliers y: Qx + c - rows' y - z_lower + z_upper = 0.
  Vector duals;
  Vector z_lower;
  Vector z_upper;
  /// Wolfe dual objective at the returned multipliers.
  double dual_bound = 0.0;
  /// Max of scaled stationarity, primal feasibility and complementarity.
  double kkt_residual = 0.0;
  double stationarity = 0.0;
  double primal_residual = 0.0;
  double complementarity = 0.0;
  int iterations = 0;
};

struct QpOptions {
  double tolerance = 1e-10;
  int max_iterations = 200;
  /// Reported solutions must satisfy kkt_residual <= this.
  double kkt_tolerance = 1e-7;
};

/// Mehrotra predictor-corrector primal-dual interior point method.
/// Returns status Infeasible when the constraints admit no point and throws
/// NumericalFailure when the KKT contract cannot be met.
QpSolution solve_qp(const QuadraticProgram& qp, const QpOptions& options = {});

}  // namespace mocondg
