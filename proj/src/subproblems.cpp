#include "mocondg/subproblems.hpp"

#include "mocondg/errors.hpp"
#include "mocondg/lp.hpp"

#include <cmath>

namespace mocondg {

const char* to_string(GapKind k) { return k == GapKind::CondG ? "CondG" : "ProxGrad"; }

LinearModel linear_model(const CompositeProblem& problem, const Vector& x, EvalCounters* counters) {
  LinearModel lm;
  lm.x = x;
  lm.J = jacobian(problem, x, counters);
  lm.Gx = evaluate_nonsmooth(problem, x, counters);
  return lm;
}

double support_value(const PolyhedralUncertaintySet& set, const Vector& x, EvalCounters* counters) {
  const int n = set.dim();
  if (x.size() != n) throw DimensionMismatch("support_value: point and set dimensions differ");
  if (x.isZero(0.0)) return 0.0;
  LinearProgram lp = LinearProgram::with_vars(2 * n);
  lp.cost.setConstant(set.delta());
  lp.rows.resize(n, 2 * n);
  lp.rows.leftCols(n) = set.B().transpose();
  lp.rows.rightCols(n) = -set.B().transpose();
  lp.sense.assign(n, RowSense::Equal);
  lp.rhs = x;
  // Crash basis: for each coordinate, the w column whose sign matches B^{-T}x.
  LpOptions opt;
  const Vector v = set.B().transpose().partialPivLu().solve(x);
  opt.basis_hint.resize(n);
  for (int i = 0; i < n; ++i) opt.basis_hint[i] = v(i) >= 0.0 ? i : n + i;
  if (counters) ++counters->lp_solves;
  const LpSolution sol = solve_lp(lp, opt);
  // B is nonsingular, so A'w = x always has a nonnegative solution.
  if (sol.status != LpStatus::Optimal) throw NumericalFailure("support_value: dual LP not solved to optimality");
  return sol.value;
}

double linearized_gap(const CompositeProblem& problem, const LinearModel& model, const Vector& u, EvalCounters* counters) {
  const Vector lin = model.J * (u - model.x);
  double best = -kInf;
  for (int j = 0; j < problem.m(); ++j) {
    double v = lin(j);
    if (!problem.nonsmooth.is_zero()) v += support_value(problem.nonsmooth.sets()[j], u, counters) - model.Gx(j);
    best = std::max(best, v);
  }
  return best;
}

namespace {

// Shared constraint layout. Variables: [tau | u (n) | w_1 (2n) | ... | w_m (2n)].
// Rows 0..m-1:   -tau + <grad h_j, u> + <b_j, w_j> <= g_j(x) + <grad h_j, x>
// Rows after:    A_j' w_j - u = 0, n rows per objective.
template <class Program>
void fill_layout(const CompositeProblem& problem, const LinearModel& model, Program& prog) {
  const int n = problem.n();
  const int m = problem.m();
  const bool robust = !problem.nonsmooth.is_zero();
  const int nv = 1 + n + (robust ? 2 * n * m : 0);
  const int nr = m + (robust ? n * m : 0);

  prog.rows = Matrix::Zero(nr, nv);
  prog.rhs = Vector::Zero(nr);
  prog.sense.assign(nr, RowSense::Equal);
  prog.lower = Vector::Zero(nv);
  prog.upper = Vector::Constant(nv, kInf);
  prog.lower(0) = -kInf;
  prog.lower.segment(1, n) = problem.box.lb();
  prog.upper.segment(1, n) = problem.box.ub();

  for (int j = 0; j < m; ++j) {
    prog.sense[j] = RowSense::LessEqual;
    prog.rows(j, 0) = -1.0;
    prog.rows.block(j, 1, 1, n) = model.J.row(j);
    prog.rhs(j) = model.J.row(j).dot(model.x);
    if (!robust) continue;
    prog.rhs(j) += model.Gx(j);
    const auto& set = problem.nonsmooth.sets()[j];
    const int w0 = 1 + n + 2 * n * j;
    prog.rows.block(j, w0, 1, 2 * n).setConstant(set.delta());
    const int r0 = m + n * j;
    prog.rows.block(r0, w0, n, n) = set.B().transpose();
    prog.rows.block(r0, w0 + n, n, n) = -set.B().transpose();
    prog.rows.block(r0, 1, n, n) = -Matrix::Identity(n, n);
  }
}

// Starting vertex for the CondG LP: u at the box corner favored by the summed
// gradients, w_j matching the signs of B_j^{-T}u, tau basic in the binding row.
LpOptions crash_basis(const CompositeProblem& problem, const LinearModel& model) {
  const int n = problem.n();
  const int m = problem.m();
  const bool robust = !problem.nonsmooth.is_zero();
  const int nv = 1 + n + (robust ? 2 * n * m : 0);
  LpOptions opt;
  opt.upper_hint.assign(nv, 0);
  const Vector gsum = model.J.colwise().sum().transpose();
  Vector u(n);
  for (int i = 0; i < n; ++i) {
    const bool up = gsum(i) < 0.0;
    opt.upper_hint[1 + i] = up ? 1 : 0;
    u(i) = up ? problem.box.ub()(i) : problem.box.lb()(i);
  }
  const int nr = m + (robust ? n * m : 0);
  opt.basis_hint.assign(nr, -1);
  Vector rowval = model.J * (u - model.x);
  for (int j = 0; robust && j < m; ++j) {
    const auto& set = problem.nonsmooth.sets()[j];
    const Vector v = set.B().transpose().partialPivLu().solve(u);
    rowval(j) += set.delta() * v.lpNorm<1>() - model.Gx(j);
    const int w0 = 1 + n + 2 * n * j;
    for (int i = 0; i < n; ++i) opt.basis_hint[m + n * j + i] = v(i) >= 0.0 ? w0 + i : w0 + n + i;
  }
  Eigen::Index top = 0;
  rowval.maxCoeff(&top);
  opt.basis_hint[top] = 0;
  return opt;
}

GapSolution finish(const CompositeProblem& problem, const LinearModel& model, const Vector& sol, double value,
                   GapKind kind, double mu, EvalCounters* counters) {
  GapSolution g;
  g.p = problem.box.clamp(sol.segment(1, problem.n()));
  g.solver_value = value;
  g.kind = kind;
  g.mu = mu;
  // Re-evaluating the gap at p removes the solver's feasibility slack from theta,
  // which otherwise dominates near critical points with small |x|.
  g.theta = linearized_gap(problem, model, g.p, counters);
  if (kind == GapKind::ProxGrad) g.theta += 0.5 * mu * (g.p - model.x).squaredNorm();
  // u = x is feasible with value exactly 0; keep it when p is no better.
  if (!(g.theta < 0.0)) {
    g.p = model.x;
    g.theta = 0.0;
  }
  g.direction = g.p - model.x;
  return g;
}

}  // namespace

GapSolution condg_direction(const CompositeProblem& problem, const LinearModel& model, EvalCounters* counters) {
  require_in_box(problem, model.x);
  LinearProgram lp;
  fill_layout(problem, model, lp);
  lp.cost = Vector::Zero(lp.rows.cols());
  lp.cost(0) = 1.0;
  if (counters) ++counters->lp_solves;
  const LpSolution sol = solve_lp(lp, crash_basis(problem, model));
  if (sol.status != LpStatus::Optimal) throw NumericalFailure(std::string("CondG subproblem: LP status ") + to_string(sol.status));
  return finish(problem, model, sol.x, sol.x(0), GapKind::CondG, 0.0, counters);
}

GapSolution condg_direction(const CompositeProblem& problem, const Vector& x, EvalCounters* counters) {
  return condg_direction(problem, linear_model(problem, x, counters), counters);
}

GapSolution proxgrad_direction(const CompositeProblem& problem, const LinearModel& model, double mu, EvalCounters* counters) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw InvalidArgument("proxgrad_direction: mu must be positive");
  require_in_box(problem, model.x);
  const int n = problem.n();
  QuadraticProgram qp;
  fill_layout(problem, model, qp);
  const int nv = static_cast<int>(qp.rows.cols());
  qp.Q = Matrix::Zero(nv, nv);
  qp.Q.diagonal().segment(1, n).setConstant(mu);
  qp.c = Vector::Zero(nv);
  qp.c(0) = 1.0;
  qp.c.segment(1, n) = -mu * model.x;
  if (counters) ++counters->qp_solves;
  QpOptions opt;
  opt.kkt_tolerance = kQpKktTolerance;
  const QpSolution sol = solve_qp(qp, opt);
  if (sol.status != QpStatus::Optimal) throw NumericalFailure("ProxGrad subproblem: QP reported infeasible");
  const Vector u = sol.x.segment(1, n);
  const double value = sol.x(0) + 0.5 * mu * (u - model.x).squaredNorm();
  return finish(problem, model, sol.x, value, GapKind::ProxGrad, mu, counters);
}

GapSolution proxgrad_direction(const CompositeProblem& problem, const Vector& x, double mu, EvalCounters* counters) {
  return proxgrad_direction(problem, linear_model(problem, x, counters), mu, counters);
}

}  // namespace mocondg
