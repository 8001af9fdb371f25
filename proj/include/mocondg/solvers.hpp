#pragma once

#include "mocondg/problem.hpp"
#include "mocondg/subproblems.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace mocondg {

enum class StepKind { Armijo, Adaptive, Diminishing };

const char* to_string(StepKind k);
StepKind step_kind_from_string(const std::string& s);

struct StepRule {
  StepKind kind = StepKind::Armijo;
  double zeta = 1e-4;
  double omega1 = 0.05;
  double omega2 = 0.95;
  /// Adaptive only; non-positive means max_j L_j of the problem.
  double L = 0.0;

  static StepRule armijo(double zeta = 1e-4, double omega1 = 0.05, double omega2 = 0.95);
  static StepRule adaptive(double L = 0.0);
  static StepRule diminishing();
  void validate() const;
};

struct ArmijoResult {
  double lambda = 1.0;
  int inner_evals = 0;    // F evaluations, the accepted one included
  Evaluation accepted;    // F at x + lambda d
  std::vector<double> trials;
};

/// Backtracking on F(x + l d) <= F(x) - zeta l |theta| e. Each rejected trial
/// is replaced by the minimizer of a quadratic model of the worst violated
/// objective, clamped to [omega1 l, omega2 l]. Throws LineSearchStall.
ArmijoResult armijo_search(const CompositeProblem& problem, const Vector& x, const Vector& Fx, const GapSolution& gap,
                           double zeta, double omega1, double omega2, EvalCounters* counters = nullptr,
                           const LinearModel* model = nullptr);

/// min{1, |theta| / (L ||p - x||^2)}. Throws DegenerateDirection.
double adaptive_step(const GapSolution& gap, double L);

/// 2 / (k + 2).
double diminishing_step(int k);

struct StopDecision {
  double step_ratio = kInf;
  bool step_test = false;
  std::optional<double> theta_pg;  // only computed when step_test passes
  bool converged = false;
};

/// ||x - x_prev||_inf / max(1, ||x_prev||_inf) <= step_tol and |theta_PG(x)| <= theta_tol.
/// The provider is called only after the step test passes.
StopDecision check_stop(const Vector& x_prev, const Vector& x_cur, const std::function<double()>& theta_pg_provider,
                        double step_tol = 1e-4, double theta_tol = 1e-4);

enum class StopReason { Converged, MaxIterations, CriticalAtStart, Critical, NumericalFailure, TimeBudget };

const char* to_string(StopReason r);
/// Converged, or a point where the subproblem itself certified criticality.
bool is_success(StopReason r);

struct IterationRecord {
  int k = 0;
  Vector x;
  Vector F;
  double theta = 0.0;   // gap of the method's own subproblem at x^k
  double lambda = 0.0;  // step taken from x^k
  int inner_evals = 0;
  double step_ratio = kInf;          // relative step from x^{k-1}
  std::optional<double> theta_pg;    // when the stopping test asked for it
  double subproblem_seconds = 0.0;
};

enum class Method { CondG, ProxGrad };

const char* to_string(Method m);
Method method_from_string(const std::string& s);

struct SolverOptions {
  StepRule rule;
  int max_iterations = 200;
  double mu = 1.0;
  double step_tol = 1e-4;
  double theta_tol = 1e-4;
  /// theta >= -critical_tol counts as zero.
  double critical_tol = 1e-12;
  /// Wall-clock budget in seconds, non-positive for none.
  double time_budget = 0.0;
};

struct SolverTrace {
  std::string problem;
  Method method = Method::CondG;
  SolverOptions options;
  Vector x0;
  std::vector<IterationRecord> records;
  // The last iterate, which has no step of its own.
  Vector x_final;
  Vector F_final;
  std::optional<double> theta_final;
  std::optional<double> theta_pg_final;
  double step_ratio_final = kInf;
  StopReason stop_reason = StopReason::MaxIterations;
  std::string message;
  EvalCounters counters;
  double seconds = 0.0;
  double L_used = 0.0;

  int iterations() const { return static_cast<int>(records.size()); }
  bool success() const { return is_success(stop_reason); }
};

SolverTrace run_condg(const CompositeProblem& problem, const Vector& x0, const SolverOptions& options = {});
SolverTrace run_proxgrad(const CompositeProblem& problem, const Vector& x0, const SolverOptions& options = {});
SolverTrace run_solver(Method method, const CompositeProblem& problem, const Vector& x0, const SolverOptions& options = {});

/// max_j L_j from the problem, or a sampled estimate when it carries none.
double problem_lipschitz(const CompositeProblem& problem);

}  // namespace mocondg
