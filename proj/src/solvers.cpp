#include "mocondg/solvers.hpp"

#include "mocondg/errors.hpp"
#include "mocondg/registry.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace mocondg {

const char* to_string(StepKind k) {
  switch (k) {
    case StepKind::Armijo: return "armijo";
    case StepKind::Adaptive: return "adaptive";
    case StepKind::Diminishing: return "diminishing";
  }
  return "?";
}

StepKind step_kind_from_string(const std::string& s) {
  if (s == "armijo") return StepKind::Armijo;
  if (s == "adaptive") return StepKind::Adaptive;
  if (s == "diminishing") return StepKind::Diminishing;
  throw InvalidArgument("unknown step rule: " + s);
}

StepRule StepRule::armijo(double zeta, double omega1, double omega2) {
  StepRule r;
  r.kind = StepKind::Armijo;
  r.zeta = zeta;
  r.omega1 = omega1;
  r.omega2 = omega2;
  r.validate();
  return r;
}

StepRule StepRule::adaptive(double L) {
  StepRule r;
  r.kind = StepKind::Adaptive;
  r.L = L;
  return r;
}

StepRule StepRule::diminishing() {
  StepRule r;
  r.kind = StepKind::Diminishing;
  return r;
}

void StepRule::validate() const {
  if (!(zeta > 0.0 && zeta < 1.0)) throw InvalidArgument("zeta must lie in (0,1)");
  if (!(omega1 > 0.0 && omega1 < omega2 && omega2 < 1.0)) throw InvalidArgument("need 0 < omega1 < omega2 < 1");
  if (!std::isfinite(L)) throw InvalidArgument("L must be finite");
}

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::Converged: return "Converged";
    case StopReason::MaxIterations: return "MaxIterations";
    case StopReason::CriticalAtStart: return "CriticalAtStart";
    case StopReason::Critical: return "Critical";
    case StopReason::NumericalFailure: return "NumericalFailure";
    case StopReason::TimeBudget: return "TimeBudget";
  }
  return "?";
}

bool is_success(StopReason r) {
  return r == StopReason::Converged || r == StopReason::Critical || r == StopReason::CriticalAtStart;
}

const char* to_string(Method m) { return m == Method::CondG ? "condg" : "proxgrad"; }

Method method_from_string(const std::string& s) {
  if (s == "condg" || s == "CondG") return Method::CondG;
  if (s == "proxgrad" || s == "ProxGrad" || s == "pg") return Method::ProxGrad;
  throw InvalidArgument("unknown solver: " + s);
}

ArmijoResult armijo_search(const CompositeProblem& problem, const Vector& x, const Vector& Fx, const GapSolution& gap,
                           double zeta, double omega1, double omega2, EvalCounters* counters, const LinearModel* model) {
  if (!(gap.theta < 0.0)) throw InvalidArgument("armijo_search: theta must be negative");
  const int m = problem.m();
  const double theta = gap.theta;
  const Vector& d = gap.direction;

  // Slope surrogates s_j = <grad h_j, d> + g_j(p) - g_j(x); by convexity of g_j
  // they bound the directional derivative of f_j from above and are <= theta.
  Vector slope;
  auto slopes = [&]() -> const Vector& {
    if (slope.size() == m) return slope;
    LinearModel local;
    const LinearModel* lm = model;
    if (!lm) {
      local = linear_model(problem, x, counters);
      lm = &local;
    }
    slope = lm->J * d;
    if (!problem.nonsmooth.is_zero()) slope += evaluate_nonsmooth(problem, gap.p, counters) - lm->Gx;
    return slope;
  };

  ArmijoResult res;
  double lambda = 1.0;
  for (;;) {
    const Vector trial = problem.box.clamp(x + lambda * d);
    Evaluation e = evaluate(problem, trial, counters);
    ++res.inner_evals;
    res.trials.push_back(lambda);
    const Vector target = Fx.array() + zeta * lambda * theta;
    int worst = -1;
    double worst_excess = 0.0;
    bool finite = e.F.allFinite();
    for (int j = 0; j < m && finite; ++j) {
      const double excess = e.F(j) - target(j);
      if (excess > worst_excess) {
        worst_excess = excess;
        worst = j;
      }
    }
    if (finite && worst < 0) {
      res.lambda = lambda;
      res.accepted = std::move(e);
      return res;
    }
    double next = 0.5 * (omega1 + omega2) * lambda;
    if (finite) {
      double s = slopes()(worst);
      if (!(s < 0.0)) s = theta;
      const double c = (e.F(worst) - Fx(worst) - s * lambda) / (lambda * lambda);
      const double t = -s / (2.0 * c);
      if (c > 0.0 && std::isfinite(t)) next = t;
    }
    lambda = std::clamp(next, omega1 * lambda, omega2 * lambda);
    if (lambda < 1e-16) throw LineSearchStall("Armijo step fell below 1e-16");
  }
}

double adaptive_step(const GapSolution& gap, double L) {
  if (!(L > 0.0)) throw InvalidArgument("adaptive_step: L must be positive");
  if (!(gap.theta < 0.0)) throw InvalidArgument("adaptive_step: theta must be negative");
  const double dd = gap.direction.squaredNorm();
  if (std::sqrt(dd) < 1e-14) {
    if (gap.theta < -1e-12) throw DegenerateDirection("adaptive_step: zero direction with negative theta");
    return 1.0;
  }
  return std::min(1.0, std::abs(gap.theta) / (L * dd));
}

double diminishing_step(int k) {
  if (k < 0) throw InvalidArgument("diminishing_step: k must be nonnegative");
  return 2.0 / (k + 2.0);
}

StopDecision check_stop(const Vector& x_prev, const Vector& x_cur, const std::function<double()>& theta_pg_provider,
                        double step_tol, double theta_tol) {
  StopDecision s;
  const double denom = std::max(1.0, x_prev.lpNorm<Eigen::Infinity>());
  s.step_ratio = (x_cur - x_prev).lpNorm<Eigen::Infinity>() / denom;
  s.step_test = s.step_ratio <= step_tol;
  if (!s.step_test) return s;
  s.theta_pg = theta_pg_provider();
  s.converged = std::abs(*s.theta_pg) <= theta_tol;
  return s;
}

double problem_lipschitz(const CompositeProblem& problem) {
  if (problem.smooth.lipschitz) return problem.smooth.lipschitz->maxCoeff();
  return estimate_lipschitz(problem.smooth, problem.box).maxCoeff();
}

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

SolverTrace run(Method method, const CompositeProblem& problem, const Vector& x0, const SolverOptions& opt) {
  opt.rule.validate();
  if (opt.max_iterations < 0) throw InvalidArgument("max_iterations must be nonnegative");
  if (!(opt.mu > 0.0)) throw InvalidArgument("mu must be positive");
  require_in_box(problem, x0);

  const auto t0 = Clock::now();
  SolverTrace tr;
  tr.problem = problem.name;
  tr.method = method;
  tr.options = opt;
  tr.x0 = x0;
  EvalCounters& cnt = tr.counters;

  double L = 0.0;
  if (opt.rule.kind == StepKind::Adaptive) {
    L = opt.rule.L > 0.0 ? opt.rule.L : problem_lipschitz(problem);
    tr.L_used = L;
  }

  Vector x = x0;
  Vector Fx = evaluate(problem, x, &cnt).F;
  Vector x_prev;
  double step_ratio = kInf;
  std::optional<double> theta_pg;

  auto finish = [&](StopReason r, std::optional<double> theta, std::string msg = {}) {
    tr.x_final = x;
    tr.F_final = Fx;
    tr.theta_final = theta;
    tr.theta_pg_final = theta_pg;
    tr.step_ratio_final = step_ratio;
    tr.stop_reason = r;
    tr.message = std::move(msg);
    tr.seconds = since(t0);
    return tr;
  };

  try {
    for (int k = 0;; ++k) {
      theta_pg.reset();
      step_ratio = kInf;
      const auto ts = Clock::now();
      const LinearModel lm = linear_model(problem, x, &cnt);
      std::optional<GapSolution> pg;
      auto pg_provider = [&]() {
        if (!pg) pg = proxgrad_direction(problem, lm, opt.mu, &cnt);
        return pg->theta;
      };

      if (k > 0) {
        const StopDecision sd = check_stop(x_prev, x, pg_provider, opt.step_tol, opt.theta_tol);
        step_ratio = sd.step_ratio;
        theta_pg = sd.theta_pg;
        if (sd.converged) return finish(StopReason::Converged, std::nullopt);
      }
      if (k >= opt.max_iterations) return finish(StopReason::MaxIterations, std::nullopt);
      if (opt.time_budget > 0.0 && since(t0) > opt.time_budget) return finish(StopReason::TimeBudget, std::nullopt);

      GapSolution gap = method == Method::CondG ? condg_direction(problem, lm, &cnt) : (pg_provider(), *pg);
      if (method == Method::ProxGrad) theta_pg = gap.theta;
      const double sub_seconds = since(ts);

      if (gap.theta >= -opt.critical_tol) {
        if (method == Method::CondG && !theta_pg) theta_pg = pg_provider();
        return finish(k == 0 ? StopReason::CriticalAtStart : StopReason::Critical, gap.theta);
      }

      IterationRecord rec;
      rec.k = k;
      rec.x = x;
      rec.F = Fx;
      rec.theta = gap.theta;
      rec.step_ratio = step_ratio;
      rec.theta_pg = theta_pg;
      rec.subproblem_seconds = sub_seconds;

      Vector Fnext;
      switch (opt.rule.kind) {
        case StepKind::Armijo: {
          ArmijoResult ar = armijo_search(problem, x, Fx, gap, opt.rule.zeta, opt.rule.omega1, opt.rule.omega2, &cnt, &lm);
          rec.lambda = ar.lambda;
          rec.inner_evals = ar.inner_evals;
          Fnext = std::move(ar.accepted.F);
          break;
        }
        case StepKind::Adaptive:
        case StepKind::Diminishing: {
          rec.lambda = opt.rule.kind == StepKind::Adaptive ? adaptive_step(gap, L) : diminishing_step(k);
          rec.inner_evals = 1;
          Fnext = evaluate(problem, problem.box.clamp(x + rec.lambda * gap.direction), &cnt).F;
          break;
        }
      }
      tr.records.push_back(std::move(rec));
      x_prev = x;
      x = problem.box.clamp(x + tr.records.back().lambda * gap.direction);
      Fx = std::move(Fnext);
    }
  } catch (const Error& e) {
    return finish(StopReason::NumericalFailure, std::nullopt, e.what());
  }
}

}  // namespace

SolverTrace run_condg(const CompositeProblem& problem, const Vector& x0, const SolverOptions& options) {
  return run(Method::CondG, problem, x0, options);
}

SolverTrace run_proxgrad(const CompositeProblem& problem, const Vector& x0, const SolverOptions& options) {
  return run(Method::ProxGrad, problem, x0, options);
}

SolverTrace run_solver(Method method, const CompositeProblem& problem, const Vector& x0, const SolverOptions& options) {
  return run(method, problem, x0, options);
}

}  // namespace mocondg
