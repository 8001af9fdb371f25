#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"

#include "mocondg/errors.hpp"
#include "mocondg/registry.hpp"
#include "mocondg/robust.hpp"
#include "mocondg/solvers.hpp"

using namespace mocondg;
using th::vec;

namespace {

// Post-hoc re-check of the sufficient decrease inequality on a whole trace.
void check_armijo_trace(const CompositeProblem& p, const SolverTrace& tr) {
  for (std::size_t k = 0; k < tr.records.size(); ++k) {
    const auto& r = tr.records[k];
    const Vector& Fn = k + 1 < tr.records.size() ? tr.records[k + 1].F : tr.F_final;
    const Vector bound = r.F.array() - tr.options.rule.zeta * r.lambda * std::abs(r.theta);
    CHECK((Fn.array() <= bound.array() + 1e-9 * (1.0 + bound.array().abs())).all());
    CHECK(p.box.contains(r.x));
  }
}

}  // namespace

TEST_CASE("step rule validation") {
  CHECK_THROWS_AS(StepRule::armijo(0.0), InvalidArgument);
  CHECK_THROWS_AS(StepRule::armijo(1e-4, 0.9, 0.5), InvalidArgument);
  CHECK(step_kind_from_string("adaptive") == StepKind::Adaptive);
  CHECK_THROWS_AS(step_kind_from_string("exact"), InvalidArgument);
  CHECK(method_from_string("proxgrad") == Method::ProxGrad);
}

TEST_CASE("diminishing step") {
  CHECK(diminishing_step(0) == 1.0);
  CHECK(diminishing_step(2) == 0.5);
  CHECK(diminishing_step(98) == doctest::Approx(0.02));
}

TEST_CASE("adaptive step") {
  GapSolution g;
  g.theta = -4.0;
  g.direction = vec({2.0, 0.0});
  CHECK(adaptive_step(g, 2.0) == doctest::Approx(0.5));
  g.direction = vec({0.5, 0.0});
  CHECK(adaptive_step(g, 2.0) == 1.0);
  g.direction = vec({0.0, 0.0});
  CHECK_THROWS_AS(adaptive_step(g, 2.0), DegenerateDirection);
}

TEST_CASE("armijo on the parabola rejects the full step") {
  const auto p = th::parabola();
  const Vector x = vec({1});
  const auto gap = condg_direction(p, x);
  REQUIRE(gap.theta == doctest::Approx(-4.0));
  const double zeta = 1e-4;
  // f(-1) = 1 exceeds 1 - 4 zeta, so lambda = 1 fails the test
  CHECK(1.0 > 1.0 - 4.0 * zeta);
  const auto r = armijo_search(p, x, evaluate(p, x).F, gap, zeta, 0.05, 0.95);
  REQUIRE(r.trials.size() == 2);
  CHECK(r.trials[0] == 1.0);
  // quadratic interpolation of (1 - 2 l)^2 is exact
  CHECK(r.lambda == doctest::Approx(0.5));
  CHECK(r.accepted.F(0) <= 1.0 - zeta * r.lambda * 4.0);
}

TEST_CASE("armijo backtrack stays in the bracket") {
  const auto p = th::parabola(50.0);
  const Vector x = vec({0.1});
  const auto gap = condg_direction(p, x);
  const Vector Fx = evaluate(p, x).F;
  const auto r = armijo_search(p, x, Fx, gap, 1e-4, 0.05, 0.95);
  REQUIRE(r.trials.size() >= 2);
  for (std::size_t i = 1; i < r.trials.size(); ++i) {
    CHECK(r.trials[i] >= 0.05 * r.trials[i - 1] - 1e-15);
    CHECK(r.trials[i] <= 0.95 * r.trials[i - 1] + 1e-15);
  }
  CHECK(r.accepted.F(0) <= Fx(0) + 1e-4 * r.lambda * gap.theta);
}

TEST_CASE("stop test") {
  int calls = 0;
  auto provider = [&]() {
    ++calls;
    return -5e-5;
  };
  const auto a = check_stop(vec({1, 2}), vec({1, 2}), provider);
  CHECK(a.step_ratio == 0.0);
  CHECK(a.step_test);
  CHECK(a.converged);
  CHECK(calls == 1);
  const auto b = check_stop(vec({1, 1}), vec({1.0002, 1}), provider);
  CHECK_FALSE(b.step_test);
  CHECK_FALSE(b.theta_pg);
  CHECK(calls == 1);
  const auto c = check_stop(vec({1}), vec({1}), [] { return -1e-3; });
  CHECK_FALSE(c.converged);
}

TEST_CASE("condg adaptive on the parabola") {
  const auto p = th::parabola();
  SolverOptions o;
  o.rule = StepRule::adaptive(2.0);
  const auto tr = run_condg(p, vec({1}), o);
  REQUIRE(tr.records.size() == 1);
  CHECK(tr.records[0].theta == doctest::Approx(-4.0));
  CHECK(tr.records[0].lambda == doctest::Approx(0.5));
  CHECK(tr.x_final(0) == doctest::Approx(0.0));
  CHECK(tr.success());
  CHECK(std::abs(*tr.theta_final) <= 1e-12);
}

TEST_CASE("critical start") {
  const auto p = th::parabola();
  for (Method m : {Method::CondG, Method::ProxGrad}) {
    const auto tr = run_solver(m, p, vec({0}));
    CHECK(tr.stop_reason == StopReason::CriticalAtStart);
    CHECK(tr.iterations() == 0);
  }
}

TEST_CASE("proxgrad on the parabola") {
  const auto p = th::parabola();
  const auto tr = run_proxgrad(p, vec({1}));
  REQUIRE(tr.records.size() >= 1);
  CHECK(std::abs(tr.records[0].theta + 2.0) <= 1e-6);
  CHECK(tr.success());
  CHECK(std::abs(tr.x_final(0)) <= 1e-3);
  check_armijo_trace(p, tr);
}

TEST_CASE("robust BK1 with armijo") {
  RobustConfig rc;
  rc.seed = 3;
  const auto p = make_robust_problem("BK1", rc);
  for (Method m : {Method::CondG, Method::ProxGrad}) {
    const auto tr = run_solver(m, p, vec({8, -4}));
    CHECK(tr.success());
    if (tr.stop_reason == StopReason::Converged) CHECK(std::abs(*tr.theta_pg_final) <= 1e-4);
    check_armijo_trace(p, tr);
  }
}

TEST_CASE("robust JOS1 proxgrad converges") {
  RobustConfig rc;
  rc.seed = 1;
  const auto p = make_robust_problem("JOS1", rc, 10);
  Rng rng(4, 4);
  for (int t = 0; t < 3; ++t) {
    const auto tr = run_proxgrad(p, oracle::uniform_point(rng, p.box));
    CHECK(tr.success());
    if (tr.stop_reason == StopReason::Converged) CHECK(std::abs(*tr.theta_pg_final) <= 1e-4);
  }
}

TEST_CASE("adaptive steps on robust JOS1 lie in (0, 1]") {
  RobustConfig rc;
  const auto p = make_robust_problem("JOS1", rc, 10);
  SolverOptions o;
  o.rule = StepRule::adaptive();
  Rng rng(5, 5);
  const auto tr = run_condg(p, oracle::uniform_point(rng, p.box), o);
  CHECK(tr.L_used > 0.0);
  for (const auto& r : tr.records) {
    CHECK(r.lambda > 0.0);
    CHECK(r.lambda <= 1.0);
  }
}

TEST_CASE("condg asks for the proximal gap only after a short step") {
  RobustConfig rc;
  Rng rng(6, 6);
  for (const char* name : {"BK1", "FDS", "VU2"}) {
    const auto p = make_robust_problem(name, rc);
    const auto tr = run_condg(p, oracle::uniform_point(rng, p.box));
    std::size_t asked = tr.theta_pg_final ? 1 : 0;
    for (const auto& r : tr.records)
      if (r.theta_pg) {
        ++asked;
        CHECK(r.step_ratio <= tr.options.step_tol);
      }
    CHECK(tr.counters.qp_solves == asked);
  }
}

TEST_CASE("iteration cap") {
  RobustConfig rc;
  const auto p = make_robust_problem("JOS1", rc, 10);
  SolverOptions o;
  o.rule = StepRule::diminishing();
  o.max_iterations = 5;
  const auto tr = run_condg(p, p.box.ub(), o);
  CHECK(tr.stop_reason == StopReason::MaxIterations);
  CHECK(tr.iterations() == 5);
  CHECK_FALSE(tr.success());
}

TEST_CASE("start outside the box") {
  const auto p = th::parabola();
  CHECK_THROWS_AS(run_condg(p, vec({2})), OutOfDomain);
}
