#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"

#include "mocondg/constants.hpp"
#include "mocondg/registry.hpp"
#include "mocondg/robust.hpp"

#include "json.hpp"

using namespace mocondg;
using th::vec;

TEST_CASE("constants of a smooth problem") {
  SmoothObjective s;
  s.n = 2;
  s.m = 1;
  s.eval = [](const Vector& x) { return Vector::Constant(1, 0.5 * x.squaredNorm()); };
  s.grad = [](const Vector& x) { return Matrix(x.transpose()); };
  s.lipschitz = vec({1.0});
  CompositeProblem p("q", s, NonsmoothTerm::zero(), BoxDomain(vec({-1, -1}), vec({1, 1})));
  const auto c = estimate_constants(p);
  CHECK(c.L_G == 0.0);
  CHECK(c.Omega == doctest::Approx(2.0 * std::sqrt(2.0)));
  CHECK(c.L == 1.0);
  // sup ||x|| over the box is sqrt(2); sampled value times 1.1 must cover it
  CHECK(c.rho >= std::sqrt(2.0) - 1e-12);
  CHECK(c.gamma == doctest::Approx(gamma_bound(c.rho, 0.0, c.Omega, 1.0, 1e-4, 0.05)));
}

TEST_CASE("gamma formula") {
  const double a = 1.0 / ((3.0 + 1.0) * 2.0);
  const double b = 2.0 * 0.05 * (1.0 - 1e-4) / (5.0 * 4.0);
  CHECK(gamma_bound(3.0, 1.0, 2.0, 5.0, 1e-4, 0.05) == doctest::Approx(std::min(a, b)));
}

TEST_CASE("levels and backtrack bound") {
  RobustConfig rc;
  const auto p = make_robust_problem("JOS1", rc, 10);
  auto c = estimate_constants(p);
  CHECK(c.gamma > 0.0);
  CHECK(c.L_G > 0.0);
  attach_levels(c, vec({5, 7}), {vec({1, 3}), vec({2, 0.5})});
  CHECK(c.f_start == 7.0);
  CHECK(c.f_inf == 0.5);
  CHECK(backtrack_bound(c, 1e-3) == doctest::Approx(1.0 + std::log(c.gamma * 1e-3) / std::log(0.95)));
  const auto j = nlohmann::json::parse(constants_json(c));
  CHECK(j.at("gamma").get<double>() == c.gamma);
}
