#include "mocondg/constants.hpp"

#include "mocondg/errors.hpp"
#include "mocondg/rng.hpp"

#include "json.hpp"

#include <cmath>

namespace mocondg {

double gamma_bound(double rho, double L_G, double Omega, double L, double zeta, double omega1) {
  if (!(Omega > 0.0)) throw InvalidArgument("gamma_bound: Omega must be positive");
  double g = kInf;
  if (rho + L_G > 0.0) g = 1.0 / ((rho + L_G) * Omega);
  if (L > 0.0) g = std::min(g, 2.0 * omega1 * (1.0 - zeta) / (L * Omega * Omega));
  return g;
}

ConstantsEstimate estimate_constants(const CompositeProblem& problem, const StepRule& rule, int samples,
                                     std::uint64_t seed) {
  rule.validate();
  ConstantsEstimate c;
  c.zeta = rule.zeta;
  c.omega1 = rule.omega1;
  c.omega2 = rule.omega2;
  const BoxDomain& box = problem.box;
  if (problem.smooth.grad_norm_bound) {
    c.rho = *problem.smooth.grad_norm_bound;
    c.rho_exact = true;
  } else {
    auto sup_at = [&](const Vector& x) { return problem.smooth.grad(x).rowwise().norm().maxCoeff(); };
    double rho = std::max({sup_at(box.lb()), sup_at(box.ub()), sup_at(box.midpoint())});
    Rng rng(seed, stream_id("constants_rho"));
    Vector x(box.dim());
    for (int s = 0; s < samples; ++s) {
      for (int i = 0; i < box.dim(); ++i) x(i) = rng.uniform(box.lb()(i), box.ub()(i));
      rho = std::max(rho, sup_at(x));
    }
    c.rho = 1.1 * rho;
  }
  c.L_G = problem.nonsmooth.lipschitz();
  c.Omega = box.diameter();
  c.L = problem_lipschitz(problem);
  c.gamma = gamma_bound(c.rho, c.L_G, c.Omega, c.L, c.zeta, c.omega1);
  return c;
}

void attach_levels(ConstantsEstimate& c, const Vector& F0, const std::vector<Vector>& pool) {
  c.f_start = F0.maxCoeff();
  double best = kInf;
  for (const auto& F : pool) best = std::min(best, F.minCoeff());
  best = std::min(best, F0.minCoeff());
  c.f_inf = best;
  c.f_inf_estimated = true;
}

double backtrack_bound(const ConstantsEstimate& c, double eps) {
  return 1.0 + std::log(c.gamma * eps) / std::log(c.omega2);
}

std::string constants_json(const ConstantsEstimate& c) {
  nlohmann::ordered_json j;
  j["rho"] = c.rho;
  j["rho_exact"] = c.rho_exact;
  j["L_G"] = c.L_G;
  j["Omega"] = c.Omega;
  j["L"] = c.L;
  j["gamma"] = c.gamma;
  j["zeta"] = c.zeta;
  j["omega1"] = c.omega1;
  j["omega2"] = c.omega2;
  if (std::isfinite(c.f_start)) j["f_start"] = c.f_start;
  if (std::isfinite(c.f_inf)) {
    j["f_inf"] = c.f_inf;
    j["f_inf_estimated"] = c.f_inf_estimated;
  }
  return j.dump(2);
}

}  // namespace mocondg
