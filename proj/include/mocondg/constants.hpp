#pragma once

#include "mocondg/problem.hpp"
#include "mocondg/solvers.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace mocondg {

struct ConstantsEstimate {
  double rho = 0.0;      // sup ||grad h_j|| over the box
  bool rho_exact = false;
  double L_G = 0.0;      // max_j sup { ||z|| : z in Z_j }
  double Omega = 0.0;    // box diameter
  double L = 0.0;        // max_j L_j
  double gamma = 0.0;
  double zeta = 1e-4;
  double omega1 = 0.05;
  double omega2 = 0.95;
  // Filled by attach_levels; NaN until then.
  double f_start = std::numeric_limits<double>::quiet_NaN();
  double f_inf = std::numeric_limits<double>::quiet_NaN();
  bool f_inf_estimated = true;
};

/// min{ 1/((rho + L_G) Omega), 2 omega1 (1 - zeta) / (L Omega^2) }.
double gamma_bound(double rho, double L_G, double Omega, double L, double zeta, double omega1);

/// rho is the analytic bound when the problem carries one, otherwise the
/// sampled maximum over `samples` box points (plus lb, ub, midpoint) times 1.1.
ConstantsEstimate estimate_constants(const CompositeProblem& problem, const StepRule& rule = {}, int samples = 1000,
                                     std::uint64_t seed = 0xc0457ULL);

/// f_start = max_j F_j(x0); f_inf = min_j of the best F_j seen in `pool`.
void attach_levels(ConstantsEstimate& c, const Vector& F0, const std::vector<Vector>& pool);

/// 1 + ln(gamma eps) / ln(omega2): backtracking count bound for |theta| > eps.
double backtrack_bound(const ConstantsEstimate& c, double eps);

std::string constants_json(const ConstantsEstimate& c);

}  // namespace mocondg
