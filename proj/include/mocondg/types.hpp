#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <limits>

namespace mocondg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Per-run evaluation accumulator. Problems themselves stay immutable.
struct EvalCounters {
  std::size_t f_evals = 0;
  std::size_t grad_evals = 0;
  std::size_t lp_solves = 0;
  std::size_t qp_solves = 0;

  EvalCounters& operator+=(const EvalCounters& o) {
    f_evals += o.f_evals;
    grad_evals += o.grad_evals;
    lp_solves += o.lp_solves;
    qp_solves += o.qp_solves;
    return *this;
  }
};

}  // namespace mocondg
