#pragma once

#include "mocondg/problem.hpp"
#include "mocondg/uncertainty_set.hpp"

#include <cmath>

namespace th {

using mocondg::Matrix;
using mocondg::Vector;

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) out(i++) = d;
  return out;
}

/// n = m = 1, h(x) = a x^2 on [-1, 1], G = 0.
inline mocondg::CompositeProblem parabola(double a = 1.0) {
  mocondg::SmoothObjective s;
  s.n = 1;
  s.m = 1;
  s.eval = [a](const Vector& x) { return Vector::Constant(1, a * x(0) * x(0)); };
  s.grad = [a](const Vector& x) { return Matrix::Constant(1, 1, 2.0 * a * x(0)); };
  s.lipschitz = Vector::Constant(1, 2.0 * a);
  s.grad_norm_bound = 2.0 * a;
  s.convex = true;
  return mocondg::CompositeProblem("parabola", s, mocondg::NonsmoothTerm::zero(),
                                   mocondg::BoxDomain(vec({-1.0}), vec({1.0})));
}

inline bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace th
