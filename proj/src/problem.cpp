#include "mocondg/problem.hpp"

#include "mocondg/errors.hpp"
#include "mocondg/subproblems.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <string>

namespace mocondg {

PolyhedralUncertaintySet::PolyhedralUncertaintySet(Matrix B, double delta) : B_(std::move(B)), delta_(delta) {
  if (B_.rows() != B_.cols() || B_.rows() == 0) throw DimensionMismatch("uncertainty set: B must be square and nonempty");
  if (!(delta_ > 0.0) || !std::isfinite(delta_)) throw InvalidArgument("uncertainty set: delta must be positive and finite");
  if (!B_.allFinite()) throw InvalidArgument("uncertainty set: B has non-finite entries");
  const Vector sv = Eigen::BDCSVD<Matrix>(B_).singularValues();
  if (sv.minCoeff() < 1e-8 * sv.maxCoeff()) throw DegenerateMatrix("uncertainty set: B is numerically singular");

  const int n = dim();
  if (n <= 12) {
    // Vertices of Z are B^{-1} s for sign vectors s scaled by delta.
    const Matrix Binv = B_.partialPivLu().inverse();
    double best = 0.0;
    Vector s(n);
    for (unsigned long mask = 0; mask < (1UL << n); ++mask) {
      for (int i = 0; i < n; ++i) s(i) = (mask >> i) & 1UL ? delta_ : -delta_;
      best = std::max(best, (Binv * s).norm());
    }
    max_norm_ = best;
  } else {
    max_norm_ = delta_ * std::sqrt(static_cast<double>(n)) / sv.minCoeff();
  }
}

Matrix PolyhedralUncertaintySet::A() const {
  Matrix a(2 * dim(), dim());
  a.topRows(dim()) = B_;
  a.bottomRows(dim()) = -B_;
  return a;
}

Vector PolyhedralUncertaintySet::b() const { return Vector::Constant(2 * dim(), delta_); }

BoxDomain::BoxDomain(Vector lb, Vector ub) : lb_(std::move(lb)), ub_(std::move(ub)) {
  if (lb_.size() != ub_.size() || lb_.size() == 0) throw DimensionMismatch("box: bound vectors differ in length or are empty");
  if (!lb_.allFinite() || !ub_.allFinite()) throw InvalidArgument("box: bounds must be finite");
  if ((lb_.array() > ub_.array()).any()) throw InvalidArgument("box: lb exceeds ub");
  if (!(diameter() > 0.0)) throw InvalidArgument("box: zero diameter");
}

bool BoxDomain::contains(const Vector& x, double tol) const {
  if (x.size() != lb_.size()) return false;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x(i))) return false;
    if (x(i) < lb_(i) - tol * std::max(1.0, std::abs(lb_(i)))) return false;
    if (x(i) > ub_(i) + tol * std::max(1.0, std::abs(ub_(i)))) return false;
  }
  return true;
}

Vector BoxDomain::clamp(const Vector& x) const { return x.cwiseMax(lb_).cwiseMin(ub_); }

NonsmoothTerm NonsmoothTerm::support(std::vector<PolyhedralUncertaintySet> sets) {
  if (sets.empty()) throw InvalidArgument("support term needs at least one set");
  NonsmoothTerm t;
  t.sets_ = std::move(sets);
  return t;
}

double NonsmoothTerm::lipschitz() const {
  double l = 0.0;
  for (const auto& s : sets_) l = std::max(l, s.max_norm());
  return l;
}

CompositeProblem::CompositeProblem(std::string name_, SmoothObjective smooth_, NonsmoothTerm nonsmooth_, BoxDomain box_)
    : name(std::move(name_)), smooth(std::move(smooth_)), nonsmooth(std::move(nonsmooth_)), box(std::move(box_)) {
  if (smooth.n != box.dim()) throw DimensionMismatch("problem " + name + ": smooth part and box disagree on n");
  if (smooth.m < 1) throw InvalidArgument("problem " + name + ": needs at least one objective");
  if (!smooth.eval || !smooth.grad) throw InvalidArgument("problem " + name + ": missing eval or grad");
  if (!nonsmooth.is_zero()) {
    if (static_cast<int>(nonsmooth.sets().size()) != smooth.m)
      throw DimensionMismatch("problem " + name + ": need one uncertainty set per objective");
    for (const auto& s : nonsmooth.sets())
      if (s.dim() != smooth.n) throw DimensionMismatch("problem " + name + ": uncertainty set dimension differs from n");
  }
  if (smooth.lipschitz && smooth.lipschitz->size() != smooth.m)
    throw DimensionMismatch("problem " + name + ": one Lipschitz constant per objective");
}

void require_in_box(const CompositeProblem& problem, const Vector& x) {
  if (x.size() != problem.n()) throw DimensionMismatch("point has wrong dimension for " + problem.name);
  if (!problem.box.contains(x)) throw OutOfDomain("point lies outside the box of " + problem.name);
}

Vector evaluate_smooth(const CompositeProblem& problem, const Vector& x, EvalCounters* counters) {
  require_in_box(problem, x);
  if (counters) ++counters->f_evals;
  return problem.smooth.eval(x);
}

Vector evaluate_nonsmooth(const CompositeProblem& problem, const Vector& x, EvalCounters* counters) {
  require_in_box(problem, x);
  Vector g = Vector::Zero(problem.m());
  if (problem.nonsmooth.is_zero()) return g;
  for (int j = 0; j < problem.m(); ++j) g(j) = support_value(problem.nonsmooth.sets()[j], x, counters);
  return g;
}

Evaluation evaluate(const CompositeProblem& problem, const Vector& x, EvalCounters* counters) {
  Evaluation e;
  e.H = evaluate_smooth(problem, x, counters);
  e.G = evaluate_nonsmooth(problem, x, counters);
  e.F = e.G + e.H;
  return e;
}

Matrix jacobian(const CompositeProblem& problem, const Vector& x, EvalCounters* counters) {
  require_in_box(problem, x);
  if (counters) ++counters->grad_evals;
  return problem.smooth.grad(x);
}

}  // namespace mocondg
