#include "mocondg/lp.hpp"

#include <Eigen/Sparse>

#include "mocondg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

namespace mocondg {

LinearProgram LinearProgram::with_vars(int n) {
  LinearProgram lp;
  lp.cost = Vector::Zero(n);
  lp.rows = Matrix::Zero(0, n);
  lp.rhs = Vector::Zero(0);
  lp.lower = Vector::Zero(n);
  lp.upper = Vector::Constant(n, kInf);
  return lp;
}

void LinearProgram::add_row(const Vector& coeffs, RowSense s, double b) {
  if (coeffs.size() != cost.size()) throw DimensionMismatch("add_row: coefficient length differs from variable count");
  const Eigen::Index r = rows.rows();
  rows.conservativeResize(r + 1, Eigen::NoChange);
  rows.row(r) = coeffs.transpose();
  rhs.conservativeResize(r + 1);
  rhs(r) = b;
  sense.push_back(s);
}

void LinearProgram::validate() const {
  const auto n = cost.size();
  if (rows.cols() != n || lower.size() != n || upper.size() != n) throw DimensionMismatch("LinearProgram: column counts disagree");
  if (rhs.size() != rows.rows() || static_cast<Eigen::Index>(sense.size()) != rows.rows())
    throw DimensionMismatch("LinearProgram: row counts disagree");
  if (!cost.allFinite() || !rows.allFinite() || !rhs.allFinite()) throw InvalidArgument("LinearProgram: non-finite data");
  for (Eigen::Index j = 0; j < n; ++j) {
    if (std::isnan(lower(j)) || std::isnan(upper(j)) || lower(j) == kInf || upper(j) == -kInf)
      throw InvalidArgument("LinearProgram: invalid bound on variable " + std::to_string(j));
  }
}

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "Optimal";
    case LpStatus::Infeasible: return "Infeasible";
    case LpStatus::Unbounded: return "Unbounded";
  }
  return "?";
}

namespace {

// Column layout: [0, n) structural, then one logical column per row that
// needs it (slack or artificial), each a signed unit vector.
class Simplex {
 public:
  Simplex(const LinearProgram& lp, const LpOptions& opt) : lp_(lp), opt_(opt) {
    n_ = lp.num_vars();
    rows_ = lp.num_rows();
    sparse_ = lp.rows.sparseView();
    sparse_.makeCompressed();
    bland_after_ = opt.bland_after > 0 ? opt.bland_after : 3 * (n_ + rows_);
    max_iter_ = 50 * (n_ + rows_) + 1000;
    scale_b_ = 1.0 + (rows_ > 0 ? lp.rhs.lpNorm<Eigen::Infinity>() : 0.0);
    if (!setup_from_hint()) setup();
    rejected_.assign(total_, 0);
  }

  LpSolution run() {
    LpSolution sol;
    if (has_artificials_) {
      set_phase1_costs();
      auto st = iterate(/*phase=*/1);
      if (st == Outcome::Unbounded) throw NumericalFailure("simplex: phase 1 reported an unbounded ray");
      double infeas = 0.0;
      for (int j = n_; j < total_; ++j)
        if (kind_[j] == Kind::Artificial) infeas += x_[j];
      if (infeas > opt_.feasibility_tol * scale_b_) {
        sol.status = LpStatus::Infeasible;
        sol.x = x_.head(n_);
        sol.iterations = iterations_;
        return sol;
      }
      drive_out_artificials();
    }
    set_phase2_costs();
    auto st = iterate(/*phase=*/2);
    if (since_refactor_ != 0) refactor();
    else recompute_basic_values();
    sol.iterations = iterations_;
    sol.x = x_.head(n_);
    sol.value = lp_.cost.dot(sol.x);
    if (st == Outcome::Unbounded) {
      sol.status = LpStatus::Unbounded;
      sol.value = -kInf;
      return sol;
    }
    sol.status = LpStatus::Optimal;
    fill_duals(sol);
    return sol;
  }

 private:
  enum class Kind { Structural, Slack, Artificial };
  enum class Outcome { Optimal, Unbounded };

  void setup() {
    reset_columns();
    // Nonbasic starting values for structural columns.
    for (int j = 0; j < n_; ++j) {
      lo_.push_back(lp_.lower(j));
      up_.push_back(lp_.upper(j));
      kind_.push_back(Kind::Structural);
      row_of_.push_back(-1);
      sign_.push_back(0.0);
    }
    std::vector<double> xs(n_);
    for (int j = 0; j < n_; ++j) {
      if (std::isfinite(lo_[j])) xs[j] = lo_[j];
      else if (std::isfinite(up_[j])) xs[j] = up_[j];
      else xs[j] = 0.0;
    }
    Eigen::Map<const Vector> xn(xs.data(), n_);
    Vector resid = rows_ > 0 ? Vector(lp_.rhs - lp_.rows * xn) : Vector();

    std::vector<double> xl;
    head_.assign(rows_, -1);
    for (int i = 0; i < rows_; ++i) {
      const RowSense s = lp_.sense[i];
      const double r = resid(i);
      if (s != RowSense::Equal) {
        const double slo = s == RowSense::LessEqual ? 0.0 : -kInf;
        const double sup = s == RowSense::LessEqual ? kInf : 0.0;
        const int j = add_logical(Kind::Slack, i, 1.0, slo, sup);
        const bool fits = (s == RowSense::LessEqual) ? r >= 0.0 : r <= 0.0;
        if (fits) {
          head_[i] = j;
          xl.push_back(r);
          continue;
        }
        xl.push_back(0.0);
      }
      const double sg = r >= 0.0 ? 1.0 : -1.0;
      const int a = add_logical(Kind::Artificial, i, sg, 0.0, kInf);
      head_[i] = a;
      xl.push_back(std::abs(r));
      has_artificials_ = true;
    }
    total_ = static_cast<int>(lo_.size());
    x_ = Vector::Zero(total_);
    for (int j = 0; j < n_; ++j) x_(j) = xs[j];
    for (int j = n_; j < total_; ++j) x_(j) = xl[j - n_];
    pos_.assign(total_, -1);
    for (int i = 0; i < rows_; ++i) pos_[head_[i]] = i;
    cost_ = Vector::Zero(total_);
    binv_ = Matrix::Zero(rows_, rows_);
    for (int i = 0; i < rows_; ++i) binv_(i, i) = 1.0 / sign_[head_[i]];
    since_refactor_ = 1 << 30;
  }

  void reset_columns() {
    lo_.clear();
    up_.clear();
    kind_.clear();
    row_of_.clear();
    sign_.clear();
    has_artificials_ = false;
  }

  // Crash start from a caller-supplied basis. Returns false (and leaves the
  // object ready for setup()) when the hint is unusable.
  bool setup_from_hint() {
    const auto& hint = opt_.basis_hint;
    if (rows_ == 0 || static_cast<int>(hint.size()) != rows_) return false;
    reset_columns();
    for (int j = 0; j < n_; ++j) {
      lo_.push_back(lp_.lower(j));
      up_.push_back(lp_.upper(j));
      kind_.push_back(Kind::Structural);
      row_of_.push_back(-1);
      sign_.push_back(0.0);
    }
    std::vector<int> slack_of(rows_, -1);
    for (int i = 0; i < rows_; ++i) {
      const RowSense s = lp_.sense[i];
      if (s == RowSense::Equal) continue;
      slack_of[i] = add_logical(Kind::Slack, i, 1.0, s == RowSense::LessEqual ? 0.0 : -kInf,
                                s == RowSense::LessEqual ? kInf : 0.0);
    }
    total_ = static_cast<int>(lo_.size());
    head_.assign(rows_, -1);
    pos_.assign(total_, -1);
    for (int i = 0; i < rows_; ++i) {
      const int j = hint[i] < 0 ? slack_of[i] : hint[i];
      if (j < 0 || j >= total_ || pos_[j] >= 0 || (hint[i] >= n_)) {
        reset_columns();
        return false;
      }
      head_[i] = j;
      pos_[j] = i;
    }
    x_ = Vector::Zero(total_);
    for (int j = 0; j < n_; ++j) {
      if (pos_[j] >= 0) continue;
      const bool want_up = j < static_cast<int>(opt_.upper_hint.size()) && opt_.upper_hint[j];
      if (want_up && std::isfinite(up_[j])) x_(j) = up_[j];
      else if (std::isfinite(lo_[j])) x_(j) = lo_[j];
      else if (std::isfinite(up_[j])) x_(j) = up_[j];
    }
    cost_ = Vector::Zero(total_);
    try {
      refactor();
    } catch (const NumericalFailure&) {
      reset_columns();
      return false;
    }
    for (int i = 0; i < rows_; ++i) {
      const int b = head_[i];
      const double tol = opt_.feasibility_tol * (1.0 + std::abs(x_(b)));
      if (x_(b) < lo_[b] - tol || x_(b) > up_[b] + tol) {
        reset_columns();
        return false;
      }
      x_(b) = std::clamp(x_(b), lo_[b], up_[b]);
    }
    return true;
  }

  int add_logical(Kind k, int row, double sg, double lo, double up) {
    lo_.push_back(lo);
    up_.push_back(up);
    kind_.push_back(k);
    row_of_.push_back(row);
    sign_.push_back(sg);
    return static_cast<int>(lo_.size()) - 1;
  }

  void set_phase1_costs() {
    cost_.setZero();
    for (int j = n_; j < total_; ++j)
      if (kind_[j] == Kind::Artificial) cost_(j) = 1.0;
  }

  void set_phase2_costs() {
    cost_.setZero();
    cost_.head(n_) = lp_.cost;
  }

  // B^{-1} a_j using the sparsity of a_j.
  Vector ftran(int j) const {
    if (j >= n_) return sign_[j] * binv_.col(row_of_[j]);
    Vector out = Vector::Zero(rows_);
    for (SpMat::InnerIterator it(sparse_, j); it; ++it) out.noalias() += it.value() * binv_.col(it.row());
    return out;
  }

  Vector column(int j) const {
    if (j < n_) return lp_.rows.col(j);
    Vector c = Vector::Zero(rows_);
    c(row_of_[j]) = sign_[j];
    return c;
  }

  void refactor() {
    if (rows_ == 0) return;
    Matrix basis(rows_, rows_);
    for (int i = 0; i < rows_; ++i) basis.col(i) = column(head_[i]);
    Eigen::PartialPivLU<Matrix> lu(basis);
    const double rc = lu.rcond();
    if (!(rc > 1e-14)) throw NumericalFailure("simplex: basis matrix is numerically singular");
    binv_ = lu.inverse();
    recompute_basic_values();
    since_refactor_ = 0;
  }

  void recompute_basic_values() {
    Vector r = lp_.rhs;
    Vector xn = x_.head(n_);
    for (int j = 0; j < n_; ++j)
      if (pos_[j] >= 0) xn(j) = 0.0;
    r -= sparse_ * xn;
    for (int j = n_; j < total_; ++j)
      if (pos_[j] < 0) r(row_of_[j]) -= sign_[j] * x_(j);
    Vector xb = binv_ * r;
    for (int i = 0; i < rows_; ++i) x_(head_[i]) = xb(i);
  }

  Vector basic_costs() const {
    Vector cb(rows_);
    for (int i = 0; i < rows_; ++i) cb(i) = cost_(head_[i]);
    return cb;
  }

  Vector reduced_costs(const Vector& y) const {
    Vector d(total_);
    d.head(n_) = cost_.head(n_);
    if (rows_ > 0) d.head(n_) -= sparse_.transpose() * y;
    for (int j = n_; j < total_; ++j) d(j) = cost_(j) - sign_[j] * y(row_of_[j]);
    return d;
  }

  bool is_fixed(int j) const { return lo_[j] == up_[j]; }

  // +1: increasing improves, -1: decreasing improves, 0: not eligible.
  int eligible_direction(int j, double dj) const {
    if (pos_[j] >= 0 || is_fixed(j)) return 0;
    const double tol = opt_.optimality_tol;
    const bool at_lo = std::isfinite(lo_[j]) && x_(j) <= lo_[j];
    const bool at_up = std::isfinite(up_[j]) && x_(j) >= up_[j];
    if (dj < -tol && !at_up) return +1;
    if (dj > tol && !at_lo) return -1;
    return 0;
  }

  Outcome iterate(int phase) {
    int phase_iter = 0;
    weight_.assign(total_, 1.0);
    if (since_refactor_ != 0) refactor();
    Vector d;
    for (;;) {
      if (since_refactor_ >= opt_.refactor_every) refactor();
      const bool bland = opt_.always_bland || phase_iter >= bland_after_;
      // Reduced costs are updated from the pivot row and recomputed on refactorization.
      if (since_refactor_ == 0 || d.size() == 0) d = reduced_costs(Vector(binv_.transpose() * basic_costs()));

      int q = -1;
      int dir = 0;
      double best = 0.0;
      for (int j = 0; j < total_; ++j) {
        if (rejected_[j]) continue;
        const int dj = eligible_direction(j, d(j));
        if (dj == 0) continue;
        if (bland) {
          q = j;
          dir = dj;
          break;
        }
        // Devex: reduced cost scaled by the approximate edge length.
        const double score = d(j) * d(j) / weight_[j];
        if (score > best) {
          best = score;
          q = j;
          dir = dj;
        }
      }
      if (q < 0) {
        // Columns left out for tiny pivots only count as optimal after a fresh factorization.
        if (rejected_list_.empty()) return Outcome::Optimal;
        clear_rejected();
        if (since_refactor_ == 0) return Outcome::Optimal;
        refactor();
        continue;
      }

      const Vector alpha = ftran(q);
      // Basic variable i changes by delta(i) * t when x_q moves by dir * t.
      const Vector delta = -static_cast<double>(dir) * alpha;

      double flip = kInf;
      if (std::isfinite(lo_[q]) && std::isfinite(up_[q])) flip = up_[q] - lo_[q];

      int leave = -1;
      double step = kInf;
      if (bland) {
        for (int i = 0; i < rows_; ++i) {
          const double ratio = ratio_for(i, delta(i), 0.0);
          if (ratio < step || (ratio == step && ratio < kInf && leave >= 0 && head_[i] < head_[leave])) {
            step = ratio;
            leave = i;
          }
        }
        if (step == kInf) leave = -1;
      } else {
        double relaxed = kInf;
        for (int i = 0; i < rows_; ++i) relaxed = std::min(relaxed, ratio_for(i, delta(i), opt_.feasibility_tol));
        if (relaxed < kInf) {
          double piv = 0.0;
          for (int i = 0; i < rows_; ++i) {
            const double ratio = ratio_for(i, delta(i), 0.0);
            if (ratio <= relaxed && std::abs(delta(i)) > piv) {
              piv = std::abs(delta(i));
              leave = i;
              step = std::max(ratio, 0.0);
            }
          }
        }
      }

      // A tiny pivot relative to the column wrecks the basis inverse; try another column.
      if (leave >= 0 && flip > step && std::abs(delta(leave)) < 1e-7 * std::max(1.0, alpha.lpNorm<Eigen::Infinity>())) {
        rejected_[q] = 1;
        rejected_list_.push_back(q);
        continue;
      }

      if (leave < 0 && flip == kInf) {
        if (phase == 1) throw NumericalFailure("simplex: unbounded direction in phase 1");
        return Outcome::Unbounded;
      }

      if (flip <= step) {
        x_(q) += dir * flip;
        for (int i = 0; i < rows_; ++i) x_(head_[i]) += delta(i) * flip;
        x_(q) = dir > 0 ? up_[q] : lo_[q];
      } else {
        x_(q) += dir * step;
        for (int i = 0; i < rows_; ++i) x_(head_[i]) += delta(i) * step;
        const int out = head_[leave];
        x_(out) = delta(leave) < 0.0 ? lo_[out] : up_[out];
        const Vector ar = pivot_row(leave);
        if (!bland) update_weights(ar, leave, q, alpha(leave));
        d -= (d(q) / alpha(leave)) * ar;
        d(q) = 0.0;
        pivot(leave, q, alpha);
      }

      clear_rejected();
      ++phase_iter;
      if (++iterations_ > max_iter_) throw NumericalFailure("simplex: iteration limit exceeded");
    }
  }

  // Largest t >= 0 keeping basic variable i within bounds relaxed by tol.
  double ratio_for(int i, double delta_i, double tol) const {
    const int b = head_[i];
    // Basic values a hair outside their bounds give zero, not negative, steps.
    if (delta_i < -opt_.pivot_tol) {
      if (!std::isfinite(lo_[b])) return kInf;
      return std::max(0.0, (x_(b) - lo_[b] + tol) / (-delta_i));
    }
    if (delta_i > opt_.pivot_tol) {
      if (!std::isfinite(up_[b])) return kInf;
      return std::max(0.0, (up_[b] - x_(b) + tol) / delta_i);
    }
    return kInf;
  }

  // Row r of B^{-1}[A | logicals], every column.
  Vector pivot_row(int r) const {
    const Eigen::RowVectorXd rho = binv_.row(r);
    Vector ar(total_);
    ar.head(n_) = sparse_.transpose() * rho.transpose();
    for (int j = n_; j < total_; ++j) ar(j) = sign_[j] * rho(row_of_[j]);
    return ar;
  }

  void update_weights(const Vector& ar, int r, int q, double piv) {
    const double wq = weight_[q];
    if (wq > 1e6) {
      weight_.assign(total_, 1.0);
      return;
    }
    for (int j = 0; j < total_; ++j) {
      if (pos_[j] >= 0 || j == q) continue;
      const double a = ar(j);
      if (a == 0.0) continue;
      const double t = a / piv;
      weight_[j] = std::max(weight_[j], t * t * wq);
    }
    weight_[head_[r]] = std::max(wq / (piv * piv), 1.0);
  }

  void clear_rejected() {
    for (int j : rejected_list_) rejected_[j] = 0;
    rejected_list_.clear();
  }

  void pivot(int r, int q, const Vector& alpha) {
    const double piv = alpha(r);
    if (std::abs(piv) < opt_.pivot_tol) throw NumericalFailure("simplex: pivot below tolerance");
    const Eigen::RowVectorXd pivot_row = binv_.row(r) / piv;
    Vector a = alpha;
    a(r) = 0.0;
    binv_.noalias() -= a * pivot_row;
    binv_.row(r) = pivot_row;
    pos_[head_[r]] = -1;
    head_[r] = q;
    pos_[q] = r;
    ++since_refactor_;
  }

  void drive_out_artificials() {
    refactor();
    for (int r = 0; r < rows_; ++r) {
      const int b = head_[r];
      if (kind_[b] != Kind::Artificial) continue;
      const Eigen::RowVectorXd row = binv_.row(r);
      int best_j = -1;
      double best = 1e-7;
      for (int j = 0; j < total_; ++j) {
        if (pos_[j] >= 0 || kind_[j] == Kind::Artificial) continue;
        const double v = j < n_ ? row.dot(lp_.rows.col(j)) : sign_[j] * row(row_of_[j]);
        if (std::abs(v) > best) {
          best = std::abs(v);
          best_j = j;
        }
      }
      if (best_j < 0) continue;  // redundant row; artificial stays basic at zero
      const Vector alpha = binv_ * column(best_j);
      x_(b) = 0.0;
      pivot(r, best_j, alpha);
    }
    for (int j = n_; j < total_; ++j) {
      if (kind_[j] != Kind::Artificial) continue;
      lo_[j] = 0.0;
      up_[j] = 0.0;
      if (pos_[j] < 0) x_(j) = 0.0;
    }
    refactor();
  }

  void fill_duals(LpSolution& sol) const {
    const Vector y = rows_ > 0 ? Vector(binv_.transpose() * basic_costs()) : Vector();
    const Vector d = reduced_costs(y);
    sol.duals = y;
    sol.reduced_costs = d.head(n_);

    const double scale_c = 1.0 + lp_.cost.lpNorm<Eigen::Infinity>();
    double prim = 0.0;
    if (rows_ > 0) {
      const Vector act = lp_.rows * sol.x;
      for (int i = 0; i < rows_; ++i) {
        const double v = act(i) - lp_.rhs(i);
        switch (lp_.sense[i]) {
          case RowSense::LessEqual: prim = std::max(prim, v); break;
          case RowSense::GreaterEqual: prim = std::max(prim, -v); break;
          case RowSense::Equal: prim = std::max(prim, std::abs(v)); break;
        }
      }
    }
    for (int j = 0; j < n_; ++j) {
      prim = std::max(prim, lp_.lower(j) - sol.x(j));
      prim = std::max(prim, sol.x(j) - lp_.upper(j));
    }
    sol.primal_residual = prim / scale_b_;

    // Dual objective b'y + sum over columns of d_j times the bound it sits at.
    double dual_obj = rows_ > 0 ? lp_.rhs.dot(y) : 0.0;
    double comp = 0.0;
    for (int j = 0; j < total_; ++j) {
      if (kind_[j] == Kind::Artificial) continue;
      const double dj = std::abs(d(j)) <= opt_.optimality_tol ? 0.0 : d(j);
      if (dj == 0.0) continue;
      const double bound = dj > 0.0 ? lo_[j] : up_[j];
      if (!std::isfinite(bound)) {
        dual_obj = -kInf;
        break;
      }
      dual_obj += dj * bound;
      comp = std::max(comp, std::abs(dj * (x_(j) - bound)));
    }
    sol.complementarity = comp / (scale_b_ * scale_c);
    sol.duality_gap = std::abs(sol.value - dual_obj) / (1.0 + std::abs(sol.value));
  }

  using SpMat = Eigen::SparseMatrix<double>;

  const LinearProgram& lp_;
  const LpOptions& opt_;
  SpMat sparse_;  // lp_.rows, column-compressed
  int n_ = 0;
  int rows_ = 0;
  int total_ = 0;
  int bland_after_ = 0;
  int max_iter_ = 0;
  int iterations_ = 0;
  int since_refactor_ = 1 << 30;  // 0 right after a factorization
  double scale_b_ = 1.0;
  bool has_artificials_ = false;

  std::vector<double> lo_, up_, sign_;
  std::vector<Kind> kind_;
  std::vector<int> row_of_;
  std::vector<int> head_;  // basic variable per row position
  std::vector<int> pos_;   // row position per variable, -1 if nonbasic
  std::vector<double> weight_;  // Devex reference weights
  std::vector<char> rejected_;  // entering candidates skipped this iteration
  std::vector<int> rejected_list_;
  Vector x_;
  Vector cost_;
  Matrix binv_;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const LpOptions& options) {
  lp.validate();
  for (int j = 0; j < lp.num_vars(); ++j) {
    if (lp.lower(j) > lp.upper(j)) {
      LpSolution sol;
      sol.status = LpStatus::Infeasible;
      sol.x = Vector::Zero(lp.num_vars());
      return sol;
    }
  }
  Simplex s(lp, options);
  auto r = s.run();
  return r;
}

}  // namespace mocondg
