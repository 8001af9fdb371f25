#include "mocondg/qp.hpp"

#include "mocondg/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <vector>

namespace mocondg {

QuadraticProgram QuadraticProgram::with_vars(int n) {
  QuadraticProgram qp;
  qp.Q = Matrix::Zero(n, n);
  qp.c = Vector::Zero(n);
  qp.rows = Matrix::Zero(0, n);
  qp.rhs = Vector::Zero(0);
  qp.lower = Vector::Zero(n);
  qp.upper = Vector::Constant(n, kInf);
  return qp;
}

void QuadraticProgram::add_row(const Vector& coeffs, RowSense s, double b) {
  if (coeffs.size() != c.size()) throw DimensionMismatch("add_row: coefficient length differs from variable count");
  const Eigen::Index r = rows.rows();
  rows.conservativeResize(r + 1, Eigen::NoChange);
  rows.row(r) = coeffs.transpose();
  rhs.conservativeResize(r + 1);
  rhs(r) = b;
  sense.push_back(s);
}

void QuadraticProgram::validate() const {
  const auto n = c.size();
  if (Q.rows() != n || Q.cols() != n) throw DimensionMismatch("QuadraticProgram: Q has wrong shape");
  if (rows.cols() != n || lower.size() != n || upper.size() != n)
    throw DimensionMismatch("QuadraticProgram: column counts disagree");
  if (rhs.size() != rows.rows() || static_cast<Eigen::Index>(sense.size()) != rows.rows())
    throw DimensionMismatch("QuadraticProgram: row counts disagree");
  if (!Q.allFinite() || !c.allFinite() || !rows.allFinite() || !rhs.allFinite())
    throw InvalidArgument("QuadraticProgram: non-finite data");
  const double qscale = std::max(1.0, Q.cwiseAbs().maxCoeff());
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * qscale) throw InvalidArgument("QuadraticProgram: Q is not symmetric");
  const bool diagonal = (Q - Matrix(Q.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
  const double floor = diagonal ? Q.diagonal().minCoeff() : Eigen::SelfAdjointEigenSolver<Matrix>(Q, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  if (n > 0 && floor < -1e-10 * qscale) throw InvalidArgument("QuadraticProgram: Q is not positive semidefinite");
}

const char* to_string(QpStatus s) { return s == QpStatus::Optimal ? "Optimal" : "Infeasible"; }

namespace {

bool is_diagonal(const Matrix& Q) {
  for (Eigen::Index j = 0; j < Q.cols(); ++j)
    for (Eigen::Index i = 0; i < Q.rows(); ++i)
      if (i != j && Q(i, j) != 0.0) return false;
  return true;
}

// Standard form: min 1/2 v'Qv + c'v  s.t.  A v = b,  l <= v <= u, where v
// appends one slack per inequality row.
struct StandardForm {
  Matrix Q;  // only the leading n x n block is nonzero
  Vector c;
  Matrix A;
  Vector b;
  Vector l;
  Vector u;
  int n = 0;
};

StandardForm to_standard(const QuadraticProgram& qp) {
  StandardForm sf;
  sf.n = qp.num_vars();
  const int R = qp.num_rows();
  int ns = 0;
  for (auto s : qp.sense)
    if (s != RowSense::Equal) ++ns;
  const int N = sf.n + ns;
  sf.Q = qp.Q;
  sf.c = Vector::Zero(N);
  sf.c.head(sf.n) = qp.c;
  sf.A = Matrix::Zero(R, N);
  sf.A.leftCols(sf.n) = qp.rows;
  sf.b = qp.rhs;
  sf.l = Vector::Zero(N);
  sf.u = Vector::Zero(N);
  sf.l.head(sf.n) = qp.lower;
  sf.u.head(sf.n) = qp.upper;
  int k = sf.n;
  for (int i = 0; i < R; ++i) {
    if (qp.sense[i] == RowSense::Equal) continue;
    sf.A(i, k) = 1.0;
    sf.l(k) = qp.sense[i] == RowSense::LessEqual ? 0.0 : -kInf;
    sf.u(k) = qp.sense[i] == RowSense::LessEqual ? kInf : 0.0;
    ++k;
  }
  return sf;
}

class InteriorPoint {
 public:
  InteriorPoint(const StandardForm& sf, const QpOptions& opt) : sf_(sf), opt_(opt) {
    N_ = static_cast<int>(sf.c.size());
    R_ = static_cast<int>(sf.b.size());
    diag_ = is_diagonal(sf.Q);
    has_l_.resize(N_);
    has_u_.resize(N_);
    for (int j = 0; j < N_; ++j) {
      has_l_[j] = std::isfinite(sf.l(j));
      has_u_[j] = std::isfinite(sf.u(j));
    }
    qdiag_ = Vector::Zero(N_);
    qdiag_.head(sf.n) = sf.Q.diagonal();
    is_free_.assign(N_, false);
    if (diag_) {
      for (int j = 0; j < N_; ++j)
        if (!has_l_[j] && !has_u_[j] && qdiag_(j) == 0.0) {
          free_.push_back(j);
          is_free_[j] = true;
        }
    }
    qnorm_ = sf.Q.size() > 0 ? sf.Q.cwiseAbs().rowwise().sum().maxCoeff() : 0.0;
    // Column-wise sparse normal matrix pays off for the block structured
    // subproblem constraints; rows are sorted so the lower triangle is filled.
    if (diag_ && R_ > 0) {
      double work = 0.0;
      std::map<std::vector<int>, std::size_t> index;
      std::vector<std::vector<int>> pattern_cols;
      std::vector<std::vector<int>> patterns;
      for (int j = 0; j < N_; ++j) {
        std::vector<int> pat;
        for (int i = 0; i < R_; ++i)
          if (sf.A(i, j) != 0.0) pat.push_back(i);
        work += 0.5 * static_cast<double>(pat.size()) * static_cast<double>(pat.size());
        auto it = index.find(pat);
        if (it == index.end()) {
          index.emplace(pat, patterns.size());
          patterns.push_back(pat);
          pattern_cols.push_back({j});
        } else {
          pattern_cols[it->second].push_back(j);
        }
      }
      sparse_ = work < 0.1 * static_cast<double>(R_) * R_ * N_;
      if (sparse_) {
        for (std::size_t g = 0; g < patterns.size(); ++g) {
          if (patterns[g].empty()) continue;
          Group grp;
          grp.rows = patterns[g];
          grp.cols = pattern_cols[g];
          grp.vals.resize(static_cast<Eigen::Index>(grp.rows.size()), static_cast<Eigen::Index>(grp.cols.size()));
          for (std::size_t c = 0; c < grp.cols.size(); ++c)
            for (std::size_t r = 0; r < grp.rows.size(); ++r)
              grp.vals(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = sf.A(grp.rows[r], grp.cols[c]);
          groups_.push_back(std::move(grp));
        }
      }
    }
    ncomp_ = 0;
    for (int j = 0; j < N_; ++j) ncomp_ += static_cast<int>(has_l_[j]) + static_cast<int>(has_u_[j]);
  }

  // Returns true on convergence.
  bool solve() {
    init();
    for (iter_ = 0; iter_ < opt_.max_iterations; ++iter_) {
      residuals();
      remember();
      if (converged()) return true;
      if (!v_.allFinite() || v_.lpNorm<Eigen::Infinity>() > 1e15 || zl_.lpNorm<Eigen::Infinity>() > 1e15 ||
          zu_.lpNorm<Eigen::Infinity>() > 1e15)
        return false;
      if (!factor()) return false;

      const double mu = mu_value();
      // Predictor.
      Vector rl = -tl_.cwiseProduct(zl_);
      Vector ru = -tu_.cwiseProduct(zu_);
      Direction aff = direction(rl, ru);
      double a_aff = std::min(primal_step(aff), dual_step(aff));
      double sigma = 0.0;
      if (ncomp_ > 0) {
        double mu_aff = 0.0;
        for (int j = 0; j < N_; ++j) {
          if (has_l_[j]) mu_aff += (tl_(j) + a_aff * aff.dv(j)) * (zl_(j) + a_aff * aff.dzl(j));
          if (has_u_[j]) mu_aff += (tu_(j) - a_aff * aff.dv(j)) * (zu_(j) + a_aff * aff.dzu(j));
        }
        mu_aff /= ncomp_;
        sigma = std::pow(std::max(0.0, mu_aff) / mu, 3.0);
        sigma = std::min(sigma, 1.0);
      }
      // Corrector.
      for (int j = 0; j < N_; ++j) {
        rl(j) = has_l_[j] ? sigma * mu - tl_(j) * zl_(j) - aff.dv(j) * aff.dzl(j) : 0.0;
        ru(j) = has_u_[j] ? sigma * mu - tu_(j) * zu_(j) + aff.dv(j) * aff.dzu(j) : 0.0;
      }
      Direction d = direction(rl, ru);
      const double eta = std::max(0.95, 1.0 - mu);
      const double alpha = std::min(1.0, eta * std::min(primal_step(d), dual_step(d)));
      v_ += alpha * d.dv;
      y_ += alpha * d.dy;
      zl_ += alpha * d.dzl;
      zu_ += alpha * d.dzu;
      slacks();
    }
    residuals();
    return converged();
  }

  const Vector& v() const { return v_; }
  const Vector& y() const { return y_; }
  const Vector& zl() const { return zl_; }
  const Vector& zu() const { return zu_; }
  int iterations() const { return iter_; }
  double primal_infeasibility() const { return rp_.size() ? rp_.lpNorm<Eigen::Infinity>() / (1.0 + sf_.b.lpNorm<Eigen::Infinity>()) : 0.0; }

 private:
  struct Direction {
    Vector dv, dy, dzl, dzu;
  };

  void init() {
    v_ = Vector::Zero(N_);
    for (int j = 0; j < N_; ++j) {
      if (has_l_[j] && has_u_[j]) v_(j) = 0.5 * (sf_.l(j) + sf_.u(j));
      else if (has_l_[j]) v_(j) = std::max(sf_.l(j) + 1.0, 0.0);
      else if (has_u_[j]) v_(j) = std::min(sf_.u(j) - 1.0, 0.0);
    }
    y_ = Vector::Zero(R_);
    const double z0 = 1.0;
    zl_ = Vector::Zero(N_);
    zu_ = Vector::Zero(N_);
    for (int j = 0; j < N_; ++j) {
      if (has_l_[j]) zl_(j) = z0;
      if (has_u_[j]) zu_(j) = z0;
    }
    slacks();
  }

  void slacks() {
    tl_ = Vector::Zero(N_);
    tu_ = Vector::Zero(N_);
    for (int j = 0; j < N_; ++j) {
      if (has_l_[j]) tl_(j) = v_(j) - sf_.l(j);
      if (has_u_[j]) tu_(j) = sf_.u(j) - v_(j);
    }
  }

  Vector qtimes(const Vector& v) const {
    Vector out = Vector::Zero(N_);
    if (diag_) out = qdiag_.cwiseProduct(v);
    else out.head(sf_.n) = sf_.Q * v.head(sf_.n);
    return out;
  }

  void residuals() {
    rd_ = qtimes(v_) + sf_.c - zl_ + zu_;
    if (R_ > 0) rd_.noalias() -= sf_.A.transpose() * y_;
    rp_ = R_ > 0 ? Vector(sf_.b - sf_.A * v_) : Vector();
  }

  double mu_value() const {
    if (ncomp_ == 0) return 0.0;
    return (tl_.dot(zl_) + tu_.dot(zu_)) / ncomp_;
  }

  double merit() const {
    const double obj = 0.5 * v_.dot(qtimes(v_)) + sf_.c.dot(v_);
    const double pres = primal_infeasibility();
    const double dres = rd_.lpNorm<Eigen::Infinity>() / (1.0 + sf_.c.lpNorm<Eigen::Infinity>() + qnorm_);
    const double gap = (tl_.dot(zl_) + tu_.dot(zu_)) / (1.0 + std::abs(obj));
    return std::max({pres, dres, gap});
  }

  bool converged() const { return merit() <= opt_.tolerance; }

  // Keeps the iterate with the smallest merit seen so far.
  void remember() {
    const double m = merit();
    if (std::isfinite(m) && m < best_merit_) {
      best_merit_ = m;
      best_v_ = v_;
      best_y_ = y_;
      best_zl_ = zl_;
      best_zu_ = zu_;
    }
  }

 public:
  // Falls back to the best iterate after a failed run.
  void restore_best() {
    if (best_v_.size() == 0) return;
    v_ = best_v_;
    y_ = best_y_;
    zl_ = best_zl_;
    zu_ = best_zu_;
  }

 private:

  bool factor() {
    sigma_ = Vector::Zero(N_);
    for (int j = 0; j < N_; ++j) {
      if (has_l_[j]) sigma_(j) += zl_(j) / tl_(j);
      if (has_u_[j]) sigma_(j) += zu_(j) / tu_(j);
    }
    const double preg = 1e-14 * (1.0 + qnorm_);
    if (diag_) {
      kinv_ = Vector::Zero(N_);
      for (int j = 0; j < N_; ++j) kinv_(j) = 1.0 / (qdiag_(j) + sigma_(j) + preg);
      for (int j : free_) kinv_(j) = 0.0;
      if (R_ > 0) {
        M_ = Matrix::Zero(R_, R_);
        if (sparse_) {
          // Columns sharing a sparsity pattern form a dense block update.
          for (const auto& grp : groups_) {
            const auto& rows = grp.rows;
            const Eigen::Index nr = static_cast<Eigen::Index>(rows.size());
            const Eigen::Index nc = static_cast<Eigen::Index>(grp.cols.size());
            if (nc == 1) {
              const int j = grp.cols[0];
              const double d = kinv_(j);
              if (d == 0.0) continue;
              for (Eigen::Index q = 0; q < nr; ++q) {
                const double s = d * grp.vals(q, 0);
                for (Eigen::Index p = q; p < nr; ++p) M_(rows[p], rows[q]) += s * grp.vals(p, 0);
              }
              continue;
            }
            Vector sq(nc);
            for (Eigen::Index k = 0; k < nc; ++k) sq(k) = std::sqrt(kinv_(grp.cols[k]));
            const Matrix As = grp.vals * sq.asDiagonal();
            Matrix blk = Matrix::Zero(nr, nr);
            blk.selfadjointView<Eigen::Lower>().rankUpdate(As);
            for (Eigen::Index q = 0; q < nr; ++q)
              for (Eigen::Index p = q; p < nr; ++p) M_(rows[p], rows[q]) += blk(p, q);
          }
        } else {
          Matrix As = sf_.A * kinv_.cwiseSqrt().asDiagonal();
          M_.selfadjointView<Eigen::Lower>().rankUpdate(As);
        }
      }
    } else {
      Matrix K = Matrix::Zero(N_, N_);
      K.topLeftCorner(sf_.n, sf_.n) = sf_.Q;
      K.diagonal() += sigma_;
      K.diagonal().array() += 1e-10 * (1.0 + qnorm_);
      kllt_.compute(K);
      if (kllt_.info() != Eigen::Success) return false;
      if (R_ > 0) {
        kinv_at_ = kllt_.solve(sf_.A.transpose());
        M_ = sf_.A * kinv_at_;
      }
    }
    if (R_ == 0) return free_.empty();
    // Jacobi scaling before the Cholesky factorization: the diagonal spans many
    // orders of magnitude once some variables settle at their bounds.
    mscale_ = M_.diagonal().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
    double reg = 1e-14;
    for (int attempt = 0; attempt < 8; ++attempt) {
      Matrix Mr = (M_.array() * (mscale_ * mscale_.transpose()).array()).matrix();
      Mr.diagonal().array() += reg;
      mllt_.compute(Mr);
      if (mllt_.info() == Eigen::Success) break;
      reg *= 100.0;
      if (attempt == 7) return false;
    }
    if (!free_.empty()) {
      Af_ = Matrix(R_, static_cast<Eigen::Index>(free_.size()));
      for (std::size_t k = 0; k < free_.size(); ++k) Af_.col(static_cast<Eigen::Index>(k)) = sf_.A.col(free_[k]);
      MinvAf_ = msolve(Af_);
      Matrix S = Af_.transpose() * MinvAf_;
      sldlt_.compute(S);
      if (sldlt_.info() != Eigen::Success) return false;
    }
    return true;
  }

  Matrix msolve(const Matrix& r) const { return mscale_.asDiagonal() * mllt_.solve(mscale_.asDiagonal() * r); }

  Vector kinv_times(const Vector& r) const {
    if (diag_) return kinv_.cwiseProduct(r);
    return kllt_.solve(r);
  }

  // Solves [K -A'; A 0] (dv, dy) = (r1, r2) with K = Q + Sigma, eliminating the
  // free zero-curvature columns through a bordered Schur complement.
  void solve_kkt(const Vector& r1, const Vector& r2, Vector& dv, Vector& dy) const {
    dv = Vector::Zero(N_);
    dy = Vector::Zero(R_);
    Vector rhsP = r1;
    for (int j : free_) rhsP(j) = 0.0;
    if (R_ == 0) {
      dv = kinv_times(rhsP);
      return;
    }
    const Vector g = r2 - sf_.A * kinv_times(rhsP);
    if (free_.empty()) {
      dy = msolve(g);
    } else {
      Vector rf(static_cast<Eigen::Index>(free_.size()));
      for (std::size_t k = 0; k < free_.size(); ++k) rf(static_cast<Eigen::Index>(k)) = r1(free_[k]);
      const Vector Minv_g = msolve(g);
      const Vector dvf = sldlt_.solve(Af_.transpose() * Minv_g + rf);
      dy = Minv_g - MinvAf_ * dvf;
      for (std::size_t k = 0; k < free_.size(); ++k) dv(free_[k]) = dvf(static_cast<Eigen::Index>(k));
    }
    Vector t = rhsP + sf_.A.transpose() * dy;
    for (int j : free_) t(j) = 0.0;
    const Vector dvp = kinv_times(t);
    for (int j = 0; j < N_; ++j)
      if (!is_free_[j]) dv(j) = dvp(j);
  }

  Direction direction(const Vector& rl, const Vector& ru) const {
    Vector rhs1 = -rd_;
    for (int j = 0; j < N_; ++j) {
      if (has_l_[j]) rhs1(j) += rl(j) / tl_(j);
      if (has_u_[j]) rhs1(j) -= ru(j) / tu_(j);
    }
    const Vector rp = R_ > 0 ? rp_ : Vector(Vector::Zero(0));
    Direction d;
    solve_kkt(rhs1, rp, d.dv, d.dy);
    // Iterative refinement: the normal matrix gets badly conditioned near the end.
    const double s1 = 1e-13 * (1.0 + rhs1.lpNorm<Eigen::Infinity>());
    const double s2 = 1e-13 * (1.0 + (R_ > 0 ? sf_.b.lpNorm<Eigen::Infinity>() : 0.0));
    for (int pass = 0; pass < 4; ++pass) {
      Vector e1 = rhs1 - qtimes(d.dv) - sigma_.cwiseProduct(d.dv);
      Vector e2;
      if (R_ > 0) {
        e1.noalias() += sf_.A.transpose() * d.dy;
        e2 = rp - sf_.A * d.dv;
      } else {
        e2 = Vector::Zero(0);
      }
      const bool ok1 = e1.lpNorm<Eigen::Infinity>() <= s1;
      const bool ok2 = e2.size() == 0 || e2.lpNorm<Eigen::Infinity>() <= s2;
      if (ok1 && ok2) break;
      Vector cv, cy;
      solve_kkt(e1, e2, cv, cy);
      d.dv += cv;
      d.dy += cy;
    }
    d.dzl = Vector::Zero(N_);
    d.dzu = Vector::Zero(N_);
    for (int j = 0; j < N_; ++j) {
      if (has_l_[j]) d.dzl(j) = (rl(j) - zl_(j) * d.dv(j)) / tl_(j);
      if (has_u_[j]) d.dzu(j) = (ru(j) + zu_(j) * d.dv(j)) / tu_(j);
    }
    return d;
  }

  double primal_step(const Direction& d) const {
    double a = 1.0 / 0.0;
    for (int j = 0; j < N_; ++j) {
      if (has_l_[j] && d.dv(j) < 0.0) a = std::min(a, -tl_(j) / d.dv(j));
      if (has_u_[j] && d.dv(j) > 0.0) a = std::min(a, tu_(j) / d.dv(j));
    }
    return std::min(a, 1.0);
  }

  double dual_step(const Direction& d) const {
    double a = 1.0;
    for (int j = 0; j < N_; ++j) {
      if (has_l_[j] && d.dzl(j) < 0.0) a = std::min(a, -zl_(j) / d.dzl(j));
      if (has_u_[j] && d.dzu(j) < 0.0) a = std::min(a, -zu_(j) / d.dzu(j));
    }
    return a;
  }

  const StandardForm& sf_;
  const QpOptions& opt_;
  int N_ = 0;
  int R_ = 0;
  int iter_ = 0;
  int ncomp_ = 0;
  bool sparse_ = false;
  struct Group {
    std::vector<int> rows;  // sorted
    std::vector<int> cols;
    Matrix vals;            // A restricted to rows x cols
  };
  std::vector<Group> groups_;
  bool diag_ = true;
  double qnorm_ = 0.0;
  std::vector<bool> has_l_, has_u_;
  std::vector<int> free_;
  std::vector<bool> is_free_;
  Vector qdiag_;
  Vector v_, y_, zl_, zu_, tl_, tu_, rd_, rp_;
  Vector sigma_, kinv_;
  Matrix kinv_at_, M_, Af_, MinvAf_;
  Eigen::LLT<Matrix> kllt_;
  Eigen::LLT<Matrix> mllt_;
  Vector mscale_;
  Eigen::LDLT<Matrix> sldlt_;
  double best_merit_ = kInf;
  Vector best_v_, best_y_, best_zl_, best_zu_;
};

bool rows_feasible(const QuadraticProgram& qp) {
  LinearProgram lp;
  lp.cost = Vector::Zero(qp.num_vars());
  lp.rows = qp.rows;
  lp.sense = qp.sense;
  lp.rhs = qp.rhs;
  lp.lower = qp.lower;
  lp.upper = qp.upper;
  return solve_lp(lp).status == LpStatus::Optimal;
}

}  // namespace

QpSolution solve_qp(const QuadraticProgram& qp, const QpOptions& options) {
  qp.validate();
  QpSolution sol;
  const int n = qp.num_vars();
  for (int j = 0; j < n; ++j) {
    if (qp.lower(j) > qp.upper(j)) {
      sol.status = QpStatus::Infeasible;
      sol.x = Vector::Zero(n);
      return sol;
    }
  }
  const StandardForm sf = to_standard(qp);
  InteriorPoint ipm(sf, options);
  const bool ok = ipm.solve();
  if (!ok) {
    if (!rows_feasible(qp)) {
      sol.status = QpStatus::Infeasible;
      sol.x = ipm.v().head(n);
      sol.iterations = ipm.iterations();
      return sol;
    }
    // The internal target is tighter than the contract; the best iterate may
    // still satisfy it, which the KKT check below decides.
    ipm.restore_best();
  }

  const Vector& v = ipm.v();
  sol.status = QpStatus::Optimal;
  sol.iterations = ipm.iterations();
  sol.x = v.head(n);
  sol.value = 0.5 * sol.x.dot(qp.Q * sol.x) + qp.c.dot(sol.x);
  sol.duals = ipm.y();
  sol.z_lower = ipm.zl().head(n);
  sol.z_upper = ipm.zu().head(n);

  // KKT residuals in the original space (slack multipliers folded into rows).
  Vector stat = qp.Q * sol.x + qp.c - sol.z_lower + sol.z_upper;
  if (qp.num_rows() > 0) stat.noalias() -= qp.rows.transpose() * sol.duals;
  const double dscale = 1.0 + std::max(qp.c.lpNorm<Eigen::Infinity>(), (qp.Q * sol.x).lpNorm<Eigen::Infinity>());
  sol.stationarity = stat.size() ? stat.lpNorm<Eigen::Infinity>() / dscale : 0.0;

  double prim = 0.0;
  if (qp.num_rows() > 0) {
    const Vector act = qp.rows * sol.x;
    for (int i = 0; i < qp.num_rows(); ++i) {
      const double r = act(i) - qp.rhs(i);
      switch (qp.sense[i]) {
        case RowSense::LessEqual: prim = std::max(prim, r); break;
        case RowSense::GreaterEqual: prim = std::max(prim, -r); break;
        case RowSense::Equal: prim = std::max(prim, std::abs(r)); break;
      }
    }
  }
  for (int j = 0; j < n; ++j) prim = std::max({prim, qp.lower(j) - sol.x(j), sol.x(j) - qp.upper(j)});
  sol.primal_residual = prim / (1.0 + (qp.num_rows() ? qp.rhs.lpNorm<Eigen::Infinity>() : 0.0));

  // Complementarity over bounds and inequality rows.
  double comp = 0.0;
  const Vector& zl = ipm.zl();
  const Vector& zu = ipm.zu();
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    if (std::isfinite(sf.l(j))) comp = std::max(comp, std::abs(zl(j) * (v(j) - sf.l(j))));
    if (std::isfinite(sf.u(j))) comp = std::max(comp, std::abs(zu(j) * (sf.u(j) - v(j))));
  }
  sol.complementarity = comp / (1.0 + std::abs(sol.value));
  sol.kkt_residual = std::max({sol.stationarity, sol.primal_residual, sol.complementarity});

  double dual = sf.b.size() ? sf.b.dot(ipm.y()) : 0.0;
  dual -= 0.5 * sol.x.dot(qp.Q * sol.x);
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    if (std::isfinite(sf.l(j))) dual += sf.l(j) * zl(j);
    if (std::isfinite(sf.u(j))) dual -= sf.u(j) * zu(j);
  }
  sol.dual_bound = dual;

  if (sol.kkt_residual > options.kkt_tolerance)
    throw NumericalFailure("interior point: KKT residual above tolerance");
  return sol;
}

}  // namespace mocondg
