// Acceptance checks. One line per criterion on stdout; exit status 1 if any fails.

#include "oracles.hpp"

#include "mocondg/benchmark.hpp"
#include "mocondg/constants.hpp"
#include "mocondg/metrics.hpp"
#include "mocondg/qp.hpp"
#include "mocondg/registry.hpp"
#include "mocondg/report.hpp"
#include "mocondg/robust.hpp"
#include "mocondg/solvers.hpp"
#include "mocondg/subproblems.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace mocondg;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Line {
  std::string name;
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

int default_dim(const std::string&) { return 0; }

CompositeProblem robust_problem(const std::string& name, std::uint64_t seed, int n = 0) {
  RobustConfig rc;
  rc.seed = seed;
  return make_robust_problem(name, rc, n);
}

// ---------------------------------------------------------------------------
// gap sign and ordering at sampled points

struct PointSweep {
  double seconds = 0.0;
  long points = 0;
  double worst_theta = -kInf;       // max over CondG and ProxGrad theta
  double worst_solver_value = -kInf;
  long sign_violations = 0;
  double worst_order = -kInf;       // max of theta_C - theta_PG (scaled)
  long order_violations = 0;
  long pg_positive = 0;
  std::string detail_per_problem;
};

PointSweep sweep_points(int count) {
  PointSweep s;
  const auto t0 = Clock::now();
  std::ostringstream per;
  for (const auto& name : registry_names()) {
    const auto p = robust_problem(name, 1, default_dim(name));
    Rng rng(1, stream_id("accept/points/" + name));
    const auto tp = Clock::now();
    for (int i = 0; i < count; ++i) {
      const Vector x = oracle::uniform_point(rng, p.box);
      const auto lm = linear_model(p, x);
      const auto c = condg_direction(p, lm);
      const auto g = proxgrad_direction(p, lm, 1.0);
      s.worst_theta = std::max({s.worst_theta, c.theta, g.theta});
      s.worst_solver_value = std::max({s.worst_solver_value, c.solver_value, g.solver_value});
      if (c.theta > 1e-9 || g.theta > 1e-9 || c.solver_value > 1e-9 || g.solver_value > 1e-9) ++s.sign_violations;
      const double gap = (c.theta - g.theta) / std::max(1.0, std::abs(c.theta));
      s.worst_order = std::max(s.worst_order, gap);
      if (gap > 1e-9) ++s.order_violations;
      if (g.theta > 0.0) ++s.pg_positive;
      ++s.points;
    }
    per << ' ' << name << '(' << p.n() << ")=" << fmt("%.1fs", since(tp));
  }
  s.seconds = since(t0);
  s.detail_per_problem = per.str();
  return s;
}

// ---------------------------------------------------------------------------
// multistart sweeps on convex robust problems

struct Variant {
  Method method;
  StepKind rule;
  std::string label() const { return std::string(to_string(method)) + "/" + to_string(rule); }
};

struct SweepProblem {
  std::string name;
  int n = 0;
  CompositeProblem problem;
  ConstantsEstimate constants;
  std::map<std::string, std::vector<SolverTrace>> runs;  // by variant label
};

const std::vector<Variant> kVariants{{Method::CondG, StepKind::Armijo},
                                     {Method::ProxGrad, StepKind::Armijo},
                                     {Method::CondG, StepKind::Adaptive},
                                     {Method::CondG, StepKind::Diminishing}};

std::vector<SweepProblem> run_sweeps(int starts, double& seconds) {
  const auto t0 = Clock::now();
  std::vector<SweepProblem> out;
  for (auto [name, n] : std::vector<std::pair<std::string, int>>{{"JOS1", 10}, {"BK1", 0}, {"FDS", 0}}) {
    SweepProblem sp{name, n, robust_problem(name, 1, n), {}, {}};
    sp.constants = estimate_constants(sp.problem, StepRule::armijo());
    const auto x0s = generate_starts(sp.problem.box, starts, 1, "starts/" + name);
    for (const auto& v : kVariants) {
      SolverOptions o;
      o.rule.kind = v.rule;
      auto& list = sp.runs[v.label()];
      for (const auto& x0 : x0s) list.push_back(run_solver(v.method, sp.problem, x0, o));
    }
    out.push_back(std::move(sp));
  }
  seconds = since(t0);
  return out;
}

const Vector& next_F(const SolverTrace& tr, std::size_t k) {
  return k + 1 < tr.records.size() ? tr.records[k + 1].F : tr.F_final;
}

// |theta| sequence: one per record, plus the final gap when the run certified it.
std::vector<double> abs_thetas(const SolverTrace& tr) {
  std::vector<double> t;
  for (const auto& r : tr.records) t.push_back(std::abs(r.theta));
  if (tr.theta_final) t.push_back(std::abs(*tr.theta_final));
  return t;
}

Line check_criticality(const std::vector<SweepProblem>& sweeps) {
  Line l{"criticality", true, {}};
  // analytic instance
  SmoothObjective s;
  s.n = s.m = 1;
  s.eval = [](const Vector& x) { return Vector::Constant(1, x(0) * x(0)); };
  s.grad = [](const Vector& x) { return Matrix::Constant(1, 1, 2.0 * x(0)); };
  s.convex = true;
  const CompositeProblem par("parabola", s, NonsmoothTerm::zero(), BoxDomain(Vector::Constant(1, -1), Vector::Constant(1, 1)));
  const double t0 = condg_direction(par, Vector::Zero(1)).theta;
  const double t1 = condg_direction(par, Vector::Ones(1)).theta;
  const bool analytic = std::abs(t0) <= 1e-10 && std::abs(t1 + 4.0) <= 1e-8;

  long converged = 0, bad = 0;
  double worst = 0.0;
  for (const auto& sp : sweeps)
    for (const auto& [label, list] : sp.runs)
      for (const auto& tr : list) {
        if (tr.stop_reason != StopReason::Converged) continue;
        ++converged;
        const double th = std::abs(proxgrad_direction(sp.problem, tr.x_final, 1.0).theta);
        worst = std::max(worst, th);
        if (th > 1e-4) ++bad;
      }
  l.pass = analytic && bad == 0 && converged > 0;
  l.detail = "theta(0)=" + fmt("%.3g", t0) + " theta(1)=" + fmt("%.12g", t1) + "; converged runs " +
             std::to_string(converged) + ", max |theta_PG| recomputed " + fmt("%.3g", worst) + " (tol 1e-4), violations " +
             std::to_string(bad);
  return l;
}

Line check_descent(const std::vector<SweepProblem>& sweeps) {
  Line l{"descent", true, {}};
  long checked = 0, bad = 0;
  double worst = -kInf;
  for (const auto& sp : sweeps) {
    const double Omega = sp.problem.box.diameter();
    for (const auto& v : kVariants) {
      if (v.rule == StepKind::Diminishing) continue;
      for (const auto& tr : sp.runs.at(v.label()))
        for (std::size_t k = 0; k < tr.records.size(); ++k) {
          const auto& r = tr.records[k];
          const double th = std::abs(r.theta);
          Vector bound;
          if (v.rule == StepKind::Armijo)
            bound = r.F.array() - tr.options.rule.zeta * r.lambda * th;
          else
            bound = r.F.array() - 0.5 * std::min(th, th * th / (tr.L_used * Omega * Omega));
          const Vector& Fn = next_F(tr, k);
          for (Eigen::Index j = 0; j < Fn.size(); ++j) {
            const double ex = (Fn(j) - bound(j)) / (1.0 + std::abs(r.F(j)));
            worst = std::max(worst, ex);
            if (ex > 1e-9) ++bad;
          }
          ++checked;
        }
    }
  }
  l.pass = bad == 0 && checked > 0;
  l.detail = std::to_string(checked) + " steps (armijo condg/proxgrad, adaptive condg) on JOS1(n=10), BK1, FDS; violations " +
             std::to_string(bad) + ", worst scaled excess " + fmt("%.3g", worst) + " (slack 1e-9)";
  return l;
}

Line check_step_floor(const std::vector<SweepProblem>& sweeps) {
  Line l{"step-floor", true, {}};
  long steps = 0, floor_bad = 0, capped = 0, cap_bad = 0;
  std::ostringstream info;
  for (const auto& sp : sweeps) {
    const auto& c = sp.constants;
    const double cap = backtrack_bound(c, 1e-3) + 1.0;
    int max_evals = 0;
    double min_ratio = kInf;
    for (const auto& tr : sp.runs.at(Variant{Method::CondG, StepKind::Armijo}.label()))
      for (const auto& r : tr.records) {
        ++steps;
        const double need = c.gamma * std::abs(r.theta);
        min_ratio = std::min(min_ratio, r.lambda / need);
        if (r.lambda < need) ++floor_bad;
        if (std::abs(r.theta) > 1e-3) {
          ++capped;
          max_evals = std::max(max_evals, r.inner_evals);
          if (r.inner_evals > cap) ++cap_bad;
        }
      }
    info << ' ' << sp.name << ": gamma=" << fmt("%.3g", c.gamma) << " min lambda/(gamma|theta|)=" << fmt("%.3g", min_ratio)
         << " max evals " << max_evals << " <= " << fmt("%.1f", cap) << ';';
  }
  l.pass = floor_bad == 0 && cap_bad == 0 && steps > 0;
  l.detail = std::to_string(steps) + " armijo steps, floor violations " + std::to_string(floor_bad) + ", " +
             std::to_string(capped) + " capped steps, cap violations " + std::to_string(cap_bad) + ";" + info.str();
  return l;
}

Line check_rates(const std::vector<SweepProblem>& sweeps) {
  Line l{"rates", true, {}};
  long a_checks = 0, a_bad = 0, b_checks = 0, b_bad = 0, c_checks = 0, c_bad = 0;
  double a_tight = 0.0, b_tight = -kInf, c_tight = 0.0;
  for (const auto& sp : sweeps) {
    if (sp.name == "BK1") continue;  // convex set: JOS1 and FDS
    const double Omega = sp.problem.box.diameter();
    const double L = problem_lipschitz(sp.problem);
    std::vector<Vector> pool;
    for (const auto& [label, list] : sp.runs)
      for (const auto& tr : list) pool.push_back(tr.F_final);
    Vector best_point = pool.front();
    for (const auto& F : pool)
      if (F.maxCoeff() < best_point.maxCoeff()) best_point = F;

    // (a) armijo, min over the first N gaps
    for (const auto& tr : sp.runs.at(Variant{Method::CondG, StepKind::Armijo}.label())) {
      if (tr.records.empty()) continue;
      auto c = sp.constants;
      attach_levels(c, tr.records.front().F, pool);
      const auto th = abs_thetas(tr);
      for (int N : {10, 50, 100}) {
        const double bound = std::sqrt((c.f_start - c.f_inf) / (c.zeta * c.gamma * N));
        const double m = *std::min_element(th.begin(), th.begin() + std::min<std::size_t>(N, th.size()));
        ++a_checks;
        a_tight = std::max(a_tight, m / bound);
        if (!(m <= bound)) ++a_bad;
      }
    }
    // (b), (c): open-loop and adaptive steps
    for (StepKind rule : {StepKind::Diminishing, StepKind::Adaptive}) {
      for (const auto& tr : sp.runs.at(Variant{Method::CondG, rule}.label())) {
        const double C = L * Omega * Omega;
        const int K = tr.iterations();
        for (int k = 1; k <= K; ++k) {
          const Vector& Fk = k < K ? tr.records[k].F : tr.F_final;
          for (const Vector* ref : {static_cast<const Vector*>(&best_point), &tr.F_final}) {
            const double gap = (Fk - *ref).minCoeff();
            ++b_checks;
            b_tight = std::max(b_tight, gap / (2.0 * C / k));
            if (gap > 2.0 * C / k) ++b_bad;
          }
        }
        const auto th = abs_thetas(tr);
        for (int k = 10; k <= 200; ++k) {
          const int lo = k / 2 + 2;
          if (lo >= static_cast<int>(th.size())) break;
          double m = kInf;
          for (int i = lo; i <= std::min<int>(k, static_cast<int>(th.size()) - 1); ++i) m = std::min(m, th[i]);
          const double bound = 8.0 * C / (k - 2);
          ++c_checks;
          c_tight = std::max(c_tight, m / bound);
          if (!(m <= bound)) ++c_bad;
        }
      }
    }
  }
  l.pass = a_bad + b_bad + c_bad == 0 && a_checks > 0 && b_checks > 0 && c_checks > 0;
  l.detail = "JOS1(n=10), FDS: (a) " + std::to_string(a_checks) + " checks, violations " + std::to_string(a_bad) +
             ", max ratio " + fmt("%.3g", a_tight) + "; (b) " + std::to_string(b_checks) + " checks, violations " +
             std::to_string(b_bad) + ", max ratio " + fmt("%.3g", b_tight) + "; (c) " + std::to_string(c_checks) +
             " checks, violations " + std::to_string(c_bad) + ", max ratio " + fmt("%.3g", c_tight);
  return l;
}

// ---------------------------------------------------------------------------

Line check_oracles() {
  Line l{"oracles", true, {}};
  // gap against a grid
  const std::vector<std::pair<std::string, int>> small{{"AP1", 0},  {"AP2", 0},  {"BK1", 0},  {"IKK1", 0},   {"IM1", 0},
                                                       {"JOS1", 2}, {"Lov1", 0}, {"MOP2", 2}, {"MOP7", 0},   {"SLCDT1", 0},
                                                       {"SP1", 0},  {"VU2", 0},  {"FDS", 3},  {"ZDT1", 2},   {"JOS1", 3}};
  int grid_bad = 0;
  double grid_tight = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto& [name, n] = small[i % small.size()];
    const auto p = robust_problem(name, 100 + i, n);
    Rng rng(100 + i, stream_id("accept/grid"));
    const Vector x = oracle::uniform_point(rng, p.box);
    const auto g = condg_direction(p, x);
    const int pts = p.n() == 1 ? 4001 : p.n() == 2 ? 301 : 61;
    const auto ref = oracle::gap_on_grid(p, x, pts);
    const double diff = std::abs(g.solver_value - ref.value);
    grid_tight = std::max(grid_tight, diff / (2.0 * ref.error_bound));
    if (diff > 2.0 * ref.error_bound || g.solver_value > ref.value + 1e-9 * (1.0 + std::abs(ref.value))) ++grid_bad;
  }
  // LPs
  Rng lrng(4242, 1);
  int lp_bad = 0;
  double lp_worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto lp = oracle::random_feasible_lp(lrng);
    const auto ref = oracle::lp_vertex_enumeration(lp);
    const auto s = solve_lp(lp);
    const double d = s.status == LpStatus::Optimal ? std::abs(s.value - ref.value) : kInf;
    lp_worst = std::max(lp_worst, d);
    if (!(d <= 1e-7)) ++lp_bad;
  }
  // QPs
  Rng qrng(4343, 2);
  int qp_bad = 0;
  double qp_worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int n = 1 + static_cast<int>(qrng.next() % 6);
    auto qp = QuadraticProgram::with_vars(n);
    qp.Q = oracle::random_pd(qrng, n);
    for (int j = 0; j < n; ++j) qp.c(j) = qrng.uniform(-3, 3);
    Vector ref;
    if (i % 2 == 0) {
      for (int j = 0; j < n; ++j) qp.lower(j) = qrng.uniform(-2, 0), qp.upper(j) = qrng.uniform(0, 2);
      ref = oracle::box_qp_projected_gradient(qp.Q, qp.c, qp.lower, qp.upper);
    } else {
      qp.lower.setZero();
      qp.add_row(Vector::Ones(n), RowSense::Equal, 1.0);
      ref = oracle::simplex_qp_projected_gradient(qp.Q, qp.c);
    }
    const auto s = solve_qp(qp);
    const double d = s.status == QpStatus::Optimal ? (s.x - ref).cwiseAbs().maxCoeff() : kInf;
    qp_worst = std::max(qp_worst, d);
    if (!(d <= 1e-6)) ++qp_bad;
  }
  l.pass = grid_bad + lp_bad + qp_bad == 0;
  l.detail = "grid: 20 instances, violations " + std::to_string(grid_bad) + ", max |diff|/(2 bound) " +
             fmt("%.3g", grid_tight) + "; LP: 50, violations " + std::to_string(lp_bad) + ", max diff " +
             fmt("%.3g", lp_worst) + " (tol 1e-7); QP: 50, violations " + std::to_string(qp_bad) + ", max diff " +
             fmt("%.3g", qp_worst) + " (tol 1e-6)";
  return l;
}

// ---------------------------------------------------------------------------

Line check_uncertainty(const std::string& out, int starts) {
  Line l{"uncertainty-study", true, {}};
  const std::vector<double> levels{0.02, 0.05, 0.10};
  std::ostringstream info;
  long mono_bad = 0, dom_bad = 0;
  for (const char* name : {"BK1", "IM1", "VU2"}) {
    const auto base = make_problem(name);
    std::vector<CompositeProblem> ps;
    for (double d : levels) {
      RobustConfig rc;
      rc.seed = 1;
      rc.delta_bar = d;
      ps.push_back(robustify(base, build_uncertainty(rc, base.n(), base.m(), base.box)));
    }
    Rng rng(1, stream_id(std::string("accept/mono/") + name));
    for (int i = 0; i < 1000; ++i) {
      const Vector x = oracle::uniform_point(rng, base.box);
      Vector prev = evaluate_nonsmooth(ps[0], x);
      for (std::size_t t = 1; t < ps.size(); ++t) {
        const Vector cur = evaluate_nonsmooth(ps[t], x);
        if (((prev.array() - cur.array()) > 1e-12 * (1.0 + cur.array().abs())).any()) ++mono_bad;
        prev = cur;
      }
    }

    BenchmarkConfig cfg;
    cfg.problems = {name};
    cfg.solvers = {Method::CondG};
    cfg.delta_bars = levels;
    cfg.starts = starts;
    cfg.seed = 1;
    cfg.out_dir = (fs::path(out) / "uncertainty" / name).string();
    cfg.write_traces = false;
    cfg.resume = false;
    const auto res = run_benchmark(cfg);
    std::map<double, std::vector<Vector>> fronts;
    for (const auto& r : res.instances)
      if (r.success) fronts[*r.spec.delta_bar].push_back(r.F_final);
    for (auto& [d, f] : fronts) f = nondominated(f);
    const auto& lo = fronts[0.02];
    const auto& hi = fronts[0.10];
    // each 0.10 point against its three nearest 0.02 points
    int bad_here = 0;
    for (const auto& q : hi) {
      std::vector<std::pair<double, std::size_t>> dist;
      for (std::size_t i = 0; i < lo.size(); ++i) dist.push_back({(lo[i] - q).norm(), i});
      std::sort(dist.begin(), dist.end());
      const std::size_t k = std::min<std::size_t>(3, dist.size());
      bool all = k > 0;
      for (std::size_t i = 0; i < k; ++i) all = all && (q.array() < lo[dist[i].second].array()).all();
      if (all) ++bad_here;
    }
    dom_bad += bad_here;
    emit_report(res, cfg.out_dir + "/report");
    info << ' ' << name << ": fronts " << lo.size() << '/' << fronts[0.05].size() << '/' << hi.size()
         << ", dominating 0.10 points " << bad_here << ", svg " << cfg.out_dir << "/report/frontier_" << name << ".svg;";
  }
  l.pass = mono_bad == 0 && dom_bad == 0;
  l.detail = "G monotone in delta_bar at 3000 points, violations " + std::to_string(mono_bad) + ";" + info.str();
  return l;
}

// ---------------------------------------------------------------------------

bool profile_hand_checks(std::string& why) {
  // ratios A: 1, 2, 1   B: 2, 1, inf
  Matrix c(3, 2);
  c << 1, 2, 4, 2, 3, 7;
  std::vector<std::vector<bool>> failed{{false, false}, {false, false}, {false, true}};
  const auto p = performance_profile(c, failed, {"A", "B"});
  bool ok = p[0].value(1.0) == 2.0 / 3.0 && p[0].value(2.0) == 1.0 && p[1].value(1.0) == 1.0 / 3.0 &&
            p[1].value(2.0) == 2.0 / 3.0 && p[1].value(1e12) == 2.0 / 3.0;
  // ties: both solvers best everywhere
  Matrix t(3, 2);
  t << 5, 5, 1, 1, 2, 2;
  const auto q = performance_profile(t, std::vector<std::vector<bool>>(3, {false, false}), {"A", "B"});
  ok = ok && q[0].value(1.0) == 1.0 && q[1].value(1.0) == 1.0;
  // one strictly faster
  Matrix f(3, 2);
  f << 1, 3, 2, 5, 4, 4.5;
  const auto r = performance_profile(f, std::vector<std::vector<bool>>(3, {false, false}), {"A", "B"});
  ok = ok && r[0].value(1.0) == 1.0 && r[1].value(1.0) == 0.0 && r[1].value(2.5) == 2.0 / 3.0 && r[1].value(3.0) == 1.0;
  if (!ok) why = "hand-computed profile mismatch";
  return ok;
}

Line check_benchmark(const std::string& out, int starts, int jobs) {
  Line l{"benchmark", true, {}};
  BenchmarkConfig cfg;
  cfg.problems = registry_names();
  cfg.starts = starts;
  cfg.seed = 1;
  cfg.jobs = jobs;
  cfg.out_dir = (fs::path(out) / "benchmark").string();
  cfg.write_traces = false;
  cfg.resume = false;
  const auto t0 = Clock::now();
  const auto res = run_benchmark(cfg);
  const double secs = since(t0);
  emit_report(res, cfg.out_dir + "/report");
  std::map<std::string, std::pair<int, int>> rate;
  std::map<std::string, int> fails;
  for (const auto& r : res.instances) {
    auto& e = rate[to_string(r.spec.solver)];
    ++e.second;
    e.first += r.success;
    if (!r.success) ++fails[r.spec.problem + "/" + to_string(r.stop_reason)];
  }
  std::string why;
  bool ok = profile_hand_checks(why);
  std::ostringstream info;
  info << res.instances.size() << " runs on " << cfg.problems.size() << " problems in " << fmt("%.0fs", secs) << ";";
  for (const auto& [s, e] : rate) {
    const double r = static_cast<double>(e.first) / e.second;
    ok = ok && r >= 0.9;
    info << ' ' << s << ' ' << e.first << '/' << e.second << " (" << fmt("%.1f%%", 100.0 * r) << ");";
  }
  info << " failures:";
  for (const auto& [k, v] : fails) info << ' ' << k << 'x' << v;
  info << "; profiles by hand " << (why.empty() ? "ok" : why) << "; report " << cfg.out_dir << "/report";
  l.pass = ok && res.instances.size() == static_cast<std::size_t>(starts) * 2 * cfg.problems.size();
  l.detail = info.str();
  return l;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::string out = "acceptance_out";
  std::set<std::string> only;
  int jobs = 1;
  app.add_option("--out", out, "Directory for reports");
  app.add_option("--only", only, "Run only these checks");
  app.add_option("--jobs", jobs, "Threads for the benchmark runs");
  CLI11_PARSE(app, argc, argv);
  fs::create_directories(out);

  auto want = [&](const std::string& n) { return only.empty() || only.count(n) > 0; };
  std::vector<Line> lines;
  auto emit = [&](Line l) {
    std::cout << (l.pass ? "PASS " : "FAIL ") << l.name << ": " << l.detail << std::endl;
    lines.push_back(std::move(l));
  };

  if (want("gap-sign") || want("ordering")) {
    const auto s = sweep_points(1000);
    if (want("gap-sign"))
      emit({"gap-sign", s.sign_violations == 0 && s.seconds < 120.0,
            std::to_string(s.points) + " points on " + std::to_string(registry_names().size()) +
                " robust problems (seed 1), max theta " + fmt("%.3g", s.worst_theta) + ", max solver value " +
                fmt("%.3g", s.worst_solver_value) + " (tol 1e-9), violations " + std::to_string(s.sign_violations) +
                ", time " + fmt("%.1fs", s.seconds) + " (target 120s), shared with ordering;" + s.detail_per_problem});
    if (want("ordering"))
      emit({"ordering", s.order_violations == 0 && s.pg_positive == 0,
            std::to_string(s.points) + " points, max (theta_C - theta_PG)/max(1,|theta_C|) " + fmt("%.3g", s.worst_order) +
                ", violations " + std::to_string(s.order_violations) + ", theta_PG > 0 at " +
                std::to_string(s.pg_positive) + " points"});
  }

  if (want("criticality") || want("descent") || want("step-floor") || want("rates")) {
    double secs = 0.0;
    const auto sweeps = run_sweeps(100, secs);
    std::cout << "(multistart sweeps: " << fmt("%.1fs", secs) << ")" << std::endl;
    if (want("criticality")) emit(check_criticality(sweeps));
    if (want("descent")) emit(check_descent(sweeps));
    if (want("step-floor")) emit(check_step_floor(sweeps));
    if (want("rates")) emit(check_rates(sweeps));
  }
  if (want("oracles")) emit(check_oracles());
  if (want("uncertainty-study")) emit(check_uncertainty(out, 200));
  if (want("benchmark")) emit(check_benchmark(out, 100, jobs));

  int failed = 0;
  for (const auto& l : lines) failed += !l.pass;
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << lines.size() - failed << "/" << lines.size() << std::endl;
  return failed ? 1 : 0;
}
