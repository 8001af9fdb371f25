#include "mocondg/trace_io.hpp"

#include "mocondg/errors.hpp"
#include "mocondg/qp.hpp"
#include "mocondg/rng.hpp"
#include "mocondg/version.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace mocondg {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

nlohmann::ordered_json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

nlohmann::ordered_json vec(const Vector& v) {
  auto a = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(num(v(i)));
  return a;
}

nlohmann::ordered_json counters_json(const EvalCounters& c) {
  nlohmann::ordered_json j;
  j["f_evals"] = c.f_evals;
  j["grad_evals"] = c.grad_evals;
  j["lp_solves"] = c.lp_solves;
  j["qp_solves"] = c.qp_solves;
  return j;
}

}  // namespace

std::string trace_csv(const SolverTrace& tr) {
  std::ostringstream os;
  const int m = tr.F_final.size() ? static_cast<int>(tr.F_final.size()) : 0;
  const int n = static_cast<int>(tr.x0.size());
  os << "k,lambda,theta,theta_pg,inner_evals,step_ratio";
  for (int j = 0; j < m; ++j) os << ",F_" << j + 1;
  for (int i = 0; i < n; ++i) os << ",x_" << i + 1;
  os << '\n';
  for (const auto& r : tr.records) {
    os << r.k << ',' << format_double(r.lambda) << ',' << format_double(r.theta) << ',';
    if (r.theta_pg) os << format_double(*r.theta_pg);
    os << ',' << r.inner_evals << ',';
    if (std::isfinite(r.step_ratio)) os << format_double(r.step_ratio);
    for (int j = 0; j < m; ++j) os << ',' << format_double(r.F(j));
    for (int i = 0; i < n; ++i) os << ',' << format_double(r.x(i));
    os << '\n';
  }
  return os.str();
}

nlohmann::ordered_json trace_summary_json(const SolverTrace& tr) {
  nlohmann::ordered_json j;
  j["problem"] = tr.problem;
  j["solver"] = to_string(tr.method);
  j["stop_reason"] = to_string(tr.stop_reason);
  j["success"] = tr.success();
  j["iterations"] = tr.iterations();
  j["counters"] = counters_json(tr.counters);
  j["F_final"] = vec(tr.F_final);
  j["x_final"] = vec(tr.x_final);
  j["theta_final"] = tr.theta_final ? num(*tr.theta_final) : nlohmann::ordered_json(nullptr);
  j["theta_pg_final"] = tr.theta_pg_final ? num(*tr.theta_pg_final) : nlohmann::ordered_json(nullptr);
  j["step_ratio_final"] = num(tr.step_ratio_final);
  if (!tr.message.empty()) j["message"] = tr.message;
  return j;
}

nlohmann::ordered_json trace_json(const SolverTrace& tr, const nlohmann::ordered_json& config) {
  nlohmann::ordered_json j;
  j["version"] = kVersion;
  j["rng"] = std::string(kRngVersion);
  if (!config.is_null()) j["config"] = config;
  nlohmann::ordered_json o;
  o["rule"] = to_string(tr.options.rule.kind);
  o["zeta"] = tr.options.rule.zeta;
  o["omega1"] = tr.options.rule.omega1;
  o["omega2"] = tr.options.rule.omega2;
  if (tr.options.rule.kind == StepKind::Adaptive) o["L"] = tr.L_used;
  o["mu"] = tr.options.mu;
  o["max_iterations"] = tr.options.max_iterations;
  o["step_tol"] = tr.options.step_tol;
  o["theta_tol"] = tr.options.theta_tol;
  o["critical_tol"] = tr.options.critical_tol;
  o["qp_kkt_tolerance"] = kQpKktTolerance;
  j["options"] = o;
  j["x0"] = vec(tr.x0);
  j["summary"] = trace_summary_json(tr);
  auto recs = nlohmann::ordered_json::array();
  auto times = nlohmann::ordered_json::array();
  for (const auto& r : tr.records) {
    nlohmann::ordered_json e;
    e["k"] = r.k;
    e["x"] = vec(r.x);
    e["F"] = vec(r.F);
    e["theta"] = num(r.theta);
    e["lambda"] = num(r.lambda);
    e["inner_evals"] = r.inner_evals;
    e["step_ratio"] = num(r.step_ratio);
    e["theta_pg"] = r.theta_pg ? num(*r.theta_pg) : nlohmann::ordered_json(nullptr);
    recs.push_back(e);
    times.push_back(r.subproblem_seconds);
  }
  j["records"] = recs;
  nlohmann::ordered_json meta;
  meta["wall_seconds"] = tr.seconds;
  meta["subproblem_seconds"] = times;
  j["metadata"] = meta;
  return j;
}

void write_text_file(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  std::error_code ec;
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path(), ec);
  // Write to a temporary name and rename, so an interrupted run never leaves a
  // truncated file behind.
  const fs::path tmp = p.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoFailure("cannot open " + tmp.string() + " for writing");
    f << text;
    if (!f) throw IoFailure("write failed: " + tmp.string());
  }
  fs::rename(tmp, p, ec);
  if (ec) throw IoFailure("cannot rename " + tmp.string() + ": " + ec.message());
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoFailure("cannot open " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace mocondg
