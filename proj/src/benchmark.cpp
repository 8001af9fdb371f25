#include "mocondg/benchmark.hpp"

#include "mocondg/errors.hpp"
#include "mocondg/registry.hpp"
#include "mocondg/rng.hpp"
#include "mocondg/trace_io.hpp"
#include "mocondg/version.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <mutex>
#include <set>
#include <thread>

namespace mocondg {

namespace fs = std::filesystem;

std::vector<Vector> generate_starts(const BoxDomain& box, int count, std::uint64_t seed, const std::string& tag) {
  if (count < 1) throw InvalidArgument("generate_starts: count must be at least 1");
  Rng rng(seed, stream_id(tag));
  std::vector<Vector> pts;
  pts.reserve(count);
  for (int s = 0; s < count; ++s) {
    Vector x(box.dim());
    for (int i = 0; i < box.dim(); ++i) x(i) = rng.uniform(box.lb()(i), box.ub()(i));
    pts.push_back(std::move(x));
  }
  return pts;
}

const char* to_string(BenchMode m) { return m == BenchMode::Profile ? "profile" : "frontier"; }

void BenchmarkConfig::validate() const {
  if (problems.empty()) throw InvalidArgument("benchmark: no problems listed");
  for (const auto& p : problems) registry_info(p);
  for (const auto& [name, n] : dims) {
    const ProblemInfo& info = registry_info(name);
    if (n != info.n && !info.variable_n) throw InvalidArgument("benchmark: " + info.name + " has fixed n");
    if (n < 1) throw InvalidArgument("benchmark: dimension must be positive");
  }
  if (solvers.empty()) throw InvalidArgument("benchmark: no solvers listed");
  if (starts < 1) throw InvalidArgument("benchmark: starts must be at least 1");
  if (jobs < 1) throw InvalidArgument("benchmark: jobs must be at least 1");
  if (frontier_starts < 1) throw InvalidArgument("benchmark: frontier_starts must be at least 1");
  if (!(frontier_seconds > 0.0)) throw InvalidArgument("benchmark: frontier_seconds must be positive");
  solver.rule.validate();
  if (solver.max_iterations < 0) throw InvalidArgument("benchmark: max_iter must be nonnegative");
  if (!(solver.mu > 0.0)) throw InvalidArgument("benchmark: mu must be positive");
  RobustConfig rc;
  rc.delta_bar = delta_bar;
  rc.validate();
  for (double d : delta_bars) {
    rc.delta_bar = d;
    rc.validate();
  }
  if (!delta_bars.empty() && !robust) throw InvalidArgument("benchmark: delta_bar list requires robust problems");
}

nlohmann::ordered_json BenchmarkConfig::to_json() const {
  nlohmann::ordered_json j;
  j["problems"] = problems;
  if (!dims.empty()) {
    nlohmann::ordered_json d = nlohmann::ordered_json::object();
    for (const auto& [k, v] : dims) d[k] = v;
    j["dims"] = d;
  }
  std::vector<std::string> s;
  for (Method m : solvers) s.push_back(to_string(m));
  j["solvers"] = s;
  j["rule"] = to_string(solver.rule.kind);
  j["zeta"] = solver.rule.zeta;
  j["omega1"] = solver.rule.omega1;
  j["omega2"] = solver.rule.omega2;
  if (solver.rule.L > 0.0) j["L"] = solver.rule.L;
  j["mu"] = solver.mu;
  j["max_iter"] = solver.max_iterations;
  j["starts"] = starts;
  j["seed"] = seed;
  j["robust"] = robust;
  if (delta_bar) j["delta_bar"] = *delta_bar;
  else j["delta_bar"] = "random";
  if (!delta_bars.empty()) j["delta_bars"] = delta_bars;
  j["anchor"] = to_string(anchor);
  j["mode"] = to_string(mode);
  j["frontier_seconds"] = frontier_seconds;
  j["frontier_starts"] = frontier_starts;
  return j;
}

BenchmarkConfig BenchmarkConfig::from_json(const nlohmann::json& j) {
  static const std::set<std::string> known{"problems", "dims", "solvers", "rule", "zeta", "omega1", "omega2", "L", "mu",
                                           "max_iter", "starts", "seed", "robust", "delta_bar", "delta_bars", "anchor",
                                           "mode", "frontier_seconds", "frontier_starts", "jobs", "out", "write_traces"};
  if (!j.is_object()) throw InvalidArgument("config: expected a JSON object");
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw InvalidArgument("config: unknown key '" + k + "'");
  BenchmarkConfig c;
  try {
    if (j.contains("problems")) {
      if (j["problems"].is_string()) c.problems = {j["problems"].get<std::string>()};
      else c.problems = j["problems"].get<std::vector<std::string>>();
    }
    if (j.contains("dims"))
      for (const auto& [k, v] : j["dims"].items()) c.dims[registry_info(k).name] = v.get<int>();
    if (j.contains("solvers")) {
      c.solvers.clear();
      for (const auto& s : j["solvers"]) c.solvers.push_back(method_from_string(s.get<std::string>()));
    }
    if (j.contains("rule")) c.solver.rule.kind = step_kind_from_string(j["rule"].get<std::string>());
    if (j.contains("zeta")) c.solver.rule.zeta = j["zeta"].get<double>();
    if (j.contains("omega1")) c.solver.rule.omega1 = j["omega1"].get<double>();
    if (j.contains("omega2")) c.solver.rule.omega2 = j["omega2"].get<double>();
    if (j.contains("L")) c.solver.rule.L = j["L"].get<double>();
    if (j.contains("mu")) c.solver.mu = j["mu"].get<double>();
    if (j.contains("max_iter")) c.solver.max_iterations = j["max_iter"].get<int>();
    if (j.contains("starts")) c.starts = j["starts"].get<int>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("robust")) c.robust = j["robust"].get<bool>();
    if (j.contains("delta_bar")) {
      if (j["delta_bar"].is_string()) {
        if (j["delta_bar"].get<std::string>() != "random") throw InvalidArgument("config: delta_bar must be numeric or \"random\"");
      } else {
        c.delta_bar = j["delta_bar"].get<double>();
      }
    }
    if (j.contains("delta_bars")) c.delta_bars = j["delta_bars"].get<std::vector<double>>();
    if (j.contains("anchor")) c.anchor = anchor_from_string(j["anchor"].get<std::string>());
    if (j.contains("mode")) {
      const auto m = j["mode"].get<std::string>();
      if (m == "profile") c.mode = BenchMode::Profile;
      else if (m == "frontier") c.mode = BenchMode::Frontier;
      else throw InvalidArgument("config: mode must be profile or frontier");
    }
    if (j.contains("frontier_seconds")) c.frontier_seconds = j["frontier_seconds"].get<double>();
    if (j.contains("frontier_starts")) c.frontier_starts = j["frontier_starts"].get<int>();
    if (j.contains("jobs")) c.jobs = j["jobs"].get<int>();
    if (j.contains("out")) c.out_dir = j["out"].get<std::string>();
    if (j.contains("write_traces")) c.write_traces = j["write_traces"].get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }
  for (auto& p : c.problems) p = registry_info(p).name;
  return c;
}

namespace {

std::string delta_tag(double d) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "d%.4f", d);
  return buf;
}

std::string instance_id(const std::string& problem, Method m, int start, std::optional<double> delta) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "s%04d", start);
  std::string id = problem;
  if (delta) id += "__" + delta_tag(*delta);
  return id + "__" + to_string(m) + "__" + buf;
}

std::vector<std::optional<double>> delta_values(const BenchmarkConfig& c) {
  if (c.delta_bars.empty()) return {std::nullopt};
  std::vector<std::optional<double>> v;
  for (double d : c.delta_bars) v.emplace_back(d);
  return v;
}

int start_count(const BenchmarkConfig& c) { return c.mode == BenchMode::Frontier ? c.frontier_starts : c.starts; }

std::string problem_key(const std::string& p, std::optional<double> d) { return d ? p + "|" + delta_tag(*d) : p; }

nlohmann::ordered_json vec_json(const Vector& v) {
  auto a = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::isfinite(v(i))) a.push_back(v(i));
    else a.push_back(nullptr);
  }
  return a;
}

Vector vec_from(const nlohmann::json& a) {
  Vector v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = a[i].is_null() ? std::numeric_limits<double>::quiet_NaN() : a[i].get<double>();
  return v;
}

StopReason stop_from_string(const std::string& s) {
  for (StopReason r : {StopReason::Converged, StopReason::MaxIterations, StopReason::CriticalAtStart, StopReason::Critical,
                       StopReason::NumericalFailure, StopReason::TimeBudget})
    if (s == to_string(r)) return r;
  throw InvalidArgument("unknown stop reason: " + s);
}

std::string results_dir(const std::string& out) { return (fs::path(out) / "results").string(); }
std::string instance_path(const std::string& out, const std::string& id, const char* ext) {
  return (fs::path(out) / "results" / "instances" / (id + ext)).string();
}

nlohmann::ordered_json manifest_json(const BenchmarkConfig& c, const std::vector<InstanceSpec>& plan,
                                     const std::vector<char>& done) {
  nlohmann::ordered_json j;
  j["version"] = kVersion;
  j["rng"] = std::string(kRngVersion);
  j["config"] = c.to_json();
  auto arr = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < plan.size(); ++i) {
    nlohmann::ordered_json e;
    e["id"] = plan[i].id;
    e["problem"] = plan[i].problem;
    e["solver"] = to_string(plan[i].solver);
    e["start"] = plan[i].start;
    if (plan[i].delta_bar) e["delta_bar"] = *plan[i].delta_bar;
    e["file"] = "instances/" + plan[i].id + ".json";
    e["status"] = done[i] ? "done" : "pending";
    arr.push_back(e);
  }
  j["instances"] = arr;
  return j;
}

}  // namespace

std::vector<InstanceSpec> plan_instances(const BenchmarkConfig& config) {
  config.validate();
  std::vector<InstanceSpec> plan;
  const int count = start_count(config);
  for (const auto& p : config.problems) {
    const std::string name = registry_info(p).name;
    for (const auto& d : delta_values(config))
      for (Method m : config.solvers)
        for (int s = 0; s < count; ++s) plan.push_back({instance_id(name, m, s, d), name, m, s, d});
  }
  return plan;
}

CompositeProblem build_instance_problem(const BenchmarkConfig& config, const std::string& name,
                                        std::optional<double> delta_bar) {
  const std::string canon = registry_info(name).name;
  const auto it = config.dims.find(canon);
  const int n = it == config.dims.end() ? 0 : it->second;
  if (!config.robust) return make_problem(canon, n);
  RobustConfig rc;
  rc.seed = config.seed;
  rc.delta_bar = delta_bar ? delta_bar : config.delta_bar;
  rc.anchor = config.anchor;
  return make_robust_problem(canon, rc, n);
}

nlohmann::ordered_json instance_json(const InstanceResult& r) {
  nlohmann::ordered_json j;
  j["id"] = r.spec.id;
  j["problem"] = r.spec.problem;
  j["solver"] = to_string(r.spec.solver);
  j["start"] = r.spec.start;
  if (r.spec.delta_bar) j["delta_bar"] = *r.spec.delta_bar;
  j["skipped"] = r.skipped;
  j["stop_reason"] = to_string(r.stop_reason);
  j["success"] = r.success;
  j["iterations"] = r.iterations;
  j["f_evals"] = r.counters.f_evals;
  j["grad_evals"] = r.counters.grad_evals;
  j["lp_solves"] = r.counters.lp_solves;
  j["qp_solves"] = r.counters.qp_solves;
  j["x0"] = vec_json(r.x0);
  j["F_final"] = vec_json(r.F_final);
  j["x_final"] = vec_json(r.x_final);
  if (r.theta_pg_final) j["theta_pg_final"] = *r.theta_pg_final;
  nlohmann::ordered_json meta;
  meta["wall_seconds"] = r.seconds;
  j["metadata"] = meta;
  return j;
}

InstanceResult instance_from_json(const nlohmann::json& j) {
  InstanceResult r;
  r.spec.id = j.at("id").get<std::string>();
  r.spec.problem = j.at("problem").get<std::string>();
  r.spec.solver = method_from_string(j.at("solver").get<std::string>());
  r.spec.start = j.at("start").get<int>();
  if (j.contains("delta_bar")) r.spec.delta_bar = j["delta_bar"].get<double>();
  r.skipped = j.value("skipped", false);
  r.stop_reason = stop_from_string(j.at("stop_reason").get<std::string>());
  r.success = j.at("success").get<bool>();
  r.iterations = j.at("iterations").get<int>();
  r.counters.f_evals = j.at("f_evals").get<std::size_t>();
  r.counters.grad_evals = j.at("grad_evals").get<std::size_t>();
  r.counters.lp_solves = j.at("lp_solves").get<std::size_t>();
  r.counters.qp_solves = j.at("qp_solves").get<std::size_t>();
  r.x0 = vec_from(j.at("x0"));
  r.F_final = vec_from(j.at("F_final"));
  r.x_final = vec_from(j.at("x_final"));
  if (j.contains("theta_pg_final")) r.theta_pg_final = j["theta_pg_final"].get<double>();
  if (j.contains("metadata")) r.seconds = j["metadata"].value("wall_seconds", 0.0);
  return r;
}

BenchmarkResult run_benchmark(const BenchmarkConfig& config, const ProgressFn& progress) {
  const std::vector<InstanceSpec> plan = plan_instances(config);
  const std::size_t total = plan.size();
  BenchmarkResult result;
  result.config = config;
  result.instances.resize(total);
  std::vector<char> done(total, 0);

  const std::string manifest_path = (fs::path(results_dir(config.out_dir)) / "manifest.json").string();
  const auto cfg_json = config.to_json();
  if (config.resume && fs::exists(manifest_path)) {
    try {
      const auto old = nlohmann::json::parse(read_text_file(manifest_path));
      if (old.at("config") == nlohmann::json::parse(cfg_json.dump())) {
        for (std::size_t i = 0; i < total; ++i) {
          const std::string f = instance_path(config.out_dir, plan[i].id, ".json");
          if (!fs::exists(f)) continue;
          result.instances[i] = instance_from_json(nlohmann::json::parse(read_text_file(f)));
          done[i] = 1;
        }
      }
    } catch (const std::exception&) {
      std::fill(done.begin(), done.end(), 0);
    }
  }
  write_text_file(manifest_path, manifest_json(config, plan, done).dump(2));

  // Problems and starts are built once and shared read-only by the workers.
  std::map<std::string, CompositeProblem> problems;
  std::map<std::string, std::vector<Vector>> starts;
  for (const auto& p : config.problems) {
    const std::string name = registry_info(p).name;
    for (const auto& d : delta_values(config)) {
      CompositeProblem prob = build_instance_problem(config, name, d);
      if (!starts.count(name)) starts.emplace(name, generate_starts(prob.box, start_count(config), config.seed, "starts/" + name));
      problems.emplace(problem_key(name, d), std::move(prob));
    }
  }

  // Work units: single instances in profile mode; (problem, delta, solver)
  // groups run start by start in frontier mode so the time budget applies.
  std::vector<std::vector<std::size_t>> units;
  if (config.mode == BenchMode::Profile) {
    for (std::size_t i = 0; i < total; ++i) units.push_back({i});
  } else {
    const std::size_t per = static_cast<std::size_t>(start_count(config));
    for (std::size_t i = 0; i < total; i += per) {
      std::vector<std::size_t> u;
      for (std::size_t k = i; k < i + per; ++k) u.push_back(k);
      units.push_back(std::move(u));
    }
  }

  std::mutex mu;
  std::size_t finished = 0;
  for (char d : done) finished += d ? 1 : 0;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  using Clock = std::chrono::steady_clock;

  auto worker = [&]() {
    for (;;) {
      const std::size_t u = next.fetch_add(1);
      if (u >= units.size()) return;
      const auto group_start = Clock::now();
      double spent = 0.0;
      for (std::size_t i : units[u]) {
        if (done[i]) {
          spent += result.instances[i].seconds;
          continue;
        }
        try {
          const InstanceSpec& spec = plan[i];
          const CompositeProblem& prob = problems.at(problem_key(spec.problem, spec.delta_bar));
          const Vector& x0 = starts.at(spec.problem)[static_cast<std::size_t>(spec.start)];
          InstanceResult r;
          r.spec = spec;
          r.x0 = x0;
          const double elapsed = spent + std::chrono::duration<double>(Clock::now() - group_start).count();
          if (config.mode == BenchMode::Frontier && elapsed > config.frontier_seconds) {
            r.skipped = true;
          } else {
            SolverOptions opt = config.solver;
            if (config.mode == BenchMode::Frontier) opt.time_budget = std::max(1e-3, config.frontier_seconds - elapsed);
            const SolverTrace tr = run_solver(spec.solver, prob, x0, opt);
            r.stop_reason = tr.stop_reason;
            r.success = tr.success();
            r.iterations = tr.iterations();
            r.counters = tr.counters;
            r.seconds = tr.seconds;
            r.F_final = tr.F_final;
            r.x_final = tr.x_final;
            r.theta_pg_final = tr.theta_pg_final;
            if (config.write_traces) write_text_file(instance_path(config.out_dir, spec.id, ".csv"), trace_csv(tr));
          }
          write_text_file(instance_path(config.out_dir, spec.id, ".json"), instance_json(r).dump(2));
          std::lock_guard<std::mutex> lock(mu);
          result.instances[i] = std::move(r);
          done[i] = 1;
          ++finished;
          if (progress) progress(result.instances[i], finished, total);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    }
  };

  const int nthreads = std::max(1, std::min<int>(config.jobs, static_cast<int>(units.size())));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  write_text_file(manifest_path, manifest_json(config, plan, done).dump(2));
  if (failure) std::rethrow_exception(failure);
  return result;
}

BenchmarkResult load_results(const std::string& out_dir) {
  const std::string manifest_path = (fs::path(results_dir(out_dir)) / "manifest.json").string();
  if (!fs::exists(manifest_path)) throw IoFailure("no manifest at " + manifest_path);
  nlohmann::json man;
  try {
    man = nlohmann::json::parse(read_text_file(manifest_path));
  } catch (const nlohmann::json::exception& e) {
    throw IoFailure(std::string("corrupt manifest: ") + e.what());
  }
  BenchmarkResult res;
  res.config = BenchmarkConfig::from_json(man.at("config"));
  res.config.out_dir = out_dir;
  for (const auto& e : man.at("instances")) {
    const std::string f = (fs::path(results_dir(out_dir)) / e.at("file").get<std::string>()).string();
    if (!fs::exists(f)) continue;
    res.instances.push_back(instance_from_json(nlohmann::json::parse(read_text_file(f))));
  }
  return res;
}

}  // namespace mocondg
