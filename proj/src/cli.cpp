#include "mocondg/cli.hpp"

#include "mocondg/benchmark.hpp"
#include "mocondg/constants.hpp"
#include "mocondg/errors.hpp"
#include "mocondg/registry.hpp"
#include "mocondg/report.hpp"
#include "mocondg/robust.hpp"
#include "mocondg/trace_io.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <filesystem>
#include <iostream>
#include <sstream>

namespace mocondg {

namespace {

namespace fs = std::filesystem;

// Flags shared by the subcommands; each maps onto a config key.
struct Flags {
  std::vector<std::string> problems;
  int n = 0;
  bool robust = false;
  bool plain = false;
  std::string delta_bar;
  std::vector<double> delta_bars;
  std::uint64_t seed = 1;
  std::string rule = "armijo";
  std::string solver = "condg";
  std::vector<std::string> solvers;
  double mu = 1.0;
  double zeta = 1e-4;
  double omega1 = 0.05;
  double omega2 = 0.95;
  double L = 0.0;
  int max_iter = 200;
  int starts = 100;
  int start = 0;
  int jobs = 1;
  std::string out = "out";
  std::string config;
  std::string anchor = "upper_bound";
  double frontier_seconds = 10.0;
  int frontier_starts = 50;
  bool no_resume = false;
  bool no_traces = false;
};

void add_solver_flags(CLI::App* c, Flags& f) {
  c->add_option("--rule", f.rule, "Step rule: armijo, adaptive or diminishing")
      ->check(CLI::IsMember({"armijo", "adaptive", "diminishing"}));
  c->add_option("--mu", f.mu, "Proximal weight of the ProxGrad subproblem")->check(CLI::PositiveNumber);
  c->add_option("--zeta", f.zeta, "Armijo constant");
  c->add_option("--omega1", f.omega1, "Lower backtracking factor");
  c->add_option("--omega2", f.omega2, "Upper backtracking factor");
  c->add_option("--L", f.L, "Lipschitz constant for the adaptive rule (default: problem value)");
  c->add_option("--max-iter", f.max_iter, "Iteration cap")->check(CLI::NonNegativeNumber);
}

void add_problem_flags(CLI::App* c, Flags& f) {
  c->add_option("--robust", f.robust, "Attach the seeded support-function term (default on for bench/frontier)")
      ->expected(0, 1)
      ->default_str("true");
  c->add_option("--delta-bar", f.delta_bar, "Uncertainty level in [0.02, 0.10] or 'random'");
  c->add_option("--seed", f.seed, "Seed for uncertainty data and starting points");
  c->add_option("--anchor", f.anchor, "Anchor for delta: upper_bound, box_midpoint")
      ->check(CLI::IsMember({"upper_bound", "ub", "box_midpoint", "midpoint"}));
}

std::optional<double> parse_delta_bar(const std::string& s) {
  if (s.empty() || s == "random") return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InvalidArgument("--delta-bar expects a number or 'random', got '" + s + "'");
  }
}

SolverOptions solver_options(const Flags& f) {
  SolverOptions o;
  o.rule.kind = step_kind_from_string(f.rule);
  o.rule.zeta = f.zeta;
  o.rule.omega1 = f.omega1;
  o.rule.omega2 = f.omega2;
  o.rule.L = f.L;
  o.rule.validate();
  o.mu = f.mu;
  o.max_iterations = f.max_iter;
  return o;
}

CompositeProblem build_problem(const Flags& f) {
  if (f.problems.size() != 1) throw InvalidArgument("exactly one --problem is required");
  const std::string name = registry_info(f.problems[0]).name;
  if (f.n > 0 && f.n != registry_info(name).n && !registry_info(name).variable_n)
    throw InvalidArgument(name + " has fixed dimension " + std::to_string(registry_info(name).n));
  if (!f.robust) return make_problem(name, f.n);
  RobustConfig rc;
  rc.seed = f.seed;
  rc.delta_bar = parse_delta_bar(f.delta_bar);
  rc.anchor = anchor_from_string(f.anchor);
  return make_robust_problem(name, rc, f.n);
}

std::string vec_str(const Vector& v) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v(i));
  return s + "]";
}

int cmd_solve(const Flags& f, std::ostream& out) {
  const CompositeProblem prob = build_problem(f);
  const SolverOptions opt = solver_options(f);
  const Method method = method_from_string(f.solver);
  if (f.start < 0) throw InvalidArgument("--start must be nonnegative");
  const Vector x0 = generate_starts(prob.box, f.start + 1, f.seed, "starts/" + prob.name)[static_cast<std::size_t>(f.start)];
  const SolverTrace tr = run_solver(method, prob, x0, opt);

  nlohmann::ordered_json cfg;
  cfg["problem"] = prob.name;
  cfg["n"] = prob.n();
  cfg["robust"] = f.robust;
  cfg["delta_bar"] = f.delta_bar.empty() ? "random" : f.delta_bar;
  cfg["seed"] = f.seed;
  cfg["anchor"] = f.anchor;
  cfg["solver"] = to_string(method);
  cfg["start"] = f.start;
  write_text_file((fs::path(f.out) / "trace.csv").string(), trace_csv(tr));
  write_text_file((fs::path(f.out) / "trace.json").string(), trace_json(tr, cfg).dump(2) + "\n");

  // |theta_PG| at the final iterate; computed here if the run did not need it.
  double theta_pg = tr.theta_pg_final ? *tr.theta_pg_final : std::numeric_limits<double>::quiet_NaN();
  if (!tr.theta_pg_final && tr.stop_reason != StopReason::NumericalFailure) {
    try {
      theta_pg = proxgrad_direction(prob, tr.x_final, opt.mu).theta;
    } catch (const Error&) {
    }
  }
  out << "problem=" << prob.name << " solver=" << to_string(method) << " rule=" << to_string(opt.rule.kind)
      << " stop=" << to_string(tr.stop_reason) << " iterations=" << tr.iterations() << " f_evals=" << tr.counters.f_evals
      << " |theta_pg|=" << format_double(std::abs(theta_pg)) << " F=" << vec_str(tr.F_final) << '\n';
  if (!tr.message.empty()) out << "message: " << tr.message << '\n';
  return tr.success() ? 0 : 1;
}

BenchmarkConfig bench_config(const Flags& f, CLI::App* c, BenchMode mode) {
  BenchmarkConfig cfg;
  if (!f.config.empty()) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(read_text_file(f.config));
    } catch (const nlohmann::json::exception& e) {
      throw InvalidArgument("config " + f.config + ": " + e.what());
    }
    cfg = BenchmarkConfig::from_json(j);
  } else {
    cfg.mode = mode;
  }
  // Explicit flags override the file.
  auto given = [&](const char* name) { return c->count(name) > 0; };
  if (given("--problem")) {
    cfg.problems.clear();
    for (const auto& p : f.problems) cfg.problems.push_back(registry_info(p).name);
  }
  if (given("--n")) {
    if (cfg.problems.size() != 1) throw InvalidArgument("--n needs exactly one --problem");
    cfg.dims[cfg.problems[0]] = f.n;
  }
  if (given("--solver")) {
    cfg.solvers.clear();
    for (const auto& s : f.solvers) cfg.solvers.push_back(method_from_string(s));
  }
  if (given("--rule")) cfg.solver.rule.kind = step_kind_from_string(f.rule);
  if (given("--zeta")) cfg.solver.rule.zeta = f.zeta;
  if (given("--omega1")) cfg.solver.rule.omega1 = f.omega1;
  if (given("--omega2")) cfg.solver.rule.omega2 = f.omega2;
  if (given("--L")) cfg.solver.rule.L = f.L;
  if (given("--mu")) cfg.solver.mu = f.mu;
  if (given("--max-iter")) cfg.solver.max_iterations = f.max_iter;
  if (given("--starts")) cfg.starts = f.starts;
  if (given("--seed")) cfg.seed = f.seed;
  if (given("--robust")) cfg.robust = f.robust;
  if (given("--plain")) cfg.robust = false;
  if (given("--delta-bar")) cfg.delta_bar = parse_delta_bar(f.delta_bar);
  if (given("--delta-bars")) cfg.delta_bars = f.delta_bars;
  if (given("--anchor")) cfg.anchor = anchor_from_string(f.anchor);
  if (given("--jobs")) cfg.jobs = f.jobs;
  if (given("--out")) cfg.out_dir = f.out;
  if (given("--frontier-seconds")) cfg.frontier_seconds = f.frontier_seconds;
  if (given("--frontier-starts")) cfg.frontier_starts = f.frontier_starts;
  if (given("--no-traces")) cfg.write_traces = false;
  if (mode == BenchMode::Frontier) cfg.mode = BenchMode::Frontier;
  cfg.resume = !f.no_resume;
  cfg.validate();
  return cfg;
}

int cmd_bench(const BenchmarkConfig& cfg, std::ostream& out) {
  const BenchmarkResult res = run_benchmark(cfg, [&](const InstanceResult& r, std::size_t done, std::size_t total) {
    if (done % 50 == 0 || done == total)
      out << "[" << done << "/" << total << "] " << r.spec.id << " " << to_string(r.stop_reason) << '\n';
  });
  const auto files = emit_report(res, (fs::path(cfg.out_dir) / "report").string());
  const auto summary = summarize(res);
  for (const auto& [s, e] : summary["overall"].items())
    out << s << ": " << e["successes"].get<std::size_t>() << "/" << e["runs"].get<std::size_t>() << " converged\n";
  out << "manifest: " << (fs::path(cfg.out_dir) / "results" / "manifest.json").string() << '\n';
  out << "report: " << (fs::path(cfg.out_dir) / "report").string() << " (" << files.size() << " files)\n";
  return 0;
}

int cmd_constants(const Flags& f, std::ostream& out) {
  const CompositeProblem prob = build_problem(f);
  StepRule rule = solver_options(f).rule;
  ConstantsEstimate c = estimate_constants(prob, rule);
  out << constants_json(c) << '\n';
  return 0;
}

int cmd_report(const Flags& f, std::ostream& out) {
  const BenchmarkResult res = load_results(f.out);
  const auto files = emit_report(res, (fs::path(f.out) / "report").string());
  for (const auto& p : files) out << p << '\n';
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conditional gradient and proximal gradient methods for multiobjective composite problems", "mocondg"};
  app.require_subcommand(1);
  Flags f;

  auto* problems = app.add_subcommand("problems", "Print the problem manifest (JSON)");

  auto* solve = app.add_subcommand("solve", "Run one solver from one start and write its trace");
  solve->add_option("--problem", f.problems, "Registry problem name")->required()->expected(1);
  solve->add_option("--n", f.n, "Dimension for variable-size problems");
  solve->add_option("--solver", f.solver, "condg or proxgrad")->check(CLI::IsMember({"condg", "proxgrad"}));
  solve->add_option("--start", f.start, "Index of the seeded start point");
  solve->add_option("--out", f.out, "Output directory");
  add_problem_flags(solve, f);
  add_solver_flags(solve, f);

  auto* constants = app.add_subcommand("constants", "Estimate rho, L_G, Omega, L and gamma");
  constants->add_option("--problem", f.problems, "Registry problem name")->required()->expected(1);
  constants->add_option("--n", f.n, "Dimension for variable-size problems");
  add_problem_flags(constants, f);
  add_solver_flags(constants, f);

  std::vector<CLI::App*> runners;
  for (const char* name : {"bench", "frontier"}) {
    auto* c = app.add_subcommand(name, std::string(name) == "bench" ? "Multistart benchmark with report"
                                                                    : "Frontier approximation under a time/start budget");
    c->add_option("--config", f.config, "JSON config file; explicit flags override it");
    c->add_option("--problem", f.problems, "Registry problem names")->delimiter(',');
    c->add_option("--n", f.n, "Dimension (single problem only)");
    c->add_option("--solver", f.solvers, "Solvers (condg, proxgrad)")->delimiter(',');
    c->add_option("--starts", f.starts, "Starting points per problem")->check(CLI::PositiveNumber);
    c->add_option("--jobs", f.jobs, "Worker threads")->check(CLI::PositiveNumber);
    c->add_option("--out", f.out, "Output directory");
    c->add_flag("--plain", f.plain, "Use the smooth problems without the robust term");
    c->add_option("--delta-bars", f.delta_bars, "Several uncertainty levels with common data")->delimiter(',');
    c->add_option("--frontier-seconds", f.frontier_seconds, "Frontier budget per problem and solver");
    c->add_option("--frontier-starts", f.frontier_starts, "Frontier start cap per problem and solver");
    c->add_flag("--no-resume", f.no_resume, "Ignore results from a previous run");
    c->add_flag("--no-traces", f.no_traces, "Skip per-instance trace CSVs");
    add_problem_flags(c, f);
    add_solver_flags(c, f);
    runners.push_back(c);
  }

  auto* report = app.add_subcommand("report", "Rebuild the report from saved results");
  report->add_option("--out", f.out, "Directory holding results/")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return 2;
  }

  CLI::App* chosen = app.get_subcommands().front();
  try {
    if (chosen == problems) {
      out << manifest_json() << '\n';
      return 0;
    }
    if (chosen == solve) return cmd_solve(f, out);
    if (chosen == constants) return cmd_constants(f, out);
    if (chosen == report) return cmd_report(f, out);
    for (std::size_t i = 0; i < runners.size(); ++i) {
      if (chosen != runners[i]) continue;
      if (f.problems.empty() && f.config.empty()) throw InvalidArgument("give --problem or --config");
      if (!chosen->count("--robust") && !chosen->count("--plain") && f.config.empty()) f.robust = true;
      return cmd_bench(bench_config(f, chosen, i == 0 ? BenchMode::Profile : BenchMode::Frontier), out);
    }
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n" << chosen->help();
    return 2;
  } catch (const UnknownProblem& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const DimensionMismatch& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace mocondg
