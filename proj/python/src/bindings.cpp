#include "mocondg/benchmark.hpp"
#include "mocondg/errors.hpp"
#include "mocondg/metrics.hpp"
#include "mocondg/registry.hpp"
#include "mocondg/report.hpp"
#include "mocondg/robust.hpp"
#include "mocondg/solvers.hpp"
#include "mocondg/subproblems.hpp"
#include "mocondg/version.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "json.hpp"

namespace py = pybind11;
using namespace mocondg;

namespace {

CompositeProblem build_problem(const std::string& name, int n, bool robust, std::uint64_t seed,
                               std::optional<double> delta_bar, const std::string& anchor) {
  if (!robust) return make_problem(name, n);
  RobustConfig rc;
  rc.seed = seed;
  rc.delta_bar = delta_bar;
  rc.anchor = anchor_from_string(anchor);
  return make_robust_problem(name, rc, n);
}

py::dict gap_dict(const GapSolution& g) {
  py::dict d;
  d["p"] = g.p;
  d["theta"] = g.theta;
  d["solver_value"] = g.solver_value;
  d["direction"] = g.direction;
  d["kind"] = to_string(g.kind);
  return d;
}

py::dict trace_dict(const CompositeProblem& problem, const SolverTrace& t) {
  py::dict d;
  d["problem"] = t.problem;
  d["method"] = to_string(t.method);
  d["stop_reason"] = to_string(t.stop_reason);
  d["success"] = is_success(t.stop_reason);
  d["iterations"] = t.records.empty() ? 0 : t.records.back().k;
  d["x_final"] = t.x_final;
  d["F_final"] = evaluate(problem, t.x_final).F;
  d["theta_final"] = t.theta_final ? py::cast(*t.theta_final) : py::none();
  d["theta_pg_final"] = t.theta_pg_final ? py::cast(*t.theta_pg_final) : py::none();
  d["message"] = t.message;
  py::list recs;
  for (const auto& r : t.records) {
    py::dict rd;
    rd["k"] = r.k;
    rd["x"] = r.x;
    rd["theta"] = r.theta;
    rd["lambda"] = r.lambda;
    rd["inner_evals"] = r.inner_evals;
    recs.append(rd);
  }
  d["records"] = recs;
  py::dict c;
  c["f_evals"] = t.counters.f_evals;
  c["grad_evals"] = t.counters.grad_evals;
  c["lp_solves"] = t.counters.lp_solves;
  c["qp_solves"] = t.counters.qp_solves;
  d["counters"] = c;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Conditional-gradient and proximal-gradient solvers for robust multiobjective problems";
  m.attr("__version__") = kVersion;

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<DimensionMismatch>(m, "DimensionMismatch", PyExc_ValueError);
  py::register_exception<UnknownProblem>(m, "UnknownProblem", PyExc_KeyError);
  py::register_exception<OutOfDomain>(m, "OutOfDomain", PyExc_ValueError);
  py::register_exception<UndefinedMetric>(m, "UndefinedMetric", base.ptr());
  py::register_exception<NumericalFailure>(m, "NumericalFailure", base.ptr());

  m.def("problems", [] {
    py::list out;
    for (const auto& p : registry_manifest()) {
      py::dict d;
      d["name"] = p.name;
      d["n"] = p.n;
      d["m"] = p.m;
      d["convex"] = p.convex;
      d["variable_n"] = p.variable_n;
      d["source"] = p.source;
      out.append(d);
    }
    return out;
  });

  py::class_<CompositeProblem>(m, "Problem")
      .def(py::init(&build_problem), py::arg("name"), py::arg("n") = 0, py::arg("robust") = false,
           py::arg("seed") = 1, py::arg("delta_bar") = std::nullopt, py::arg("anchor") = "ub")
      .def_readonly("name", &CompositeProblem::name)
      .def_property_readonly("n", &CompositeProblem::n)
      .def_property_readonly("m", &CompositeProblem::m)
      .def_property_readonly("lb", [](const CompositeProblem& p) { return p.box.lb(); })
      .def_property_readonly("ub", [](const CompositeProblem& p) { return p.box.ub(); })
      .def_property_readonly("robust", [](const CompositeProblem& p) { return !p.nonsmooth.is_zero(); })
      .def("evaluate",
           [](const CompositeProblem& p, const Vector& x) {
             const auto e = evaluate(p, x);
             py::dict d;
             d["F"] = e.F;
             d["H"] = e.H;
             d["G"] = e.G;
             return d;
           })
      .def("jacobian", [](const CompositeProblem& p, const Vector& x) { return jacobian(p, x); })
      .def("lipschitz", &problem_lipschitz)
      .def("starts", [](const CompositeProblem& p, int count, std::uint64_t seed) { return generate_starts(p.box, count, seed); },
           py::arg("count"), py::arg("seed") = 1);

  m.def(
      "gap",
      [](const CompositeProblem& p, const Vector& x, const std::string& kind, double mu) {
        if (kind == "condg") return gap_dict(condg_direction(p, x));
        if (kind == "proxgrad") return gap_dict(proxgrad_direction(p, x, mu));
        throw InvalidArgument("gap: kind must be condg or proxgrad");
      },
      py::arg("problem"), py::arg("x"), py::arg("kind") = "condg", py::arg("mu") = 1.0);

  m.def(
      "solve",
      [](const CompositeProblem& p, const Vector& x0, const std::string& method, const std::string& step,
         int max_iterations, double mu, double L) {
        SolverOptions opt;
        opt.max_iterations = max_iterations;
        opt.mu = mu;
        const StepKind k = step_kind_from_string(step);
        opt.rule = k == StepKind::Armijo ? StepRule::armijo()
                   : k == StepKind::Adaptive ? StepRule::adaptive(L)
                                             : StepRule::diminishing();
        SolverTrace t;
        {
          py::gil_scoped_release nogil;
          t = run_solver(method_from_string(method), p, x0, opt);
        }
        return trace_dict(p, t);
      },
      py::arg("problem"), py::arg("x0"), py::arg("method") = "condg", py::arg("step") = "armijo",
      py::arg("max_iterations") = 200, py::arg("mu") = 1.0, py::arg("L") = 0.0);

  m.def("nondominated", &nondominated_indices, py::arg("points"));
  m.def("purity", &purity, py::arg("frontiers"));
  m.def(
      "spread",
      [](const std::vector<Vector>& frontier) {
        const auto s = spread_metrics(frontier);
        return py::make_tuple(s.gamma, s.delta);
      },
      py::arg("frontier"));
  m.def(
      "performance_profile",
      [](const Matrix& costs, const std::vector<std::vector<bool>>& failed, const std::vector<std::string>& solvers) {
        py::dict out;
        for (const auto& c : performance_profile(costs, failed, solvers)) out[py::str(c.solver)] = c.ratios;
        return out;
      },
      py::arg("costs"), py::arg("failed"), py::arg("solvers"));

  // JSON strings in and out; the Python wrapper converts them.
  m.def(
      "run_benchmark_json",
      [](const std::string& config, bool report) {
        const auto cfg = BenchmarkConfig::from_json(nlohmann::json::parse(config));
        BenchmarkResult r;
        {
          py::gil_scoped_release nogil;
          r = run_benchmark(cfg);
          if (report) emit_report(r, cfg.out_dir + "/report");
        }
        return summarize(r).dump();
      },
      py::arg("config"), py::arg("report") = true);
}
