#include "mocondg/report.hpp"

#include "mocondg/errors.hpp"
#include "mocondg/trace_io.hpp"
#include "mocondg/version.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <sstream>

namespace mocondg {

namespace {

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string esc(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else if (c == '&') o += "&amp;";
    else o += c;
  }
  return o;
}

constexpr double W = 640, H = 440, ML = 70, MR = 160, MT = 40, MB = 55;

void frame(std::ostringstream& os, const std::string& title, const std::string& xlabel, const std::string& ylabel) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
     << ' ' << H << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << (ML + (W - ML - MR) / 2) << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
     << esc(title) << "</text>\n";
  os << "<rect x=\"" << ML << "\" y=\"" << MT << "\" width=\"" << (W - ML - MR) << "\" height=\"" << (H - MT - MB)
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << (ML + (W - ML - MR) / 2) << "\" y=\"" << (H - 12)
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << esc(xlabel) << "</text>\n";
  os << "<text x=\"18\" y=\"" << (MT + (H - MT - MB) / 2) << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 "
     << (MT + (H - MT - MB) / 2) << ")\">" << esc(ylabel) << "</text>\n";
}

void ticks(std::ostringstream& os, double lo, double hi, bool xaxis, bool log2axis) {
  for (int t = 0; t <= 4; ++t) {
    const double f = t / 4.0;
    const double v = lo + f * (hi - lo);
    const std::string label = log2axis ? fmt("%.3g", std::exp2(v)) : fmt("%.3g", v);
    if (xaxis) {
      const double px = ML + f * (W - ML - MR);
      os << "<line x1=\"" << fmt("%.2f", px) << "\" y1=\"" << (H - MB) << "\" x2=\"" << fmt("%.2f", px) << "\" y2=\""
         << (H - MB + 5) << "\" stroke=\"black\"/>\n";
      os << "<text x=\"" << fmt("%.2f", px) << "\" y=\"" << (H - MB + 18)
         << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << label << "</text>\n";
    } else {
      const double py = H - MB - f * (H - MT - MB);
      os << "<line x1=\"" << (ML - 5) << "\" y1=\"" << fmt("%.2f", py) << "\" x2=\"" << ML << "\" y2=\"" << fmt("%.2f", py)
         << "\" stroke=\"black\"/>\n";
      os << "<text x=\"" << (ML - 8) << "\" y=\"" << fmt("%.2f", py + 4)
         << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << label << "</text>\n";
    }
  }
}

void legend(std::ostringstream& os, std::size_t i, const std::string& label) {
  const double y = MT + 14 + 20.0 * static_cast<double>(i);
  const char* color = kColors[i % 6];
  os << "<rect x=\"" << (W - MR + 14) << "\" y=\"" << (y - 9) << "\" width=\"12\" height=\"12\" fill=\"" << color << "\"/>\n";
  os << "<text x=\"" << (W - MR + 32) << "\" y=\"" << (y + 1) << "\" font-family=\"sans-serif\" font-size=\"12\">" << esc(label)
     << "</text>\n";
}

}  // namespace

std::string profile_svg(const std::vector<ProfileCurve>& curves, const std::string& title) {
  double tmax = 1.0;
  for (const auto& c : curves)
    for (double r : c.ratios)
      if (std::isfinite(r)) tmax = std::max(tmax, r);
  const double xhi = std::max(1.0, std::log2(tmax) * 1.05);
  std::ostringstream os;
  frame(os, title, "performance ratio tau (log2 scale)", "fraction of instances");
  ticks(os, 0.0, xhi, true, true);
  ticks(os, 0.0, 1.0, false, false);
  auto px = [&](double lt) { return ML + lt / xhi * (W - ML - MR); };
  auto py = [&](double v) { return H - MB - v * (H - MT - MB); };
  for (std::size_t i = 0; i < curves.size(); ++i) {
    // Step function: flat from tau=1 at rho(1), jumps at each distinct ratio.
    std::ostringstream pts;
    double prev = 0.0;
    pts << fmt("%.2f", px(0.0)) << ',' << fmt("%.2f", py(0.0));
    for (const auto& [tau, v] : curves[i].steps()) {
      const double x = px(std::log2(tau));
      pts << ' ' << fmt("%.2f", x) << ',' << fmt("%.2f", py(prev)) << ' ' << fmt("%.2f", x) << ',' << fmt("%.2f", py(v));
      prev = v;
    }
    pts << ' ' << fmt("%.2f", px(xhi)) << ',' << fmt("%.2f", py(prev));
    os << "<polyline fill=\"none\" stroke=\"" << kColors[i % 6] << "\" stroke-width=\"2\" points=\"" << pts.str() << "\"/>\n";
    legend(os, i, curves[i].solver);
  }
  os << "</svg>\n";
  return os.str();
}

std::string scatter_svg(const std::vector<ScatterLayer>& layers, const std::string& title) {
  double xlo = kInf, xhi = -kInf, ylo = kInf, yhi = -kInf;
  for (const auto& l : layers)
    for (const auto& p : l.points) {
      if (p.size() < 2 || !p.head(2).allFinite()) continue;
      xlo = std::min(xlo, p(0));
      xhi = std::max(xhi, p(0));
      ylo = std::min(ylo, p(1));
      yhi = std::max(yhi, p(1));
    }
  if (!(xlo <= xhi)) xlo = 0, xhi = 1, ylo = 0, yhi = 1;
  const double xpad = xhi > xlo ? 0.05 * (xhi - xlo) : 0.5;
  const double ypad = yhi > ylo ? 0.05 * (yhi - ylo) : 0.5;
  xlo -= xpad, xhi += xpad, ylo -= ypad, yhi += ypad;
  std::ostringstream os;
  frame(os, title, "F_1", "F_2");
  ticks(os, xlo, xhi, true, false);
  ticks(os, ylo, yhi, false, false);
  for (std::size_t i = 0; i < layers.size(); ++i) {
    os << "<g fill=\"" << kColors[i % 6] << "\" fill-opacity=\"0.75\">\n";
    for (const auto& p : layers[i].points) {
      if (p.size() < 2 || !p.head(2).allFinite()) continue;
      const double x = ML + (p(0) - xlo) / (xhi - xlo) * (W - ML - MR);
      const double y = H - MB - (p(1) - ylo) / (yhi - ylo) * (H - MT - MB);
      os << "<circle cx=\"" << fmt("%.2f", x) << "\" cy=\"" << fmt("%.2f", y) << "\" r=\"3\"/>\n";
    }
    os << "</g>\n";
    legend(os, i, layers[i].label);
  }
  os << "</svg>\n";
  return os.str();
}

namespace {

std::string delta_label(const std::optional<double>& d) { return d ? fmt("%g", *d) : std::string(); }

std::string group_key(const InstanceResult& r) {
  return r.spec.delta_bar ? r.spec.problem + " (delta_bar=" + delta_label(r.spec.delta_bar) + ")" : r.spec.problem;
}

std::vector<std::string> solver_names(const BenchmarkResult& res) {
  std::vector<std::string> s;
  for (Method m : res.config.solvers) s.emplace_back(to_string(m));
  return s;
}

nlohmann::ordered_json num_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

}  // namespace

ProfileInput profile_input(const BenchmarkResult& res, const std::string& measure) {
  if (measure != "iterations" && measure != "f_evals") throw InvalidArgument("profile measure must be iterations or f_evals");
  ProfileInput in;
  in.solvers = solver_names(res);
  const std::size_t S = in.solvers.size();
  std::map<std::string, std::vector<const InstanceResult*>> rows;
  std::vector<std::string> order;
  for (const auto& r : res.instances) {
    const std::string key = group_key(r) + "#" + std::to_string(r.spec.start);
    if (!rows.count(key)) {
      rows[key].assign(S, nullptr);
      order.push_back(key);
    }
    for (std::size_t s = 0; s < S; ++s)
      if (in.solvers[s] == to_string(r.spec.solver)) rows[key][s] = &r;
  }
  std::vector<std::string> keep;
  for (const auto& k : order) {
    const auto& v = rows[k];
    if (std::all_of(v.begin(), v.end(), [](const InstanceResult* r) { return r && !r->skipped; })) keep.push_back(k);
  }
  in.costs.resize(static_cast<Eigen::Index>(keep.size()), static_cast<Eigen::Index>(S));
  for (std::size_t p = 0; p < keep.size(); ++p) {
    std::vector<bool> f(S);
    for (std::size_t s = 0; s < S; ++s) {
      const InstanceResult& r = *rows[keep[p]][s];
      f[s] = !r.success;
      const double c = measure == "iterations" ? std::max(1, r.iterations) : static_cast<double>(std::max<std::size_t>(1, r.counters.f_evals));
      in.costs(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(s)) = c;
    }
    in.failed.push_back(f);
    in.rows.push_back(keep[p]);
  }
  return in;
}

nlohmann::ordered_json summarize(const BenchmarkResult& res) {
  nlohmann::ordered_json j;
  j["version"] = kVersion;
  j["config"] = res.config.to_json();
  const std::vector<std::string> solvers = solver_names(res);

  std::vector<std::string> groups;
  std::map<std::string, std::vector<const InstanceResult*>> by_group;
  for (const auto& r : res.instances) {
    const std::string g = group_key(r);
    if (!by_group.count(g)) groups.push_back(g);
    by_group[g].push_back(&r);
  }

  auto probs = nlohmann::ordered_json::array();
  std::map<std::string, std::pair<std::size_t, std::size_t>> overall;
  for (const auto& g : groups) {
    const auto& runs = by_group[g];
    nlohmann::ordered_json pj;
    pj["problem"] = runs.front()->spec.problem;
    if (runs.front()->spec.delta_bar) pj["delta_bar"] = *runs.front()->spec.delta_bar;
    std::vector<std::vector<Vector>> fronts;
    nlohmann::ordered_json sj = nlohmann::ordered_json::object();
    for (const auto& s : solvers) {
      std::size_t count = 0, ok = 0;
      std::vector<double> its, fev;
      std::vector<Vector> pts;
      std::map<std::string, int> reasons;
      for (const auto* r : runs) {
        if (to_string(r->spec.solver) != s || r->skipped) continue;
        ++count;
        ++reasons[to_string(r->stop_reason)];
        if (!r->success) continue;
        ++ok;
        its.push_back(r->iterations);
        fev.push_back(static_cast<double>(r->counters.f_evals));
        if (r->F_final.allFinite()) pts.push_back(r->F_final);
      }
      overall[s].first += count;
      overall[s].second += ok;
      nlohmann::ordered_json e;
      e["runs"] = count;
      e["successes"] = ok;
      e["success_rate"] = count ? num_or_null(static_cast<double>(ok) / static_cast<double>(count)) : nullptr;
      e["median_iterations"] = num_or_null(median(its));
      e["median_f_evals"] = num_or_null(median(fev));
      nlohmann::ordered_json rj = nlohmann::ordered_json::object();
      for (const auto& [k, v] : reasons) rj[k] = v;
      e["stop_reasons"] = rj;
      const auto front = nondominated(pts);
      e["frontier_size"] = front.size();
      sj[s] = e;
      fronts.push_back(front);
    }
    // Purity needs every solver to contribute; spread uses extremes of the union.
    if (solvers.size() >= 2 && std::all_of(fronts.begin(), fronts.end(), [](const auto& f) { return !f.empty(); })) {
      const auto pur = purity(fronts);
      for (std::size_t s = 0; s < solvers.size(); ++s) sj[solvers[s]]["purity"] = pur[s];
    } else {
      for (const auto& s : solvers) sj[s]["purity"] = nullptr;
    }
    const Extremes ext = extremes_of(fronts);
    for (std::size_t s = 0; s < solvers.size(); ++s) {
      try {
        const Spread sp = spread_metrics(fronts[s], ext);
        sj[solvers[s]]["spread_gamma"] = num_or_null(sp.gamma);
        sj[solvers[s]]["spread_delta"] = num_or_null(sp.delta);
      } catch (const UndefinedMetric&) {
        sj[solvers[s]]["spread_gamma"] = nullptr;
        sj[solvers[s]]["spread_delta"] = nullptr;
      }
    }
    pj["solvers"] = sj;
    probs.push_back(pj);
  }
  j["problems"] = probs;

  nlohmann::ordered_json ov = nlohmann::ordered_json::object();
  for (const auto& s : solvers) {
    nlohmann::ordered_json e;
    e["runs"] = overall[s].first;
    e["successes"] = overall[s].second;
    e["success_rate"] = overall[s].first ? num_or_null(static_cast<double>(overall[s].second) / overall[s].first) : nullptr;
    ov[s] = e;
  }
  j["overall"] = ov;

  nlohmann::ordered_json prof;
  for (const char* measure : {"iterations", "f_evals"}) {
    const ProfileInput in = profile_input(res, measure);
    const auto curves = performance_profile(in.costs, in.failed, in.solvers);
    nlohmann::ordered_json pm;
    pm["instances"] = in.rows.size();
    for (const auto& c : curves) {
      nlohmann::ordered_json e;
      e["efficiency"] = c.efficiency();
      e["robustness"] = c.robustness();
      auto st = nlohmann::ordered_json::array();
      for (const auto& [tau, v] : c.steps()) st.push_back({tau, v});
      e["steps"] = st;
      pm[c.solver] = e;
    }
    prof[measure] = pm;
  }
  j["profiles"] = prof;
  return j;
}

std::vector<std::string> emit_report(const BenchmarkResult& res, const std::string& dir) {
  namespace fs = std::filesystem;
  std::vector<std::string> files;
  auto put = [&](const std::string& name, const std::string& text) {
    const std::string p = (fs::path(dir) / name).string();
    write_text_file(p, text);
    files.push_back(p);
  };
  const auto summary = summarize(res);
  put("summary.json", summary.dump(2) + "\n");

  std::ostringstream inst;
  inst << "id,problem,delta_bar,solver,start,skipped,stop_reason,success,iterations,f_evals,grad_evals,lp_solves,qp_solves,F_final\n";
  for (const auto& r : res.instances) {
    inst << r.spec.id << ',' << r.spec.problem << ',' << delta_label(r.spec.delta_bar) << ',' << to_string(r.spec.solver) << ','
         << r.spec.start << ',' << (r.skipped ? 1 : 0) << ',' << to_string(r.stop_reason) << ',' << (r.success ? 1 : 0) << ','
         << r.iterations << ',' << r.counters.f_evals << ',' << r.counters.grad_evals << ',' << r.counters.lp_solves << ','
         << r.counters.qp_solves << ",\"";
    for (Eigen::Index i = 0; i < r.F_final.size(); ++i) inst << (i ? ";" : "") << format_double(r.F_final(i));
    inst << "\"\n";
  }
  put("instances.csv", inst.str());

  std::ostringstream met;
  met << "problem,delta_bar,solver,runs,successes,success_rate,frontier_size,purity,spread_gamma,spread_delta\n";
  auto cell = [](const nlohmann::ordered_json& v) {
    if (v.is_null()) return std::string();
    if (v.is_number_float()) return format_double(v.get<double>());
    return v.dump();
  };
  for (const auto& p : summary["problems"]) {
    const std::string d = p.contains("delta_bar") ? format_double(p["delta_bar"].get<double>()) : "";
    for (const auto& [s, e] : p["solvers"].items())
      met << p["problem"].get<std::string>() << ',' << d << ',' << s << ',' << cell(e["runs"]) << ',' << cell(e["successes"]) << ','
          << cell(e["success_rate"]) << ',' << cell(e["frontier_size"]) << ',' << cell(e["purity"]) << ','
          << cell(e["spread_gamma"]) << ',' << cell(e["spread_delta"]) << '\n';
  }
  put("metrics.csv", met.str());

  for (const char* measure : {"iterations", "f_evals"}) {
    const ProfileInput in = profile_input(res, measure);
    put(std::string("profile_") + measure + ".svg",
        profile_svg(performance_profile(in.costs, in.failed, in.solvers), std::string("Performance profile: ") + measure));
  }

  // One scatter per problem: layers by delta_bar when several were run, by solver otherwise.
  std::vector<std::string> names;
  for (const auto& r : res.instances)
    if (std::find(names.begin(), names.end(), r.spec.problem) == names.end()) names.push_back(r.spec.problem);
  for (const auto& name : names) {
    std::vector<ScatterLayer> layers;
    auto layer_for = [&](const std::string& label) -> ScatterLayer& {
      for (auto& l : layers)
        if (l.label == label) return l;
      layers.push_back({label, {}});
      return layers.back();
    };
    for (const auto& r : res.instances) {
      if (r.spec.problem != name || !r.success || !r.F_final.allFinite()) continue;
      const std::string label = r.spec.delta_bar ? "delta_bar=" + delta_label(r.spec.delta_bar) : to_string(r.spec.solver);
      layer_for(label).points.push_back(r.F_final);
    }
    for (auto& l : layers) l.points = nondominated(l.points);
    put("frontier_" + name + ".svg", scatter_svg(layers, "Frontier approximation: " + name));
  }
  return files;
}

}  // namespace mocondg
