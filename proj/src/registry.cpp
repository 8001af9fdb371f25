#include "mocondg/registry.hpp"

#include "mocondg/errors.hpp"
#include "mocondg/rng.hpp"

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

namespace mocondg {

namespace {

using Eval = std::function<Vector(const Vector&)>;
using Grad = std::function<Matrix(const Vector&)>;

struct Entry {
  ProblemInfo info;
  std::function<BoxDomain(int n)> box;
  std::function<Eval(int n)> eval;
  std::function<Grad(int n)> grad;
  std::function<std::optional<Vector>(int n)> lipschitz;  // analytic, when known
};

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) out(i++) = d;
  return out;
}

BoxDomain cube(int n, double lo, double hi) { return BoxDomain(Vector::Constant(n, lo), Vector::Constant(n, hi)); }

std::optional<Vector> none(int) { return std::nullopt; }

std::vector<Entry> build_entries() {
  std::vector<Entry> e;

  e.push_back({{"AP1", 2, 3, true, false, "Ansary and Panda, Optimization 64 (2015) 2289-2306", ""},
               [](int) { return cube(2, -10, 10); },
               [](int) -> Eval {
                 return [](const Vector& x) {
                   return vec({0.25 * (std::pow(x(0) - 1, 4) + 2 * std::pow(x(1) - 2, 4)),
                               std::exp(0.5 * (x(0) + x(1))) + x(0) * x(0) + x(1) * x(1),
                               (std::exp(-x(0)) + 2 * std::exp(-x(1))) / 6.0});
                 };
               },
               [](int) -> Grad {
                 return [](const Vector& x) {
                   Matrix J(3, 2);
                   const double ex = 0.5 * std::exp(0.5 * (x(0) + x(1)));
                   J << std::pow(x(0) - 1, 3), 2 * std::pow(x(1) - 2, 3),
                       ex + 2 * x(0), ex + 2 * x(1),
                       -std::exp(-x(0)) / 6.0, -std::exp(-x(1)) / 3.0;
                   return J;
                 };
               },
               none});

  e.push_back({{"AP2", 1, 2, true, false, "Ansary and Panda, Optimization 64 (2015) 2289-2306", ""},
               [](int) { return cube(1, -100, 100); },
               [](int) -> Eval { return [](const Vector& x) { return vec({x(0) * x(0) - 4, (x(0) - 1) * (x(0) - 1)}); }; },
               [](int) -> Grad {
                 return [](const Vector& x) {
                   Matrix J(2, 1);
                   J << 2 * x(0), 2 * (x(0) - 1);
                   return J;
                 };
               },
               [](int) -> std::optional<Vector> { return vec({2, 2}); }});

  e.push_back({{"BK1", 2, 2, true, false, "Binh and Korn (1997); Huband et al., IEEE TEVC 10 (2006) 477-506", ""},
               [](int) { return BoxDomain(vec({-5, -5}), vec({10, 10})); },
               [](int) -> Eval {
                 return [](const Vector& x) { return vec({x.squaredNorm(), (x.array() - 5).matrix().squaredNorm()}); };
               },
               [](int) -> Grad {
                 return [](const Vector& x) {
                   Matrix J(2, 2);
                   J.row(0) = 2 * x.transpose();
                   J.row(1) = 2 * (x.array() - 5).matrix().transpose();
                   return J;
                 };
               },
               [](int) -> std::optional<Vector> { return vec({2, 2}); }});

  e.push_back({{"FDS", 5, 3, true, true, "Fliege, Grana Drummond and Svaiter, SIAM J. Optim. 20 (2009) 602-626", ""},
               [](int n) { return cube(n, -2, 2); },
               [](int n) -> Eval {
                 return [n](const Vector& x) {
                   const double dn = n;
                   double f1 = 0, f3 = 0;
                   for (int i = 0; i < n; ++i) {
                     const double k = i + 1;
                     f1 += k * std::pow(x(i) - k, 4);
                     f3 += k * (dn - k + 1) * std::exp(-x(i));
                   }
                   return vec({f1 / (dn * dn), std::exp(x.sum() / dn) + x.squaredNorm(), f3 / (dn * (dn + 1))});
                 };
               },
               [](int n) -> Grad {
                 return [n](const Vector& x) {
                   const double dn = n;
                   Matrix J(3, n);
                   const double es = std::exp(x.sum() / dn) / dn;
                   for (int i = 0; i < n; ++i) {
                     const double k = i + 1;
                     J(0, i) = 4 * k * std::pow(x(i) - k, 3) / (dn * dn);
                     J(1, i) = es + 2 * x(i);
                     J(2, i) = -k * (dn - k + 1) * std::exp(-x(i)) / (dn * (dn + 1));
                   }
                   return J;
                 };
               },
               [](int n) -> std::optional<Vector> {
                 // Hessian bounds at x = -2 (the box corner maximizing curvature).
                 const double dn = n;
                 double l1 = 0, l3 = 0;
                 for (int i = 0; i < n; ++i) {
                   const double k = i + 1;
                   l1 = std::max(l1, 12 * k * (k + 2) * (k + 2) / (dn * dn));
                   l3 = std::max(l3, k * (dn - k + 1) * std::exp(2.0) / (dn * (dn + 1)));
                 }
                 return vec({l1, std::exp(2.0) / dn + 2, l3});
               }});

  e.push_back({{"IKK1", 2, 3, true, false, "Huband et al., IEEE TEVC 10 (2006) 477-506", ""},
               [](int) { return cube(2, -50, 50); },
               [](int) -> Eval {
                 return [](const Vector& x) { return vec({x(0) * x(0), (x(0) - 20) * (x(0) - 20), x(1) * x(1)}); };
               },
               [](int) -> Grad {
                 return [](const Vector& x) {
                   Matrix J(3, 2);
                   J << 2 * x(0), 0, 2 * (x(0) - 20), 0, 0, 2 * x(1);
                   return J;
                 };
               },
               [](int) -> std::optional<Vector> { return vec({2, 2, 2}); }});

  e.push_back({{"IM1", 2, 2, false, false, "Hwang and Masud (1979); Huband et al., IEEE TEVC 10 (2006) 477-506", ""},
               [](int) { return BoxDomain(vec({1, 1}), vec({4, 2})); },
               [](int) -> Eval {
                 return [](const Vector& x) { return vec({2 * std::sqrt(x(0)), x(0) * (1 - x(1)) + 5}); };
               },
               [](int) -> Grad {
                 return [](const Vector& x) {
                   Matrix J(2, 2);
                   J << 1 / std::sqrt(x(0)), 0, 1 - x(1), -x(0);
                   return J;
                 };
               },
               [](int) -> std::optional<Vector> { return vec({0.5, 1}); }});

  e.push_back({{"JOS1", 100, 2, true, true, "Jin, Olhofer and Sendhoff, GECCO (2001) 1042-1049", ""},
               [](int n) { return cube(n, -100, 100); },
               [](int n) -> Eval {
                 return [n](const Vector& x) {
                   return vec({x.squaredNorm() / n, (x.array() - 2).matrix().squaredNorm() / n});
                 };
               },
               [](int n) -> Grad {
                 return [n](const Vector& x) {
                   Matrix J(2, n);
                   J.row(0) = (2.0 / n) * x.transpose();
                   J.row(1) = (2.0 / n) * (x.array() - 2).matrix().transpose();
                   return J;
                 };
               },
               [](int n) -> std::optional<Vector> { return vec({2.0 / n, 2.0 / n}); }});

  e.push_back({{"Lov1", 2, 2, true, false, "Lovison, SIAM J. Optim. 21 (2011) 463-490", "stated as a minimization"},
               [](int) { return cube(2, -10, 10); },
               [](int) -> Eval {
                 return [](const Vector& x) {
                   return vec({1.05 * x(0) * x(0) + 0.98 * x(1) * x(1),
                               0.99 * (x(0) - 3) * (x(0) - 3) + 1.03 * (x(1) - 2.5) * (x(1) - 2.5)});
                 };
               },
               [](int) -> Grad {
                 return [](const Vector& x) {
                   Matrix J(2, 2);
                   J << 2.1 * x(0), 1.96 * x(1), 1.98 * (x(0) - 3), 2.06 * (x(1) - 2.5);
                   return J;
                 };
               },
               [](int) -> std::optional<Vector> { return vec({2.1, 2.06}); }});

  e.push_back({{"MOP2", 2, 2, false, true, "Fonseca and Fleming (1995); Huband et al., IEEE TEVC 10 (2006) 477-506", ""},
               [](int n) { return cube(n, -4, 4); },
               [](int n) -> Eval {
                 return [n](const Vector& x) {
                   const double a = 1 / std::sqrt(static_cast<double>(n));
                   return vec({1 - std::exp(-(x.array() - a).matrix().squaredNorm()),
                               1 - std::exp(-(x.array() + a).matrix().squaredNorm())});
                 };
               },
               [](int n) -> Grad {
                 return [n](const Vector& x) {
                   const double a = 1 / std::sqrt(static_cast<double>(n));
                   const Vector p = (x.array() - a).matrix();
                   const Vector q = (x.array() + a).matrix();
                   Matrix J(2, n);
                   J.row(0) = 2 * std::exp(-p.squaredNorm()) * p.transpose();
                   J.row(1) = 2 * std::exp(-q.squaredNorm()) * q.transpose();
                   return J;
                 };
               },
               none});

  e.push_back({{"MOP7", 2, 3, true, false, "Viennet et al. (1996); Huband et al., IEEE TEVC 10 (2006) 477-506", ""},
               [](int) { return cube(2, -400, 400); },
               [](int) -> Eval {
                 return [](const Vector& x) {
                   const double a = x(0), b = x(1);
                   return vec({(a - 2) * (a - 2) / 2 + (b + 1) * (b + 1) / 13 + 3,
                               (a + b - 3) * (a + b - 3) / 36 + (-a + b + 2) * (-a + b + 2) / 8 - 17,
                               (a + 2 * b - 1) * (a + 2 * b - 1) / 175 + (2 * b - a) * (2 * b - a) / 17 - 13});
                 };
               },
               [](int) -> Grad {
                 return [](const Vector& x) {
                   const double a = x(0), b = x(1);
                   const double s = (a + b - 3) / 18, t = (-a + b + 2) / 4;
                   const double u = 2 * (a + 2 * b - 1) / 175, v = 2 * (2 * b - a) / 17;
                   Matrix J(3, 2);
                   J << a - 2, 2 * (b + 1) / 13, s - t, s + t, u - v, 2 * u + 2 * v;
                   return J;
                 };
               },
               [](int) -> std::optional<Vector> {
                 // Largest Hessian eigenvalues of the three quadratics.
                 Matrix H2(2, 2), H3(2, 2);
                 H2 << 1.0 / 18 + 1.0 / 4, 1.0 / 18 - 1.0 / 4, 1.0 / 18 - 1.0 / 4, 1.0 / 18 + 1.0 / 4;
                 H3 << 2.0 / 175 + 2.0 / 17, 4.0 / 175 - 4.0 / 17, 4.0 / 175 - 4.0 / 17, 8.0 / 175 + 8.0 / 17;
                 return vec({1.0, Eigen::SelfAdjointEigenSolver<Matrix>(H2).eigenvalues().maxCoeff(),
                             Eigen::SelfAdjointEigenSolver<Matrix>(H3).eigenvalues().maxCoeff()});
               }});

  e.push_back({{"SD", 4, 2, false, false, "Stadler and Dauer (1992), four-bar truss with unit constants",
                "f2 is concave in x3, so the problem is flagged nonconvex"},
               [](int) { return BoxDomain(vec({1, std::sqrt(2.0), std::sqrt(2.0), 1}), vec({3, 3, 3, 3})); },
               [](int) -> Eval {
                 return [](const Vector& x) {
                   const double r2 = std::sqrt(2.0);
                   return vec({2 * x(0) + r2 * x(1) + r2 * x(2) + x(3),
                               2 / x(0) + 2 * r2 / x(1) - 2 * r2 / x(2) + 2 / x(3)});
                 };
               },
               [](int) -> Grad {
                 return [](const Vector& x) {
                   const double r2 = std::sqrt(2.0);
                   Matrix J(2, 4);
                   J << 2, r2, r2, 1, -2 / (x(0) * x(0)), -2 * r2 / (x(1) * x(1)), 2 * r2 / (x(2) * x(2)),
                       -2 / (x(3) * x(3));
                   return J;
                 };
               },
               [](int) -> std::optional<Vector> {
                 // Diagonal Hessian of f2; the largest entry is 4/x^3 at x1 = x4 = 1.
                 return vec({1e-12, 4.0});
               }});

  e.push_back({{"SLCDT1", 2, 2, false, false, "Schuetze, Lara, Coello, Dellnitz and Talbi (2011)", ""},
               [](int) { return cube(2, -1.5, 1.5); },
               [](int) -> Eval {
                 return [](const Vector& x) {
                   const double s = x(0) + x(1), d = x(0) - x(1);
                   const double base = 0.5 * (std::sqrt(1 + s * s) + std::sqrt(1 + d * d));
                   const double bump = 0.85 * std::exp(-d * d);
                   return vec({base + 0.5 * d + bump, base - 0.5 * d + bump});
                 };
               },
               [](int) -> Grad {
                 return [](const Vector& x) {
                   const double s = x(0) + x(1), d = x(0) - x(1);
                   const double gs = 0.5 * s / std::sqrt(1 + s * s);
                   const double gd = 0.5 * d / std::sqrt(1 + d * d) - 1.7 * d * std::exp(-d * d);
                   // d/dx1 = gs + gd, d/dx2 = gs - gd.
                   Matrix J(2, 2);
                   J << gs + gd + 0.5, gs - gd - 0.5, gs + gd - 0.5, gs - gd + 0.5;
                   return J;
                 };
               },
               none});

  e.push_back({{"SP1", 2, 2, true, false, "Sefrioui and Periaux (2000); Huband et al., IEEE TEVC 10 (2006) 477-506", ""},
               [](int) { return cube(2, -100, 100); },
               [](int) -> Eval {
                 return [](const Vector& x) {
                   const double d = x(0) - x(1);
                   return vec({(x(0) - 1) * (x(0) - 1) + d * d, (x(1) - 3) * (x(1) - 3) + d * d});
                 };
               },
               [](int) -> Grad {
                 return [](const Vector& x) {
                   const double d = x(0) - x(1);
                   Matrix J(2, 2);
                   J << 2 * (x(0) - 1) + 2 * d, -2 * d, 2 * d, 2 * (x(1) - 3) - 2 * d;
                   return J;
                 };
               },
               [](int) -> std::optional<Vector> { return vec({3 + std::sqrt(5.0), 3 + std::sqrt(5.0)}); }});

  e.push_back({{"VU2", 2, 2, true, false, "Van Valedhuizen (1999); Huband et al., IEEE TEVC 10 (2006) 477-506", ""},
               [](int) { return cube(2, -3, 3); },
               [](int) -> Eval {
                 return [](const Vector& x) { return vec({x(0) + x(1) + 1, x(0) * x(0) + 2 * x(1) - 1}); };
               },
               [](int) -> Grad {
                 return [](const Vector& x) {
                   Matrix J(2, 2);
                   J << 1, 1, 2 * x(0), 2;
                   return J;
                 };
               },
               [](int) -> std::optional<Vector> { return vec({1e-12, 2}); }});

  e.push_back({{"ZDT1", 30, 2, true, true, "Zitzler, Deb and Thiele, Evol. Comput. 8 (2000) 173-195",
                "lower bound of x1 raised from 0 to 0.01 so that the gradient stays finite"},
               [](int n) {
                 Vector lb = Vector::Zero(n);
                 lb(0) = 0.01;
                 return BoxDomain(lb, Vector::Ones(n));
               },
               [](int n) -> Eval {
                 return [n](const Vector& x) {
                   const double g = 1 + 9 * x.tail(n - 1).sum() / (n - 1);
                   return vec({x(0), g * (1 - std::sqrt(x(0) / g))});
                 };
               },
               [](int n) -> Grad {
                 return [n](const Vector& x) {
                   const double g = 1 + 9 * x.tail(n - 1).sum() / (n - 1);
                   Matrix J = Matrix::Zero(2, n);
                   J(0, 0) = 1;
                   J(1, 0) = -0.5 * std::sqrt(g / x(0));
                   J.row(1).tail(n - 1).setConstant(9.0 / (n - 1) * (1 - 0.5 * std::sqrt(x(0) / g)));
                   return J;
                 };
               },
               none});

  return e;
}

const std::vector<Entry>& entries() {
  static const std::vector<Entry> e = build_entries();
  return e;
}

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

const Entry& find(const std::string& name) {
  for (const auto& en : entries())
    if (upper(en.info.name) == upper(name)) return en;
  throw UnknownProblem(name);
}

}  // namespace

const std::vector<ProblemInfo>& registry_manifest() {
  static const std::vector<ProblemInfo> infos = [] {
    std::vector<ProblemInfo> v;
    for (const auto& en : entries()) v.push_back(en.info);
    return v;
  }();
  return infos;
}

std::vector<std::string> registry_names() {
  std::vector<std::string> out;
  for (const auto& en : entries()) out.push_back(en.info.name);
  return out;
}

const ProblemInfo& registry_info(const std::string& name) { return find(name).info; }

Vector estimate_lipschitz(const SmoothObjective& smooth, const BoxDomain& box, int pairs, double safety, std::uint64_t seed) {
  Rng rng(seed, stream_id("lipschitz"));
  const int n = box.dim();
  Vector best = Vector::Zero(smooth.m);
  Vector x(n), y(n);
  for (int k = 0; k < pairs; ++k) {
    for (int i = 0; i < n; ++i) x(i) = rng.uniform(box.lb()(i), box.ub()(i));
    if (k % 2 == 0) {
      for (int i = 0; i < n; ++i) y(i) = rng.uniform(box.lb()(i), box.ub()(i));
    } else {
      for (int i = 0; i < n; ++i) y(i) = x(i) + 1e-3 * (box.ub()(i) - box.lb()(i)) * (rng.uniform() - 0.5);
      y = box.clamp(y);
    }
    const double dist = (x - y).norm();
    if (dist <= 0.0) continue;
    const Matrix diff = smooth.grad(x) - smooth.grad(y);
    for (int j = 0; j < smooth.m; ++j) best(j) = std::max(best(j), diff.row(j).norm() / dist);
  }
  // Affine objectives have L = 0; keep the constants strictly positive.
  return (safety * best).cwiseMax(1e-12);
}

ProblemFactory registry_lookup(const std::string& name) {
  const Entry& en = find(name);
  return [&en](int n) {
    if (n <= 0) n = en.info.n;
    if (!en.info.variable_n && n != en.info.n)
      throw InvalidArgument("problem " + en.info.name + " has fixed dimension " + std::to_string(en.info.n));
    if (en.info.name == "ZDT1" && n < 2) throw InvalidArgument("ZDT1 needs n >= 2");
    SmoothObjective s;
    s.n = n;
    s.m = en.info.m;
    s.eval = en.eval(n);
    s.grad = en.grad(n);
    s.convex = en.info.convex;
    BoxDomain box = en.box(n);
    s.lipschitz = en.lipschitz(n);
    if (!s.lipschitz) s.lipschitz = estimate_lipschitz(s, box);
    return CompositeProblem(en.info.name, std::move(s), NonsmoothTerm::zero(), std::move(box));
  };
}

CompositeProblem make_problem(const std::string& name, int n) { return registry_lookup(name)(n); }

std::string manifest_json() {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& en : entries()) {
    const BoxDomain box = en.box(en.info.n);
    nlohmann::ordered_json j;
    j["name"] = en.info.name;
    j["n"] = en.info.n;
    j["m"] = en.info.m;
    j["convex"] = en.info.convex;
    j["variable_n"] = en.info.variable_n;
    j["lb"] = std::vector<double>(box.lb().data(), box.lb().data() + box.dim());
    j["ub"] = std::vector<double>(box.ub().data(), box.ub().data() + box.dim());
    j["source"] = en.info.source;
    if (!en.info.note.empty()) j["note"] = en.info.note;
    arr.push_back(j);
  }
  return arr.dump(2);
}

}  // namespace mocondg
