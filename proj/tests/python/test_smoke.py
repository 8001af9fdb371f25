import math

import numpy as np
import pytest

import mocondg


def test_registry_lists_known_problems():
    names = {p["name"] for p in mocondg.problems()}
    assert {"JOS1", "BK1", "FDS", "ZDT1"} <= names
    jos = next(p for p in mocondg.problems() if p["name"] == "JOS1")
    assert jos["m"] == 2 and jos["variable_n"]


def test_jos1_values_match_formula():
    p = mocondg.Problem("JOS1", n=5)
    x = np.linspace(-0.5, 0.5, 5)
    F = p.evaluate(x)["F"]
    assert F[0] == pytest.approx(np.sum(x**2) / 5)
    assert F[1] == pytest.approx(np.sum((x - 2.0) ** 2) / 5)
    assert np.allclose(p.evaluate(x)["G"], 0.0)


def test_jacobian_against_finite_differences():
    p = mocondg.Problem("BK1", robust=True, seed=3)
    x = np.array([0.3, -1.2])
    J = p.jacobian(x)
    h = 1e-6
    for i in range(2):
        e = np.zeros(2)
        e[i] = h
        fd = (p.evaluate(x + e)["H"] - p.evaluate(x - e)["H"]) / (2 * h)
        assert np.allclose(J[:, i], fd, atol=1e-5)


def test_robust_term_is_nonnegative():
    p = mocondg.Problem("IM1", robust=True, seed=1)
    rng = np.random.default_rng(0)
    for _ in range(20):
        x = rng.uniform(p.lb, p.ub)
        e = p.evaluate(x)
        assert np.all(e["G"] >= 0.0)
        assert np.allclose(e["F"], e["G"] + e["H"])


def test_gap_sign_and_ordering():
    p = mocondg.Problem("JOS1", n=4, robust=True, seed=1)
    rng = np.random.default_rng(1)
    for _ in range(10):
        x = rng.uniform(p.lb, p.ub)
        c = mocondg.gap(p, x, "condg")
        g = mocondg.gap(p, x, "proxgrad", mu=1.0)
        assert c["theta"] <= 1e-9 and g["theta"] <= 1e-9
        assert c["theta"] <= g["theta"] + 1e-9
        assert np.allclose(c["direction"], c["p"] - x)


def test_solve_reaches_critical_point():
    p = mocondg.Problem("JOS1", n=3)
    x0 = p.starts(1, seed=5)[0]
    for method in ("condg", "proxgrad"):
        t = mocondg.solve(p, x0, method=method)
        assert t["success"], t["stop_reason"]
        F0 = p.evaluate(x0)["F"]
        assert np.all(t["F_final"] <= F0 + 1e-9)
        # The Pareto set of JOS1 is the segment from 0 to 2 * ones.
        x = t["x_final"]
        assert np.allclose(x, x[0], atol=1e-2) and -1e-2 <= x[0] <= 2.01


def test_errors_are_translated():
    with pytest.raises(KeyError):
        mocondg.Problem("NOPE")
    p = mocondg.Problem("BK1")
    with pytest.raises(ValueError):
        p.evaluate(np.array([100.0, 0.0]))
    with pytest.raises(ValueError):
        mocondg.gap(p, np.zeros(2), "newton")


def brute_nondominated(points):
    keep = []
    for i, a in enumerate(points):
        dominated = any(np.all(b <= a) and np.any(b < a) for j, b in enumerate(points) if j != i)
        if not dominated:
            keep.append(i)
    return keep


def test_nondominated_matches_brute_force():
    rng = np.random.default_rng(7)
    pts = [rng.integers(0, 5, size=2).astype(float) for _ in range(40)]
    assert mocondg.nondominated(pts) == brute_nondominated(pts)


def test_purity_and_spread_small_cases():
    a = [np.array([0.0, 2.0]), np.array([2.0, 0.0])]
    b = [np.array([1.0, 1.0]), np.array([2.5, 0.5])]
    pa, pb = mocondg.purity([a, b])
    assert pa == 1.0 and pb == 0.5
    gamma, delta = mocondg.spread([np.array([0.0, 2.0]), np.array([1.0, 1.0]), np.array([2.0, 0.0])])
    assert gamma == pytest.approx(1.0) and delta == pytest.approx(0.0)


def test_performance_profile_ratios():
    costs = np.array([[1.0, 2.0], [4.0, 2.0]])
    prof = mocondg.performance_profile(costs, [[False, False], [False, True]], ["a", "b"])
    assert sorted(prof["a"]) == [1.0, 1.0]
    assert prof["b"][0] == 2.0 and math.isinf(prof["b"][1])


def test_small_benchmark(tmp_path):
    cfg = {"problems": ["BK1"], "starts": 3, "seed": 2, "out": str(tmp_path / "out")}
    summary = mocondg.run_benchmark(cfg)
    assert summary
    assert (tmp_path / "out" / "results" / "manifest.json").exists()
    assert (tmp_path / "out" / "report").is_dir()
