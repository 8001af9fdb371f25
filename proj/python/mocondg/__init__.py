"""Robust multiobjective optimization with conditional-gradient and proximal-gradient methods."""

import json

from ._core import (
    DimensionMismatch,
    Error,
    InvalidArgument,
    NumericalFailure,
    OutOfDomain,
    Problem,
    UndefinedMetric,
    UnknownProblem,
    __version__,
    gap,
    nondominated,
    performance_profile,
    problems,
    purity,
    solve,
    spread,
)
from ._core import run_benchmark_json as _run_benchmark_json


def run_benchmark(config, report=True):
    """Run a benchmark from a config dict (same keys as the CLI's JSON config).

    Returns the summary as a dict. Results land under config["out"].
    """
    return json.loads(_run_benchmark_json(json.dumps(config), report))


__all__ = [
    "DimensionMismatch",
    "Error",
    "InvalidArgument",
    "NumericalFailure",
    "OutOfDomain",
    "Problem",
    "UndefinedMetric",
    "UnknownProblem",
    "gap",
    "nondominated",
    "performance_profile",
    "problems",
    "purity",
    "run_benchmark",
    "solve",
    "spread",
]
