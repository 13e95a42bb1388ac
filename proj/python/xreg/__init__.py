"""Pointwise distance-weighted regression.

Thin wrappers over the native ``xreg._core`` module. Structured results
(tuning, solver, benchmark reports) come back as plain dicts.
"""

import json

from . import _core
from ._core import (
    DataError,
    Dataset,
    DegenerateError,
    KernelSpec,
    LassoModel,
    SingularityError,
    ValidationError,
    XregError,
    fit_lasso,
    load_csv,
    noise_share,
    parse_csv,
    percent_advantage,
    predict,
    predict_loo,
)

__all__ = [
    "DataError",
    "Dataset",
    "DegenerateError",
    "KernelSpec",
    "LassoModel",
    "SingularityError",
    "ValidationError",
    "XregError",
    "fit_lasso",
    "gen_synthetic",
    "load_csv",
    "noise_share",
    "parse_csv",
    "percent_advantage",
    "predict",
    "predict_loo",
    "run_benchmark",
    "solve_fixed_point",
    "tune",
]

__version__ = "0.1.0"


def gen_synthetic(target_function="sine", n=100, domain=((0.0, 1.0),), noise=(1.0, 1.0), seed=0,
                  coefficients=()):
    """Seeded synthetic dataset; responses are f(x) times U[noise] noise."""
    spec = {
        "target_function": target_function,
        "n": n,
        "domain": [list(d) for d in domain],
        "noise_low": noise[0],
        "noise_high": noise[1],
        "seed": seed,
        "coefficients": list(coefficients),
    }
    return _core.gen_synthetic(json.dumps(spec))


def tune(dataset, mode="iterate", family=None, **options):
    """Select kernel parameters; returns the tuning result as a dict.

    The selected kernel is also available as ``result["kernel_spec"]``.
    """
    if family is None:
        family = KernelSpec.exp_base(2.0)
    result = json.loads(_core.tune(dataset, mode, family, **options))
    result["kernel_spec"] = KernelSpec.from_json(json.dumps(result["kernel"]))
    return result


def solve_fixed_point(x, dataset, tol=1e-10, max_iter=10000):
    return json.loads(_core.solve_fixed_point(x, dataset, tol, max_iter))


def run_benchmark(config):
    """Run a benchmark config (dict) and return the report dict."""
    return json.loads(_core.run_benchmark(json.dumps(config)))
