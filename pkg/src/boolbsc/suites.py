"""Batch check suites with machine-readable results.

Each suite emits one aggregated record per asserted check:
{check_name, params, lhs, rhs, tolerance, pass}, where lhs/rhs are the
worst-case pair found across the sweep. Random corpora are drawn from a
seeded Philox stream so results are reproducible.
"""

from __future__ import annotations

import math

import numpy as np

from .hypercube import BooleanFunction, NoiseParameter, RealFunction, wht
from .checks import (
    lemma13_slope_check,
    lemma41_check,
    pointwise_log_identity,
    quartic_bound_check,
    variance_identity_check,
)
from .info import capacity_series, channel_capacity

SUITE_NAMES = ("lemma41", "pointwise", "quartic", "parseval", "series", "variance", "slope")

_DEFAULT_CASES = {
    "lemma41": 500,
    "pointwise": 1_000_000,
    "quartic": 100_000,
    "parseval": 200,
    "series": 5,
    "variance": 200,
    "slope": 100,
}


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed))


def _record(check_name, params, lhs, rhs, tolerance, passed) -> dict:
    return {
        "check_name": check_name,
        "params": params,
        "lhs": float(lhs),
        "rhs": float(rhs),
        "tolerance": tolerance,
        "pass": bool(passed),
    }


def _random_normalized_nonnegative(rng, n: int) -> RealFunction:
    """Nonnegative function with mean 1, with zero patches including
    complement-symmetric ones to exercise the degenerate branch."""
    size = 1 << n
    v = rng.exponential(size=size)
    if rng.random() < 0.5:
        v[rng.random(size) < 0.2] = 0.0
    if rng.random() < 0.5 and size >= 4:
        j = int(rng.integers(size))
        v[j] = 0.0
        v[j ^ (size - 1)] = 0.0
    if not np.any(v > 0.0):
        v[int(rng.integers(size))] = 1.0
    return RealFunction(n, v / np.mean(v))


def _random_boolean(rng, n: int) -> BooleanFunction:
    return BooleanFunction.from_values(n, rng.integers(0, 2, size=1 << n))


def suite_lemma41(cases: int = 500, seed: int = 0) -> list[dict]:
    rng = _rng(seed)
    worst = (0.0, 0.0, 0.0)
    for i in range(cases):
        g = _random_normalized_nonnegative(rng, 1 + i % 8)
        lhs, rhs = lemma41_check(g)
        if abs(lhs - rhs) >= worst[0]:
            worst = (abs(lhs - rhs), lhs, rhs)
    tol = 1e-11
    return [
        _record(
            "lemma41_identity",
            {"cases": cases, "seed": seed, "max_n": 8},
            worst[1],
            worst[2],
            tol,
            worst[0] <= tol,
        )
    ]


def suite_pointwise(cases: int = 1_000_000, seed: int = 0) -> list[dict]:
    na = max(2, int(math.sqrt(cases)))
    nb = max(2, cases // na)
    a = np.linspace(4.0 / na, 4.0, na)[:, None]
    frac = np.linspace(0.0, 1.0, nb)[None, :]
    a_grid = np.broadcast_to(a, (na, nb)).ravel()
    b_grid = (a * frac).ravel()
    lhs, rhs = pointwise_log_identity(a_grid, b_grid)
    scaled = np.abs(lhs - rhs) / np.maximum(1.0, a_grid)
    k = int(np.argmax(scaled))
    tol = 1e-12
    return [
        _record(
            "pointwise_log_identity",
            {"pairs": na * nb, "a_max": 4.0},
            lhs[k],
            rhs[k],
            tol,
            float(scaled[k]) <= tol,
        )
    ]


def suite_quartic(cases: int = 100_000, seed: int = 0) -> list[dict]:
    x = np.linspace(0.0, 1.0, cases)
    lhs, rhs = quartic_bound_check(x)
    k = int(np.argmax(lhs - rhs))
    tol = 1e-14
    return [
        _record(
            "quartic_bound",
            {"points": cases},
            lhs[k],
            rhs[k],
            tol,
            float(lhs[k]) <= float(rhs[k]) + tol,
        )
    ]


def suite_parseval(cases: int = 200, seed: int = 0) -> list[dict]:
    rng = _rng(seed)
    worst_rel = (0.0, 0.0, 0.0)
    worst_bool = (0.0, 0.0, 0.0)
    for i in range(cases):
        n = 1 + i % 10
        g = RealFunction(n, rng.normal(size=1 << n))
        power = float(np.sum(wht(g).coeffs ** 2))
        second = float(np.mean(g.values**2))
        rel = abs(power - second) / max(1.0, abs(second))
        if rel >= worst_rel[0]:
            worst_rel = (rel, power, second)

        f = _random_boolean(rng, n)
        coeffs = wht(f.as_real()).coeffs
        nontrivial = float(np.sum(coeffs[1:] ** 2))
        target = f.mean() * (1.0 - f.mean())
        if abs(nontrivial - target) >= worst_bool[0]:
            worst_bool = (abs(nontrivial - target), nontrivial, target)
    return [
        _record(
            "parseval_power",
            {"cases": cases, "seed": seed},
            worst_rel[1],
            worst_rel[2],
            1e-12,
            worst_rel[0] <= 1e-12,
        ),
        _record(
            "parseval_boolean_nontrivial_weight",
            {"cases": cases, "seed": seed},
            worst_bool[1],
            worst_bool[2],
            1e-12,
            worst_bool[0] <= 1e-12,
        ),
    ]


def suite_series(cases: int = 5, seed: int = 0, terms: int = 50) -> list[dict]:
    lams = [0.1, 0.3, 0.5, 0.7, 0.9][: max(1, cases)]
    worst = None
    for lam in lams:
        p = NoiseParameter.from_lambda(lam)
        partial = capacity_series(p, terms)
        exact = channel_capacity(p)
        tail = lam ** (terms + 1) / ((2 * terms + 2) * (2 * terms + 1) * (1.0 - lam) * math.log(2.0))
        tol = tail + 1e-13
        err = abs(partial - exact)
        if worst is None or err - worst[3] > 0:
            worst = (partial, exact, tol, err)
    return [
        _record(
            "capacity_series",
            {"lambdas": lams, "terms": terms},
            worst[0],
            worst[1],
            worst[2],
            worst[3] <= worst[2],
        )
    ]


def suite_variance(cases: int = 200, seed: int = 0) -> list[dict]:
    rng = _rng(seed)
    worst = (0.0, 0.0, 0.0)
    for i in range(cases):
        f = _random_boolean(rng, 1 + i % 8)
        p = NoiseParameter(float(rng.uniform(0.0, 0.5)))
        direct, spectral = variance_identity_check(f, p)
        if abs(direct - spectral) >= worst[0]:
            worst = (abs(direct - spectral), direct, spectral)
    tol = 1e-12
    return [
        _record(
            "variance_identity",
            {"cases": cases, "seed": seed},
            worst[1],
            worst[2],
            tol,
            worst[0] <= tol,
        )
    ]


def suite_slope(cases: int = 100, seed: int = 0, lam: float = 1e-4) -> list[dict]:
    rng = _rng(seed)
    worst = None
    done = 0
    while done < cases:
        f = _random_boolean(rng, 2 + done % 5)
        if f.mean() == 0.0:
            continue
        result = lemma13_slope_check(f, lam)
        if not result.applicable:
            continue
        done += 1
        err = abs(result.measured / result.predicted - 1.0)
        if worst is None or err > worst[3]:
            worst = (result.measured, result.predicted, result.tolerance, err)
    return [
        _record(
            "lemma13_slope",
            {"cases": cases, "seed": seed, "lambda": lam},
            worst[0],
            worst[1],
            worst[2],
            worst[3] <= worst[2],
        )
    ]


_SUITES = {
    "lemma41": suite_lemma41,
    "pointwise": suite_pointwise,
    "quartic": suite_quartic,
    "parseval": suite_parseval,
    "series": suite_series,
    "variance": suite_variance,
    "slope": suite_slope,
}


def run_check_suite(name: str, cases: int | None = None, seed: int = 0) -> list[dict]:
    """Run one named suite, or every suite for name 'all'."""
    if name == "all":
        records = []
        for sub in SUITE_NAMES:
            records.extend(run_check_suite(sub, cases, seed))
        return records
    if name not in _SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {SUITE_NAMES + ('all',)}")
    effective = _DEFAULT_CASES[name] if cases is None else cases
    if effective < 1:
        raise ValueError(f"cases must be positive, got {effective}")
    return _SUITES[name](effective, seed)
