"""Numeric validators for the identities and inequalities underlying the
entropy analysis: the even/odd entropy decomposition, the pointwise log
identity, the quartic upper bound on 1 - H((1-x)/2), the first-level
entropy terms and their small-lambda slope, the variance identity, and
nearest-subcube fits.

Asserted contracts carry explicit tolerances; quantities whose constants
are not pinned down (the higher-order entropy terms, the fourth-moment
ratio) are reported with unit constants and never asserted as bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hypercube import (
    BooleanFunction,
    DomainError,
    NoiseParameter,
    RealFunction,
    apply_noise,
    even_odd_parts,
    popcounts,
    wht,
)
from .info import InternalConsistencyError, binary_entropy_array, ent, xlog2x

LN2 = math.log(2.0)

LEMMA41_TOL = 1e-11
POINTWISE_TOL = 1e-12
QUARTIC_TOL = 1e-14
AGREEMENT_TOL = 1e-12


def _as_real(f) -> RealFunction:
    return f.as_real() if isinstance(f, BooleanFunction) else f


def lemma41_check(g: RealFunction) -> tuple[float, float]:
    """Both sides of the even/odd entropy decomposition
    Ent(g) = Ent(g0) + E_x g0(x) (1 - H((1 - |g1(x)|/g0(x))/2))
    for nonnegative g with E g = 1, computed independently."""
    v = g.values
    if np.any(v < 0.0):
        raise DomainError("lemma41_check requires a nonnegative function")
    if abs(g.mean() - 1.0) > 1e-12:
        raise DomainError(f"lemma41_check requires E g = 1, got {g.mean()}")

    lhs = ent(g)

    g0, g1 = even_odd_parts(g)
    a = g0.values
    b = np.abs(g1.values)
    term = np.zeros_like(a)
    pos = a > 0.0
    # a == 0 forces b == 0 (|g1| <= g0 for nonnegative g): contribution 0
    ratio = np.clip(b[pos] / a[pos], 0.0, 1.0)
    term[pos] = a[pos] * (1.0 - binary_entropy_array((1.0 - ratio) / 2.0))
    rhs = ent(g0) + float(np.mean(term))
    return lhs, rhs


def pointwise_log_identity(a, b) -> tuple:
    """lhs = (1/2)((a+b) log2(a+b) + (a-b) log2(a-b)) and
    rhs = a log2 a + a (1 - H((1 - b/a)/2)), both 0 at a = b = 0.

    Accepts scalars or arrays of matching shape.
    """
    a_arr = np.atleast_1d(np.asarray(a, dtype=np.float64))
    b_arr = np.atleast_1d(np.asarray(b, dtype=np.float64))
    if np.any(b_arr < 0.0) or np.any(a_arr < b_arr):
        raise DomainError("pointwise_log_identity requires 0 <= b <= a")

    lhs = 0.5 * (xlog2x(a_arr + b_arr) + xlog2x(a_arr - b_arr))
    rhs = np.zeros_like(a_arr)
    pos = a_arr > 0.0
    ratio = np.clip(b_arr[pos] / a_arr[pos], 0.0, 1.0)
    rhs[pos] = xlog2x(a_arr[pos]) + a_arr[pos] * (
        1.0 - binary_entropy_array((1.0 - ratio) / 2.0)
    )
    if np.isscalar(a) or np.ndim(a) == 0:
        return float(lhs[0]), float(rhs[0])
    return lhs, rhs


def quartic_bound_check(x) -> tuple:
    """lhs = 1 - H((1-x)/2) and its quartic upper bound
    rhs = x^2/(2 ln 2) + (1 - 1/(2 ln 2)) x^4 on [0, 1]."""
    x_arr = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if np.any(x_arr < 0.0) or np.any(x_arr > 1.0):
        raise DomainError("quartic_bound_check requires x in [0, 1]")
    lhs = 1.0 - binary_entropy_array((1.0 - x_arr) / 2.0)
    rhs = x_arr**2 / (2.0 * LN2) + (1.0 - 1.0 / (2.0 * LN2)) * x_arr**4
    if np.isscalar(x) or np.ndim(x) == 0:
        return float(lhs[0]), float(rhs[0])
    return lhs, rhs


@dataclass(frozen=True)
class Lemma13Terms:
    first_level_weight: float
    mean: float
    second_moment: float
    term1: float
    term2_unit: float
    term3_unit: float
    ent_value: float

    def to_dict(self) -> dict:
        return {
            "first_level_weight": self.first_level_weight,
            "mean": self.mean,
            "second_moment": self.second_moment,
            "term1": self.term1,
            "term2_unit": self.term2_unit,
            "term3_unit": self.term3_unit,
            "ent_value": self.ent_value,
        }


def lemma13_terms(f, p: NoiseParameter) -> Lemma13Terms:
    """First-level entropy bound terms with unit constants: the leading
    lambda term plus the lambda^{4/3} and lambda^2 shapes. No inequality
    is asserted."""
    g = _as_real(f)
    v = g.values
    if np.any(v < 0.0):
        raise DomainError("lemma13_terms requires a nonnegative function")
    if not np.any(v > 0.0):
        raise DomainError("lemma13_terms requires a non-zero function")

    coeffs = wht(g).coeffs
    levels = popcounts(g.n)
    flw = float(np.sum(coeffs[levels == 1] ** 2))
    mean = g.mean()
    m2 = float(np.mean(v**2))
    lam = p.lam
    return Lemma13Terms(
        first_level_weight=flw,
        mean=mean,
        second_moment=m2,
        term1=flw * lam / (2.0 * LN2 * mean),
        term2_unit=(m2 / mean) * lam ** (4.0 / 3.0),
        term3_unit=(m2**2 / mean**3) * lam**2,
        ent_value=ent(apply_noise(g, p)),
    )


@dataclass(frozen=True)
class SlopeCheckResult:
    measured: float
    predicted: float
    applicable: bool
    tolerance: float

    @property
    def passed(self) -> bool:
        if not self.applicable:
            return True
        return abs(self.measured / self.predicted - 1.0) <= self.tolerance


def lemma13_slope_check(
    f: BooleanFunction, lambda_small: float, tolerance_factor: float = 10.0
) -> SlopeCheckResult:
    """Compare Ent(T f)/lambda against the all-levels rate prediction
    sum_{S != 0} lambda^{|S|-1} fhat^2(S) / (2 ln 2 E f) for small lambda.

    Tolerance is tolerance_factor * sqrt(lambda), from the next order of
    the entropy expansion around the constant function.
    """
    if not 0.0 < lambda_small <= 1e-3:
        raise DomainError(f"lambda must lie in (0, 1e-3], got {lambda_small}")
    mean = f.mean()
    if mean == 0.0:
        raise DomainError("slope check requires E f > 0")

    p = NoiseParameter.from_lambda(lambda_small)
    coeffs = wht(f.as_real()).coeffs
    levels = popcounts(f.n).astype(np.float64)
    weights = coeffs**2
    weights[0] = 0.0
    predicted = float(np.sum(lambda_small ** (levels - 1.0) * weights)) / (
        2.0 * LN2 * mean
    )
    tolerance = tolerance_factor * math.sqrt(lambda_small)
    if predicted == 0.0:
        return SlopeCheckResult(0.0, 0.0, applicable=False, tolerance=tolerance)
    measured = ent(apply_noise(f.as_real(), p)) / lambda_small
    return SlopeCheckResult(measured, predicted, applicable=True, tolerance=tolerance)


def first_level_deficit(f: BooleanFunction) -> float:
    """Fourier weight above level one, sum_{|S| >= 2} fhat^2(S), computed
    both as a direct level sum and as E f (1 - E f) minus the first-level
    weight."""
    coeffs = wht(f.as_real()).coeffs
    levels = popcounts(f.n)
    direct = float(np.sum(coeffs[levels >= 2] ** 2))
    mean = f.mean()
    flw = float(np.sum(coeffs[levels == 1] ** 2))
    via_mean = mean * (1.0 - mean) - flw
    if abs(direct - via_mean) > AGREEMENT_TOL:
        raise InternalConsistencyError(
            f"deficit routes disagree: {direct} vs {via_mean} for {f}"
        )
    return direct


def variance_identity_check(
    f: BooleanFunction, p: NoiseParameter
) -> tuple[float, float]:
    """Var(T f0) directly and as the even-level spectral sum
    sum_{S != 0, |S| even} lambda^|S| fhat(S)^2."""
    f0, _ = even_odd_parts(f.as_real())
    t = apply_noise(f0, p).values
    var_direct = float(np.mean(t**2)) - float(np.mean(t)) ** 2

    coeffs = wht(f.as_real()).coeffs
    levels = popcounts(f.n).astype(np.int64)
    mask = (levels >= 2) & (levels % 2 == 0)
    var_spectral = float(np.sum(p.lam ** levels[mask].astype(np.float64) * coeffs[mask] ** 2))
    return var_direct, var_spectral


@dataclass(frozen=True)
class FourthMomentReport:
    fourth: float
    second_sq: float
    ratio: float | None

    def to_dict(self) -> dict:
        return {"fourth": self.fourth, "second_sq": self.second_sq, "ratio": self.ratio}


def fourth_moment_report(f: BooleanFunction, p: NoiseParameter) -> FourthMomentReport:
    """E (T f1)^4 against (E (T f1)^2)^2 for the odd part f1; reported
    only, since the comparison constant is not pinned down."""
    _, f1 = even_odd_parts(f.as_real())
    t = apply_noise(f1, p).values
    fourth = float(np.mean(t**4))
    second_sq = float(np.mean(t**2)) ** 2
    ratio = fourth / second_sq if second_sq > 0.0 else None
    return FourthMomentReport(fourth, second_sq, ratio)


@dataclass(frozen=True)
class SubcubeFit:
    """Closest function to f among the constants and the 2n indicators of
    {x : x_k = b}, by normalized Hamming distance."""

    kind: str  # constant-0 | constant-1 | coordinate
    coordinate: int | None
    polarity: int | None
    distance: float
    meets_mean_condition: bool | None = None
    meets_first_level_condition: bool | None = None

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "coordinate": self.coordinate,
            "polarity": self.polarity,
            "distance": self.distance,
            "meets_mean_condition": self.meets_mean_condition,
            "meets_first_level_condition": self.meets_first_level_condition,
        }


def nearest_subcube(f: BooleanFunction, delta: float | None = None) -> SubcubeFit:
    """Scan the 2n + 2 candidates; ties break to constants first, then
    lower coordinate, then polarity 0. With delta given, also report
    whether (after complementing to get E f <= 1/2) the mean lies in
    [1/2 - delta, 1/2] and some |fhat({k})| reaches (1 - delta) E f."""
    from .families import subcube_indicator

    size = f.size
    full = (1 << size) - 1

    candidates: list[tuple[tuple, str, int | None, int | None, int]] = []
    candidates.append((("constant-0",), "constant-0", None, None, 0))
    candidates.append((("constant-1",), "constant-1", None, None, full))
    for k in range(1, f.n + 1):
        for b in (0, 1):
            candidates.append(
                (("coordinate", k, b), "coordinate", k, b, subcube_indicator(f.n, k, b).table)
            )

    best = None
    for sort_key, kind, k, b, table in candidates:
        dist = (f.table ^ table).bit_count() / size
        if best is None or dist < best[0]:
            best = (dist, kind, k, b)

    mean_ok = flw_ok = None
    if delta is not None:
        g = f if f.mean() <= 0.5 else f.complement()
        mean = g.mean()
        mean_ok = 0.5 - delta <= mean <= 0.5
        coeffs = wht(g.as_real()).coeffs
        levels = popcounts(g.n)
        singles = np.abs(coeffs[levels == 1])
        flw_ok = bool(np.any(singles >= (1.0 - delta) * mean))

    dist, kind, k, b = best
    return SubcubeFit(
        kind=kind,
        coordinate=k,
        polarity=b,
        distance=dist,
        meets_mean_condition=mean_ok,
        meets_first_level_condition=flw_ok,
    )
