"""Entropy functionals and mutual information across the binary symmetric
channel.

Mutual information is computed by two routes that must agree to 1e-12:
the entropy-functional decomposition Ent(T f) + Ent(T (1-f)), and the
joint-distribution formula H(E f) - E_y H((T f)(y)). All quantities are
in bits; the entropy functional is Ent(g) = E[g log2 g] - (E g) log2(E g).
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
)

PATH_AGREEMENT_TOL = 1e-12


class InternalConsistencyError(RuntimeError):
    """The two independent mutual-information routes disagreed; this
    signals an arithmetic bug, never bad input."""


def xlog2x(v: np.ndarray) -> np.ndarray:
    """x log2 x with the 0 log 0 = 0 convention, elementwise."""
    v = np.asarray(v, dtype=np.float64)
    out = np.zeros_like(v)
    mask = v > 0.0
    out[mask] = v[mask] * np.log2(v[mask])
    return out


def binary_entropy(x: float) -> float:
    """H(x) = -x log2 x - (1-x) log2(1-x) in bits."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"binary entropy argument must lie in [0, 1], got {x}")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def binary_entropy_array(x: np.ndarray) -> np.ndarray:
    return -xlog2x(x) - xlog2x(1.0 - x)


def ent(g: RealFunction) -> float:
    """Ent(g) = E[g log2 g] - (E g) log2(E g) for nonnegative g."""
    v = g.values
    if np.any(v < 0.0):
        raise DomainError("ent requires a nonnegative function")
    mean = float(np.mean(v))
    if mean == 0.0:
        return 0.0
    # evaluated as E[g log2(g/E g)]: algebraically identical, and exactly
    # zero for constant g
    value = mean * float(np.mean(xlog2x(v / mean)))
    # mathematically >= 0; roundoff may leave a negative ulp or two
    if -1e-12 < value < 0.0:
        value = 0.0
    return value


def channel_capacity(p: NoiseParameter) -> float:
    """Capacity 1 - H(eps) of the binary symmetric channel, in bits."""
    return 1.0 - binary_entropy(p.eps)


def capacity_series(p: NoiseParameter, terms: int) -> float:
    """Partial sum of 1 - H(eps) = (1/ln 2) sum_k lambda^k / (2k(2k-1))."""
    if terms < 1:
        raise DomainError(f"terms must be positive, got {terms}")
    lam = p.lam
    return math.fsum(
        lam**k / (2 * k * (2 * k - 1)) for k in range(1, terms + 1)
    ) / math.log(2.0)


@dataclass(frozen=True)
class MutualInformationResult:
    mi_bits: float
    via_ent_decomposition: float
    via_joint_oracle: float
    eps: NoiseParameter

    def to_dict(self) -> dict:
        return {
            "mi_bits": self.mi_bits,
            "via_ent_decomposition": self.via_ent_decomposition,
            "via_joint_oracle": self.via_joint_oracle,
            "eps": self.eps.eps,
        }


@dataclass(frozen=True)
class ConjectureGapResult:
    gap_bits: float
    capacity_bits: float
    mi: MutualInformationResult

    def to_dict(self) -> dict:
        return {
            "gap_bits": self.gap_bits,
            "capacity_bits": self.capacity_bits,
            "mi": self.mi.to_dict(),
        }


def mutual_information(f: BooleanFunction, p: NoiseParameter) -> MutualInformationResult:
    """I(f(X); Y) by both routes; raises InternalConsistencyError if they
    disagree beyond 1e-12."""
    noisy = apply_noise(f.as_real(), p)
    t = np.clip(noisy.values, 0.0, 1.0)
    mean = f.mean()

    via_ent = ent(RealFunction(f.n, t)) + ent(RealFunction(f.n, 1.0 - t))
    via_joint = binary_entropy(mean) - float(np.mean(binary_entropy_array(t)))

    if abs(via_ent - via_joint) > PATH_AGREEMENT_TOL:
        raise InternalConsistencyError(
            f"MI routes disagree: {via_ent} vs {via_joint} (eps={p.eps}, f={f})"
        )
    return MutualInformationResult(
        mi_bits=via_ent,
        via_ent_decomposition=via_ent,
        via_joint_oracle=via_joint,
        eps=p,
    )


def conjecture_gap(f: BooleanFunction, p: NoiseParameter) -> ConjectureGapResult:
    """(1 - H(eps)) - I(f(X); Y); conjectured nonnegative for all f."""
    mi = mutual_information(f, p)
    capacity = channel_capacity(p)
    return ConjectureGapResult(
        gap_bits=capacity - mi.mi_bits,
        capacity_bits=capacity,
        mi=mi,
    )


def lambda_entropy_bound(f: BooleanFunction, p: NoiseParameter) -> float:
    """The known upper bound lambda * H(E f) on I(f(X); Y)."""
    return p.lam * binary_entropy(f.mean())
