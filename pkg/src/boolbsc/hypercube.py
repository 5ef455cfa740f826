"""Functions on the hypercube {0,1}^n: truth tables, Walsh-Hadamard
transform, the noise operator, and the even/odd decomposition.

Conventions, fixed once for the whole package:

* Point index j encodes x via ``x_i = (j >> (i-1)) & 1`` for coordinates
  i = 1..n.
* Subset mask m encodes S via ``i in S  <=>  (m >> (i-1)) & 1``.
* Characters are ``W_S(x) = (-1)^{sum_{i in S} x_i}``, so the dictator
  f(x) = x_k has coefficient -1/2 on the singleton {k}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

MAX_DIMENSION = 24  # dense 2^n doubles; 128 MiB at n=24


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


@dataclass(frozen=True)
class NoiseParameter:
    """Crossover probability eps of the binary symmetric channel, with the
    derived correlation rho = 1 - 2*eps and its square lambda."""

    eps: float

    def __post_init__(self):
        if not 0.0 <= self.eps <= 0.5:
            raise DomainError(f"eps must lie in [0, 1/2], got {self.eps}")

    @property
    def rho(self) -> float:
        return 1.0 - 2.0 * self.eps

    @property
    def lam(self) -> float:
        return self.rho * self.rho

    @classmethod
    def from_lambda(cls, lam: float) -> "NoiseParameter":
        if not 0.0 <= lam <= 1.0:
            raise DomainError(f"lambda must lie in [0, 1], got {lam}")
        return cls((1.0 - math.sqrt(lam)) / 2.0)


def complement_point(j: int, n: int) -> int:
    """Index of the coordinatewise complement x^c of the point with index j."""
    size = 1 << n
    if not 0 <= j < size:
        raise DomainError(f"point index {j} out of range for n={n}")
    return j ^ (size - 1)


def _check_dimension(n: int) -> None:
    if not 1 <= n <= MAX_DIMENSION:
        raise DomainError(f"dimension must lie in [1, {MAX_DIMENSION}], got {n}")


@lru_cache(maxsize=None)
def popcounts(n: int) -> np.ndarray:
    """|S| for every subset mask below 2^n (read-only, cached)."""
    masks = np.arange(1 << n, dtype=np.uint32)
    counts = np.zeros(1 << n, dtype=np.uint8)
    for i in range(n):
        counts += ((masks >> i) & 1).astype(np.uint8)
    counts.setflags(write=False)
    return counts


@dataclass(frozen=True)
class BooleanFunction:
    """A boolean function f: {0,1}^n -> {0,1} as a bit-packed truth table.

    ``table`` holds bit j = f(x_j); bits at or above 2^n are required to
    be zero.
    """

    n: int
    table: int

    def __post_init__(self):
        _check_dimension(self.n)
        if self.table < 0 or self.table >> (1 << self.n):
            raise DomainError(f"truth table has bits beyond 2^{self.n}")

    @property
    def size(self) -> int:
        return 1 << self.n

    @classmethod
    def from_values(cls, n: int, values) -> "BooleanFunction":
        _check_dimension(n)
        values = np.asarray(values)
        if values.shape != (1 << n,):
            raise DomainError(f"expected {1 << n} values, got {values.shape}")
        bits = np.rint(values).astype(np.uint8)
        if not np.array_equal(bits, values):
            raise DomainError("values must be exactly 0 or 1")
        table = int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")
        return cls(n, table)

    @classmethod
    def from_string(cls, spec: str) -> "BooleanFunction":
        """Parse the `n:HEX` truth-table format (most significant hex digit
        first, ceil(2^n/4) digits)."""
        head, sep, hexpart = spec.partition(":")
        if not sep:
            raise DomainError(f"missing ':' in truth-table literal {spec!r}")
        try:
            n = int(head)
        except ValueError:
            raise DomainError(f"bad dimension {head!r} in {spec!r} (position 0)") from None
        _check_dimension(n)
        digits = -(-(1 << n) // 4)
        if len(hexpart) != digits:
            raise DomainError(
                f"expected {digits} hex digits for n={n}, got {len(hexpart)} "
                f"(position {len(head) + 1})"
            )
        try:
            table = int(hexpart, 16)
        except ValueError:
            bad = next(i for i, c in enumerate(hexpart) if c not in "0123456789abcdefABCDEF")
            raise DomainError(
                f"invalid hex digit {hexpart[bad]!r} at position {len(head) + 1 + bad}"
            ) from None
        return cls(n, table)

    def to_string(self) -> str:
        digits = -(-self.size // 4)
        return f"{self.n}:{self.table:0{digits}X}"

    def values(self) -> np.ndarray:
        """Truth table as a float64 array of 0.0/1.0."""
        nbytes = -(-self.size // 8)
        raw = np.frombuffer(self.table.to_bytes(nbytes, "little"), dtype=np.uint8)
        bits = np.unpackbits(raw, bitorder="little")[: self.size]
        return bits.astype(np.float64)

    def as_real(self) -> "RealFunction":
        return RealFunction(self.n, self.values())

    def mean(self) -> float:
        return self.table.bit_count() / self.size

    def complement(self) -> "BooleanFunction":
        """1 - f."""
        return BooleanFunction(self.n, ((1 << self.size) - 1) ^ self.table)

    def __str__(self) -> str:
        return self.to_string()


@dataclass(frozen=True)
class RealFunction:
    """A real-valued function on {0,1}^n as a dense array of 2^n doubles."""

    n: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        _check_dimension(self.n)
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        if values.shape != (1 << self.n,):
            raise DomainError(f"expected {1 << self.n} values, got {values.shape}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def size(self) -> int:
        return 1 << self.n

    def mean(self) -> float:
        return float(np.mean(self.values))

    def to_boolean(self) -> BooleanFunction:
        return BooleanFunction.from_values(self.n, self.values)


@dataclass(frozen=True)
class FourierSpectrum:
    """Walsh-Fourier coefficients indexed by subset mask."""

    n: int
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        _check_dimension(self.n)
        coeffs = np.ascontiguousarray(self.coeffs, dtype=np.float64)
        if coeffs.shape != (1 << self.n,):
            raise DomainError(f"expected {1 << self.n} coefficients, got {coeffs.shape}")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    def level_weights(self) -> np.ndarray:
        """Total squared coefficient mass per level |S|, length n+1."""
        levels = popcounts(self.n)
        return np.bincount(levels, weights=self.coeffs**2, minlength=self.n + 1)


def _butterfly(values: np.ndarray) -> np.ndarray:
    """In-place-style fast Walsh-Hadamard transform along the last axis
    (unnormalized). Works on any leading batch shape."""
    out = np.array(values, dtype=np.float64)
    size = out.shape[-1]
    h = 1
    while h < size:
        shaped = out.reshape(out.shape[:-1] + (size // (2 * h), 2, h))
        a = shaped[..., 0, :] + shaped[..., 1, :]
        b = shaped[..., 0, :] - shaped[..., 1, :]
        shaped[..., 0, :] = a
        shaped[..., 1, :] = b
        h *= 2
    return out


def wht(f: RealFunction) -> FourierSpectrum:
    """Walsh-Hadamard transform: coeffs[m] = 2^-n sum_x f(x) W_S(x)."""
    return FourierSpectrum(f.n, _butterfly(f.values) / f.size)


def inverse_wht(s: FourierSpectrum) -> RealFunction:
    """Evaluate sum_m coeffs[m] W_S(x) at every point."""
    return RealFunction(s.n, _butterfly(s.coeffs))


def apply_noise(f: RealFunction, p: NoiseParameter) -> RealFunction:
    """The noise operator: scales the level-|S| coefficient by rho^|S|.

    The mean (empty-set coefficient) is preserved exactly.
    """
    coeffs = _butterfly(f.values) / f.size
    coeffs *= p.rho ** popcounts(f.n).astype(np.float64)
    return RealFunction(f.n, _butterfly(coeffs))


def even_odd_parts(g: RealFunction) -> tuple[RealFunction, RealFunction]:
    """Split g into its even part g0(x) = (g(x) + g(x^c))/2 and odd part
    g1 = g - g0; their spectra live on even resp. odd levels."""
    v = g.values
    even = (v + v[::-1]) / 2.0
    return RealFunction(g.n, even), RealFunction(g.n, v - even)
