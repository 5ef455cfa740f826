"""Named boolean function families and the text syntax for selecting one.

A function spec is either a truth-table literal ``n:HEX``, a path to a
file containing one, or a named family:

    dictator:K      indicator of {x : x_K = 1}
    subcube:K:B     indicator of {x : x_K = B}
    parity:I,J,...  XOR of the listed coordinates
    majority        majority vote (odd n only)
    constant:B      the constant B
    random:SEED     uniform random truth table from a Philox stream
"""

from __future__ import annotations

import os
import re

import numpy as np

from .hypercube import BooleanFunction, DomainError


class FunctionSpecError(ValueError):
    """Malformed function spec; message carries the offending position."""


def dictator(n: int, k: int) -> BooleanFunction:
    return subcube_indicator(n, k, 1)


def subcube_indicator(n: int, k: int, b: int) -> BooleanFunction:
    """Indicator of the dimension n-1 subcube {x : x_k = b}."""
    if not 1 <= k <= n:
        raise DomainError(f"coordinate {k} out of range for n={n}")
    if b not in (0, 1):
        raise DomainError(f"polarity must be 0 or 1, got {b}")
    j = np.arange(1 << n)
    return BooleanFunction.from_values(n, ((j >> (k - 1)) & 1) == b)


def parity(n: int, coords) -> BooleanFunction:
    coords = sorted(set(coords))
    if not coords:
        raise DomainError("parity needs at least one coordinate")
    if coords[0] < 1 or coords[-1] > n:
        raise DomainError(f"parity coordinates {coords} out of range for n={n}")
    j = np.arange(1 << n)
    acc = np.zeros(1 << n, dtype=np.int64)
    for k in coords:
        acc ^= (j >> (k - 1)) & 1
    return BooleanFunction.from_values(n, acc)


def majority(n: int) -> BooleanFunction:
    if n % 2 == 0:
        raise DomainError("majority requires odd n")
    j = np.arange(1 << n)
    weight = np.zeros(1 << n, dtype=np.int64)
    for k in range(n):
        weight += (j >> k) & 1
    return BooleanFunction.from_values(n, weight > n // 2)


def constant(n: int, b: int) -> BooleanFunction:
    if b not in (0, 1):
        raise DomainError(f"constant value must be 0 or 1, got {b}")
    return BooleanFunction(n, ((1 << (1 << n)) - 1) if b else 0)


def random_function(n: int, seed: int) -> BooleanFunction:
    rng = np.random.Generator(np.random.Philox(key=seed))
    return BooleanFunction.from_values(n, rng.integers(0, 2, size=1 << n))


_LITERAL_RE = re.compile(r"^\d+:[0-9a-fA-F]*$")


def parse_function_spec(spec: str, n: int | None = None) -> BooleanFunction:
    """Resolve a function spec string to a BooleanFunction.

    ``n`` supplies the dimension for named families; literals and files
    carry their own.
    """
    spec = spec.strip()
    if not spec:
        raise FunctionSpecError("empty function spec (position 0)")
    if _LITERAL_RE.match(spec):
        return BooleanFunction.from_string(spec)
    if os.path.sep in spec or os.path.isfile(spec):
        try:
            with open(spec) as fh:
                content = fh.read().strip()
        except OSError as exc:
            raise FunctionSpecError(f"cannot read function file {spec!r}: {exc}") from exc
        return BooleanFunction.from_string(content)
    return _parse_family(spec, n)


def _require_n(name: str, n: int | None) -> int:
    if n is None:
        raise FunctionSpecError(f"family {name!r} needs a dimension; pass --n")
    return n


def _parse_family(spec: str, n: int | None) -> BooleanFunction:
    name, _, rest = spec.partition(":")
    argpos = len(name) + 1

    def intarg(text: str, pos: int) -> int:
        try:
            return int(text)
        except ValueError:
            raise FunctionSpecError(
                f"expected an integer at position {pos} of {spec!r}, got {text!r}"
            ) from None

    if name == "dictator":
        return dictator(_require_n(name, n), intarg(rest, argpos))
    if name == "subcube":
        k_text, sep, b_text = rest.partition(":")
        if not sep:
            raise FunctionSpecError(f"subcube needs K:B (position {argpos} of {spec!r})")
        return subcube_indicator(
            _require_n(name, n),
            intarg(k_text, argpos),
            intarg(b_text, argpos + len(k_text) + 1),
        )
    if name == "parity":
        coords = []
        pos = argpos
        for piece in rest.split(","):
            coords.append(intarg(piece, pos))
            pos += len(piece) + 1
        return parity(_require_n(name, n), coords)
    if name == "majority":
        if rest:
            raise FunctionSpecError(f"majority takes no arguments (position {argpos})")
        return majority(_require_n(name, n))
    if name == "constant":
        return constant(_require_n(name, n), intarg(rest, argpos))
    if name == "random":
        return random_function(_require_n(name, n), intarg(rest, argpos))
    raise FunctionSpecError(f"unknown function family {name!r} (position 0)")
