"""Exhaustive and sampled verification of the capacity inequality over
function space, symmetry reduction, and hill-climbing extremal search.

Determinism: per-function gaps are computed row-independently, chunk
boundaries never change a row's arithmetic, partial results merge by
associative (min, union) reductions in fixed chunk order, and sampled
mode draws from a Philox counter-based stream. Reports are therefore
byte-identical across reruns and thread counts.
"""

from __future__ import annotations

import csv
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations

import numpy as np

from .hypercube import (
    BooleanFunction,
    DomainError,
    NoiseParameter,
    _butterfly,
    popcounts,
)
from .info import (
    InternalConsistencyError,
    PATH_AGREEMENT_TOL,
    binary_entropy_array,
    channel_capacity,
    mutual_information,
    xlog2x,
)

SCHEMA_VERSION = 1
GROUP_DESCRIPTION = "coordinate permutations x input XOR-translations x output complement"

_CHUNK_ELEMS = 1 << 22  # target elements per evaluation chunk
_REFINE_MARGIN = 1e-9  # separation below which orbits are re-expanded exactly

MAX_ORBIT_N = 5
MAX_EXHAUSTIVE_N = 4
MAX_SAMPLED_N = 20
MAX_CLIMB_N = 14


# ---------------------------------------------------------------------------
# symmetry group


@lru_cache(maxsize=None)
def _point_maps(n: int) -> tuple:
    """Point-index maps for every (coordinate permutation, XOR translation)
    pair; the output complement doubles the group on top of these."""
    size = 1 << n
    base = np.arange(size, dtype=np.int64)
    maps = []
    for perm in permutations(range(n)):
        pm = np.zeros(size, dtype=np.int64)
        for i in range(n):
            pm |= ((base >> perm[i]) & 1) << i
        for t in range(size):
            m = pm ^ t
            m.setflags(write=False)
            maps.append(m)
    return tuple(maps)


def _table_bits(f: BooleanFunction) -> np.ndarray:
    return np.rint(f.values()).astype(np.uint8)


def _pack_bits(bits: np.ndarray) -> int:
    return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")


@dataclass(frozen=True)
class CanonicalOrbit:
    representative: BooleanFunction
    orbit_size: int
    group: str = GROUP_DESCRIPTION

    def to_dict(self) -> dict:
        return {
            "representative": self.representative.to_string(),
            "orbit_size": self.orbit_size,
            "group": self.group,
        }


def canonicalize(f: BooleanFunction) -> CanonicalOrbit:
    """Lexicographically least truth table (read as a 2^n-bit integer) in
    the orbit of f, plus the orbit size. Full orbit scan; n <= 5 only."""
    if f.n > MAX_ORBIT_N:
        raise DomainError(f"orbit scan supports n <= {MAX_ORBIT_N}, got {f.n}")
    full = (1 << f.size) - 1
    bits = _table_bits(f)
    best = f.table
    stabilizer = 0
    for pm in _point_maps(f.n):
        t = _pack_bits(bits[pm])
        for image in (t, t ^ full):
            if image < best:
                best = image
            if image == f.table:
                stabilizer += 1
    group_size = 2 * len(_point_maps(f.n))
    return CanonicalOrbit(BooleanFunction(f.n, best), group_size // stabilizer)


def orbit_members(f: BooleanFunction) -> list[int]:
    """All distinct truth tables in the orbit of f (n <= 5)."""
    if f.n > MAX_ORBIT_N:
        raise DomainError(f"orbit scan supports n <= {MAX_ORBIT_N}, got {f.n}")
    full = (1 << f.size) - 1
    bits = _table_bits(f)
    seen = set()
    for pm in _point_maps(f.n):
        t = _pack_bits(bits[pm])
        seen.add(t)
        seen.add(t ^ full)
    return sorted(seen)


def _transform_ids(ids: np.ndarray, pm: np.ndarray) -> np.ndarray:
    """Apply one point map to a batch of function ids (tables as ints)."""
    out = np.zeros_like(ids)
    for j, src in enumerate(pm):
        out |= ((ids >> np.uint64(src)) & np.uint64(1)) << np.uint64(j)
    return out


@lru_cache(maxsize=None)
def _all_canonical_ids(n: int) -> tuple[np.ndarray, np.ndarray]:
    """(canonical id, orbit size) for every function id at once; n <= 4."""
    if n > MAX_EXHAUSTIVE_N:
        raise DomainError(f"full canonical table supports n <= {MAX_EXHAUSTIVE_N}")
    size = 1 << n
    nfun = 1 << size
    ids = np.arange(nfun, dtype=np.uint64)
    full = np.uint64(nfun - 1)
    canon = ids.copy()
    stabilizer = np.zeros(nfun, dtype=np.int64)
    for pm in _point_maps(n):
        t = _transform_ids(ids, pm)
        for image in (t, t ^ full):
            np.minimum(canon, image, out=canon)
            stabilizer += image == ids
    group_size = 2 * len(_point_maps(n))
    orbit_size = group_size // stabilizer
    canon.setflags(write=False)
    orbit_size.setflags(write=False)
    return canon, orbit_size


def _canonical_reps_scan(n: int, chunk_funcs: int = 1 << 20):
    """Stream (rep ids, orbit sizes) without materializing all 2^(2^n)
    canonical ids; used for the long-running n=5 symmetric mode."""
    size = 1 << n
    nfun = 1 << size
    full = np.uint64(nfun - 1)
    maps = _point_maps(n)
    for start in range(0, nfun, chunk_funcs):
        ids = np.arange(start, min(start + chunk_funcs, nfun), dtype=np.uint64)
        alive = np.ones(len(ids), dtype=bool)
        for pm in maps:
            pool = np.nonzero(alive)[0]
            if pool.size == 0:
                break
            sub = ids[pool]
            t = _transform_ids(sub, pm)
            kill = (t < sub) | ((t ^ full) < sub)
            alive[pool[kill]] = False
        reps = ids[alive]
        if reps.size == 0:
            continue
        stabilizer = np.zeros(len(reps), dtype=np.int64)
        for pm in maps:
            t = _transform_ids(reps, pm)
            stabilizer += t == reps
            stabilizer += (t ^ full) == reps
        yield reps, (2 * len(maps)) // stabilizer


# ---------------------------------------------------------------------------
# batched gap evaluation


def _ids_to_values(ids: np.ndarray, n: int) -> np.ndarray:
    size = 1 << n
    shifts = np.arange(size, dtype=np.uint64)
    return ((ids[:, None] >> shifts[None, :]) & np.uint64(1)).astype(np.float64)


def batch_gaps(values: np.ndarray, p: NoiseParameter) -> tuple[np.ndarray, float]:
    """Conjecture gaps for a batch of boolean truth tables (rows), with the
    dual-route consistency check applied to every row.

    Returns (gaps, max route discrepancy). Row results are independent of
    batch composition, which is what makes chunked runs deterministic.
    """
    b, size = values.shape
    n = size.bit_length() - 1
    means = values.mean(axis=1)

    coeffs = _butterfly(values) / size
    coeffs *= p.rho ** popcounts(n).astype(np.float64)
    t = _butterfly(coeffs)
    np.clip(t, 0.0, 1.0, out=t)

    via_ent = (
        xlog2x(t).mean(axis=1)
        - xlog2x(means)
        + xlog2x(1.0 - t).mean(axis=1)
        - xlog2x(1.0 - means)
    )
    via_joint = binary_entropy_array(means) - binary_entropy_array(t).mean(axis=1)

    discrepancy = float(np.max(np.abs(via_ent - via_joint))) if b else 0.0
    if discrepancy > PATH_AGREEMENT_TOL:
        raise InternalConsistencyError(
            f"MI routes disagree by {discrepancy} in batch (eps={p.eps})"
        )
    return channel_capacity(p) - via_ent, discrepancy


# ---------------------------------------------------------------------------
# reports


@dataclass
class EpsResult:
    eps: float
    min_gap: float
    argmin: BooleanFunction
    extremal_set: list[BooleanFunction]
    max_path_discrepancy: float

    def to_dict(self) -> dict:
        return {
            "eps": self.eps,
            "min_gap": self.min_gap,
            "argmin": self.argmin.to_string(),
            "extremal_set": [g.to_string() for g in self.extremal_set],
            "max_path_discrepancy": self.max_path_discrepancy,
        }


@dataclass
class VerificationReport:
    n: int
    mode: str  # exhaustive | sampled
    tolerance: float
    eps_results: list[EpsResult]
    functions_explored: int
    orbits_explored: int | None
    elapsed_seconds: float
    seed: int | None = None
    samples: int | None = None

    @property
    def min_gap(self) -> float:
        return min(r.min_gap for r in self.eps_results)

    @property
    def passed(self) -> bool:
        return self.min_gap >= -self.tolerance

    def to_dict(self, include_timing: bool = False) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "n": self.n,
            "mode": self.mode,
            "tolerance": self.tolerance,
            "functions_explored": self.functions_explored,
            "orbits_explored": self.orbits_explored,
            "seed": self.seed,
            "samples": self.samples,
            "results": [r.to_dict() for r in self.eps_results],
        }
        if include_timing:
            out["elapsed_seconds"] = self.elapsed_seconds
        return out

    def to_json(self, include_timing: bool = False) -> str:
        return json.dumps(self.to_dict(include_timing), indent=2) + "\n"

    def write_csv(self, path: str) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["eps", "statistic", "value"])
            writer.writerow(["", "schema_version", SCHEMA_VERSION])
            writer.writerow(["", "n", self.n])
            writer.writerow(["", "mode", self.mode])
            writer.writerow(["", "tolerance", repr(self.tolerance)])
            writer.writerow(["", "functions_explored", self.functions_explored])
            writer.writerow(["", "orbits_explored", self.orbits_explored])
            for r in self.eps_results:
                writer.writerow([repr(r.eps), "min_gap", repr(r.min_gap)])
                writer.writerow([repr(r.eps), "argmin", r.argmin.to_string()])
                writer.writerow([repr(r.eps), "extremal_count", len(r.extremal_set)])
                writer.writerow(
                    [repr(r.eps), "extremal_set", ";".join(g.to_string() for g in r.extremal_set)]
                )


# ---------------------------------------------------------------------------
# verification drivers


def _validate_grid(eps_grid) -> list[NoiseParameter]:
    grid = [e if isinstance(e, NoiseParameter) else NoiseParameter(float(e)) for e in eps_grid]
    if not grid:
        raise DomainError("eps grid must be non-empty")
    for p in grid:
        if not 0.0 < p.eps <= 0.5:
            raise DomainError(f"eps grid points must lie in (0, 1/2], got {p.eps}")
    return grid


@dataclass
class _EpsAccumulator:
    min_gap: float = np.inf
    argmin_id: int = -1
    argmin_pos: int = -1  # sample index; keeps sampled-mode ties deterministic
    extremal_ids: list = field(default_factory=list)
    max_disc: float = 0.0

    def update(self, ids, gaps, disc, tolerance, offset=0):
        k = int(np.argmin(gaps))
        if gaps[k] < self.min_gap:
            self.min_gap = float(gaps[k])
            self.argmin_id = int(ids[k])
            self.argmin_pos = offset + k
        hits = np.nonzero(np.abs(gaps) <= tolerance)[0]
        self.extremal_ids.extend(int(ids[i]) for i in hits)
        self.max_disc = max(self.max_disc, disc)


def _evaluate_ids_chunked(ids, n, grid, tolerance, threads=None, chunk_funcs=None):
    """Chunked gap evaluation over explicit function ids; returns one
    accumulator per grid point."""
    if chunk_funcs is None:
        chunk_funcs = max(1, _CHUNK_ELEMS >> n)
    accs = [_EpsAccumulator() for _ in grid]
    chunks = [ids[i : i + chunk_funcs] for i in range(0, len(ids), chunk_funcs)]

    def work(chunk):
        values = _ids_to_values(chunk, n)
        return [batch_gaps(values, p) for p in grid]

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, chunks))
    else:
        results = map(work, chunks)

    offset = 0
    for chunk, per_eps in zip(chunks, results):
        for acc, (gaps, disc) in zip(accs, per_eps):
            acc.update(chunk, gaps, disc, tolerance, offset)
        offset += len(chunk)
    return accs


def _single_gap(table: int, n: int, p: NoiseParameter) -> float:
    gaps, _ = batch_gaps(_ids_to_values(np.array([table], dtype=np.uint64), n), p)
    return float(gaps[0])


def verify_exhaustive(
    n: int,
    eps_grid,
    tolerance: float = 1e-12,
    use_symmetry: bool = False,
    threads: int | None = None,
) -> VerificationReport:
    """Evaluate the conjecture gap for every boolean function on n bits
    (or every orbit representative) at each grid point.

    n <= 4 plain; n <= 5 with symmetry (the n=5 scan is a long-running
    opt-in mode). Output is independent of symmetry mode and thread count.
    """
    cap = MAX_ORBIT_N if use_symmetry else MAX_EXHAUSTIVE_N
    if not 1 <= n <= cap:
        raise DomainError(f"exhaustive mode supports n <= {cap} (symmetry={use_symmetry})")
    grid = _validate_grid(eps_grid)
    start_time = time.perf_counter()
    nfun = 1 << (1 << n)

    if use_symmetry:
        if n <= MAX_EXHAUSTIVE_N:
            canon, orbit_size = _all_canonical_ids(n)
            ids = np.nonzero(canon == np.arange(nfun, dtype=np.uint64))[0].astype(np.uint64)
            batches = [(ids, orbit_size[ids.astype(np.int64)])]
        else:
            batches = _canonical_reps_scan(n)

        rep_ids_parts = []
        rep_gaps_parts = [[] for _ in grid]
        max_disc = [0.0 for _ in grid]
        explored = 0
        chunk_funcs = max(1, _CHUNK_ELEMS >> n)
        for ids, orbit_sizes in batches:
            explored += int(np.sum(orbit_sizes))
            rep_ids_parts.append(ids)
            for lo in range(0, len(ids), chunk_funcs):
                values = _ids_to_values(ids[lo : lo + chunk_funcs], n)
                for i, p in enumerate(grid):
                    gaps, disc = batch_gaps(values, p)
                    rep_gaps_parts[i].append(gaps)
                    max_disc[i] = max(max_disc[i], disc)
        rep_ids = np.concatenate(rep_ids_parts)

        # per-function gaps agree across an orbit only up to roundoff, so
        # orbits near the minimum or near zero are re-expanded and their
        # members evaluated individually; this makes the symmetric run
        # reproduce the plain run exactly
        accs = []
        for i, p in enumerate(grid):
            gaps = np.concatenate(rep_gaps_parts[i])
            near = (gaps <= float(np.min(gaps)) + _REFINE_MARGIN) | (
                np.abs(gaps) <= tolerance + _REFINE_MARGIN
            )
            expanded: set[int] = set()
            for rid in rep_ids[near]:
                expanded.update(orbit_members(BooleanFunction(n, int(rid))))
            member_ids = np.array(sorted(expanded), dtype=np.uint64)
            acc = _evaluate_ids_chunked(member_ids, n, [p], tolerance, threads)[0]
            acc.max_disc = max(acc.max_disc, max_disc[i])
            accs.append(acc)
        functions_explored = explored
        orbits_explored = len(rep_ids)
    else:
        ids = np.arange(nfun, dtype=np.uint64)
        accs = _evaluate_ids_chunked(ids, n, grid, tolerance, threads)
        functions_explored = nfun
        orbits_explored = None

    results = []
    for p, acc in zip(grid, accs):
        argmin = BooleanFunction(n, acc.argmin_id)
        if n <= MAX_ORBIT_N:
            argmin = canonicalize(argmin).representative
        results.append(
            EpsResult(
                eps=p.eps,
                min_gap=acc.min_gap,
                argmin=argmin,
                extremal_set=[BooleanFunction(n, t) for t in sorted(set(acc.extremal_ids))],
                max_path_discrepancy=acc.max_disc,
            )
        )
    return VerificationReport(
        n=n,
        mode="exhaustive",
        tolerance=tolerance,
        eps_results=results,
        functions_explored=functions_explored,
        orbits_explored=orbits_explored,
        elapsed_seconds=time.perf_counter() - start_time,
    )


def verify_sampled(
    n: int,
    samples: int,
    seed: int,
    eps_grid,
    bias: float | None = None,
    tolerance: float = 1e-12,
    threads: int | None = None,
) -> VerificationReport:
    """Evaluate the gap on i.i.d. random truth tables from a Philox
    counter-based stream keyed by ``seed``; reproducible bit for bit."""
    if not 1 <= n <= MAX_SAMPLED_N:
        raise DomainError(f"sampled mode supports n <= {MAX_SAMPLED_N}, got {n}")
    if samples < 1:
        raise DomainError(f"samples must be >= 1, got {samples}")
    if bias is not None and not 0.0 <= bias <= 1.0:
        raise DomainError(f"bias must lie in [0, 1], got {bias}")
    grid = _validate_grid(eps_grid)
    start_time = time.perf_counter()

    size = 1 << n
    rng = np.random.Generator(np.random.Philox(key=seed))
    chunk_funcs = max(1, _CHUNK_ELEMS >> n)
    accs = [_EpsAccumulator() for _ in grid]
    argmin_values: list = [None for _ in grid]
    extremal_values: list = [[] for _ in grid]

    drawn = 0
    while drawn < samples:
        b = min(chunk_funcs, samples - drawn)
        if bias is None:
            values = rng.integers(0, 2, size=(b, size)).astype(np.float64)
        else:
            values = (rng.random((b, size)) < bias).astype(np.float64)
        for i, p in enumerate(grid):
            gaps, disc = batch_gaps(values, p)
            acc = accs[i]
            k = int(np.argmin(gaps))
            if gaps[k] < acc.min_gap:
                acc.min_gap = float(gaps[k])
                acc.argmin_pos = drawn + k
                argmin_values[i] = values[k].copy()
            hits = np.nonzero(np.abs(gaps) <= tolerance)[0]
            extremal_values[i].extend(values[h].copy() for h in hits)
            acc.max_disc = max(acc.max_disc, disc)
        drawn += b

    results = []
    for i, (p, acc) in enumerate(zip(grid, accs)):
        extremal = sorted(
            {BooleanFunction.from_values(n, v).table for v in extremal_values[i]}
        )
        results.append(
            EpsResult(
                eps=p.eps,
                min_gap=acc.min_gap,
                argmin=BooleanFunction.from_values(n, argmin_values[i]),
                extremal_set=[BooleanFunction(n, t) for t in extremal],
                max_path_discrepancy=acc.max_disc,
            )
        )
    return VerificationReport(
        n=n,
        mode="sampled",
        tolerance=tolerance,
        eps_results=results,
        functions_explored=samples,
        orbits_explored=None,
        elapsed_seconds=time.perf_counter() - start_time,
        seed=seed,
        samples=samples,
    )


# ---------------------------------------------------------------------------
# hill climbing


@dataclass
class SearchTrace:
    start: BooleanFunction
    steps: list  # (flipped point index, MI after the flip)
    final: BooleanFunction
    final_mi: float

    def to_dict(self) -> dict:
        return {
            "start": self.start.to_string(),
            "steps": [[j, mi] for j, mi in self.steps],
            "final": self.final.to_string(),
            "final_mi": self.final_mi,
        }


def _noise_kernel_weights(n: int, p: NoiseParameter) -> np.ndarray:
    d = np.arange(n + 1, dtype=np.float64)
    return p.eps**d * (1.0 - p.eps) ** (n - d)


def _mi_rows(t: np.ndarray, means: np.ndarray) -> np.ndarray:
    """Entropy-decomposition MI for rows of noisy tables t with means."""
    np.clip(t, 0.0, 1.0, out=t)
    return (
        xlog2x(t).mean(axis=1)
        - xlog2x(means)
        + xlog2x(1.0 - t).mean(axis=1)
        - xlog2x(1.0 - means)
    )


def _climb_once(values: np.ndarray, n: int, p: NoiseParameter) -> SearchTrace:
    size = 1 << n
    start = BooleanFunction.from_values(n, values)
    pc = popcounts(n)
    w = _noise_kernel_weights(n, p)
    rho_pow = p.rho ** pc.astype(np.float64)
    points = np.arange(size)
    chunk = max(1, _CHUNK_ELEMS >> n)

    current = values.astype(np.float64).copy()
    coeffs = _butterfly(current[None, :])[0] / size
    t = _butterfly((coeffs * rho_pow)[None, :])[0]
    current_mi = float(_mi_rows(t[None, :].copy(), np.array([current.mean()]))[0])

    steps = []
    while True:
        best_gain = 0.0
        best_point = -1
        best_mi = current_mi
        signs = 1.0 - 2.0 * current  # flip direction per point
        for lo in range(0, size, chunk):
            q = points[lo : lo + chunk]
            kcols = w[pc[np.bitwise_xor(q[:, None], points[None, :])]]
            t_new = t[None, :] + signs[q][:, None] * kcols
            means_new = current.mean() + signs[q] / size
            mis = _mi_rows(t_new, means_new)
            k = int(np.argmax(mis))
            if mis[k] - current_mi > best_gain:
                best_gain = float(mis[k] - current_mi)
                best_point = int(q[k])
                best_mi = float(mis[k])
        if best_point < 0:
            break
        current[best_point] = 1.0 - current[best_point]
        coeffs = _butterfly(current[None, :])[0] / size
        t = _butterfly((coeffs * rho_pow)[None, :])[0]
        current_mi = best_mi
        steps.append((best_point, best_mi))

    final = BooleanFunction.from_values(n, current)
    return SearchTrace(
        start=start,
        steps=steps,
        final=final,
        final_mi=mutual_information(final, p).mi_bits,
    )


def hill_climb(
    n: int, p: NoiseParameter, restarts: int = 10, seed: int = 0
) -> SearchTrace:
    """Steepest-ascent bit-flip search for high-MI functions; returns the
    best trace over seeded random restarts."""
    if not 1 <= n <= MAX_CLIMB_N:
        raise DomainError(f"hill climb supports n <= {MAX_CLIMB_N}, got {n}")
    if restarts < 1:
        raise DomainError(f"restarts must be >= 1, got {restarts}")
    rng = np.random.Generator(np.random.Philox(key=seed))
    best = None
    for _ in range(restarts):
        values = rng.integers(0, 2, size=1 << n).astype(np.float64)
        trace = _climb_once(values, n, p)
        if best is None or trace.final_mi > best.final_mi:
            best = trace
    return best
