"""Command-line interface.

Exit codes: 0 success / all checks pass, 1 a verify or check run failed,
2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .hypercube import DomainError, NoiseParameter, popcounts, wht
from .families import FunctionSpecError, parse_function_spec
from .info import channel_capacity, conjecture_gap
from .suites import SUITE_NAMES, run_check_suite
from .search import SCHEMA_VERSION, hill_climb, verify_exhaustive, verify_sampled

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _parse_eps_grid(text: str) -> list[float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise DomainError(f"eps grid must be a:b:steps, got {text!r}")
    try:
        a, b = float(parts[0]), float(parts[1])
        steps = int(parts[2])
    except ValueError:
        raise DomainError(f"malformed eps grid {text!r}") from None
    if steps < 1:
        raise DomainError(f"eps grid needs at least one step, got {steps}")
    return [float(x) for x in np.linspace(a, b, steps)]


def _mask_to_set(mask: int) -> str:
    coords = [str(i + 1) for i in range(32) if (mask >> i) & 1]
    return "{" + ",".join(coords) + "}" if coords else "{}"


def cmd_mi(args) -> int:
    f = parse_function_spec(args.fn, args.n)
    gap = conjecture_gap(f, NoiseParameter(args.eps))
    if args.json:
        print(json.dumps({"schema_version": SCHEMA_VERSION, "fn": f.to_string(), **gap.to_dict()}, indent=2))
    else:
        print(f"fn                  {f.to_string()}")
        print(f"eps                 {args.eps}")
        print(f"mi_bits             {gap.mi.mi_bits:.15g}")
        print(f"via_ent             {gap.mi.via_ent_decomposition:.15g}")
        print(f"via_joint           {gap.mi.via_joint_oracle:.15g}")
        print(f"capacity_bits       {gap.capacity_bits:.15g}")
        print(f"gap_bits            {gap.gap_bits:.15g}")
    return EXIT_OK


def cmd_spectrum(args) -> int:
    f = parse_function_spec(args.fn, args.n)
    spectrum = wht(f.as_real())
    coeffs = spectrum.coeffs
    order = np.argsort(-np.abs(coeffs), kind="stable")[: args.top]
    levels = spectrum.level_weights()
    if args.json:
        payload = {
            "schema_version": SCHEMA_VERSION,
            "fn": f.to_string(),
            "top": [
                {"mask": int(m), "set": _mask_to_set(int(m)), "coeff": float(coeffs[m])}
                for m in order
            ],
            "level_weights": [float(x) for x in levels],
        }
        print(json.dumps(payload, indent=2))
    else:
        print(f"fn {f.to_string()}")
        print("mask  set          coeff")
        for m in order:
            print(f"{int(m):<5d} {_mask_to_set(int(m)):<12s} {coeffs[m]:+.12g}")
        print("level weights " + " ".join(f"{k}:{w:.12g}" for k, w in enumerate(levels)))
    return EXIT_OK


def cmd_verify(args) -> int:
    grid = _parse_eps_grid(args.eps_grid)
    threads = args.threads if args.threads else os.cpu_count()
    if args.mode == "sampled" or args.sample is not None:
        if args.sample is None:
            raise DomainError("sampled mode needs --sample")
        report = verify_sampled(
            args.n,
            args.sample,
            args.seed,
            grid,
            bias=args.bias,
            tolerance=args.tolerance,
            threads=threads,
        )
    else:
        report = verify_exhaustive(
            args.n,
            grid,
            tolerance=args.tolerance,
            use_symmetry=args.symmetry,
            threads=threads,
        )

    if args.out:
        if args.csv:
            report.write_csv(args.out)
        else:
            with open(args.out, "w") as fh:
                fh.write(report.to_json())
    elif args.json:
        sys.stdout.write(report.to_json())
    status = "PASS" if report.passed else "FAIL"
    print(
        f"verify n={report.n} mode={report.mode} min_gap={report.min_gap:.3e} "
        f"functions={report.functions_explored} {status} "
        f"({report.elapsed_seconds:.2f}s)",
        file=sys.stderr,
    )
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_check(args) -> int:
    try:
        records = run_check_suite(args.suite, args.cases, args.seed)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    all_pass = all(r["pass"] for r in records)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "suite": args.suite,
        "pass": all_pass,
        "checks": records,
    }
    text = json.dumps(payload, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    print(text)
    return EXIT_OK if all_pass else EXIT_FAIL


def cmd_search(args) -> int:
    p = NoiseParameter(args.eps)
    trace = hill_climb(args.n, p, restarts=args.restarts, seed=args.seed)
    capacity = channel_capacity(p)
    if args.json:
        payload = {
            "schema_version": SCHEMA_VERSION,
            "n": args.n,
            "eps": args.eps,
            "restarts": args.restarts,
            "seed": args.seed,
            "capacity_bits": capacity,
            **trace.to_dict(),
        }
        print(json.dumps(payload, indent=2))
    else:
        print(f"start    {trace.start.to_string()}")
        print(f"final    {trace.final.to_string()}")
        print(f"steps    {len(trace.steps)}")
        print(f"final_mi {trace.final_mi:.15g}")
        print(f"capacity {capacity:.15g}")
        print(f"shortfall {capacity - trace.final_mi:.3e}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boolbsc",
        description="Information-theoretic analysis of boolean functions "
        "under the binary symmetric channel.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    mi = sub.add_parser("mi", help="mutual information, capacity, and gap for one function")
    mi.add_argument("--fn", required=True, help="function spec (family, n:HEX literal, or file)")
    mi.add_argument("--n", type=int, help="dimension for named families")
    mi.add_argument("--eps", type=float, required=True)
    mi.add_argument("--json", action="store_true")
    mi.set_defaults(func=cmd_mi)

    spectrum = sub.add_parser("spectrum", help="largest Fourier coefficients and level weights")
    spectrum.add_argument("--fn", required=True)
    spectrum.add_argument("--n", type=int)
    spectrum.add_argument("--top", type=int, default=8)
    spectrum.add_argument("--json", action="store_true")
    spectrum.set_defaults(func=cmd_spectrum)

    verify = sub.add_parser("verify", help="verify the capacity inequality over function space")
    verify.add_argument("--n", type=int, required=True)
    verify.add_argument("--eps-grid", required=True, help="inclusive linear grid a:b:steps")
    verify.add_argument("--mode", choices=["exhaustive", "sampled"], default="exhaustive")
    verify.add_argument("--sample", type=int, help="sample count (implies sampled mode)")
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--bias", type=float, help="target E f for sampled draws")
    verify.add_argument("--symmetry", action="store_true", help="scan orbit representatives only")
    verify.add_argument("--tolerance", type=float, default=1e-12)
    verify.add_argument("--threads", type=int)
    verify.add_argument("--json", action="store_true")
    verify.add_argument("--csv", action="store_true")
    verify.add_argument("--out", help="report file path")
    verify.set_defaults(func=cmd_verify)

    check = sub.add_parser("check", help="run a named identity-check suite")
    check.add_argument("--suite", required=True, choices=list(SUITE_NAMES) + ["all"])
    check.add_argument("--cases", type=int)
    check.add_argument("--seed", type=int, default=0)
    check.add_argument("--json", action="store_true")
    check.add_argument("--out")
    check.set_defaults(func=cmd_check)

    search = sub.add_parser("search", help="hill-climb for high-MI functions")
    search.add_argument("--n", type=int, required=True)
    search.add_argument("--eps", type=float, required=True)
    search.add_argument("--restarts", type=int, default=10)
    search.add_argument("--seed", type=int, default=0)
    search.add_argument("--json", action="store_true")
    search.set_defaults(func=cmd_search)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, FunctionSpecError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
