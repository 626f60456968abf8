"""Command-line interface.

Subcommands: edge-prob, scan, loop-law, phi, phi-sweep, verify, mc.
JSON report on stdout; ``--csv PATH`` additionally writes the fixed-header
CSV for scan-shaped outputs.  Exit codes: 0 success, 2 precondition
violation, 3 numerical diagnostic, 4 verification failure.

Configuration precedence: explicit flags, then the JSON file named by
``LERW_EDGE_CONFIG``, then defaults; ``LERW_EDGE_THREADS`` is the fallback
for ``--threads``.
"""

from __future__ import annotations

import argparse
import itertools
import json
import math
import os
import sys

from . import harness, identity, montecarlo
from .harmonic import crossing_mass
from .harness import json_report
from .lattice import build_domain
from .solver import SignedDeterminantError

EXIT_OK = 0
EXIT_PRECONDITION = 2
EXIT_DIAGNOSTIC = 3
EXIT_VERIFY_FAILED = 4

CONFIG_ENV = "LERW_EDGE_CONFIG"
THREADS_ENV = "LERW_EDGE_THREADS"

_CONFIG_KEYS = ("samples", "seed", "threads", "chunk_size")
_DEFAULTS = {"samples": 10**5, "seed": 0, "threads": 1, "chunk_size": 1 << 16}


def _load_config() -> dict:
    cfg = dict(_DEFAULTS)
    if THREADS_ENV in os.environ:
        cfg["threads"] = int(os.environ[THREADS_ENV])
    path = os.environ.get(CONFIG_ENV)
    if path:
        with open(path) as fh:
            data = json.load(fh)
        unknown = set(data) - set(_CONFIG_KEYS)
        if unknown:
            raise ValueError(f"unknown config keys in {path}: {sorted(unknown)}")
        cfg.update(data)
    return cfg


def _parse_n_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok]
    except ValueError:
        raise ValueError(f"bad n list {text!r}: expected comma-separated integers")


def _parse_point(text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"bad point {text!r}: expected x,y")
    return (int(parts[0]), int(parts[1]))


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="lerw-edge",
        description="Edge-use probability of loop-erased walk crossing a square",
    )
    sub = top.add_subparsers(dest="command", required=True)

    def add_common(p, mc=False, threads=False, csv=False):
        if mc:
            p.add_argument("--samples", type=int, default=None)
            p.add_argument("--seed", type=int, default=None)
        if threads:
            p.add_argument("--threads", type=int, default=None)
        if csv:
            p.add_argument("--csv", type=str, default=None, metavar="PATH")

    p = sub.add_parser("edge-prob", help="exact identity factors at one n")
    p.add_argument("--n", type=int, required=True)
    add_common(p, csv=True)

    p = sub.add_parser("scan", help="exact columns over an n list")
    p.add_argument("--n", type=str, required=True, metavar="N1,N2,...")
    p.add_argument("--mc", action="store_true")
    add_common(p, mc=True, threads=True, csv=True)

    p = sub.add_parser("loop-law", help="odd loop mass against (1/8) log n")
    p.add_argument("--n-list", type=str, required=True, metavar="N1,N2,...")
    add_common(p, threads=True)

    p = sub.add_parser("phi", help="boundary functional for one pair")
    p.add_argument("--n", type=int, required=True)
    p.add_argument(
        "--zeta1",
        type=str,
        required=True,
        metavar="X,Y",
        help="boundary point; use --zeta1=-2,0 for negative coordinates",
    )
    p.add_argument("--zeta2", type=str, required=True, metavar="X,Y")

    p = sub.add_parser("phi-sweep", help="boundary functional over a sweep")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--stride", type=int, default=1)

    p = sub.add_parser("verify", help="exhaustive oracle suite at small n")
    p.add_argument("--n-max", type=int, default=3)

    p = sub.add_parser("mc", help="Monte Carlo edge-probability estimate")
    p.add_argument("--n", type=int, required=True)
    add_common(p, mc=True)

    return top


def _maybe_write_csv(args, result: harness.ScanResult) -> None:
    if getattr(args, "csv", None):
        with open(args.csv, "w") as fh:
            fh.write(harness.scan_csv(result))


def _cmd_edge_prob(args, cfg) -> int:
    result = harness.run_scan([args.n])
    _maybe_write_csv(args, result)
    report = identity.rhs_theorem31(build_domain(args.n))
    rows = harness.scan_rows_as_dicts(result)
    rows[0]["rhs_log"] = report.rhs_log
    rows[0]["lambda_log"] = report.lambda_log
    print(json_report("edge-prob", {"n": args.n}, rows))
    return EXIT_OK


def _cmd_scan(args, cfg) -> int:
    n_list = _parse_n_list(args.n)
    samples = args.samples if args.samples is not None else cfg["samples"]
    seed = args.seed if args.seed is not None else cfg["seed"]
    threads = args.threads if args.threads is not None else cfg["threads"]
    result = harness.run_scan(
        n_list,
        with_mc=args.mc,
        mc_samples=samples,
        mc_seed=seed,
        threads=threads,
        chunk_size=cfg["chunk_size"],
    )
    _maybe_write_csv(args, result)
    fit = None
    if len(result.rows) >= 4:
        f = harness.fit_exponent(result)
        fit = {
            "slope": f.slope,
            "intercept": f.intercept,
            "r_squared": f.r_squared,
            "n_range": list(f.n_range),
        }
    params = {"n": n_list, "mc": args.mc}
    if args.mc:
        params.update({"samples": samples, "seed": seed})
    print(json_report("scan", params, harness.scan_rows_as_dicts(result), fit))
    return EXIT_OK


def _cmd_loop_law(args, cfg) -> int:
    n_list = _parse_n_list(args.n_list)
    threads = args.threads if args.threads is not None else cfg["threads"]
    rows = harness.run_loop_law(n_list, threads=threads)
    print(json_report("loop-law", {"n_list": n_list}, rows))
    return EXIT_OK


def _cmd_phi(args, cfg) -> int:
    z1 = _parse_point(args.zeta1)
    z2 = _parse_point(args.zeta2)
    d = build_domain(args.n)
    report = identity.rhs_theorem51(d, z1, z2)
    row = {
        "zeta1": list(z1),
        "zeta2": list(z2),
        "phi": 0.0 if report.zero else math.exp(report.factors.log_r_terms),
        "rhs_theorem51": 0.0 if report.zero else math.exp(report.rhs_log),
        "zero": report.zero,
    }
    print(json_report("phi", {"n": args.n}, [row]))
    return EXIT_OK


def _cmd_phi_sweep(args, cfg) -> int:
    rows = harness.run_phi_sweep(args.n, args.stride)
    print(json_report("phi-sweep", {"n": args.n, "stride": args.stride}, rows))
    return EXIT_OK


def _cmd_mc(args, cfg) -> int:
    samples = args.samples if args.samples is not None else cfg["samples"]
    seed = args.seed if args.seed is not None else cfg["seed"]
    est = montecarlo.estimate_edge_probability(
        montecarlo.McConfig(args.n, samples, seed, chunk_size=cfg["chunk_size"])
    )
    row = {
        "n": args.n,
        "samples": samples,
        "seed": seed,
        "mean": est.mean,
        "std_error": est.std_error,
        "accepted": est.accepted,
        "attempted": est.attempted,
        "edge_hits": est.edge_hits,
    }
    print(json_report("mc", {"n": args.n, "samples": samples, "seed": seed}, [row]))
    return EXIT_OK


def _cmd_verify(args, cfg) -> int:
    """Exhaustive enumeration against the closed-form sides at small n."""
    if args.n_max < 2:
        raise ValueError("--n-max must be >= 2")
    if args.n_max > 4:
        raise ValueError("--n-max above the enumeration cap (4)")
    rows = []
    ok = True

    def record(check: str, n: int, passed: bool, detail: dict) -> None:
        nonlocal ok
        ok = ok and passed
        rows.append({"check": check, "n": n, "passed": passed, **detail})
        status = "pass" if passed else "FAIL"
        print(f"[{status}] {check} n={n} {detail}", file=sys.stderr)

    for n in range(2, args.n_max + 1):
        d = build_domain(n)
        rep = identity.verify_theorem31(d)
        rel = rep.discrepancy / abs(rep.rhs_log)
        record("theorem31", n, rel < 1e-9, {"rel_error": rel})
        sums = identity.crossing_saw_sums(d)
        record(
            "crossing_parity",
            n,
            sums.parity_violations == 0,
            {"violations": sums.parity_violations, "edge_saws": sums.n_edge_saws},
        )
        f_n = crossing_mass(d)
        rel = abs(sums.total - f_n) / f_n
        record("normalization", n, rel < 1e-9, {"rel_error": rel})

    d = build_domain(2)
    worst = 0.0
    mismatches = 0
    pairs = 0
    bc = harness.boundary_cycle(d)
    for z1, z2 in itertools.product(bc, repeat=2):
        if z1 == z2:
            continue
        rep = identity.verify_theorem51(d, z1, z2)
        pairs += 1
        if rep.zero != (rep.lhs_log is None):
            mismatches += 1
        elif not rep.zero:
            worst = max(worst, rep.discrepancy / abs(rep.rhs_log))
    record(
        "theorem51",
        2,
        worst < 1e-9 and mismatches == 0,
        {"pairs": pairs, "worst_rel_error": worst, "zero_mismatches": mismatches},
    )

    rows.append({"check": "overall", "n": args.n_max, "passed": ok})
    print(json_report("verify", {"n_max": args.n_max}, rows))
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


_COMMANDS = {
    "edge-prob": _cmd_edge_prob,
    "scan": _cmd_scan,
    "loop-law": _cmd_loop_law,
    "phi": _cmd_phi,
    "phi-sweep": _cmd_phi_sweep,
    "verify": _cmd_verify,
    "mc": _cmd_mc,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _load_config()
        return _COMMANDS[args.command](args, cfg)
    except SignedDeterminantError as exc:
        print(f"numerical diagnostic: {exc}", file=sys.stderr)
        return EXIT_DIAGNOSTIC
    except ValueError as exc:
        print(f"precondition violation: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
