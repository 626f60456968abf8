"""Experiment orchestration: scans over domain sizes, the power-law fit,
the loop-measure law table, boundary sweeps, and report serialization.

All serialization is deterministic: floats are written with 17 significant
digits (exact round-trip), keys in insertion order, rows ordered by n or
by sweep position regardless of completion order.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from . import greens, harmonic, loopmeasure, montecarlo
from .lattice import LatticeDomain, Point, boundary_cycle, build_domain
from .walks import LOG4

CSV_HEADER = "n,f_n,R_n,logQ01,m_odd,edge_prob_exact,edge_prob_mc,mc_stderr"


@dataclass(frozen=True)
class ScanRow:
    n: int
    f_n: float
    R_n: float
    logQ01: float
    m_odd: float
    edge_prob_exact: float
    edge_prob_mc: float | None = None
    mc_stderr: float | None = None


@dataclass(frozen=True)
class ScanResult:
    rows: tuple[ScanRow, ...]


@dataclass(frozen=True)
class ExponentFit:
    slope: float
    intercept: float
    r_squared: float
    n_range: tuple[int, int]


def _check_n_list(n_list: list[int]) -> None:
    if any(n < 2 for n in n_list):
        raise ValueError("every n must be >= 2")
    if sorted(n_list) != list(n_list) or len(set(n_list)) != len(n_list):
        raise ValueError("n list must be strictly ascending")


def scan_row(
    n: int,
    with_mc: bool = False,
    mc_samples: int = 10**5,
    mc_seed: int = 0,
    chunk_size: int = montecarlo.DEFAULT_CHUNK,
) -> ScanRow:
    d = build_domain(n)
    f_n = harmonic.crossing_mass(d)
    r = harmonic.escape_R(d)
    log_q01 = greens.Q_01(d)
    m = loopmeasure.m_odd(d).m_odd
    edge_exact = math.exp(log_q01 + 2.0 * math.log(r) + 2.0 * m - LOG4)
    mc_mean = mc_err = None
    if with_mc:
        est = montecarlo.estimate_edge_probability(
            montecarlo.McConfig(n, mc_samples, mc_seed, chunk_size=chunk_size)
        )
        mc_mean, mc_err = est.mean, est.std_error
    return ScanRow(n, f_n, r, log_q01, m, edge_exact, mc_mean, mc_err)


def run_scan(
    n_list: list[int],
    with_mc: bool = False,
    mc_samples: int = 10**5,
    mc_seed: int = 0,
    threads: int = 1,
    chunk_size: int = montecarlo.DEFAULT_CHUNK,
) -> ScanResult:
    """Exact (and optionally Monte Carlo) edge-probability columns for each
    n, in ascending order; a failing row aborts with its n identified."""
    _check_n_list(n_list)
    if not n_list:
        return ScanResult(())

    def one(n: int) -> ScanRow:
        try:
            return scan_row(n, with_mc, mc_samples, mc_seed, chunk_size)
        except Exception as exc:
            raise type(exc)(f"scan row n={n}: {exc}") from exc

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = tuple(pool.map(one, n_list))
    else:
        rows = tuple(one(n) for n in n_list)
    return ScanResult(rows)


def fit_exponent(result: ScanResult) -> ExponentFit:
    """Least-squares slope of log edge probability against log n."""
    if len(result.rows) < 4:
        raise ValueError("exponent fit needs at least 4 rows")
    x = np.log([row.n for row in result.rows])
    y = np.log([row.edge_prob_exact for row in result.rows])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot
    return ExponentFit(
        float(slope), float(intercept), r2, (result.rows[0].n, result.rows[-1].n)
    )


def run_loop_law(n_list: list[int], threads: int = 1) -> list[dict]:
    """Rows {n, m_odd, deviation} with deviation = m_odd - (1/8) ln n."""
    _check_n_list(n_list)

    def one(n: int) -> dict:
        m = loopmeasure.m_odd(build_domain(n)).m_odd
        return {"n": n, "m_odd": m, "deviation": m - math.log(n) / 8.0}

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(one, n_list))
    return [one(n) for n in n_list]


def run_phi_sweep(n: int, stride: int = 1) -> list[dict]:
    """Ordered pairs of boundary points at the given stride along the
    boundary cycle, with the functional and the assembled identity side."""
    if stride < 1:
        raise ValueError("stride must be >= 1")
    d = build_domain(n)
    profile = harmonic.escape_boundary_profile(d)
    log_q01 = greens.Q_01(d)
    two_m = 2.0 * loopmeasure.m_odd(d).m_odd
    prefactor = math.exp(log_q01 + two_m - LOG4)
    points = boundary_cycle(d)[::stride]
    rows = []
    for z1 in points:
        for z2 in points:
            ph = 0.0 if z1 == z2 else harmonic.phi_from_profile(profile, z1, z2)
            rows.append(
                {
                    "zeta1": list(z1),
                    "zeta2": list(z2),
                    "phi": ph,
                    "rhs_theorem51": prefactor * ph,
                }
            )
    return rows


# ---------------------------------------------------------------------------
# serialization


def _fmt_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise ValueError(f"non-finite value in report: {x}")
    return format(x, ".17g")


def _to_json(obj) -> str:
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, dict):
        items = (f"{json.dumps(str(k))}: {_to_json(v)}" for k, v in obj.items())
        return "{" + ", ".join(items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_to_json(v) for v in obj) + "]"
    if isinstance(obj, (np.integer,)):
        return str(int(obj))
    if isinstance(obj, (np.floating,)):
        return _fmt_float(float(obj))
    raise TypeError(f"cannot serialize {type(obj)!r}")


def json_report(command: str, params: dict, rows: list, fit: dict | None = None) -> str:
    """The stable report document; byte-identical for identical inputs."""
    doc: dict = {
        "tool": "lerw-edge",
        "version": __version__,
        "command": command,
        "params": params,
        "rows": rows,
    }
    if fit is not None:
        doc["fit"] = fit
    return _to_json(doc)


def scan_rows_as_dicts(result: ScanResult) -> list[dict]:
    return [
        {
            "n": r.n,
            "f_n": r.f_n,
            "R_n": r.R_n,
            "logQ01": r.logQ01,
            "m_odd": r.m_odd,
            "edge_prob_exact": r.edge_prob_exact,
            "edge_prob_mc": r.edge_prob_mc,
            "mc_stderr": r.mc_stderr,
        }
        for r in result.rows
    ]


def scan_csv(result: ScanResult) -> str:
    lines = [CSV_HEADER]
    for r in result.rows:
        cells = [
            str(r.n),
            _fmt_float(r.f_n),
            _fmt_float(r.R_n),
            _fmt_float(r.logQ01),
            _fmt_float(r.m_odd),
            _fmt_float(r.edge_prob_exact),
            "" if r.edge_prob_mc is None else _fmt_float(r.edge_prob_mc),
            "" if r.mc_stderr is None else _fmt_float(r.mc_stderr),
        ]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
