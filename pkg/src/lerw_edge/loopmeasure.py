"""Odd-crossing loop-measure mass and its scaling constant.

The mass of loops with odd crossing number satisfies
``2 m_odd = log det(I - Q) - log det(I - P)``: flipping the sign of the
odd-loop contributions inside the exponential loop sums turns the unsigned
log-determinant into the signed one.  The continuum constant 1/8 enters
through the odd-series ``(1/pi^2) sum 1/(2k+1)^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lattice import EDGE_0, EDGE_1, LatticeDomain
from .solver import SignedDeterminantError, TransitionOperator, log_det_ImP
from .walks import enumerate_loops_upto


@dataclass(frozen=True)
class LoopMeasureResult:
    n: int
    log_det_unsigned: float
    log_det_signed: float
    m_odd: float


def m_odd(d: LatticeDomain) -> LoopMeasureResult:
    """Total loop-measure mass of odd-crossing loops in the domain, from the
    two full-domain log-determinants."""
    lu = log_det_ImP(TransitionOperator(d))
    ls = log_det_ImP(TransitionOperator(d, signed=True))
    m = 0.5 * (ls - lu)
    if m < 0:
        raise SignedDeterminantError(
            f"negative odd loop mass {m} at n={d.n}: determinant routes disagree"
        )
    return LoopMeasureResult(d.n, lu, ls, m)


def brownian_odd_constant(terms: int) -> float:
    """Partial sum (1/pi^2) * sum_{k<terms} (2k+1)^{-2}; converges to 1/8.

    The tail after ``terms`` summands is below 1/(4 pi^2 terms).
    """
    if terms < 1:
        raise ValueError("terms must be >= 1")
    k = np.arange(terms - 1, -1, -1, dtype=np.float64)
    return float(np.sum((2.0 * k + 1.0) ** -2) / math.pi**2)


@dataclass(frozen=True)
class TruncatedLoopSums:
    """Direct-enumeration partial sums over loops of bounded length, with
    geometric tail bounds estimated from the last per-length increments.

    Oracle output: comparisons against exact values must use the
    (partial sum, tail bound) interval, never point equality.
    """

    max_len: int
    odd_mass: float
    odd_tail_bound: float
    edge_pair_signed_mass: float
    edge_pair_tail_bound: float
    unsigned_mass_by_length: dict[int, float]
    loop_count: int


def _geometric_tail(by_length: dict[int, float], max_len: int) -> float:
    """Bound sum_{L > max_len} a_L by a geometric extrapolation of the last
    increments, with a factor-2 safety margin."""
    a2 = by_length.get(max_len, 0.0)
    a1 = by_length.get(max_len - 2, 0.0)
    if a2 <= 0.0:
        return 0.0
    rho = a2 / a1 if a1 > 0 else 0.5
    rho = min(rho, 0.95)
    return 2.0 * a2 * rho / (1.0 - rho)


def truncated_loop_sums(d: LatticeDomain, max_len: int) -> TruncatedLoopSums:
    """One enumeration pass collecting the odd-crossing mass and the signed
    mass of loops meeting the marked edge pair, each with a tail bound."""
    odd_by_len: dict[int, float] = {}
    pair_by_len: dict[int, float] = {}
    unsigned_by_len: dict[int, float] = {}
    odd = pair_signed = 0.0
    count = 0
    for loop in enumerate_loops_upto(d, max_len):
        count += 1
        w = loop.m_weight()
        L = loop.length
        unsigned_by_len[L] = unsigned_by_len.get(L, 0.0) + w
        parity = loop.crossing_number() % 2
        if parity:
            odd += w
            odd_by_len[L] = odd_by_len.get(L, 0.0) + w
        if loop.visits(EDGE_0) or loop.visits(EDGE_1):
            pair_signed += -w if parity else w
            pair_by_len[L] = pair_by_len.get(L, 0.0) + w
    return TruncatedLoopSums(
        max_len=max_len,
        odd_mass=odd,
        odd_tail_bound=_geometric_tail(odd_by_len, max_len),
        edge_pair_signed_mass=pair_signed,
        edge_pair_tail_bound=_geometric_tail(pair_by_len, max_len),
        unsigned_mass_by_length=unsigned_by_len,
        loop_count=count,
    )
