"""Loop-measure exponentials over vertex sets, and the crossing-SAW measure.

``F_V`` (unsigned) and ``Q_V`` (crossing-signed) are the exponentials of the
loop-measure mass of loops meeting V; both factor as products of Green's
diagonals over any elimination order of V, with the domain shrinking by one
vertex per factor.  All returns are natural logs; exponentiate at report
time only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .lattice import EDGE_0, EDGE_1, LatticeDomain, Point
from .solver import SignedDeterminantError, TransitionOperator, green_diagonal
from .walks import is_crossing_saw, srw_weight_log


@dataclass(frozen=True)
class GreensTable:
    """Green's diagonals along a vertex-elimination prefix.

    ``unsigned_diag[j]`` / ``signed_diag[j]`` are the diagonals at
    ``killed_prefix[j]`` on the domain with the earlier prefix points
    removed; unsigned values are always > 0.
    """

    domain: LatticeDomain
    killed_prefix: tuple[Point, ...]
    unsigned_diag: tuple[float, ...]
    signed_diag: tuple[float, ...]


def greens_table(d: LatticeDomain, prefix: Sequence[Point]) -> GreensTable:
    _check_vertices(d, prefix)
    unsigned, signed = [], []
    for j, v in enumerate(prefix):
        killed = prefix[:j]
        unsigned.append(green_diagonal(TransitionOperator(d, killed), v))
        signed.append(green_diagonal(TransitionOperator(d, killed, signed=True), v))
    return GreensTable(d, tuple(prefix), tuple(unsigned), tuple(signed))


def _check_vertices(d: LatticeDomain, points: Sequence[Point]) -> None:
    if len(set(points)) != len(points):
        raise ValueError("vertex list contains duplicates")
    for p in points:
        if p not in d.interior_index:
            raise ValueError(f"{p} is not an interior point of {d!r}")


def _telescoped(
    d: LatticeDomain, points: Sequence[Point], signed: bool
) -> float:
    _check_vertices(d, points)
    total = 0.0
    for j, v in enumerate(points):
        op = TransitionOperator(d, killed=points[:j], signed=signed)
        g = green_diagonal(op, v)
        if g <= 0:
            # unsigned diagonals are visit counts >= 1; only the signed
            # series can cancel to nonpositive, which is a diagnostic
            raise SignedDeterminantError(
                f"signed Green diagonal {g} <= 0 at {v} (step {j})"
            )
        total += math.log(g)
    return total


def F_V(d: LatticeDomain, points: Sequence[Point]) -> float:
    """log of the unsigned loop-measure exponential over loops meeting
    ``points``; order-invariant, 0 for the empty set."""
    return _telescoped(d, points, signed=False)


def Q_V(d: LatticeDomain, points: Sequence[Point]) -> float:
    """Signed analogue of :func:`F_V`; raises
    :class:`~lerw_edge.solver.SignedDeterminantError` on a nonpositive
    signed diagonal rather than absolute-valuing it."""
    return _telescoped(d, points, signed=True)


def Q_01(d: LatticeDomain) -> float:
    """log[ g(0,0 on A) * g(1,1 on A minus 0) ]: the signed pair factor of
    the edge-probability identity, with the elimination order frozen to
    (origin, right neighbor)."""
    return Q_V(d, [EDGE_0, EDGE_1])


def saw_measure(d: LatticeDomain, eta: Sequence[Point]) -> float:
    """log of the loop-erased crossing measure of the SAW ``eta``:
    log p(eta) plus the loop factor over eta's interior vertices.

    Boundary endpoints carry no loop factor: loops live in the interior,
    so they can only attach at the interior vertices of eta.
    """
    if not is_crossing_saw(d, eta):
        raise ValueError("eta is not a left-to-right crossing SAW of the domain")
    return srw_weight_log(eta) + F_V(d, list(eta[1:-1]))
