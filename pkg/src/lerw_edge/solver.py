"""Sparse substrate for the crossing problem: Dirichlet solves, diagonal
Green's values, and log-determinants of I minus sub-stochastic kernels.

The kernel on a live set (interior minus killed points) has entry 1/4
between lattice neighbors, negated on ray-crossing edges when the operator
is crossing-signed.  Killed points are removed from the index set, so the
systems are nonsingular by construction.  Both the unsigned and the signed
kernel are symmetric with spectral radius < 1, hence I - M is positive
definite; a nonpositive determinant or diagonal is surfaced as a
diagnostic error, never silently absolute-valued.

Determinants come from sparse LU elimination with explicit sign tracking
(permutation parities times pivot signs); magnitudes are accumulated in
log space since det(I - P) decays like exp(-c n^2).
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Mapping

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .lattice import LatticeDomain, Point, crossing_parity_increment, neighbors


class SignedDeterminantError(ArithmeticError):
    """The signed kernel produced a nonpositive determinant or Green's
    diagonal; results would be meaningless, so computation is aborted."""


class TransitionOperator:
    """One-step kernel on ``interior \\ killed``, unsigned or crossing-signed.

    Immutable after construction; the factorization is computed lazily and
    cached, so sharing an instance across solves amortizes elimination.
    """

    def __init__(
        self,
        domain: LatticeDomain,
        killed: Iterable[Point] = (),
        signed: bool = False,
    ):
        self.domain = domain
        self.killed = frozenset(killed)
        self.signed = bool(signed)
        bad = self.killed - set(domain.interior_index)
        if bad:
            raise ValueError(f"killed points outside interior: {sorted(bad)[:4]}")

    def __repr__(self) -> str:
        kind = "signed" if self.signed else "unsigned"
        return (
            f"TransitionOperator(n={self.domain.n}, {kind}, "
            f"killed={len(self.killed)})"
        )

    @cached_property
    def live_points(self) -> tuple[Point, ...]:
        if not self.killed:
            return self.domain.interior
        return tuple(p for p in self.domain.interior if p not in self.killed)

    @cached_property
    def live_index(self) -> dict[Point, int]:
        return {p: i for i, p in enumerate(self.live_points)}

    @property
    def size(self) -> int:
        return len(self.live_points)

    @cached_property
    def matrix(self) -> sp.csc_matrix:
        """The kernel M (entries +-1/4) over the live set, CSC."""
        d = self.domain
        nbrs, deg = d.adjacency
        xs, ys = d.coords
        m = d.size
        # full-interior edge list, then restrict to live rows/cols
        src = np.repeat(np.arange(m, dtype=np.int64), deg)
        dst = nbrs[nbrs >= 0]
        if self.killed:
            live = np.ones(m, dtype=bool)
            for p in self.killed:
                live[d.interior_index[p]] = False
            keep = live[src] & live[dst]
            src, dst = src[keep], dst[keep]
            remap = np.cumsum(live) - 1
            rows, cols = remap[src], remap[dst]
        else:
            rows, cols = src, dst
        vals = np.full(src.shape[0], 0.25)
        if self.signed:
            crossing = (
                (ys[src] == ys[dst]) & (ys[src] <= -1) & (xs[src] + xs[dst] == 1)
            )
            vals[crossing] = -0.25
        n_live = self.size
        return sp.csc_matrix((vals, (rows, cols)), shape=(n_live, n_live))

    @cached_property
    def system(self) -> sp.csc_matrix:
        """I - M over the live set."""
        return (sp.identity(self.size, format="csc") - self.matrix).tocsc()

    @cached_property
    def factor(self):
        """Sparse LU of I - M (no equilibration, so det bookkeeping is exact)."""
        return splu(
            self.system, permc_spec="MMD_AT_PLUS_A", options=dict(Equil=False)
        )


def _perm_parity(perm: np.ndarray) -> int:
    n = len(perm)
    seen = np.zeros(n, dtype=bool)
    parity = 1
    for i in range(n):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            parity = -parity
    return parity


def log_det_ImP(op: TransitionOperator) -> float:
    """log det(I - M), with the determinant sign checked explicitly.

    The unsigned kernel must give a positive determinant (internal error
    otherwise); for the signed kernel a nonpositive sign raises
    :class:`SignedDeterminantError`.
    """
    if op.size == 0:
        return 0.0
    lu = op.factor
    diag = lu.U.diagonal()
    if np.any(diag == 0.0) or not np.all(np.isfinite(diag)):
        raise SignedDeterminantError(
            f"singular or non-finite pivot in elimination of {op!r}"
        )
    sign = _perm_parity(lu.perm_r) * _perm_parity(lu.perm_c)
    sign *= int(np.prod(np.where(diag > 0, 1, -1)))
    if sign <= 0:
        if op.signed:
            raise SignedDeterminantError(
                f"det(I - Q) has nonpositive sign on {op!r}"
            )
        raise RuntimeError(f"unsigned determinant sign {sign} on {op!r}")
    return float(np.sum(np.log(np.abs(diag))))


def green_diagonal(op: TransitionOperator, v: Point) -> float:
    """(v, v) entry of (I - M)^{-1}: expected (signed) visits to v before
    absorption, starting from v, counting the start."""
    i = op.live_index.get(v)
    if i is None:
        raise ValueError(f"{v} is not a live point of {op!r}")
    e = np.zeros(op.size)
    e[i] = 1.0
    g = float(op.factor.solve(e)[i])
    if not op.signed and g <= 0:
        raise RuntimeError(f"unsigned Green diagonal {g} <= 0 at {v}")
    return g


def dirichlet_solve(
    op: TransitionOperator, boundary_values: Mapping[Point, float]
) -> dict[Point, float]:
    """Solve h = M h + (absorbing pickup) on the live set.

    ``boundary_values`` must cover every absorbing point (domain boundary or
    killed point) adjacent to the live set; the one-step pickup from a live
    point z is sum over absorbing neighbors w of sign(z,w)/4 * value(w).
    """
    if op.size == 0:
        return {}
    b = np.zeros(op.size)
    live = op.live_index
    absorbing = op.domain.boundary | op.killed
    for p, i in live.items():
        for q in neighbors(p):
            if q in live:
                continue
            if q not in absorbing:
                raise RuntimeError(
                    f"neighbor {q} of live {p} is neither live nor absorbing"
                )
            try:
                val = boundary_values[q]
            except KeyError:
                raise ValueError(
                    f"missing boundary value at {q} (absorbing neighbor of {p})"
                ) from None
            s = 1.0
            if op.signed and crossing_parity_increment(p, q):
                s = -1.0
            b[i] += 0.25 * s * val
    h = op.factor.solve(b)
    if not np.all(np.isfinite(h)):
        raise RuntimeError(f"non-finite Dirichlet solution on {op!r}")
    return {p: float(h[i]) for p, i in live.items()}
