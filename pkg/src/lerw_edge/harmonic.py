"""Escape probabilities in the slit square, the signed boundary profile,
the antisymmetric boundary functional, and the crossing mass.

The slit problem kills the walk on the nonnegative real axis
``{(j, 0): j >= 0}`` as well as on the domain boundary.  Boundary escape
probabilities carry the quadrant sign I(zeta) = -1 on the open southeast
quadrant (x > 0 and y < 0), +1 elsewhere; with that sign they equal signed
path sums over walks avoiding the slit.
"""

from __future__ import annotations

import numpy as np

from .lattice import LatticeDomain, Point, mirror_point, neighbors
from .solver import TransitionOperator, dirichlet_solve


def boundary_sign(zeta: Point) -> int:
    """I(zeta): -1 iff x > 0 and y < 0 strictly, else +1."""
    return -1 if (zeta[0] > 0 and zeta[1] < 0) else 1


def slit_points(d: LatticeDomain) -> frozenset[Point]:
    """Interior points of the killing slit: (j, 0) for 0 <= j <= n."""
    return frozenset((j, 0) for j in range(0, d.n + 1))


def _slit_operator(d: LatticeDomain) -> TransitionOperator:
    return TransitionOperator(d, killed=slit_points(d))


def escape_R(d: LatticeDomain) -> float:
    """Probability that the walk from the origin reaches the left boundary
    before returning to the nonnegative real axis or exiting elsewhere."""
    op = _slit_operator(d)
    values = {b: 0.0 for b in d.boundary}
    values.update({b: 1.0 for b in d.left_boundary})
    values.update({k: 0.0 for k in op.killed})
    h = dirichlet_solve(op, values)
    total = 0.0
    for q in neighbors((0, 0)):
        total += 0.25 * h.get(q, values.get(q, 0.0))
    return total


def escape_boundary_profile(d: LatticeDomain) -> dict[Point, float]:
    """Signed escape probabilities for every boundary point, via a single
    adjoint solve.

    The walk starts at the origin, absorbed on the slit or the boundary
    from time 1 on; the value at zeta is I(zeta) * P(absorbed at zeta).
    Boundary points unreachable without touching the slit get exact 0.
    """
    op = _slit_operator(d)
    live = op.live_index
    mu = np.zeros(op.size)
    for q in neighbors((0, 0)):
        i = live.get(q)
        if i is not None:
            mu[i] += 0.25
    # unsigned kernel is symmetric: the adjoint visit-count solve reuses
    # the same factorization
    visits = op.factor.solve(mu)
    profile: dict[Point, float] = {}
    for zeta in d.boundary:
        mass = 0.0
        for q in neighbors(zeta):
            i = live.get(q)
            if i is not None:
                mass += 0.25 * visits[i]
        profile[zeta] = boundary_sign(zeta) * mass
    return profile


def escape_R_boundary(d: LatticeDomain, zeta: Point) -> float:
    """Signed escape probability at one boundary point."""
    if zeta not in d.boundary:
        raise ValueError(f"{zeta} is not on the boundary of {d!r}")
    return escape_boundary_profile(d)[zeta]


def phi_from_profile(
    profile: dict[Point, float], z1: Point, z2: Point
) -> float:
    """|R(z1) R(mirror z2) - R(mirror z1) R(z2)|.

    The mirrored value realizes the escape quantity of the problem rooted
    at (1,0): reflection through x = 1/2 maps that problem onto the
    original one and preserves ray crossings.
    """
    m1, m2 = mirror_point(z1), mirror_point(z2)
    return abs(profile[z1] * profile[m2] - profile[m1] * profile[z2])


def phi(d: LatticeDomain, z1: Point, z2: Point) -> float:
    """The antisymmetric boundary functional for an ordered pair; symmetric
    in its arguments and exactly 0 on the diagonal."""
    for z in (z1, z2):
        if z not in d.boundary:
            raise ValueError(f"{z} is not on the boundary of {d!r}")
    if z1 == z2:
        return 0.0
    return phi_from_profile(escape_boundary_profile(d), z1, z2)


def crossing_mass(d: LatticeDomain) -> float:
    """Total walk measure of left-to-right crossings: sum over left-boundary
    starts of 1/4 times the exit-right probability of the entry point."""
    op = TransitionOperator(d)
    values = {b: 0.0 for b in d.boundary}
    values.update({b: 1.0 for b in d.right_boundary})
    h = dirichlet_solve(op, values)
    return sum(0.25 * h[d.interior_neighbor(z)] for z in d.left_boundary)
