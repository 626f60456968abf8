"""Discrete square domains on Z^2 and the edge geometry of the crossing problem.

The domain of half-width ``n`` has interior ``{-n+1..n} x {-n+1..n-1}``,
the lattice points strictly inside the rectangle ``(-n, n+1) x (-n, n)``.
This makes the left boundary sit at ``x = -n`` and the right boundary at
``x = n+1``, symmetric about the vertical line ``x = 1/2`` through the
marked edge ``(0,0)-(1,0)``.

Points are plain ``(x, y)`` integer tuples.
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterator

import numpy as np

Point = tuple[int, int]

#: Four nearest-neighbor steps, in the fixed order used everywhere.
STEPS: tuple[Point, ...] = ((1, 0), (-1, 0), (0, 1), (0, -1))

#: Marked edge endpoints (the origin and its right neighbor).
EDGE_0: Point = (0, 0)
EDGE_1: Point = (1, 0)

MAX_N = 4096


def neighbors(p: Point) -> list[Point]:
    """The four lattice neighbors of ``p``."""
    x, y = p
    return [(x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)]


def is_edge(a: Point, b: Point) -> bool:
    return abs(a[0] - b[0]) + abs(a[1] - b[1]) == 1


def crossing_parity_increment(frm: Point, to: Point) -> int:
    """1 if the step traverses a horizontal edge {(0,-k),(1,-k)}, k >= 1.

    These are the lattice edges cut by the vertical ray ``{x = 1/2, y <= -1}``;
    the marked edge itself (k = 0) does not count.  Direction is irrelevant.
    """
    if not is_edge(frm, to):
        raise ValueError(f"not a nearest-neighbor edge: {frm} -> {to}")
    if frm[1] != to[1] or frm[1] > -1:
        return 0
    return 1 if frm[0] + to[0] == 1 else 0


def marked_edge_increment(frm: Point, to: Point) -> int:
    """+1 for the step (0,0)->(1,0), -1 for (1,0)->(0,0), else 0."""
    if not is_edge(frm, to):
        raise ValueError(f"not a nearest-neighbor edge: {frm} -> {to}")
    if frm == EDGE_0 and to == EDGE_1:
        return 1
    if frm == EDGE_1 and to == EDGE_0:
        return -1
    return 0


def mirror_point(p: Point) -> Point:
    """Reflection through the vertical line x = 1/2 (maps 0 <-> 1)."""
    return (1 - p[0], p[1])


class LatticeDomain:
    """The square domain of half-width ``n`` with its absorbing boundary.

    Immutable after construction.  ``interior`` is in frozen raster order
    (y ascending, then x ascending); downstream vertex-elimination products
    and report reproducibility rely on this ordering.
    """

    def __init__(self, n: int):
        if n < 2:
            raise ValueError(f"n must be >= 2 (marked edge must be interior): got {n}")
        if n > MAX_N:
            raise ValueError(f"n capped at {MAX_N}: got {n}")
        self.n = n
        self.interior: tuple[Point, ...] = tuple(
            (x, y) for y in range(-n + 1, n) for x in range(-n + 1, n + 1)
        )
        self.interior_index: dict[Point, int] = {
            p: i for i, p in enumerate(self.interior)
        }
        self.left_boundary: tuple[Point, ...] = tuple(
            (-n, y) for y in range(-n + 1, n)
        )
        self.right_boundary: tuple[Point, ...] = tuple(
            (n + 1, y) for y in range(-n + 1, n)
        )
        top = tuple((x, n) for x in range(-n + 1, n + 1))
        bottom = tuple((x, -n) for x in range(-n + 1, n + 1))
        self.boundary: frozenset[Point] = frozenset(
            self.left_boundary + self.right_boundary + top + bottom
        )

    def __repr__(self) -> str:
        return f"LatticeDomain(n={self.n})"

    def __contains__(self, p: Point) -> bool:
        return p in self.interior_index

    @property
    def size(self) -> int:
        return len(self.interior)

    def interior_neighbor(self, b: Point) -> Point:
        """The unique interior point adjacent to boundary point ``b``."""
        if b not in self.boundary:
            raise ValueError(f"{b} is not on the boundary of {self!r}")
        hits = [q for q in neighbors(b) if q in self.interior_index]
        assert len(hits) == 1
        return hits[0]

    @cached_property
    def adjacency(self) -> tuple[np.ndarray, np.ndarray]:
        """(nbrs, degrees): interior adjacency as index arrays for kernels.

        ``nbrs[i, :degrees[i]]`` lists interior neighbors of interior point i.
        """
        m = self.size
        nbrs = np.full((m, 4), -1, dtype=np.int64)
        deg = np.zeros(m, dtype=np.int64)
        for p, i in self.interior_index.items():
            for q in neighbors(p):
                j = self.interior_index.get(q)
                if j is not None:
                    nbrs[i, deg[i]] = j
                    deg[i] += 1
        return nbrs, deg

    @cached_property
    def coords(self) -> tuple[np.ndarray, np.ndarray]:
        """Interior x and y coordinates as arrays, in raster order."""
        xs = np.array([p[0] for p in self.interior], dtype=np.int64)
        ys = np.array([p[1] for p in self.interior], dtype=np.int64)
        return xs, ys


def build_domain(n: int) -> LatticeDomain:
    """Construct the domain of half-width ``n`` (n >= 2)."""
    return LatticeDomain(n)


def boundary_cycle(d: LatticeDomain) -> list[Point]:
    """Boundary points in a fixed cycle: left edge bottom-up, top edge
    left-right, right edge top-down, bottom edge right-left."""
    n = d.n
    cyc: list[Point] = list(d.left_boundary)
    cyc += [(x, n) for x in range(-n + 1, n + 1)]
    cyc += [(n + 1, y) for y in range(n - 1, -n, -1)]
    cyc += [(x, -n) for x in range(n, -n, -1)]
    return cyc


def iter_boundary(d: LatticeDomain) -> Iterator[Point]:
    return iter(boundary_cycle(d))
