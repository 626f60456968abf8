"""Nearest-neighbor paths and loops: weights, crossing functionals,
chronological loop-erasure, and exhaustive enumeration on small domains.

Paths are sequences of ``(x, y)`` tuples.  The enumerators are oracle
machinery: they are exact and deliberately simple, and guarded by caps
because both families grow exponentially.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

from .lattice import (
    EDGE_0,
    EDGE_1,
    LatticeDomain,
    Point,
    crossing_parity_increment,
    is_edge,
    marked_edge_increment,
    neighbors,
)

LOG4 = math.log(4.0)

SAW_ENUM_CAP = 4
LOOP_ENUM_CAP = 16


def validate_path(w: Sequence[Point]) -> None:
    if len(w) == 0:
        raise ValueError("empty path")
    for a, b in zip(w, w[1:]):
        if not is_edge(a, b):
            raise ValueError(f"non-adjacent step {a} -> {b}")


def srw_weight_log(w: Sequence[Point]) -> float:
    """log p(w) = -|w| log 4 for a |w|-step path."""
    validate_path(w)
    return -(len(w) - 1) * LOG4


def crossing_number(w: Sequence[Point]) -> int:
    """Number of steps of ``w`` across the ray {x = 1/2, y <= -1}."""
    validate_path(w)
    return sum(crossing_parity_increment(a, b) for a, b in zip(w, w[1:]))


def edge_signature(w: Sequence[Point]) -> int:
    """Signed use count of the marked edge: (0,0)->(1,0) minus reverse."""
    validate_path(w)
    return sum(marked_edge_increment(a, b) for a, b in zip(w, w[1:]))


def uses_marked_edge(w: Sequence[Point]) -> bool:
    """True if ``w`` traverses the unordered edge {(0,0),(1,0)}."""
    return any(
        {a, b} == {EDGE_0, EDGE_1} for a, b in zip(w, w[1:])
    )


def loop_erase(w: Sequence[Point]) -> list[Point]:
    """Chronological loop-erasure: scan forward, deleting each cycle as it
    closes.  The result is self-avoiding with the same endpoints."""
    validate_path(w)
    path: list[Point] = []
    pos: dict[Point, int] = {}
    for p in w:
        if p in pos:
            for q in path[pos[p] + 1 :]:
                del pos[q]
            del path[pos[p] + 1 :]
        else:
            pos[p] = len(path)
            path.append(p)
    return path


def is_self_avoiding(w: Sequence[Point]) -> bool:
    return len(set(w)) == len(w)


def is_crossing_saw(d: LatticeDomain, w: Sequence[Point]) -> bool:
    """Membership test for the left-to-right crossing SAWs of ``d``."""
    if len(w) < 2 or not is_self_avoiding(w):
        return False
    try:
        validate_path(w)
    except ValueError:
        return False
    if w[0] not in d.left_boundary or w[-1] not in d.right_boundary:
        return False
    return all(p in d.interior_index for p in w[1:-1])


def enumerate_crossing_saws(
    d: LatticeDomain, cap: int = SAW_ENUM_CAP
) -> Iterator[list[Point]]:
    """Yield every SAW from the left boundary to the right boundary with all
    intermediate points interior, each exactly once.

    Exponential in n; refuses n above ``cap`` (default 4).
    """
    if d.n > cap:
        raise ValueError(f"enumeration capped at n <= {cap}: domain has n = {d.n}")
    for start in d.left_boundary:
        first = d.interior_neighbor(start)
        yield from _extend_saw(d, [start, first], {start, first})


def _extend_saw(
    d: LatticeDomain, path: list[Point], onpath: set[Point]
) -> Iterator[list[Point]]:
    v = path[-1]
    if v[0] == d.n:
        yield path + [(d.n + 1, v[1])]
    for q in neighbors(v):
        if q in d.interior_index and q not in onpath:
            path.append(q)
            onpath.add(q)
            yield from _extend_saw(d, path, onpath)
            path.pop()
            onpath.remove(q)


def enumerate_saws_between(
    d: LatticeDomain, z1: Point, z2: Point, cap: int = SAW_ENUM_CAP
) -> Iterator[list[Point]]:
    """Yield every SAW from boundary point z1 to boundary point z2 with all
    intermediate points interior."""
    if d.n > cap:
        raise ValueError(f"enumeration capped at n <= {cap}: domain has n = {d.n}")
    if z1 not in d.boundary or z2 not in d.boundary:
        raise ValueError("endpoints must lie on the boundary")
    if z1 == z2:
        return
    first = d.interior_neighbor(z1)
    last = d.interior_neighbor(z2)
    stack = [z1, first]

    def rec() -> Iterator[list[Point]]:
        v = stack[-1]
        if v == last:
            yield stack + [z2]
        for q in neighbors(v):
            if q in d.interior_index and q not in onpath:
                stack.append(q)
                onpath.add(q)
                yield from rec()
                stack.pop()
                onpath.remove(q)

    onpath = {first}
    yield from rec()


@dataclass(frozen=True)
class UnrootedLoop:
    """An oriented unrooted loop: the canonical rotation of its closed point
    sequence (least in raster order, so rooted at the raster-minimal vertex),
    plus the number of distinct rotations d(l)."""

    representative: tuple[Point, ...]
    multiplicity: int

    @property
    def length(self) -> int:
        return len(self.representative) - 1

    def m_weight(self) -> float:
        """Loop-measure weight 4^{-|l|} d(l) / |l|."""
        return 4.0 ** (-self.length) * self.multiplicity / self.length

    def crossing_number(self) -> int:
        # representative is adjacent-by-construction; skip revalidation
        rep = self.representative
        count = 0
        for (ax, ay), (bx, by) in zip(rep, rep[1:]):
            if ay == by and ay <= -1 and ax + bx == 1:
                count += 1
        return count

    def edge_signature(self) -> int:
        rep = self.representative
        sig = 0
        for a, b in zip(rep, rep[1:]):
            if a == EDGE_0 and b == EDGE_1:
                sig += 1
            elif a == EDGE_1 and b == EDGE_0:
                sig -= 1
        return sig

    def visits(self, p: Point) -> bool:
        return p in self.representative


def _canonical_rotation(cycle: tuple[int, ...]) -> tuple[tuple[int, ...], int]:
    """(lex-least rotation, number of distinct rotations) of an open cycle
    l_0..l_{2k-1} of interior indices."""
    L = len(cycle)
    rotations = {cycle[j:] + cycle[:j] for j in range(L)}
    best = min(rotations)
    return best, len(rotations)


def enumerate_loops_upto(
    d: LatticeDomain, max_len: int, cap: int = LOOP_ENUM_CAP
) -> Iterator[UnrootedLoop]:
    """Yield every oriented unrooted loop in the interior with at most
    ``max_len`` steps, each exactly once, with its rotation multiplicity.

    Loops are found by closed-walk DFS from each root restricted to points
    at or after the root in raster order, so the root is the loop's raster
    minimum; duplicates from repeated root visits are removed by
    canonicalization.  The DFS runs over raster indices; points reappear
    only in the yielded representative.
    """
    if max_len % 2 != 0:
        raise ValueError("max_len must be even (closed walks on Z^2)")
    if max_len > cap:
        raise ValueError(f"loop enumeration capped at length {cap}: got {max_len}")
    nbr_lists = [
        [j for q in neighbors(p) if (j := d.interior_index.get(q)) is not None]
        for p in d.interior
    ]
    points = d.interior
    seen: set[tuple[int, ...]] = set()
    for rmin in range(len(points)):
        walk: list[int] = [rmin]

        def rec() -> Iterator[UnrootedLoop]:
            depth = len(walk)
            for j in nbr_lists[walk[-1]]:
                if j < rmin:
                    continue
                if j == rmin and depth >= 2:
                    canon, mult = _canonical_rotation(tuple(walk))
                    if canon not in seen:
                        seen.add(canon)
                        rep = tuple(points[i] for i in canon) + (points[canon[0]],)
                        yield UnrootedLoop(rep, mult)
                if depth < max_len:
                    walk.append(j)
                    yield from rec()
                    walk.pop()

        yield from rec()
