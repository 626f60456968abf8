"""Stochastic oracle: rejection sampling of the crossing measure with
on-line loop-erasure, and the signed first-return excursion constant.

Sampling is chunked over counter-based Philox streams keyed by
(seed, chunk index), so results are reproducible regardless of how chunks
are scheduled, and chunk aggregation is associative counting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernels import crossing_mc_chunk, s_constant_chunk
from .lattice import LatticeDomain, Point, neighbors
from .walks import loop_erase

DEFAULT_CHUNK = 1 << 16
STEP_GUARD = 10**9
DEFAULT_S_CUTOFF_LOG = 6.0


@dataclass(frozen=True)
class McConfig:
    n: int
    samples: int
    seed: int
    variant: str = "theorem31"
    zeta: tuple[Point, Point] | None = None
    chunk_size: int = DEFAULT_CHUNK

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.variant not in ("theorem31", "theorem51"):
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.variant == "theorem51" and self.zeta is None:
            raise ValueError("variant theorem51 requires a boundary pair")


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    accepted: int
    attempted: int
    edge_hits: int


@dataclass(frozen=True)
class SConstantEstimate:
    mean: float
    std_error: float
    truncated_fraction: float
    samples: int


def _chunk_generator(seed: int, chunk: int) -> np.random.Generator:
    key = np.array([seed & (2**64 - 1), chunk], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sample_crossing(
    d: LatticeDomain, rng: np.random.Generator
) -> list[Point] | None:
    """One rejection-sampling attempt; the full walk path on acceptance.

    The start is uniform on the left boundary; the walk runs until it first
    leaves the interior, and is accepted iff it exits through the right
    boundary.  Accepted walks carry the law of the crossing measure.
    """
    n = d.n
    start = d.left_boundary[int(rng.integers(0, len(d.left_boundary)))]
    path = [start]
    cur = start
    entry = d.interior_neighbor(start)
    steps = 0
    while True:
        step = int(rng.integers(0, 4))
        nxt = neighbors(cur)[step]
        steps += 1
        if steps > STEP_GUARD:
            raise RuntimeError("walk exceeded the step guard")
        path.append(nxt)
        if len(path) == 2 and nxt != entry:
            return None
        if nxt in d.interior_index:
            cur = nxt
            continue
        return path if nxt in d.right_boundary else None


def estimate_edge_probability(cfg: McConfig) -> McEstimate:
    """Estimate the loop-erased edge-use mass by rejection sampling.

    theorem31: mean estimates the total edge-using measure over crossing
    SAWs, |left boundary| * P(accept and erased walk uses the edge).
    theorem51: single fixed start/end pair, scale 1.
    """
    d = LatticeDomain(cfg.n)
    if cfg.variant == "theorem31":
        scale = float(len(d.left_boundary))
        mode, sx, sy, fx, fy, ex, ey = 0, 0, 0, 0, 0, 0, 0
    else:
        z1, z2 = cfg.zeta
        for z in (z1, z2):
            if z not in d.boundary:
                raise ValueError(f"{z} is not on the boundary of {d!r}")
        if z1 == z2:
            raise ValueError("theorem51 variant requires distinct endpoints")
        scale = 1.0
        f = d.interior_neighbor(z1)
        mode, (sx, sy), (fx, fy), (ex, ey) = 1, z1, f, z2
    accepted = attempted = edge_hits = 0
    remaining = cfg.samples
    chunk = 0
    while remaining > 0:
        size = min(cfg.chunk_size, remaining)
        gen = _chunk_generator(cfg.seed, chunk)
        acc, hits = crossing_mc_chunk(
            gen, size, cfg.n, mode, sx, sy, fx, fy, ex, ey, STEP_GUARD
        )
        accepted += acc
        edge_hits += hits
        attempted += size
        remaining -= size
        chunk += 1
    p = edge_hits / attempted
    mean = scale * p
    std_error = scale * math.sqrt(p * (1.0 - p) / attempted)
    return McEstimate(mean, std_error, accepted, attempted, edge_hits)


def estimate_s_constant(
    samples: int,
    seed: int,
    cutoff_log: float = DEFAULT_S_CUTOFF_LOG,
    chunk_size: int = DEFAULT_CHUNK,
) -> SConstantEstimate:
    """Monte Carlo E[(-1)^J] over first-return excursions of the walk from
    the origin, each truncated at radius exp(cutoff_log).

    Truncated excursions contribute 0, matching the killed convention of
    the signed Green's function on the cutoff disk; their fraction is
    reported so the truncation bias is visible.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    cutoff_sq = int(math.exp(2.0 * cutoff_log))
    signed_sum = returned = truncated = 0
    remaining, chunk = samples, 0
    while remaining > 0:
        size = min(chunk_size, remaining)
        gen = _chunk_generator(seed, chunk)
        s, r, t = s_constant_chunk(gen, size, cutoff_sq, STEP_GUARD)
        signed_sum += s
        returned += r
        truncated += t
        remaining -= size
        chunk += 1
    mean = signed_sum / samples
    # per-excursion values are in {-1, 0, +1}; E[v^2] = returned fraction
    var = returned / samples - mean * mean
    std_error = math.sqrt(max(var, 0.0) / samples)
    return SConstantEstimate(mean, std_error, truncated / samples, samples)
