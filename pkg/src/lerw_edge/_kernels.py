"""Numba kernels: exhaustive weighted SAW sums and Monte Carlo samplers.

The SAW kernel walks the DFS tree of self-avoiding prefixes while
maintaining the dense Green's matrix of the domain minus the prefix via
rank-1 downdates (removing vertex u maps G to G - G[:,u] G[u,:] / G[u,u],
zeroing u's row and column); restores on backtrack add the saved outer
product back.  The telescoped product of diagonals then gives the
loop-erased measure of each completed SAW without any per-path solve.

Exact float results: weights are products of 0.25 * diagonal factors,
safely above underflow at the enumeration cap (n <= 4).
"""

from __future__ import annotations

import numpy as np
from numba import njit

STEP_DX = np.array([1, -1, 0, 0], dtype=np.int64)
STEP_DY = np.array([0, 0, 1, -1], dtype=np.int64)


@njit(cache=True)
def _downdate(G, save_row, save_col, u):
    n = G.shape[0]
    piv = G[u, u]
    for a in range(n):
        save_row[a] = G[u, a]
        save_col[a] = G[a, u]
    for a in range(n):
        ca = save_col[a] / piv
        if ca != 0.0:
            for b in range(n):
                G[a, b] -= ca * save_row[b]
    return piv


@njit(cache=True)
def _restore(G, save_row, save_col, piv):
    n = G.shape[0]
    for a in range(n):
        ca = save_col[a] / piv
        if ca != 0.0:
            for b in range(n):
                G[a, b] += ca * save_row[b]


@njit(cache=True)
def saw_weight_sums(G0, nbrs, deg, xs, ys, start, end_idx, right_x, e0, e1):
    """DFS over SAWs starting from interior vertex ``start``.

    end_idx >= 0: accept when the path ends at end_idx (fixed exit);
    otherwise accept at every vertex with x == right_x (crossing exit).
    Each acceptance contributes weight * 1/4 for the step off the domain.

    Returns (total, total_edge, n_saws, n_edge_saws, n_plus, n_minus,
    parity_violations) where the edge figures are restricted to SAWs using
    the marked edge (e0, e1), split by traversal direction, and parity
    violations count accepted edge-SAWs with (-1)^J Y != 1.
    """
    N = G0.shape[0]
    G = G0.copy()
    maxd = N + 1
    path = np.empty(maxd, np.int64)
    nbr_ptr = np.empty(maxd, np.int64)
    weight = np.empty(maxd, np.float64)
    edge_dir = np.empty(maxd, np.int64)
    jpar = np.empty(maxd, np.int64)
    pivots = np.empty(maxd, np.float64)
    save_rows = np.empty((maxd, N), np.float64)
    save_cols = np.empty((maxd, N), np.float64)
    onpath = np.zeros(N, np.bool_)

    total = 0.0
    total_edge = 0.0
    n_saws = 0
    n_edge = 0
    n_plus = 0
    n_minus = 0
    violations = 0

    depth = 0
    path[0] = start
    nbr_ptr[0] = 0
    weight[0] = 0.25 * G[start, start]
    edge_dir[0] = 0
    jpar[0] = 0
    onpath[start] = True
    pivots[0] = _downdate(G, save_rows[0], save_cols[0], start)

    while depth >= 0:
        v = path[depth]
        if nbr_ptr[depth] == 0:
            accept = (v == end_idx) if end_idx >= 0 else (xs[v] == right_x)
            if accept:
                w = weight[depth] * 0.25
                total += w
                n_saws += 1
                if edge_dir[depth] != 0:
                    total_edge += w
                    n_edge += 1
                    if edge_dir[depth] > 0:
                        n_plus += 1
                    else:
                        n_minus += 1
                    even = jpar[depth] == 0
                    ok = (edge_dir[depth] == 1) == even
                    if not ok:
                        violations += 1
        advanced = False
        while nbr_ptr[depth] < deg[v]:
            u = nbrs[v, nbr_ptr[depth]]
            nbr_ptr[depth] += 1
            if onpath[u]:
                continue
            ed = edge_dir[depth]
            if v == e0 and u == e1:
                ed = 1
            elif v == e1 and u == e0:
                ed = -1
            jp = jpar[depth]
            if ys[v] == ys[u] and ys[v] <= -1 and xs[v] + xs[u] == 1:
                jp = 1 - jp
            depth += 1
            path[depth] = u
            nbr_ptr[depth] = 0
            weight[depth] = weight[depth - 1] * 0.25 * G[u, u]
            edge_dir[depth] = ed
            jpar[depth] = jp
            onpath[u] = True
            pivots[depth] = _downdate(G, save_rows[depth], save_cols[depth], u)
            advanced = True
            break
        if not advanced:
            onpath[v] = False
            _restore(G, save_rows[depth], save_cols[depth], pivots[depth])
            depth -= 1

    return total, total_edge, n_saws, n_edge, n_plus, n_minus, violations


@njit(cache=True)
def crossing_mc_chunk(gen, attempts, n, mode, sx, sy, fx, fy, ex, ey, guard):
    """Rejection-sample crossing walks, loop-erasing on line.

    mode 0: start uniform on the left boundary, accept on right-boundary
    exit.  mode 1: start at (sx, sy) with required first step to (fx, fy),
    accept on exit exactly at (ex, ey).

    The loop-erased path is maintained as a stack with a position grid;
    revisiting a stacked point truncates back to it (chronological
    erasure).  Returns (accepted, edge_hits) where edge_hits counts
    accepted walks whose erasure uses the unordered marked edge.
    """
    width = 2 * n + 2
    height = 2 * n + 1
    mark = np.full((width, height), -1, np.int64)
    cap = 2 * n * (2 * n - 1) + 3
    stack_x = np.empty(cap, np.int64)
    stack_y = np.empty(cap, np.int64)

    accepted = 0
    edge_hits = 0

    for _ in range(attempts):
        if mode == 0:
            y0 = -n + 1 + gen.integers(0, 2 * n - 1)
            x0 = -n
            first_x, first_y = -n + 1, y0
        else:
            x0, y0 = sx, sy
            first_x, first_y = fx, fy
        d = gen.integers(0, 4)
        if x0 + STEP_DX[d] != first_x or y0 + STEP_DY[d] != first_y:
            continue
        top = 0
        stack_x[top] = x0
        stack_y[top] = y0
        mark[x0 + n, y0 + n] = top
        top += 1
        stack_x[top] = first_x
        stack_y[top] = first_y
        mark[first_x + n, first_y + n] = top
        cx, cy = first_x, first_y
        steps = 1
        hit = -1  # -1 walking, 0 rejected, 1 accepted
        while hit < 0:
            d = gen.integers(0, 4)
            qx = cx + STEP_DX[d]
            qy = cy + STEP_DY[d]
            steps += 1
            if steps > guard:
                raise RuntimeError("walk exceeded the step guard")
            if -n + 1 <= qx <= n and -n + 1 <= qy <= n - 1:
                m = mark[qx + n, qy + n]
                if m >= 0:
                    while top > m:
                        mark[stack_x[top] + n, stack_y[top] + n] = -1
                        top -= 1
                else:
                    top += 1
                    stack_x[top] = qx
                    stack_y[top] = qy
                    mark[qx + n, qy + n] = top
                cx, cy = qx, qy
            else:
                if mode == 0:
                    hit = 1 if qx == n + 1 else 0
                else:
                    hit = 1 if (qx == ex and qy == ey) else 0
                if hit == 1:
                    top += 1
                    stack_x[top] = qx
                    stack_y[top] = qy
        if hit == 1:
            accepted += 1
            for i in range(top):
                ax, ay = stack_x[i], stack_y[i]
                bx, by = stack_x[i + 1], stack_y[i + 1]
                if ay == 0 and by == 0 and ax + bx == 1:
                    edge_hits += 1
                    break
        # clear marks (the accepted exit point was never marked)
        last = top if hit == 0 else top - 1
        for i in range(last + 1):
            mark[stack_x[i] + n, stack_y[i] + n] = -1

    return accepted, edge_hits


@njit(cache=True)
def s_constant_chunk(gen, samples, cutoff_sq, guard):
    """Signed first-return excursions from the origin.

    Each excursion contributes (-1)^J on return to the origin, 0 if it
    leaves the cutoff disk first.  Steps are drawn two bits at a time from
    buffered 62-bit words; excursions are long, so per-step generator
    calls would dominate.  Returns (signed_sum, returned, truncated).
    """
    signed_sum = 0
    returned = 0
    truncated = 0
    buf = np.int64(0)
    left = 0
    for _ in range(samples):
        x = 0
        y = 0
        jpar = 0
        steps = 0
        while True:
            if left == 0:
                buf = gen.integers(0, 4611686018427387904)  # 2**62
                left = 31
            d = buf & 3
            buf >>= 2
            left -= 1
            qx = x + STEP_DX[d]
            qy = y + STEP_DY[d]
            steps += 1
            if steps > guard:
                raise RuntimeError("excursion exceeded the step guard")
            if qy == y and y <= -1 and x + qx == 1:
                jpar = 1 - jpar
            x, y = qx, qy
            if x == 0 and y == 0:
                returned += 1
                signed_sum += -1 if jpar else 1
                break
            if x * x + y * y > cutoff_sq:
                truncated += 1
                break
    return signed_sum, returned, truncated
