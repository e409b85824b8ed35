"""Elastic matching of tip-feature sequences.

An optimal subsequence bijection pairs the two contour-ordered sequences
monotonically, allowed to skip outlier elements of either sequence for a
data-driven jump cost per skipped element, solved as a shortest path over
index pairs.  The global cost additionally penalizes the tip-count
imbalance.  A cyclic-shift search over the longer sequence removes the
start ambiguity of contour ordering.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyInput
from .metric import MatchParams, distance_matrix


@dataclass(frozen=True)
class MatchResult:
    raw_cost: float
    global_cost: float
    jumpcost: float
    correspondence: tuple[tuple[int, int], ...]  # (index in x, index in y)
    shift: int  # cyclic shift applied to the longer sequence
    shifted: str  # which input was shifted: "x" | "y"


def jump_cost(d: np.ndarray) -> float:
    """Mean plus population standard deviation of the per-row minima."""
    d = np.asarray(d, dtype=float)
    if d.size == 0:
        raise EmptyInput("empty distance matrix")
    row_min = d.min(axis=1)
    return float(row_min.mean() + row_min.std())


def global_cost(raw_cost: float, m: int, n: int) -> float:
    """Penalize the tip-count imbalance at the average matched-element rate."""
    const = raw_cost / min(m, n)
    return raw_cost + const * abs(m - n)


def osb_match(d: np.ndarray, jumpcost: float) -> tuple[float, tuple[tuple[int, int], ...]]:
    """Minimum-cost monotone correspondence with skip penalties.

    Transitions advance both indices; adjacent steps are free, larger steps
    must skip on both axes and charge ``jumpcost`` per skipped element of
    either sequence.  Leading and trailing stretches reach virtual
    source/sink nodes, likewise charged per skipped element.  Cost ties
    resolve toward more matched pairs (so identical sequences map
    identically even at zero jump cost).  If the matrix is wider than tall
    it is transposed internally and the pairs swapped back.
    """
    d = np.asarray(d, dtype=float)
    if d.size == 0:
        raise EmptyInput("empty distance matrix")
    if d.shape[0] > d.shape[1]:
        cost, corr = osb_match(d.T, jumpcost)
        return cost, tuple(sorted((j, i) for i, j in corr))

    m, n = d.shape
    jc = float(jumpcost)
    cost = [[0.0] * n for _ in range(m)]
    npair = [[0] * n for _ in range(m)]
    choice = [[0] * n for _ in range(m)]  # 0 start, 1 diagonal, 2 jump
    jump_arg: dict[tuple[int, int], tuple[int, int]] = {}
    # prefix best of (cost[i][j] - (i + j + 2) * jc, pair count) over rows <= a, cols <= b
    hc = [[np.inf] * n for _ in range(m)]
    hp = [[0] * n for _ in range(m)]
    ha: dict[tuple[int, int], tuple[int, int]] = {}

    def better(c1: float, p1: int, c2: float, p2: int) -> bool:
        return c1 < c2 or (c1 == c2 and p1 > p2)

    for i in range(m):
        di = d[i]
        for j in range(n):
            bc, bp, ch = (i + j) * jc, 0, 0  # start here: leading skips on both axes
            if i >= 1 and j >= 1 and better(cost[i - 1][j - 1], npair[i - 1][j - 1], bc, bp):
                bc, bp, ch = cost[i - 1][j - 1], npair[i - 1][j - 1], 1
            if i >= 2 and j >= 2:
                cc = hc[i - 2][j - 2] + (i + j) * jc
                if better(cc, hp[i - 2][j - 2], bc, bp):
                    bc, bp, ch = cc, hp[i - 2][j - 2], 2
                    jump_arg[(i, j)] = ha[(i - 2, j - 2)]
            cost[i][j] = bc + di[j]
            npair[i][j] = bp + 1
            choice[i][j] = ch
        # fold row i into the prefix structure (usable from row i + 2 on)
        for j in range(n):
            bh, bp2, ba = cost[i][j] - (i + j + 2) * jc, npair[i][j], (i, j)
            if j >= 1 and better(hc[i][j - 1], hp[i][j - 1], bh, bp2):
                bh, bp2, ba = hc[i][j - 1], hp[i][j - 1], ha[(i, j - 1)]
            if i >= 1 and better(hc[i - 1][j], hp[i - 1][j], bh, bp2):
                bh, bp2, ba = hc[i - 1][j], hp[i - 1][j], ha[(i - 1, j)]
            hc[i][j] = bh
            hp[i][j] = bp2
            ha[(i, j)] = ba

    bi = bj = 0
    bc, bp = np.inf, 0
    for i in range(m):
        for j in range(n):
            tc = cost[i][j] + (m - 1 - i + n - 1 - j) * jc  # trailing skips, both axes
            if better(tc, npair[i][j], bc, bp):
                bc, bp, bi, bj = tc, npair[i][j], i, j
    pairs = []
    i, j = bi, bj
    while True:
        pairs.append((i, j))
        ch = choice[i][j]
        if ch == 0:
            break
        if ch == 1:
            i, j = i - 1, j - 1
        else:
            i, j = jump_arg[(i, j)]
    pairs.reverse()
    return float(bc), tuple(pairs)


def match_shapes(x, y, params: MatchParams | None = None, rotation_search: bool = True) -> MatchResult:
    """Distance matrix, jump cost, elastic bijection, and the global cost.

    ``x`` and ``y`` are records exposing ``features``.  With
    ``rotation_search`` every cyclic shift of the longer sequence is scored
    and the cheapest kept, so the contour start point does not matter.
    """
    params = params or MatchParams()
    fx, fy = list(x.features), list(y.features)
    if not fx or not fy:
        raise EmptyInput("cannot match an empty record")
    d0 = distance_matrix(fx, fy, params)
    m0, n0 = d0.shape

    swapped = m0 > n0
    d = d0.T if swapped else d0
    n = d.shape[1]
    jc = jump_cost(d)

    shifts = range(n) if rotation_search else (0,)
    best = None
    for s in shifts:
        ds = np.roll(d, -s, axis=1) if s else d
        raw, corr = osb_match(ds, jc)
        if best is None or raw < best[0] or (raw == best[0] and len(corr) > len(best[1])):
            unrolled = tuple((i, (j + s) % n) for i, j in corr)
            best = (raw, unrolled, s)
    raw, corr, shift = best
    if swapped:
        corr = tuple(sorted((j, i) for i, j in corr))
    return MatchResult(
        raw_cost=raw,
        global_cost=global_cost(raw, m0, n0),
        jumpcost=jc,
        correspondence=corr,
        shift=shift,
        shifted="x" if swapped else "y",
    )
