"""Distances between per-tip features.

The radius profiles are compared with the discrete Frechet distance (the
longest link of the best monotone coupling), the mass/length and axis-value
components with normalized squared differences, and the three terms combine
linearly under two adjustable weights.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatch, ZeroDenominator
from .rts import EndFeature


@dataclass(frozen=True)
class MatchParams:
    """beta1 weighs the mass/length term, beta2 the axis-alignment term."""

    beta1: float = 30.0
    beta2: float = 0.6
    alpha: float = 0.65


def discrete_frechet(p, q) -> float:
    """Min over monotone couplings of the max pointwise gap; ends coupled.

    Scalar sequences of equal length; ground distance is |u - v|.
    """
    pl = [float(v) for v in p]
    ql = [float(v) for v in q]
    if len(pl) != len(ql):
        raise LengthMismatch(f"sequence lengths differ: {len(pl)} vs {len(ql)}")
    if not pl:
        raise LengthMismatch("empty sequences")
    n = len(pl)
    row = [0.0] * n
    q0 = ql[0]
    acc = 0.0
    p0 = pl[0]
    for j in range(n):
        d = abs(p0 - ql[j])
        if d > acc:
            acc = d
        row[j] = acc
    for i in range(1, n):
        pi = pl[i]
        prev_diag = row[0]
        d = abs(pi - q0)
        row[0] = d if d > row[0] else row[0]
        for j in range(1, n):
            tmp = row[j]
            best = prev_diag
            if row[j] < best:
                best = row[j]
            if row[j - 1] < best:
                best = row[j - 1]
            d = abs(pi - ql[j])
            row[j] = d if d > best else best
            prev_diag = tmp
    return row[n - 1]


def frechet_pairwise(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Discrete Frechet distances between every row of ``u`` and of ``v``.

    Rows are scalar sequences of one shared length; the dynamic program runs
    over antidiagonals with the pair grid as a batch axis.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.ndim != 2 or v.ndim != 2 or u.shape[1] != v.shape[1]:
        raise LengthMismatch("need 2-D arrays with a shared sample count")
    n = u.shape[1]
    a, b = u.shape[0], v.shape[0]
    if a * b * n * n > 40_000_000:
        return _frechet_pairwise_chunked(u, v)
    dp = np.empty((a, b, n, n), dtype=float)
    d = np.abs(u[:, None, :, None] - v[None, :, None, :])  # (a, b, n, n)
    dp[:, :, 0, 0] = d[:, :, 0, 0]
    for i in range(1, n):
        dp[:, :, i, 0] = np.maximum(dp[:, :, i - 1, 0], d[:, :, i, 0])
        dp[:, :, 0, i] = np.maximum(dp[:, :, 0, i - 1], d[:, :, 0, i])
    for i in range(1, n):
        for j in range(1, n):
            best = np.minimum(dp[:, :, i - 1, j], dp[:, :, i, j - 1])
            np.minimum(best, dp[:, :, i - 1, j - 1], out=best)
            np.maximum(best, d[:, :, i, j], out=best)
            dp[:, :, i, j] = best
    return dp[:, :, n - 1, n - 1]


def _frechet_pairwise_chunked(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    out = np.empty((u.shape[0], v.shape[0]), dtype=float)
    for i in range(u.shape[0]):
        for j in range(v.shape[0]):
            out[i, j] = discrete_frechet(u[i], v[j])
    return out


def mass_length_distance(p: EndFeature, q: EndFeature, alpha: float = 0.65) -> float:
    """Normalized squared mass and length gaps blended by ``alpha``."""
    ms = p.mass + q.mass
    ls = p.length + q.length
    if ms == 0.0 or ls == 0.0:
        raise ZeroDenominator("mass or length sums to zero")
    d_m = (p.mass - q.mass) ** 2 / ms
    d_l = (p.length - q.length) ** 2 / ls
    return alpha * d_l + (1.0 - alpha) * d_m


def spatial_distance(p: EndFeature, q: EndFeature) -> float:
    """Normalized squared axis-value gap; both-zero resolves to 0 by symmetry."""
    s = p.axis_value + q.axis_value
    if s == 0.0:
        return 0.0
    return (p.axis_value - q.axis_value) ** 2 / s


def endpoint_distance(p: EndFeature, q: EndFeature, params: MatchParams | None = None) -> float:
    """Frechet on radius profiles plus the weighted mass/length and axis terms."""
    params = params or MatchParams()
    d_f = discrete_frechet(p.radii, q.radii)
    return d_f + params.beta1 * mass_length_distance(p, q, params.alpha) + params.beta2 * spatial_distance(p, q)


def distance_matrix(
    x_features, y_features, params: MatchParams | None = None
) -> np.ndarray:
    """All-pairs endpoint distances between two feature sequences."""
    params = params or MatchParams()
    u = np.stack([f.radii for f in x_features])
    v = np.stack([f.radii for f in y_features])
    d_f = frechet_pairwise(u, v)
    mx = np.array([f.mass for f in x_features])
    my = np.array([f.mass for f in y_features])
    lx = np.array([f.length for f in x_features])
    ly = np.array([f.length for f in y_features])
    vx = np.array([f.axis_value for f in x_features])
    vy = np.array([f.axis_value for f in y_features])
    d_m = (mx[:, None] - my[None, :]) ** 2 / (mx[:, None] + my[None, :])
    d_l = (lx[:, None] - ly[None, :]) ** 2 / (lx[:, None] + ly[None, :])
    vs = vx[:, None] + vy[None, :]
    with np.errstate(invalid="ignore", divide="ignore"):
        d_v = np.where(vs > 0, (vx[:, None] - vy[None, :]) ** 2 / np.where(vs > 0, vs, 1.0), 0.0)
    return d_f + params.beta1 * (params.alpha * d_l + (1 - params.alpha) * d_m) + params.beta2 * d_v
