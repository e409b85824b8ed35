"""Procedural articulated silhouettes for demos, tests, and benchmarks.

Each class is a small assembly of tapered capsules and ellipses with seeded
per-instance jitter on joint angles and proportions, so a class behaves like
a family of articulated poses of one object.  Helpers write datasets in the
two benchmark layouts used by the evaluation harness: 14 classes x 4 shapes
and 9 classes x 11 shapes, as binary PGM files named ``<class>_<idx>.pgm``.
"""

from __future__ import annotations

import os

import numpy as np

CANVAS = 360
ZOOM = 1.8  # primitives are laid out in 200-unit coordinates, rendered zoomed

TARI_CLASSES = (
    "hand",
    "man",
    "horse",
    "cattle",
    "sheep",
    "dog",
    "cat",
    "fox",
    "rabbit",
    "spider",
    "airplane",
    "fish",
    "ray",
    "hammer",
)

KIMIA_CLASSES = (
    "hand",
    "man",
    "quadruped",
    "airplane",
    "fish",
    "ray",
    "rabbit",
    "hammer",
    "star",
)


_STRETCH = [1.0, 1.0]  # per-instance aspect jitter, set by make_shape


def _grid(size: int = CANVAS):
    yy, xx = np.mgrid[0:size, 0:size]
    return yy / (ZOOM * _STRETCH[1]), xx / (ZOOM * _STRETCH[0])


def _capsule(mask, p0, p1, r0, r1=None):
    """Union a tapered capsule from p0 to p1 (points are (x, y))."""
    yy, xx = _grid(mask.shape[0])
    p0 = np.asarray(p0, float)
    p1 = np.asarray(p1, float)
    r1 = r0 if r1 is None else r1
    d = p1 - p0
    ln2 = float(d @ d)
    if ln2 == 0:
        return mask | ((xx - p0[0]) ** 2 + (yy - p0[1]) ** 2 <= r0**2)
    t = np.clip(((xx - p0[0]) * d[0] + (yy - p0[1]) * d[1]) / ln2, 0.0, 1.0)
    cx = p0[0] + t * d[0]
    cy = p0[1] + t * d[1]
    rr = r0 + (r1 - r0) * t
    return mask | ((xx - cx) ** 2 + (yy - cy) ** 2 <= rr**2)


def _ellipse(mask, center, rx, ry, angle=0.0):
    yy, xx = _grid(mask.shape[0])
    ca, sa = np.cos(angle), np.sin(angle)
    dx = xx - center[0]
    dy = yy - center[1]
    u = ca * dx + sa * dy
    v = -sa * dx + ca * dy
    return mask | ((u / rx) ** 2 + (v / ry) ** 2 <= 1.0)


def _polar(origin, angle, length):
    return (origin[0] + length * np.cos(angle), origin[1] + length * np.sin(angle))


def _quadruped(rng, *, body_r, body_len, leg_len, leg_r, neck_len, neck_r,
               head_rx, head_ry, tail_len, tail_r, tail_up, horns=0.0, ears=0.0,
               muzzle=0.0, leg_spread=12.0):
    m = np.zeros((CANVAS, CANVAS), dtype=bool)
    cx, cy = 100 + rng.uniform(-4, 4), 104 + rng.uniform(-4, 4)
    shoulder = (cx - body_len / 2, cy)
    hip = (cx + body_len / 2, cy)
    # taper toward the hip so the root junction stays at the shoulder end
    m = _capsule(m, shoulder, hip, body_r * 1.08, body_r * 0.88)

    # side view with a gait: four legs at distinct body positions, splayed out
    for base_x, tilt in (
        (shoulder[0] - leg_spread * 0.7, 0.26),
        (shoulder[0] + leg_spread * 0.9, -0.10),
        (hip[0] - leg_spread * 0.9, 0.10),
        (hip[0] + leg_spread * 0.6, -0.26),
    ):
        ang = np.pi / 2 + tilt + rng.uniform(-0.10, 0.10)
        top = (base_x, cy + body_r * 0.3)
        foot = _polar(top, ang, leg_len * rng.uniform(0.95, 1.05))
        m = _capsule(m, top, foot, leg_r, leg_r * 0.75)

    neck_ang = -np.pi * 0.42 + rng.uniform(-0.18, 0.18)
    neck_base = (shoulder[0] + body_r * 0.2, shoulder[1] - body_r * 0.35)
    head_c = _polar(neck_base, np.pi + neck_ang, -neck_len * rng.uniform(0.94, 1.06))  # up-left of shoulder
    m = _capsule(m, neck_base, head_c, neck_r, neck_r * 0.8)
    m = _ellipse(m, head_c, head_rx, head_ry, angle=rng.uniform(-0.2, 0.2))
    if muzzle > 0:
        tip = (head_c[0] - muzzle, head_c[1] + muzzle * 0.25)
        m = _capsule(m, head_c, tip, head_ry * 0.55, head_ry * 0.4)
    if horns > 0:
        for k in (-1, 1):
            a = -np.pi / 2 + k * 0.5 + rng.uniform(-0.08, 0.08)
            m = _capsule(m, head_c, _polar(head_c, a, horns), 3.4, 2.6)
    if ears > 0:
        a = -np.pi / 2 + 0.45 + rng.uniform(-0.1, 0.1)
        m = _capsule(m, head_c, _polar(head_c, a, ears), 4.8, 3.6)

    tail_ang = (-tail_up if tail_up else 0.35) + rng.uniform(-0.30, 0.30)
    tail_base = (hip[0] + body_r * 0.35, hip[1] - body_r * 0.4)
    m = _capsule(m, tail_base, _polar(tail_base, tail_ang, tail_len * rng.uniform(0.95, 1.05)), tail_r, tail_r * 0.6)
    return m


def _hand(rng):
    m = np.zeros((CANVAS, CANVAS), dtype=bool)
    palm = (100 + rng.uniform(-3, 3), 120 + rng.uniform(-3, 3))
    m = _ellipse(m, palm, 30, 34)
    for i in range(5):
        base_a = -np.pi / 2 + (i - 2) * 0.30
        a = base_a + rng.uniform(-0.10, 0.10)
        base = _polar(palm, base_a, 24)
        length = (52, 62, 68, 60, 46)[i] * rng.uniform(0.94, 1.06)
        m = _capsule(m, base, _polar(base, a, length), 8.2, 6.4)
    wrist_a = np.pi / 2 + rng.uniform(-0.08, 0.08)
    m = _capsule(m, palm, _polar(palm, wrist_a, 62), 13, 12)
    return m


def _man(rng):
    m = np.zeros((CANVAS, CANVAS), dtype=bool)
    hips = (100 + rng.uniform(-3, 3), 118)
    chest = (hips[0] + rng.uniform(-2, 2), 72)
    m = _capsule(m, chest, hips, 16, 14)
    head = (chest[0] + rng.uniform(-2, 2), chest[1] - 26)
    m = _capsule(m, chest, head, 7.5)
    m = _ellipse(m, head, 13, 14)
    for k in (-1, 1):
        a = np.pi / 2 + k * (1.0 + rng.uniform(-0.12, 0.12))
        shoulder = (chest[0] + k * 13, chest[1])
        m = _capsule(m, shoulder, _polar(shoulder, a, 52 * rng.uniform(0.94, 1.06)), 6.5, 5.2)
    for k in (-1, 1):
        a = np.pi / 2 + k * (0.30 + rng.uniform(-0.08, 0.08))
        base = (hips[0] + k * 6, hips[1] + 2)
        m = _capsule(m, base, _polar(base, a, 62 * rng.uniform(0.95, 1.05)), 8, 6.2)
    return m


def _spider(rng):
    m = np.zeros((CANVAS, CANVAS), dtype=bool)
    c = (100 + rng.uniform(-3, 3), 100 + rng.uniform(-3, 3))
    m = _ellipse(m, c, 17, 21)
    m = _ellipse(m, (c[0], c[1] - 24), 10, 11)
    for i in range(4):
        for k in (-1, 1):
            a = k * (0.45 + i * 0.5) - np.pi / 2 * 0 + rng.uniform(-0.07, 0.07)
            a = np.pi / 2 * 0 + a  # fan around horizontal
            base = (c[0] + k * 12, c[1] - 12 + i * 8)
            ang = (0 if k > 0 else np.pi) + (i - 1.5) * 0.38 * (1 if k > 0 else -1) + rng.uniform(-0.07, 0.07)
            rad = 5.6 if i == 0 else 4.4
            m = _capsule(m, base, _polar(base, ang, 55 * rng.uniform(0.94, 1.06)), rad, 3.0)
    return m


def _airplane(rng):
    m = np.zeros((CANVAS, CANVAS), dtype=bool)
    nose = (100 + rng.uniform(-2, 2), 32)
    tail = (nose[0] + rng.uniform(-2, 2), 162 + rng.uniform(-8, 8))
    m = _capsule(m, nose, tail, 11, 8)
    wing_y = 88 + rng.uniform(-4, 4)
    sweep = 0.45 + rng.uniform(-0.28, 0.28)
    wing_len = 62 * rng.uniform(0.85, 1.15)
    for k in (-1, 1):
        base = (nose[0], wing_y)
        tip = (base[0] + k * wing_len, base[1] + wing_len * np.tan(sweep) * 0.35)
        m = _capsule(m, base, tip, 9, 3.6)
    stab_y = 152 + rng.uniform(-6, 6)
    stab_len = 26 * rng.uniform(0.85, 1.15)
    for k in (-1, 1):
        base = (nose[0], stab_y)
        m = _capsule(m, base, (base[0] + k * stab_len, base[1] + 10), 5.2, 2.6)
    return m


def _fish(rng):
    m = np.zeros((CANVAS, CANVAS), dtype=bool)
    c = (88 + rng.uniform(-3, 3), 100 + rng.uniform(-3, 3))
    m = _ellipse(m, c, 52, 19, angle=rng.uniform(-0.05, 0.05))
    mouth = (c[0] - 64 * rng.uniform(0.88, 1.12), c[1])
    m = _capsule(m, (c[0] - 44, c[1]), mouth, 9, 4.5)
    tail_base = (c[0] + 48, c[1])
    for k in (-1, 1):
        a = k * (0.55 + rng.uniform(-0.20, 0.20))
        m = _capsule(m, tail_base, _polar(tail_base, a, 40 * rng.uniform(0.85, 1.15)), 5.5, 3.0)
    fin_a = -np.pi / 2 + rng.uniform(-0.10, 0.10)
    m = _capsule(m, (c[0] - 4, c[1] - 14), _polar((c[0] - 4, c[1] - 14), fin_a, 30 * rng.uniform(0.85, 1.15)), 5.5, 2.8)
    m = _capsule(m, (c[0], c[1] + 14), _polar((c[0], c[1] + 14), np.pi / 2 + rng.uniform(-0.08, 0.08), 24), 4.6, 2.6)
    return m


def _ray(rng):
    m = np.zeros((CANVAS, CANVAS), dtype=bool)
    c = (100 + rng.uniform(-3, 3), 84 + rng.uniform(-3, 3))
    m = _ellipse(m, c, 28, 34)
    for k in (-1, 1):
        a = k * (np.pi / 2 - 0.62) + rng.uniform(-0.07, 0.07) * k
        wtip = (c[0] + k * 58, c[1] - 6 + rng.uniform(-4, 4))
        m = _capsule(m, (c[0] + k * 12, c[1] - 4), wtip, 13, 2.8)
    head = (c[0], c[1] - 40)
    m = _capsule(m, (c[0], c[1] - 20), head, 10, 6)
    tail_tip = (c[0] + rng.uniform(-14, 14), c[1] + 98 * rng.uniform(0.88, 1.10))
    m = _capsule(m, (c[0], c[1] + 26), tail_tip, 5.0, 1.8)
    return m


def _rabbit(rng):
    m = np.zeros((CANVAS, CANVAS), dtype=bool)
    body = (104 + rng.uniform(-3, 3), 122 + rng.uniform(-3, 3))
    m = _ellipse(m, body, 34, 28)
    head = (body[0] - 34, body[1] - 26)
    m = _ellipse(m, head, 16, 14)
    for k in (0, 1):
        a = -np.pi / 2 + (k - 0.5) * 0.42 + rng.uniform(-0.15, 0.15)
        base = (head[0] + (k - 0.5) * 8, head[1] - 8)
        m = _capsule(m, base, _polar(base, a, 46 * rng.uniform(0.92, 1.08)), 5.8, 4.4)
    m = _capsule(m, (body[0] - 22, body[1] + 20), (body[0] - 30, body[1] + 44), 7, 5.5)
    m = _capsule(m, (body[0] + 16, body[1] + 22), (body[0] + 26, body[1] + 46), 8, 6)
    m = _ellipse(m, (body[0] + 36, body[1] + 6), 9, 9)
    return m


def _hammer(rng):
    m = np.zeros((CANVAS, CANVAS), dtype=bool)
    top = (100 + rng.uniform(-2, 2), 58)
    grip = (top[0] + rng.uniform(-3, 3), 164 + rng.uniform(-12, 12))
    m = _capsule(m, top, grip, 7.5, 9)
    ang = rng.uniform(-0.16, 0.16)
    for k in (-1, 1):
        end = _polar(top, ang + (0 if k > 0 else np.pi), 34 * rng.uniform(0.85, 1.15))
        m = _capsule(m, top, end, 11, 9)
    return m


def _star(rng):
    m = np.zeros((CANVAS, CANVAS), dtype=bool)
    c = (100 + rng.uniform(-3, 3), 100 + rng.uniform(-3, 3))
    m = _ellipse(m, c, 20, 20)
    phase = rng.uniform(0, 2 * np.pi)
    for i in range(5):
        a = phase + i * 2 * np.pi / 5
        m = _capsule(m, c, _polar(c, a, 62 * rng.uniform(0.94, 1.06)), 12, 2.6)
    return m


_SPECIES = {
    "horse": dict(body_r=15.0, body_len=66, leg_len=54, leg_r=5.2, neck_len=36, neck_r=6.5,
                  head_rx=12, head_ry=8, tail_len=36, tail_r=4.5, tail_up=-0.5, muzzle=8),
    "cattle": dict(body_r=18, body_len=62, leg_len=36, leg_r=6.6, neck_len=24, neck_r=9,
                   head_rx=13, head_ry=10, tail_len=26, tail_r=4.5, tail_up=0.0, horns=18, muzzle=9),
    "sheep": dict(body_r=19.0, body_len=58, leg_len=31, leg_r=5.8, neck_len=24, neck_r=7.0,
                  head_rx=10, head_ry=8, tail_len=14, tail_r=4.2, tail_up=0.0, ears=26, muzzle=12),
    "dog": dict(body_r=11.0, body_len=58, leg_len=52, leg_r=4.8, neck_len=26, neck_r=6.5,
                head_rx=11, head_ry=7.5, tail_len=40, tail_r=3.6, tail_up=1.0, ears=8, muzzle=10),
    "cat": dict(body_r=12.5, body_len=52, leg_len=32, leg_r=4.0, neck_len=16, neck_r=6,
                head_rx=10, head_ry=9, tail_len=54, tail_r=3.0, tail_up=1.2, ears=7),
    "fox": dict(body_r=13.0, body_len=52, leg_len=38, leg_r=4.4, neck_len=20, neck_r=6.0,
                head_rx=10, head_ry=7.5, tail_len=38, tail_r=8.0, tail_up=0.35, ears=9, muzzle=11),
    "quadruped": dict(body_r=13.5, body_len=56, leg_len=46, leg_r=5.5, neck_len=24, neck_r=7.5,
                      head_rx=12, head_ry=9, tail_len=32, tail_r=4.2, tail_up=0.8, muzzle=8),
}

_MAKERS = {
    "hand": _hand,
    "man": _man,
    "spider": _spider,
    "airplane": _airplane,
    "fish": _fish,
    "ray": _ray,
    "rabbit": _rabbit,
    "hammer": _hammer,
    "star": _star,
}


def make_shape(class_name: str, seed: int) -> np.ndarray:
    """Boolean silhouette of one jittered instance of the class."""
    rng = np.random.default_rng(seed)
    _STRETCH[0] = rng.uniform(0.95, 1.05)
    _STRETCH[1] = rng.uniform(0.95, 1.05)
    try:
        if class_name in _SPECIES:
            return _quadruped(rng, **_SPECIES[class_name])
        if class_name not in _MAKERS:
            raise ValueError(f"unknown shape class: {class_name}")
        return _MAKERS[class_name](rng)
    finally:
        _STRETCH[0] = _STRETCH[1] = 1.0


def write_pgm(mask: np.ndarray, path: str) -> None:
    """Binary (P5) PGM with foreground 255 on background 0."""
    h, w = mask.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode())
        fh.write((mask.astype(np.uint8) * 255).tobytes())


def write_dataset(outdir: str, classes, per_class: int, seed: int = 0) -> list[str]:
    os.makedirs(outdir, exist_ok=True)
    paths = []
    for ci, cls in enumerate(classes):
        for k in range(per_class):
            mask = make_shape(cls, seed=seed + ci * 1000 + k)
            p = os.path.join(outdir, f"{cls}_{k:02d}.pgm")
            write_pgm(mask, p)
            paths.append(p)
    return paths


def tari56_style(outdir: str, seed: int = 0) -> list[str]:
    """14 classes x 4 articulated instances."""
    return write_dataset(outdir, TARI_CLASSES, 4, seed)


def kimia99_style(outdir: str, seed: int = 17) -> list[str]:
    """9 classes x 11 instances."""
    return write_dataset(outdir, KIMIA_CLASSES, 11, seed)
