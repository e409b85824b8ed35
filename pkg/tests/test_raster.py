import io

import numpy as np
import pytest

from skelshape import (
    DegenerateSkeleton,
    DecodeError,
    EmptyShape,
    distance_transform,
    extract_skeleton,
    load_silhouette,
    prune_skeleton,
    shape_from_mask,
)
from skelshape.raster import NEIGHBORS4, Skeleton, neighbor_count, trace_contour
from skelshape.shapegen import write_pgm

from conftest import random_blob


def chamfer_oracle(fg):
    """Brute force: min 3-4 metric to any background pixel, border included."""
    h, w = fg.shape
    pad = np.pad(fg, 1)
    bg = np.argwhere(~pad)
    out = np.zeros((h, w), dtype=np.int64)
    for r, c in np.argwhere(fg):
        dr = np.abs(bg[:, 0] - (r + 1))
        dc = np.abs(bg[:, 1] - (c + 1))
        lo = np.minimum(dr, dc)
        hi = np.maximum(dr, dc)
        out[r, c] = np.min(4 * lo + 3 * (hi - lo))
    return out


def n_components8(mask):
    from collections import deque

    seen = np.zeros_like(mask, dtype=bool)
    n = 0
    for p in map(tuple, np.argwhere(mask)):
        if seen[p]:
            continue
        n += 1
        seen[p] = True
        q = deque([p])
        while q:
            r, c = q.popleft()
            for dr in (-1, 0, 1):
                for dc in (-1, 0, 1):
                    rr, cc = r + dr, c + dc
                    if (
                        0 <= rr < mask.shape[0]
                        and 0 <= cc < mask.shape[1]
                        and mask[rr, cc]
                        and not seen[rr, cc]
                    ):
                        seen[rr, cc] = True
                        q.append((rr, cc))
    return n


class TestDistanceTransform:
    def test_single_pixel(self):
        m = np.zeros((3, 3), dtype=bool)
        m[1, 1] = True
        f = distance_transform(shape_from_mask(m))
        assert f.values[1, 1] == 1.0
        assert (f.values[~m] == 0).all()

    def test_square_center(self):
        m = np.zeros((9, 9), dtype=bool)
        m[2:7, 2:7] = True
        f = distance_transform(shape_from_mask(m))
        assert f.values[4, 4] == 3.0

    def test_matches_bruteforce_on_random_blobs(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            m = random_blob(rng)
            sh = shape_from_mask(m)
            f = distance_transform(sh)
            ora = chamfer_oracle(sh.foreground)
            assert np.array_equal(f.thirds[sh.foreground], ora[sh.foreground])
            assert (f.thirds[~sh.foreground] == 0).all()

    def test_border_counts_as_background(self):
        m = np.ones((5, 5), dtype=bool)
        f = distance_transform(shape_from_mask(m))
        assert f.values[0, 0] == 1.0
        assert f.values[2, 2] == 3.0


class TestSkeleton:
    def test_thin_bar_is_its_own_skeleton(self):
        m = np.zeros((5, 12), dtype=bool)
        m[2, 2:10] = True
        sk = extract_skeleton(distance_transform(shape_from_mask(m)))
        assert np.array_equal(sk.mask, m)

    def test_disk_reduces_to_small_cluster(self):
        yy, xx = np.mgrid[0:31, 0:31]
        m = (yy - 15) ** 2 + (xx - 15) ** 2 <= 100
        sk = extract_skeleton(distance_transform(shape_from_mask(m)))
        pts = sk.points()
        assert len(pts) <= 4
        center = np.array([15, 15])
        assert all(np.hypot(*(p - center)) <= 2.5 for p in pts)

    def test_rectangle_has_medial_segment(self):
        m = np.zeros((16, 26), dtype=bool)
        m[3:13, 3:23] = True
        sk = extract_skeleton(distance_transform(shape_from_mask(m)))
        mid_rows = sk.mask[7:9, 8:18]
        assert mid_rows.any(axis=0).sum() >= 8  # long-axis run down the middle

    def test_invariants_on_random_blobs(self):
        rng = np.random.default_rng(5)
        for _ in range(8):
            m = random_blob(rng, size=28)
            sh = shape_from_mask(m)
            f = distance_transform(sh)
            sk = extract_skeleton(f)
            assert (sk.mask & ~sh.foreground).sum() == 0
            assert np.allclose(sk.radius[sk.mask], f.values[sk.mask])
            assert sk.max_radius > 0
            blocks = sk.mask[:-1, :-1] & sk.mask[1:, :-1] & sk.mask[:-1, 1:] & sk.mask[1:, 1:]
            assert not blocks.any()
            assert n_components8(sk.mask) == 1

    def test_rotation_equivariance(self):
        rng = np.random.default_rng(9)
        m = random_blob(rng, size=30)
        sk = extract_skeleton(distance_transform(shape_from_mask(m)))
        for k in (1, 2, 3):
            skr = extract_skeleton(distance_transform(shape_from_mask(np.rot90(m, k))))
            assert np.array_equal(skr.mask, np.rot90(sk.mask, k))


class TestPrune:
    def _with_spur(self):
        m = np.zeros((50, 60), dtype=bool)
        m[10:40, 5:55] = True  # slab whose skeleton holds a long line, r* = 15
        sh = shape_from_mask(m)
        sk = extract_skeleton(distance_transform(sh))
        # graft a short staircase spur onto the middle of the skeleton line
        mask = sk.mask.copy()
        rows = np.argwhere(mask)
        mid = rows[len(rows) // 2]
        spur = [(mid[0] - 1, mid[1] + 1), (mid[0] - 2, mid[1] + 2), (mid[0] - 3, mid[1] + 3)]
        for p in spur:
            mask[p] = True
        radius = np.where(mask, np.maximum(sk.radius, 0.5), 0.0)
        skel = Skeleton(
            mask=mask,
            radius=radius,
            thirds=np.where(mask, np.maximum(sk.thirds, 1), 0),
            canon_rot=sk.canon_rot,
        )
        return skel, spur

    def test_short_spur_removed(self):
        sk, spur = self._with_spur()
        # significance chosen so the 0.3 * r* threshold clears the short spur
        pruned = prune_skeleton(sk, significance=0.3)
        assert not any(pruned.mask[p] for p in spur[1:])

    def test_idempotent(self):
        sk, _spur = self._with_spur()
        once = prune_skeleton(sk, significance=0.3)
        twice = prune_skeleton(once, significance=0.3)
        assert np.array_equal(once.mask, twice.mask)

    def test_never_disconnects(self):
        rng = np.random.default_rng(3)
        for _ in range(5):
            m = random_blob(rng, size=30)
            sk = extract_skeleton(distance_transform(shape_from_mask(m)))
            pruned = prune_skeleton(sk, significance=0.2)
            assert n_components8(pruned.mask) == 1


class TestLoadSilhouette:
    def _pgm_bytes(self, mask):
        buf = io.BytesIO()
        h, w = mask.shape
        buf.write(f"P5\n{w} {h}\n255\n".encode())
        buf.write((mask.astype(np.uint8) * 255).tobytes())
        return buf.getvalue()

    def test_single_white_pixel(self):
        m = np.zeros((1, 1), dtype=bool)
        m[0, 0] = True
        shape = load_silhouette(self._pgm_bytes(m))
        assert shape.pixel_count == 1
        assert len(shape.contour) == 1

    def test_all_black_raises(self):
        m = np.zeros((4, 4), dtype=bool)
        with pytest.raises(EmptyShape):
            load_silhouette(self._pgm_bytes(m))

    def test_garbage_raises_decode_error(self):
        with pytest.raises(DecodeError):
            load_silhouette(b"this is not an image")

    def test_ascii_pgm_and_threshold(self):
        data = b"P2\n2 2\n255\n0 100 200 255\n"
        shape = load_silhouette(data, threshold=150)
        assert shape.pixel_count == 2

    def test_largest_component_kept(self):
        m = np.zeros((10, 10), dtype=bool)
        m[1:5, 1:5] = True
        m[8, 8] = True
        shape = load_silhouette(self._pgm_bytes(m))
        assert shape.pixel_count == 16

    def test_pgm_writer_roundtrip(self, tmp_path):
        rng = np.random.default_rng(2)
        m = random_blob(rng)
        p = tmp_path / "x.pgm"
        write_pgm(m, str(p))
        shape = load_silhouette(p.read_bytes())
        assert shape.pixel_count == int(shape_from_mask(m).foreground.sum())


class TestContour:
    def test_closed_and_counterclockwise(self):
        rng = np.random.default_rng(7)
        for _ in range(6):
            m = random_blob(rng)
            sh = shape_from_mask(m)
            c = sh.contour
            assert np.max(np.abs(c[0] - c[-1])) <= 1  # closed
            if len(c) >= 3:
                x, y = c[:, 0], c[:, 1]
                area2 = np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)
                assert area2 <= 0  # counterclockwise with y pointing down

    def test_contour_pixels_touch_background(self):
        rng = np.random.default_rng(8)
        m = random_blob(rng)
        sh = shape_from_mask(m)
        pad = np.pad(sh.foreground, 1)
        for x, y in sh.contour:
            assert sh.foreground[y, x]
            touches = any(not pad[1 + y + dr, 1 + x + dc] for dr, dc in NEIGHBORS4)
            assert touches
