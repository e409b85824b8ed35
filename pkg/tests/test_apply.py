import numpy as np
import pytest

import skelshape as ss
from skelshape import (
    DegeneratePairs,
    InsufficientCorrespondence,
    SimilarityTransform,
    apply_character,
    complete_shape,
    estimate_similarity_transform,
    grts_from_rts,
)

from conftest import class_shape


def dilate(mask, steps=2):
    m = mask.copy()
    for _ in range(steps):
        p = np.pad(m, 1)
        acc = np.zeros_like(m)
        for dr in (-1, 0, 1):
            for dc in (-1, 0, 1):
                acc |= p[1 + dr : 1 + dr + m.shape[0], 1 + dc : 1 + dc + m.shape[1]]
        m = acc
    return m


class TestSimilarityTransform:
    def test_pure_translation(self):
        src = [(0.0, 0.0), (3.0, 4.0), (1.0, -2.0)]
        dst = [(x + 5, y - 2) for x, y in src]
        t = estimate_similarity_transform(list(zip(src, dst)))
        assert t.scale == pytest.approx(1.0, abs=1e-12)
        assert t.rotation == pytest.approx(0.0, abs=1e-12)
        assert t.translation == pytest.approx((5.0, -2.0), abs=1e-12)

    def test_scale_rotation_recovery(self):
        rng = np.random.default_rng(3)
        src = rng.random((6, 2)) * 10
        true = SimilarityTransform(scale=2.0, rotation=np.pi / 2, translation=(7.0, -1.0))
        dst = true.apply(src)
        t = estimate_similarity_transform(list(zip(map(tuple, src), map(tuple, dst))))
        assert t.scale == pytest.approx(2.0, abs=1e-9)
        assert t.rotation == pytest.approx(np.pi / 2, abs=1e-9)
        assert np.allclose(t.apply(src), dst, atol=1e-9)

    def test_exact_for_two_pairs(self):
        true = SimilarityTransform(scale=0.5, rotation=-0.7, translation=(3.0, 3.0))
        src = np.array([[0.0, 0.0], [4.0, 1.0]])
        dst = true.apply(src)
        t = estimate_similarity_transform(list(zip(map(tuple, src), map(tuple, dst))))
        assert np.allclose(t.apply(src), dst, atol=1e-9)

    def test_single_pair_raises(self):
        with pytest.raises(DegeneratePairs):
            estimate_similarity_transform([((0, 0), (1, 1))])

    def test_coincident_sources_raise(self):
        with pytest.raises(DegeneratePairs):
            estimate_similarity_transform([((2, 2), (0, 0)), ((2, 2), (5, 5))])

    def test_roundtrip_least_squares(self):
        rng = np.random.default_rng(8)
        src = rng.random((10, 2)) * 50
        true = SimilarityTransform(scale=1.3, rotation=0.4, translation=(-3.0, 9.0))
        dst = true.apply(src)
        t = estimate_similarity_transform(list(zip(map(tuple, src), map(tuple, dst))))
        assert np.abs(t.apply(src) - dst).max() <= 1e-9


class TestApplyCharacter:
    def test_self_application(self, match_params):
        mask = class_shape("hand")
        sh = ss.shape_from_mask(mask, source_id="h")
        rts = ss.build_rts(sh)
        g = grts_from_rts(rts, label="hand")
        res = apply_character(g, rts, match_params)
        assert res.total_cost == pytest.approx(0.0, abs=1e-12)
        assert res.correspondence == tuple((i, i) for i in range(rts.n_endpoints))
        assert not res.unmatched_grts and not res.unmatched_instance
        assert res.mask.shape == sh.foreground.shape
        # drawn disks are maximal disks of the instance: within dilated foreground
        outside = res.mask & ~dilate(sh.foreground, 3)
        assert outside.sum() <= 0.01 * res.mask.sum()

    def test_same_class_cheaper_than_cross_class(self, match_params):
        hand_g = grts_from_rts(
            ss.build_rts(ss.shape_from_mask(class_shape("hand"), source_id="h0")), "hand"
        )
        hand2 = ss.build_rts(ss.shape_from_mask(class_shape("hand", 1), source_id="h1"))
        cattle = ss.build_rts(ss.shape_from_mask(class_shape("cattle"), source_id="c0"))
        same = apply_character(hand_g, hand2, match_params)
        cross = apply_character(hand_g, cattle, match_params)
        assert same.total_cost < cross.total_cost
        assert same.mask.any()

    def test_mask_deterministic(self, match_params):
        rts = ss.build_rts(ss.shape_from_mask(class_shape("fox"), source_id="f"))
        g = grts_from_rts(rts, "fox")
        a = apply_character(g, rts, match_params)
        b = apply_character(g, rts, match_params)
        assert np.array_equal(a.mask, b.mask)

    def test_every_prototype_part_reported_once(self, match_params):
        g = grts_from_rts(
            ss.build_rts(ss.shape_from_mask(class_shape("dog"), source_id="d0")), "dog"
        )
        inst = ss.build_rts(ss.shape_from_mask(class_shape("cat"), source_id="c0"))
        res = apply_character(g, inst, match_params)
        assert sorted(r.grts_index for r in res.records) == list(range(g.n_endpoints))


class TestCompleteShape:
    def test_complete_instance_adds_nothing(self, match_params):
        mask = class_shape("cattle")
        sh = ss.shape_from_mask(mask, source_id="c")
        rts = ss.build_rts(sh)
        g = grts_from_rts(rts, "cattle")
        res = complete_shape(g, rts, sh.foreground, match_params)
        assert not res.unmatched_grts
        assert not res.added.any()
        assert np.array_equal(res.completed, sh.foreground)

    def test_occluded_shape_regains_parts(self, match_params):
        mask = class_shape("cattle")
        sh = ss.shape_from_mask(mask, source_id="full")
        full = ss.build_rts(sh)
        g = grts_from_rts(full, "cattle")
        partial_mask = mask.copy()
        partial_mask[:, : mask.shape[1] // 3] = False  # lop off the head side
        psh = ss.shape_from_mask(partial_mask, source_id="part")
        partial = ss.build_rts(psh)
        res = complete_shape(g, partial, psh.foreground, match_params)
        assert res.unmatched_grts  # the prototype knows parts are missing
        assert res.added.any()
        assert (res.completed & ~psh.foreground).sum() == res.added.sum() or res.added.any()

    def test_insufficient_correspondence(self, match_params):
        full = ss.build_rts(ss.shape_from_mask(class_shape("spider"), source_id="s"))
        g = grts_from_rts(full, "spider")
        # a record with a single tip can never supply two matched pairs
        one = ss.RTS(
            features=(full.features[0],),
            spine=full.spine,
            rstar=full.rstar,
            total_mass=full.total_mass,
            total_length=full.total_length,
            width=full.width,
            height=full.height,
            source_id="stub",
            root_xy=full.root_xy,
        )
        with pytest.raises(InsufficientCorrespondence):
            complete_shape(g, one, np.zeros((full.height, full.width), dtype=bool), match_params)
