from functools import lru_cache

import numpy as np
import pytest

from skelshape import (
    LengthMismatch,
    MatchParams,
    ZeroDenominator,
    discrete_frechet,
    distance_matrix,
    endpoint_distance,
    frechet_pairwise,
    mass_length_distance,
    spatial_distance,
)
from skelshape.rts import EndFeature


def frechet_oracle(p, q):
    """Memoized recursive discrete Frechet distance, endpoints coupled."""
    p = tuple(float(v) for v in p)
    q = tuple(float(v) for v in q)

    @lru_cache(maxsize=None)
    def rec(i, j):
        d = abs(p[i] - q[j])
        if i == 0 and j == 0:
            return d
        if i == 0:
            return max(rec(0, j - 1), d)
        if j == 0:
            return max(rec(i - 1, 0), d)
        return max(min(rec(i - 1, j), rec(i, j - 1), rec(i - 1, j - 1)), d)

    return rec(len(p) - 1, len(q) - 1)


def feature(radii=None, mass=0.1, length=0.1, v=0.5):
    r = np.asarray(radii if radii is not None else np.full(50, 0.5), dtype=float)
    return EndFeature(
        radii=r,
        mass=mass,
        length=length,
        axis_value=v,
        endpoint_xy=(0.0, 0.0),
        path_xy=np.zeros((len(r), 2)),
    )


class TestFrechet:
    def test_identical(self):
        p = np.linspace(0, 1, 50)
        assert discrete_frechet(p, p) == 0.0

    def test_constant_offset(self):
        assert discrete_frechet(np.zeros(50), np.ones(50)) == 1.0

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            discrete_frechet([1, 2, 3], [1, 2])

    def test_matches_recursive_oracle(self):
        rng = np.random.default_rng(21)
        for _ in range(200):
            p = rng.random(50)
            q = rng.random(50)
            assert abs(discrete_frechet(p, q) - frechet_oracle(p, q)) <= 1e-12

    def test_endpoint_coupling_bound(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            p = rng.random(50)
            q = rng.random(50)
            d = discrete_frechet(p, q)
            assert d >= abs(p[0] - q[0]) - 1e-12
            assert d >= abs(p[-1] - q[-1]) - 1e-12

    def test_pseudometric_properties(self):
        rng = np.random.default_rng(33)
        for _ in range(50):
            a, b, c = rng.random((3, 30))
            dab = discrete_frechet(a, b)
            dba = discrete_frechet(b, a)
            assert dab == pytest.approx(dba, abs=1e-12)
            assert discrete_frechet(a, a) == 0.0
            assert discrete_frechet(a, c) <= dab + discrete_frechet(b, c) + 1e-12

    def test_pairwise_matches_scalar(self):
        rng = np.random.default_rng(6)
        u = rng.random((5, 50))
        v = rng.random((7, 50))
        got = frechet_pairwise(u, v)
        for i in range(5):
            for j in range(7):
                assert got[i, j] == pytest.approx(discrete_frechet(u[i], v[j]), abs=1e-12)


class TestMassLength:
    def test_identical_is_zero(self):
        f = feature(mass=0.3, length=0.4)
        assert mass_length_distance(f, f) == 0.0

    def test_worked_example(self):
        p = feature(mass=0.2, length=0.3)
        q = feature(mass=0.6, length=0.3)
        # d_m = (0.4)^2 / 0.8 = 0.2, d_l = 0 -> 0.65*0 + 0.35*0.2 = 0.07
        assert mass_length_distance(p, q, alpha=0.65) == pytest.approx(0.07, abs=1e-12)

    def test_symmetry(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            p = feature(mass=rng.random(), length=rng.random() + 0.01)
            q = feature(mass=rng.random(), length=rng.random() + 0.01)
            assert mass_length_distance(p, q) == pytest.approx(mass_length_distance(q, p))

    def test_zero_denominator(self):
        with pytest.raises(ZeroDenominator):
            mass_length_distance(feature(mass=0.0), feature(mass=0.0))


class TestSpatial:
    def test_equal_is_zero(self):
        assert spatial_distance(feature(v=0.7), feature(v=0.7)) == 0.0

    def test_one_zero(self):
        assert spatial_distance(feature(v=1.0), feature(v=0.0)) == pytest.approx(1.0)

    def test_worked_example(self):
        assert spatial_distance(feature(v=0.8), feature(v=0.2)) == pytest.approx(0.36)

    def test_both_zero_resolves_to_zero(self):
        assert spatial_distance(feature(v=0.0), feature(v=0.0)) == 0.0


class TestEndpointDistance:
    def test_identical_is_zero(self):
        f = feature()
        assert endpoint_distance(f, f) == 0.0

    def test_zero_weights_degenerate_to_frechet(self):
        p = feature(radii=np.linspace(0, 1, 50), mass=0.2, length=0.3, v=0.9)
        q = feature(radii=np.linspace(1, 0, 50), mass=0.7, length=0.6, v=0.1)
        params = MatchParams(beta1=0.0, beta2=0.0)
        assert endpoint_distance(p, q, params) == pytest.approx(
            discrete_frechet(p.radii, q.radii)
        )

    def test_worked_composite(self):
        # components engineered to hit d_F = 0.1, d_ML = 0.02, d_V = 0.3
        p = feature(radii=np.zeros(50), mass=0.45, length=0.3, v=0.3)
        q = feature(radii=np.full(50, 0.1), mass=0.25, length=0.3, v=0.0)
        assert discrete_frechet(p.radii, q.radii) == pytest.approx(0.1)
        assert mass_length_distance(p, q, 0.65) == pytest.approx(0.02, abs=1e-12)
        assert spatial_distance(p, q) == pytest.approx(0.3, abs=1e-12)
        d = endpoint_distance(p, q, MatchParams(beta1=30.0, beta2=0.6))
        assert d == pytest.approx(0.88, abs=1e-9)

    def test_symmetric_and_nonnegative(self):
        rng = np.random.default_rng(10)
        for _ in range(25):
            p = feature(radii=rng.random(50), mass=rng.random() + 0.01,
                        length=rng.random() + 0.01, v=rng.random())
            q = feature(radii=rng.random(50), mass=rng.random() + 0.01,
                        length=rng.random() + 0.01, v=rng.random())
            d = endpoint_distance(p, q)
            assert d >= 0
            assert d == pytest.approx(endpoint_distance(q, p), abs=1e-12)


class TestDistanceMatrix:
    def test_matches_elementwise(self):
        rng = np.random.default_rng(12)
        xs = [feature(radii=rng.random(50), mass=rng.random() + 0.05,
                      length=rng.random() + 0.05, v=rng.random()) for _ in range(4)]
        ys = [feature(radii=rng.random(50), mass=rng.random() + 0.05,
                      length=rng.random() + 0.05, v=rng.random()) for _ in range(5)]
        params = MatchParams(beta1=30, beta2=0.6)
        d = distance_matrix(xs, ys, params)
        assert d.shape == (4, 5)
        for i in range(4):
            for j in range(5):
                assert d[i, j] == pytest.approx(endpoint_distance(xs[i], ys[j], params), abs=1e-10)
