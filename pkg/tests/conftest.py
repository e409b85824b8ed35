import numpy as np
import pytest

import skelshape as ss
from skelshape.shapegen import TARI_CLASSES, kimia99_style, make_shape, tari56_style


@pytest.fixture(scope="session")
def tari_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("tari56")
    tari56_style(str(d))
    return str(d)


@pytest.fixture(scope="session")
def kimia_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("kimia99")
    kimia99_style(str(d))
    return str(d)


@pytest.fixture(scope="session")
def tari_dataset(tari_dir):
    return ss.load_dataset(tari_dir, layout="tari56")


@pytest.fixture(scope="session")
def tari_records(tari_dataset):
    return ss.build_all(tari_dataset)


@pytest.fixture(scope="session")
def match_params():
    return ss.MatchParams(beta1=30.0, beta2=0.6)


def class_shape(cls: str, k: int = 0) -> np.ndarray:
    """Deterministic mask for instance ``k`` of a benchmark class."""
    return make_shape(cls, TARI_CLASSES.index(cls) * 1000 + k)


@pytest.fixture(scope="session")
def hand_rts():
    return ss.build_rts(ss.shape_from_mask(class_shape("hand"), source_id="hand_0"))


def random_blob(rng, size=24, disks=5, max_r=6):
    m = np.zeros((size, size), dtype=bool)
    yy, xx = np.mgrid[0:size, 0:size]
    for _ in range(disks):
        r0 = rng.integers(4, size - 4)
        c0 = rng.integers(4, size - 4)
        rad = rng.integers(2, max_r)
        m |= (yy - r0) ** 2 + (xx - c0) ** 2 <= rad**2
    return m
