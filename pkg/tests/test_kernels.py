import numpy as np
import pytest

from matroidkit import _kernels as K
from matroidkit import families as F
from matroidkit.fields import gf

pytestmark = pytest.mark.skipif(not K.HAS_NUMBA, reason="numba unavailable")


def test_linear_backends_agree():
    rng = np.random.default_rng(3)
    f = gf(4)
    cols = rng.integers(0, 4, size=(9, 4))
    masks = np.arange(1 << 9)
    assert np.array_equal(K.linear_ranks(cols, masks, f, "numba"),
                          K.linear_ranks(cols, masks, f, "numpy"))


@pytest.mark.parametrize("bicircular", [False, True])
def test_graph_backends_agree(bicircular):
    rng = np.random.default_rng(5)
    us, vs = rng.integers(0, 5, 10), rng.integers(0, 5, 10)
    masks = np.arange(1 << 10)
    assert np.array_equal(K.graph_ranks(us, vs, 5, masks, bicircular, "numba"),
                          K.graph_ranks(us, vs, 5, masks, bicircular, "numpy"))


def test_min_conn_backends_agree():
    M = F.free_swirl(5)
    t = M.table
    for lo, free in [(3, M.full ^ 3 ^ (3 << 8)), (1, 0b0111111110), (0b11, 0b1100)]:
        assert K.min_conn(t, lo, free, "numba") == K.min_conn(t, lo, free, "numpy")


def test_subset_masks():
    assert K.subset_masks(0b1010).tolist() == [0, 2, 8, 10]
    assert K.popcounts(3).tolist() == [0, 1, 1, 2, 1, 2, 2, 3]
