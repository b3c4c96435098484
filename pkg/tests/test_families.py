import pytest

from matroidkit import families as F
from matroidkit.catalog import catalog, fano, non_fano, vamos
from matroidkit.connectivity import is_3_connected
from matroidkit.core import MatroidError, check_axioms, is_isomorphic
from matroidkit.structures import triangles


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_swirl_and_spike_shapes(n):
    S = F.free_swirl(n)
    assert (S.n, S.rank(S.full)) == (2 * n, n)
    P = F.free_spike(n)
    assert (P.n, P.rank(P.full)) == (2 * n, n)
    T = F.free_spike(n, tip=True)
    assert T.n == 2 * n + 1
    for i in range(1, n + 1):
        assert T.closure(T.mask([f"x{i}", f"y{i}"])) & T.mask(["t"])


@pytest.mark.parametrize("n", [3, 4])
def test_bipartite_families(n):
    assert F.mk3n(n).rank(F.mk3n(n).full) == n + 2
    assert is_isomorphic(F.mk3n_dual(n), F.mk3n(n).dual())


def test_tightened_swirl():
    S = F.swirl(4, [["p1", "p2", "p3", "p4"]])
    assert S.rank(S.mask(["p1", "p2", "p3", "p4"])) == 3
    assert check_axioms(S).valid
    with pytest.raises(MatroidError, match="transversal"):
        F.swirl(4, [["p1", "q1", "p3", "p4"]])


def test_joints():
    M = F.swirl_with_joints(4, [1, 3])
    assert M.elements[-2:] == ("b1", "b3")
    # b_j sits on the line through the legs meeting at it
    assert M.closure(M.mask(["p4", "q4", "p1", "q1"])) & M.mask(["b1"])


def test_parse_family():
    assert F.parse_family("uniform2,4") == F.FamilySpec("uniform", (2, 4))
    assert F.parse_family("free_swirl", "5") == F.FamilySpec("free_swirl", (5,))
    assert F.generate(F.parse_family("spike_with_tip4")).n == 9
    with pytest.raises(MatroidError):
        F.parse_family("nonsense3")
    with pytest.raises(MatroidError):
        F.generate(F.FamilySpec("uniform", (2,)))
    with pytest.raises(MatroidError):
        F.free_swirl(2)


def test_named_matroids():
    assert len(triangles(fano())) == 7
    assert len(triangles(non_fano())) == 6
    V = vamos()
    assert (V.n, V.rank(V.full)) == (8, 4)
    assert V.rank(V.mask(["a1", "a2", "b1", "b2"])) == 3
    assert V.rank(V.mask(["b1", "b2", "d1", "d2"])) == 4


def test_catalog_members_are_three_connected():
    cat = catalog()
    assert len(cat) == 35
    for name, M in cat.items():
        assert M.name == name
        assert is_3_connected(M), name
    assert max(M.n for M in catalog(10).values()) <= 10
