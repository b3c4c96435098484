from itertools import combinations

import numpy as np
import pytest

from matroidkit import families as F
from matroidkit.catalog import catalog
from matroidkit.connectivity import (
    NotThreeConnected, SepPath, bridging_sequence, bridging_status, check_bridging_sequence, conn_table,
    connectivity, enumerate_3seps, full_closure, is_3_connected, is_connected, linking_conn,
    linking_conn_exhaustive, local_conn, low_separation, meet, minimal_bridging_sequence,
    non_sequential_3seps, realize_linking, sep_class_key, seps_equivalent, sequential_order,
    side_classify, verify_path,
)
from matroidkit.core import MatroidError, MinorSpec, from_graph


def test_connectivity_of_swirl_legs(swirl4):
    assert connectivity(swirl4, ["p1", "q1"]) == 2
    assert connectivity(swirl4, ["p1", "q1", "p2", "q2"]) == 2
    assert connectivity(swirl4, ["p1"]) == 1
    assert connectivity(swirl4, []) == 0


def test_conn_table_is_symmetric():
    for M in catalog(10).values():
        lam = conn_table(M)
        assert np.array_equal(lam, lam[M.full ^ np.arange(len(lam))])


def test_local_conn_and_meet(swirl4):
    assert local_conn(swirl4, ["p1", "q1"], ["p2", "q2"]) == (1, 1)
    assert meet(swirl4, ["p1", "q1"], ["p3", "q3"]) == 0
    # opposite legs of a four-leg swirl still link through the rest
    assert linking_conn(swirl4, ["p1", "q1"], ["p3", "q3"]) == 2


@pytest.mark.parametrize("name", ["free_swirl4", "wheel4", "free_spike4_tip", "vamos", "k4"])
def test_linking_conn_matches_exhaustive(name):
    M = catalog()[name]
    for a, b in combinations(range(M.n), 2):
        for c in range(M.n):
            if c in (a, b):
                continue
            X, Y = 1 << a | 1 << b, 1 << c
            assert linking_conn(M, X, Y) == linking_conn_exhaustive(M, X, Y)
            assert linking_conn(M, X, Y, backend="numpy") == linking_conn(M, X, Y, backend="numba")


def test_realize_linking_on_swirl(swirl4):
    X, Y = swirl4.mask(["p1", "q1"]), swirl4.mask(["p3", "q3"])
    I, J = realize_linking(swirl4, X, Y)
    assert I | J == swirl4.full ^ X ^ Y and not I & J
    N = swirl4.minor(MinorSpec(I, J))
    assert connectivity(N, N.mask(swirl4.labels(X))) == 2
    assert local_conn(swirl4, X, I)[0] == 0


def test_realize_linking_rejects_overlap(swirl4):
    with pytest.raises(MatroidError):
        realize_linking(swirl4, ["p1"], ["p1", "q1"])


def test_full_closure(swirl4):
    # the union of two legs is already fully closed in the free swirl
    assert full_closure(swirl4, ["p1", "q1", "p2", "q2"]) == swirl4.mask(["p1", "q1", "p2", "q2"])
    W = F.wheel(4)
    tri = W.mask(["r1", "s1", "s2"])
    assert full_closure(W, tri) == W.full


def test_connectedness():
    assert is_3_connected(F.uniform(2, 4))
    assert is_3_connected(F.wheel(5))
    assert low_separation(F.uniform(2, 5)) is None
    two_triangles = from_graph(list("abcdef"), [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
    assert not is_connected(two_triangles)
    assert two_triangles.labels(low_separation(two_triangles, 2)) == ["a", "b", "c"]


def test_not_three_connected_raises():
    W = F.wheel(4)
    N = W.delete(W.mask(["r1"]))
    assert not is_3_connected(N)
    with pytest.raises(NotThreeConnected):
        enumerate_3seps(N)


def test_three_separations_of_swirl_and_wheel(swirl4):
    seps = enumerate_3seps(swirl4)
    assert [sorted(swirl4.labels(s.side)) for s in seps] == [
        ["p1", "p2", "q1", "q2"], ["p1", "p4", "q1", "q4"]]
    assert all(not s.sequential for s in seps)
    assert len(non_sequential_3seps(swirl4)) == 2
    W = F.wheel(5)
    assert len(enumerate_3seps(W)) == 25
    assert non_sequential_3seps(W) == []


def test_separation_equivalence(swirl4):
    a = ["p1", "q1", "p2", "q2"]
    b = ["p3", "q3", "p4", "q4"]
    c = ["p2", "q2", "p3", "q3"]
    assert seps_equivalent(swirl4, a, b)
    assert not seps_equivalent(swirl4, a, c)
    assert sep_class_key(swirl4, swirl4.mask(a)) == sep_class_key(swirl4, swirl4.mask(b))
    with pytest.raises(MatroidError):
        seps_equivalent(swirl4, ["p1"], a)


def test_sequential_order():
    W = F.wheel(4)
    order = sequential_order(W, W.full)
    assert order is not None and sorted(order) == list(range(W.n))
    assert sequential_order(F.free_swirl(4), ["p1", "q1", "p2", "q2"]) is None


def test_side_classify():
    M = F.swirl_with_joints(4)
    assert side_classify(M, ["p1", "q1"], "b2") == "guts"
    D = M.dual()
    assert side_classify(D, ["p1", "q1"], "b2") == "coguts"
    with pytest.raises(MatroidError):
        side_classify(M, ["p1", "q1"], "p1")


def test_induced_separation_has_no_bridging_sequence(swirl4):
    # regression: a lone deletion used to pass because the empty prefix was not checked
    spec = MinorSpec(swirl4.mask(["p3", "q3"]), swirl4.mask(["q1"]))
    N = swirl4.minor(spec)
    a = N.mask(["p2", "q2"])
    assert connectivity(N, a) == 1
    assert bridging_sequence(swirl4, spec, a) is None
    assert not check_bridging_sequence(swirl4, spec, a, ["p3", "q1", "q3"],
                                       ["contract", "delete", "contract"])
    s, t, seq = minimal_bridging_sequence(swirl4, spec, a)
    assert (s, t) == (0, swirl4.mask(["p3"]))
    assert seq.order == ["p3"] and seq.roles == ["contract"]
    assert bridging_status(swirl4, spec, a).status == "bridged"


def test_bridging_rejects_bad_input(swirl4):
    spec = MinorSpec(swirl4.mask(["p3"]), 0)
    with pytest.raises(MatroidError):
        bridging_sequence(swirl4, spec, 0)


def _legs(n):
    return [[f"p{i}", f"q{i}"] for i in range(1, n + 1)]


def test_swirl_legs_form_a_path_of_3_separations(swirl5):
    legs = _legs(5)
    rep = verify_path(swirl5, SepPath("path3", legs, [(i, legs[i]) for i in range(1, 4)]))
    assert rep and rep.failures == []
    assert len(rep.displayed_flowers) == 3


def test_bad_path_reports_prefix(swirl5):
    legs = _legs(5)
    rep = verify_path(swirl5, SepPath("path3", [legs[0] + legs[2], legs[1]] + legs[3:]))
    assert not rep and rep.failures == ["prefix 0 has connectivity 4, expected 2"]
    rep = verify_path(swirl5, SepPath("path3", legs[:4]))
    assert rep.failures == ["steps do not cover the ground set"]


def test_strict_path_after_deleting_a_leg(swirl5):
    legs = _legs(5)
    N = swirl5.delete(swirl5.mask(legs[0]))
    assert verify_path(N, SepPath("strict2", legs[1:]))
    with pytest.raises(MatroidError):
        verify_path(N, SepPath("zigzag", legs[1:]))
