import pytest

from matroidkit import families as F
from matroidkit.catalog import catalog
from matroidkit.core import MatroidError
from matroidkit.flowers import (
    canonical_petals, classify_flower, coherence_report, find_k_fracture,
    find_k_fracture_exhaustive, flower_order, flower_to_dot, is_anemone, is_flower,
    is_k_coherent, is_quasi_flower, swirl_like_flowers,
)


def legs(M, a="p", b="q"):
    n = sum(1 for e in M.elements if e.startswith(a))
    return [[f"{a}{i}", f"{b}{i}"] for i in range(1, n + 1)]


def triples(n):
    return [[f"a{i}", f"b{i}", f"c{i}"] for i in range(1, n + 1)]


def test_swirl_legs_are_swirl_like():
    M = F.free_swirl(5)
    rep = classify_flower(M, legs(M))
    assert rep.kind == "swirl_like" and rep.order == 5
    assert rep.tight_elements == M.full
    assert rep.meets[0] == [0, 1, 0, 0, 1]


def test_spike_legs_are_spike_like():
    M = F.free_spike(4)
    rep = classify_flower(M, legs(M, "x", "y"))
    assert rep.kind == "spike_like" and rep.order == 4
    assert is_anemone(M, rep.petals)
    assert not is_anemone(F.free_swirl(4), rep.petals)


def test_paddle_and_copaddle():
    assert classify_flower(F.mk3n_dual(4), triples(4)).kind == "anemone_copaddle"
    assert classify_flower(F.mk3n(4), triples(4)).kind == "anemone_paddle"


def test_orders():
    U = F.uniform(3, 6)
    assert flower_order(U, [["e1", "e2"], ["e3", "e4"], ["e5", "e6"]]) == (1, [U.full])
    S = F.free_swirl(4)
    assert flower_order(S, legs(S))[0] == 4
    spike = F.free_spike(4)
    order, tight = flower_order(spike, [["x1", "y1"], ["x2", "y2"], ["x3", "x4", "y3", "y4"]])
    assert order == 2
    assert tight == [spike.mask(["x1", "y1", "x2", "y2"]), spike.mask(["x3", "y3", "x4", "y4"])]


def test_joints_are_loose_guts():
    M = F.swirl_with_joints(4)
    petals = [["p1", "q1", "b2"], ["p2", "q2", "b3"], ["p3", "q3", "b4"], ["p4", "q4", "b1"]]
    rep = classify_flower(M, petals)
    assert rep.kind == "swirl_like" and rep.order == 4
    assert rep.loose_fans == [[("b2", "guts")], [("b3", "guts")], [("b4", "guts")],
                              [("b1", "guts")]]
    assert rep.tight_elements == M.mask([e for e in M.elements if not e.startswith("b")])


def test_wheel_partition_collapses_to_trivial_order():
    W = F.wheel(4)
    rep = classify_flower(W, [["r1", "s1"], ["r2", "s2"], ["r3", "s3"], ["r4", "s4"]])
    assert rep.order == 1 and rep.tight_elements == 0


def test_not_a_flower_reports_violation():
    S = F.free_swirl(4)
    rep = classify_flower(S, [["p1", "q1", "p2"], ["q2", "p3", "q3"], ["p4", "q4"]])
    assert not rep.is_flower and "connectivity 3" in rep.violation
    assert not is_flower(S, [["p1", "q1", "p2"], ["q2", "p3", "q3"], ["p4", "q4"]])
    assert is_quasi_flower(S, [["p1", "q1"], ["p2", "q2"], ["p3", "q3", "p4", "q4"]])


def test_swirl_like_flowers_of_swirl():
    S = F.free_swirl(4)
    reps = swirl_like_flowers(S)
    assert reps and all(r.kind == "swirl_like" for r in reps)
    assert any(sorted(r.petals) == sorted(canonical_petals(S, r.petals)) for r in reps)


def test_fractures():
    assert len(find_k_fracture(F.free_swirl(6), 5).petals) >= 5
    assert find_k_fracture(F.wheel(6), 5) is None
    assert find_k_fracture(F.uniform(2, 4), 5) is None
    with pytest.raises(MatroidError, match="k >= 4"):
        find_k_fracture(F.free_swirl(4), 3)


def test_coherence():
    assert not is_k_coherent(F.free_swirl(5), 5)
    assert is_k_coherent(F.free_swirl(4), 5)
    assert is_k_coherent(F.wheel(6), 5)
    rep = coherence_report(F.free_swirl(5), 5)
    assert rep["status"] == "5-fractured"
    assert rep["fracture"]["petals"][0] == ["p1", "q1"]


@pytest.mark.parametrize("k", [4, 5])
def test_fracture_search_matches_exhaustive(k):
    for M in catalog(10).values():
        fast = find_k_fracture(M, k)
        slow = find_k_fracture_exhaustive(M, k)
        assert (fast is None) == (slow is None), M.name


def test_dot_output():
    S = F.free_swirl(4)
    text = flower_to_dot(S, classify_flower(S, legs(S)))
    assert text.startswith("graph flower {") and 'label="p1 q1"' in text
