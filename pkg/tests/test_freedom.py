import pytest

from matroidkit import families as F
from matroidkit.acceptance import loose_fixedness_failures, strand_disagreements
from matroidkit.catalog import catalog
from matroidkit.core import CapacityError, MatroidError
from matroidkit.freedom import (
    are_clones, clonal_analysis, cyclic_flats, freedom_bound, freedom_report, is_cofixed,
    is_fixed, strand_certificate, swap_is_automorphism,
)


def test_cyclic_flats_small():
    assert cyclic_flats(F.uniform(2, 4)).flats == [0, 15]
    assert cyclic_flats(F.uniform(3, 6)).flats == [0, 63]


def test_spike_planes_are_cyclic_flats():
    S = F.free_spike(4)
    flats = [sorted(S.labels(f)) for f in cyclic_flats(S).flats]
    assert len(flats) == 8
    for i in range(1, 5):
        for j in range(i + 1, 5):
            assert sorted([f"x{i}", f"y{i}", f"x{j}", f"y{j}"]) in flats


def test_clone_classes():
    assert clonal_analysis(F.uniform(2, 4))[0] == [15]
    assert clonal_analysis(F.wheel(4))[0] == [1 << i for i in range(8)]


@pytest.mark.parametrize("n", [3, 4, 5])
def test_swirl_legs_are_clones(n):
    S = F.free_swirl(n)
    for i in range(1, n + 1):
        assert are_clones(S, f"p{i}", f"q{i}")
        assert swap_is_automorphism(S, f"p{i}", f"q{i}")
    # three legs give U3,6, where every pair is clonal
    assert are_clones(S, "p1", "p2") == (n == 3)


def test_clones_agree_with_swap_automorphism():
    for M in catalog(9).values():
        for i, e in enumerate(M.elements):
            for f in M.elements[i + 1:]:
                assert are_clones(M, e, f) == swap_is_automorphism(M, e, f), M.name


def test_leg_element_is_not_fixed(swirl4):
    v = is_fixed(swirl4, "p1")
    assert not v.fixed and v.witness == "independent clone q1"
    assert not is_cofixed(swirl4, "p1").fixed


def test_joint_is_fixed_but_not_cofixed():
    J = F.swirl_with_joints(4)
    assert is_fixed(J, "b1").fixed
    assert is_fixed(J, "b1", method="exhaustive").fixed
    v = is_cofixed(J, "b1")
    assert not v.fixed and v.cut is not None


def test_spike_tip_is_fixed():
    assert is_fixed(F.free_spike(4, tip=True), "t").fixed


def test_cut_method_matches_exhaustive_oracle():
    checked = 0
    for M in catalog(9).values():
        if M.name in ("U4,8", "mk3n3"):
            continue  # too many undetermined flats for the oracle
        for e in range(M.n):
            assert is_fixed(M, e).fixed == is_fixed(M, e, method="exhaustive").fixed
            checked += 1
    assert checked == 145


def test_exhaustive_oracle_guard():
    with pytest.raises(CapacityError):
        is_fixed(F.uniform(4, 8), 0, method="exhaustive")


def test_freedom_report_shape():
    doc = freedom_report(F.free_swirl(3)).to_dict()
    assert set(doc) == {"p1", "q1", "p2", "q2", "p3", "q3"}
    assert doc["p1"]["fixed"] is False and doc["p1"]["clone_class"] == doc["q1"]["clone_class"]


def test_freedom_bound():
    J = F.swirl_with_joints(4)
    assert freedom_bound(J, "b2", ["p1", "q1"], ["p2", "q2"]) == 1
    with pytest.raises(MatroidError):
        freedom_bound(J, "b2", ["p1", "q1"], ["p1"])
    with pytest.raises(MatroidError, match="closure"):
        freedom_bound(J, "b2", ["p3", "q3"], ["p4", "q4"])


def test_strand_certificates():
    J = F.swirl_with_joints(3, [1, 2, 3])
    rest = ["b2", "b3", "p2", "p3", "q2", "q3"]
    assert strand_certificate(J, ["p1", "q1"], "b1", rest) == "fixed_right"
    assert strand_certificate(J, ["b2", "p1", "p2", "q1", "q2"], "b1", ["b3", "p3", "q3"]) \
        == "fixed_left"
    assert strand_certificate(J, ["b1", "q1"], "p1", rest) == "not_fixed"
    with pytest.raises(MatroidError):
        strand_certificate(J, ["p1"], "b1", rest)


def test_loose_elements_of_swirl_fixtures_are_fixed():
    checked, bad = loose_fixedness_failures()
    assert checked == 88 and bad == []


def test_strand_certificates_agree_with_is_fixed():
    checked, bad = strand_disagreements(catalog(10))
    assert checked > 0 and bad == []
