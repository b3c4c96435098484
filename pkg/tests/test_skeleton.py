import pytest

from matroidkit import families as F
from matroidkit.acceptance import chain_failures, skeleton_hygiene
from matroidkit.catalog import catalog
from matroidkit.core import MatroidError
from matroidkit.skeleton import (
    ChainError, DisplayCandidate, chain_minors, chain_reduce, element_profile, find_gangs,
    has_four_element_fan, is_k_skeleton, is_maximal, is_unique_fracture, verify_display,
    wild_triangles,
)

SKELETONS_10 = ['U2,4', 'U2,5', 'U3,5', 'U3,6', 'U3,7', 'U4,8', 'vamos', 'free_swirl3',
                'free_swirl4', 'free_spike3', 'free_spike4', 'free_spike5']


def test_small_skeletons():
    assert is_k_skeleton(F.uniform(2, 4), 5)
    assert is_k_skeleton(F.free_swirl(4), 5)


def test_non_skeletons_give_reasons():
    v = is_k_skeleton(F.wheel(5), 5)
    assert not v and v.reason == "wheel of rank 5"
    v = is_k_skeleton(F.free_swirl(5), 5)
    assert not v and v.reason == "not k-coherent"


def test_skeleton_needs_k_at_least_5():
    with pytest.raises(MatroidError):
        is_k_skeleton(F.free_swirl(4), 4)


def test_catalog_skeletons():
    assert [n for n, M in catalog(10).items() if is_k_skeleton(M, 5)] == SKELETONS_10


def test_skeleton_duality_on_catalog():
    passing, _, dual_bad = skeleton_hygiene(catalog(10))
    assert passing == len(SKELETONS_10) and dual_bad == []


def test_skeletons_with_at_least_five_elements_have_no_four_fan():
    for name in SKELETONS_10:
        M = catalog(10)[name]
        if M.n >= 5:
            assert not has_four_element_fan(M), name


@pytest.mark.xfail(strict=True, reason="U2,4 is a skeleton and is itself a 4-element fan")
def test_no_skeleton_has_a_four_fan():
    _, fans, _ = skeleton_hygiene(catalog(10))
    assert fans == []


def test_element_profile_of_swirl():
    prof = element_profile(F.free_swirl(4), 5)
    assert len(prof) == 8
    assert prof[0].element == "p1" and "clonal_pair_member" in prof[0].tags
    assert all(p.del_3conn and p.con_3conn for p in prof)


def test_no_exceptional_structures_in_small_swirl():
    assert wild_triangles(F.wheel(4), 5) == []
    assert find_gangs(F.free_swirl(4), 5) == []


def test_chain_on_four_leg_swirl():
    M = F.free_swirl(4)
    steps = chain_reduce(M, 5)
    assert [s.move for s in steps] == ["clonal_pair", "delete", "contract"]
    assert [N.n for N in chain_minors(M, steps)] == [8, 6, 5, 4]
    assert chain_failures(4) is None


def test_chain_refuses_non_skeleton():
    with pytest.raises(ChainError, match="not a 5-skeleton"):
        chain_reduce(F.free_swirl(5), 5)


@pytest.mark.xfail(strict=True, reason="the five-leg swirl is 5-fractured, so no chain starts there")
def test_chain_on_five_leg_swirl():
    assert chain_failures(5) is None


def test_swirl_legs_are_a_maximal_unique_fracture():
    S = F.free_swirl(5)
    legs = [S.mask([f"p{i}", f"q{i}"]) for i in range(1, 6)]
    assert is_maximal(S, legs) and is_unique_fracture(S, legs, 5)
    assert not is_maximal(S, [legs[0] | legs[1]] + legs[2:])


def _wild(T):
    return DisplayCandidate("k_wild_display", {
        "A": [["x1"], ["y1"]], "B": [["x2"], ["y2"]], "C": [["x3"], ["y3"]], "T": T})


def test_display_report_lists_each_clause():
    M = F.free_spike(4, tip=True)
    rep = verify_display(M, _wild(["t", "x4", "y4"]), 4)
    assert rep.clauses == {"three_tight_swirls": False, "deletions_fractured": False}
    assert not rep.valid and rep.to_dict()["kind"] == "k_wild_display"


def test_malformed_displays_fail_before_matroid_queries():
    M = F.free_spike(4, tip=True)
    with pytest.raises(MatroidError, match="overlap"):
        verify_display(M, _wild(["t", "x1", "y4"]), 4)
    with pytest.raises(MatroidError, match="k - 2 parts"):
        verify_display(M, _wild(["t", "x4", "y4"]), 5)
    with pytest.raises(MatroidError, match="unknown display kind"):
        verify_display(M, DisplayCandidate("trident", {}), 4)
