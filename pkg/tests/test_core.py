import json
from itertools import combinations

import numpy as np
import pytest

from matroidkit import families as F
from matroidkit.catalog import catalog
from matroidkit.core import (
    CapacityError, Matroid, MatroidError, MinorSpec, check_axioms, find_isomorphism, from_bases,
    from_dict, from_graph, is_isomorphic, loads, relax, uniform,
)


def graph_rank(edges, subset):
    # union-find oracle
    parent = {}

    def find(v):
        while parent.get(v, v) != v:
            v = parent[v]
        return v

    r = 0
    for i in subset:
        a, b = find(edges[i][0]), find(edges[i][1])
        if a != b:
            parent[a] = b
            r += 1
    return r


def test_uniform_ranks(u24):
    for s in combinations(u24.elements, 3):
        assert u24.rank(s) == 2
    assert u24.rank([]) == 0


def test_swirl_legs_have_rank_two(swirl5):
    for p, q in F.leg_labels(5):
        assert swirl5.rank([p, q]) == 2


def test_wheel_ranks_match_union_find():
    M = F.wheel(3)
    edges = [("h", "w1"), ("w1", "w2"), ("h", "w2"), ("w2", "w3"), ("h", "w3"), ("w3", "w1")]
    G = from_graph([f"e{i}" for i in range(6)], edges)
    for m in range(64):
        assert G.table[m] == graph_rank(edges, [i for i in range(6) if m >> i & 1])
    assert is_isomorphic(M, G)
    rim = [e for e in M.elements if e.startswith("r")]
    assert M.rank(rim) == 2


def test_dual_of_u24_is_u24(u24):
    D = u24.dual()
    assert np.array_equal(D.table, u24.table)
    assert D.dual().table.tobytes() == u24.table.tobytes()


@pytest.mark.parametrize("n", [3, 4, 5])
def test_free_swirl_self_dual(n):
    M = F.free_swirl(n)
    assert find_isomorphism(M, M.dual()) is not None


@pytest.mark.parametrize("n", [3, 4])
def test_free_spike_self_dual(n):
    M = F.free_spike(n)
    assert find_isomorphism(M, M.dual()) is not None


def test_empty_minor_is_identity(swirl4):
    N = swirl4.minor(MinorSpec(0, 0))
    assert N.elements == swirl4.elements and np.array_equal(N.table, swirl4.table)


def test_spike_is_tip_deletion():
    tipped = F.free_spike(3, tip=True)
    tip = [e for e in tipped.elements if e not in F.free_spike(3).elements]
    assert len(tip) == 1
    assert is_isomorphic(tipped.delete(tipped.mask(tip)), F.free_spike(3))


def test_swirl_minor_is_smaller_swirl(swirl4):
    N = swirl4.minor(MinorSpec(swirl4.mask(["q4"]), swirl4.mask(["p4"])))
    assert N.n == 6 and N.rank(N.full) == 3
    assert find_isomorphism(N, F.free_swirl(3)) is not None


def test_closure_basics(u24):
    assert u24.closure(0) == 0
    U = uniform(3, 6)
    for pair in combinations(range(6), 2):
        m = sum(1 << i for i in pair)
        assert U.closure(m) == m


def test_spike_leg_pair_closure():
    M = F.free_spike(4)
    legs = [M.mask([f"x{i}", f"y{i}"]) for i in range(1, 5)]
    for a, b in combinations(legs, 2):
        assert M.closure(a | b) == a | b


def test_circuits(u24, swirl4):
    assert sorted(int(c) for c in u24.circuit_masks()) == sorted(
        sum(1 << i for i in s) for s in combinations(range(4), 3))
    circuits = {int(c) for c in swirl4.circuit_masks()}
    legs = [swirl4.mask([p, q]) for p, q in F.leg_labels(4)]
    for i in range(4):
        assert legs[i] | legs[(i + 1) % 4] in circuits
    # only leg pairs are non-spanning
    small = {c for c in circuits if swirl4.rank(c) < 4}
    assert small == {legs[i] | legs[(i + 1) % 4] for i in range(4)}


def test_axioms():
    assert check_axioms(F.uniform(2, 4)).valid
    bad = Matroid(["a"], np.array([0, 2], dtype=np.int8))
    rep = check_axioms(bad)
    assert not rep.valid and rep.violation == "unit increase"


@pytest.mark.parametrize("name,M", list(catalog(12).items()))
def test_catalog_axioms(name, M):
    assert check_axioms(M).valid


def test_isomorphism_checks():
    assert find_isomorphism(F.free_swirl(3), F.uniform(3, 6)) is not None
    assert find_isomorphism(F.free_spike(3), F.free_swirl(3)) is not None
    assert find_isomorphism(F.uniform(2, 4), F.uniform(2, 5)) is None


def test_relaxation_of_fano_is_non_fano():
    fano = catalog()["fano"]
    line = next(int(c) for c in fano.circuit_masks() if bin(int(c)).count("1") == 3)
    assert is_isomorphic(relax(fano, line), catalog()["non_fano"])


def test_json_round_trip(swirl4):
    back = loads(swirl4.to_json())
    assert back.elements == swirl4.elements and np.array_equal(back.table, swirl4.table)
    B = from_bases(["a", "b", "c"], [["a", "b"], ["a", "c"], ["b", "c"]], name="u23")
    assert np.array_equal(loads(B.to_json()).table, B.table)


@pytest.mark.parametrize("doc,where", [
    ({"elements": ["a"]}, "$"),
    ({"elements": [1], "backend": {}}, "$.elements"),
    ({"elements": ["a"], "backend": {"kind": "rank_table", "ranks": {"": 0}}}, "$.backend.ranks"),
    ({"elements": ["a"], "backend": {"kind": "linear", "q": 2, "matrix": [[1, 1]]}},
     "$.backend.matrix"),
])
def test_bad_json_names_the_path(doc, where):
    with pytest.raises(MatroidError, match=__import__("re").escape(where)):
        from_dict(doc)
    with pytest.raises(MatroidError):
        loads("{not json")


def test_capacity(monkeypatch):
    monkeypatch.setenv("MATROID_CAP", "5")
    with pytest.raises(CapacityError):
        F.uniform(3, 6)
    assert json.loads(F.uniform(2, 4).to_json())["elements"]
