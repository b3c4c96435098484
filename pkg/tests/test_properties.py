"""Property checks on random linear matroids over small fields."""

import numpy as np
from hypothesis import assume, given
from hypothesis import strategies as st

from matroidkit.connectivity import (
    conn_table, connectivity, linking_conn, linking_conn_exhaustive, local_conn, realize_linking,
)
from matroidkit.core import MinorSpec, check_axioms, find_isomorphism, from_matrix, loads
from matroidkit.fields import gf
from matroidkit.gfrep import Matrix


@st.composite
def linear_matroids(draw, max_n=9):
    q = draw(st.sampled_from([2, 3, 4, 5]))
    r = draw(st.integers(1, 4))
    n = draw(st.integers(r, max_n))
    entries = draw(st.lists(st.integers(0, q - 1), min_size=r * n, max_size=r * n))
    return from_matrix([f"e{i}" for i in range(n)], np.array(entries).reshape(r, n), q)


@st.composite
def matroid_and_masks(draw, parts=2, max_n=9):
    M = draw(linear_matroids(max_n))
    labels = draw(st.lists(st.integers(0, parts), min_size=M.n, max_size=M.n))
    masks = [sum(1 << i for i, c in enumerate(labels) if c == p) for p in range(1, parts + 1)]
    return M, masks


@given(linear_matroids())
def test_rank_axioms(M):
    assert check_axioms(M).valid


@given(linear_matroids())
def test_dual_is_an_involution(M):
    assert np.array_equal(M.dual().dual().table, M.table)
    assert M.dual().rank(M.dual().full) == M.n - M.rank(M.full)


@given(linear_matroids())
def test_connectivity_is_symmetric_and_dual_invariant(M):
    lam = conn_table(M)
    idx = np.arange(1 << M.n)
    assert np.array_equal(lam, lam[M.full ^ idx])
    assert np.array_equal(lam, conn_table(M.dual()))


@given(matroid_and_masks())
def test_minors_commute(data):
    M, (C, D) = data
    a = M.contract(C).delete(M.contract(C).mask(M.labels(D)))
    b = M.delete(D).contract(M.delete(D).mask(M.labels(C)))
    c = M.minor(MinorSpec(C, D))
    assert np.array_equal(a.table, b.table) and np.array_equal(a.table, c.table)


@given(matroid_and_masks(parts=1))
def test_contraction_dualises_to_deletion(data):
    M, (C,) = data
    assert np.array_equal(M.contract(C).dual().table, M.dual().delete(C).table)


@given(matroid_and_masks())
def test_linking_bounds(data):
    M, (X, Y) = data
    assume(X and Y)
    k = linking_conn(M, X, Y)
    assert local_conn(M, X, Y)[0] <= k <= min(connectivity(M, X), connectivity(M, Y))
    assert k == linking_conn_exhaustive(M, X, Y)


@given(matroid_and_masks(max_n=10))
def test_realize_linking_post_verifies(data):
    M, (X, Y) = data
    assume(X and Y)
    I, J = realize_linking(M, X, Y)
    assert I | J == M.full ^ X ^ Y and not I & J
    N = M.minor(MinorSpec(I, J))
    assert connectivity(N, N.mask(M.labels(X))) == linking_conn(M, X, Y)
    assert local_conn(M, X, I)[0] == 0 and local_conn(M, Y, I)[0] == 0


@given(linear_matroids(), st.randoms(use_true_random=False))
def test_isomorphism_finds_relabelled_copy(M, rnd):
    order = list(M.elements)
    rnd.shuffle(order)
    N = M.reorder(order).relabel(lambda e: "z" + e)
    iso = find_isomorphism(M, N)
    assert iso is not None
    assert all(N.rank([iso[e] for e in M.labels(m)]) == M.rank(m) for m in range(1 << M.n))


@given(linear_matroids())
def test_json_round_trip(M):
    assert np.array_equal(loads(M.to_json()).table, M.table)


@given(st.sampled_from([2, 3, 4, 5, 7, 8, 9]), st.data())
def test_field_distributivity(q, data):
    f = gf(q)
    a, b, c = (data.draw(st.integers(0, q - 1)) for _ in range(3))
    assert f.mul[a, f.add[b, c]] == f.add[f.mul[a, b], f.mul[a, c]]


@given(st.data())
def test_matrix_equivalence_is_invariant_under_scaling(data):
    q = data.draw(st.sampled_from([3, 5, 7]))
    f = gf(q)
    entries = np.array(data.draw(st.lists(st.integers(0, q - 1), min_size=8, max_size=8)))
    A = Matrix(f, list("abcd"), entries.reshape(2, 4))
    scales = np.array(data.draw(st.lists(st.integers(1, q - 1), min_size=4, max_size=4)))
    assert Matrix(f, A.labels, A.entries * scales % q).represents(A.matroid())
