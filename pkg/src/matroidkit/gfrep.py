"""Representations over finite fields: search, canonical forms and counting.

Two matrices representing the same labelled matroid are equivalent when one
is obtained from the other by row operations and nonzero column scalings.
Every class has a unique representative: bring the matrix to ``[I | A]`` on
the lexicographically least basis, then scale rows and columns so that the
entries on a fixed spanning forest of A's support graph are all one.
Enumerating the free entries of that normal form therefore counts classes
exactly.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import combinations, product
from typing import Sequence

import numpy as np

from . import _kernels as K
from .core import CapacityError, Matroid, MatroidError, bits, from_matrix, popcount
from .fields import FieldSpec, gf

DEFAULT_BUDGET = 10**8

__all__ = [
    "FieldSpec", "gf", "Matrix", "RepClass", "find_representation",
    "enumerate_inequivalent", "are_equivalent", "canonical", "swirl_alpha_search",
    "kung_bound",
]


def _budget(budget):
    if budget is not None:
        return int(budget)
    return int(os.environ.get("MATROIDKIT_BUDGET", DEFAULT_BUDGET))


class Matrix:
    """A matrix over ``field`` whose columns are labelled by elements."""

    def __init__(self, field: FieldSpec, labels: Sequence[str], entries):
        self.field = field
        self.labels = list(labels)
        arr = np.array(entries, dtype=np.int64)
        if arr.ndim == 1:
            arr = arr.reshape(-1, len(self.labels))
        if arr.shape[1] != len(self.labels):
            raise MatroidError("one column per label required")
        if arr.size and (arr.min() < 0 or arr.max() >= field.q):
            raise MatroidError(f"entries must be field indices below {field.q}")
        self.entries = arr
        self.entries.setflags(write=False)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    def matroid(self, name: str = "") -> Matroid:
        return from_matrix(self.labels, self.entries, self.field, name=name)

    def represents(self, M: Matroid) -> bool:
        if list(M.elements) != self.labels:
            return False
        return np.array_equal(self.matroid().table, M.table)

    def to_dict(self) -> dict:
        return {
            "q": self.field.q,
            "rows": int(self.rows),
            "labels": list(self.labels),
            "entries": self.entries.tolist(),
        }

    @classmethod
    def from_dict(cls, doc) -> "Matrix":
        try:
            field = gf(int(doc["q"]))
            labels = doc["labels"]
            entries = doc["entries"]
        except (KeyError, TypeError) as exc:
            raise MatroidError(f"malformed matrix document: {exc}") from None
        return cls(field, labels, np.array(entries, dtype=np.int64).reshape(-1, len(labels)))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and other.field == self.field
            and other.labels == self.labels
            and np.array_equal(other.entries, self.entries)
        )

    def __repr__(self) -> str:
        return f"Matrix(GF({self.field.q}), {self.labels}, {self.entries.tolist()})"


@dataclass(frozen=True)
class RepClass:
    basis: int
    canonical: Matrix

    def key(self) -> tuple:
        return tuple(self.canonical.entries.ravel().tolist())

    def to_dict(self) -> dict:
        d = self.canonical.to_dict()
        d["basis"] = [self.canonical.labels[i] for i in bits(self.basis)]
        return d


def least_basis(M: Matroid) -> int:
    """Lexicographically least basis: greedy over the element order."""
    b = 0
    t = M.table
    for i in range(M.n):
        if t[b | (1 << i)] > t[b]:
            b |= 1 << i
    return b


def _support(M: Matroid, basis: int) -> np.ndarray:
    """0/1 array (r, n): row i covers the fundamental circuits through b_i."""
    brow = bits(basis)
    r = len(brow)
    sup = np.zeros((r, M.n), dtype=bool)
    t = M.table
    for j in range(M.n):
        if basis >> j & 1:
            sup[brow.index(j), j] = True
            continue
        for i, b in enumerate(brow):
            if t[(basis ^ (1 << b)) | (1 << j)] == r:
                sup[i, j] = True
    return sup


def _forest(sup: np.ndarray, basis: int) -> list[tuple[int, int]]:
    """Lexicographically least spanning forest of the row/column support graph.

    Edges are scanned column by column (ground-set order) and row by row; a
    union-find keeps the first edge joining two components.
    """
    r, n = sup.shape
    parent = list(range(r + n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    edges = []
    for j in range(n):
        if basis >> j & 1:
            continue
        for i in range(r):
            if sup[i, j]:
                a, b = find(i), find(r + j)
                if a != b:
                    parent[max(a, b)] = min(a, b)
                    edges.append((i, j))
    return edges


def _standard_form(mat: Matrix, basis: int) -> np.ndarray | None:
    """Row-reduce so the basis columns become the identity, in basis order."""
    f = mat.field
    brow = bits(basis)
    a = mat.entries
    sub = a[:, brow]
    red, piv = f.rref(np.concatenate([sub, a], axis=1))
    if len(piv) != len(brow) or piv != list(range(len(brow))):
        return None
    return red[:, len(brow):]


def canonical(mat: Matrix, basis: int | None = None) -> RepClass:
    """Canonical representative of the equivalence class of ``mat``."""
    f = mat.field
    M = mat.matroid()
    basis = least_basis(M) if basis is None else basis
    std = _standard_form(mat, basis)
    if std is None:
        raise MatroidError("chosen columns are not a basis of the matrix")
    sup = std != 0
    edges = _forest(sup, basis)
    r, n = std.shape
    # propagate row/column scalings along the forest so its entries become 1
    rs = [0] * r
    cs = [0] * n
    adj: dict[int, list[tuple[int, int]]] = {}
    for i, j in edges:
        adj.setdefault(i, []).append((i, j))
        adj.setdefault(r + j, []).append((i, j))
    seen = set()
    for start in list(range(r)) + [r + j for j in range(n)]:
        if start in seen:
            continue
        seen.add(start)
        if start < r:
            rs[start] = 1
        else:
            cs[start - r] = 1
        stack = [start]
        while stack:
            node = stack.pop()
            for i, j in adj.get(node, []):
                other = r + j if node == i else i
                if other in seen:
                    continue
                seen.add(other)
                if other >= r:  # column scale from row scale
                    cs[j] = int(f.inv[f.mul[rs[i], std[i, j]]])
                else:
                    rs[i] = int(f.inv[f.mul[std[i, j], cs[j]]])
                stack.append(other)
    out = np.zeros_like(std)
    for i in range(r):
        for j in range(n):
            if basis >> j & 1:
                continue
            out[i, j] = f.mul[f.mul[rs[i], std[i, j]], cs[j]]
    for i, b in enumerate(bits(basis)):
        out[i, b] = 1
    return RepClass(basis, Matrix(f, mat.labels, out))


def are_equivalent(A: Matrix, B: Matrix) -> bool:
    if A.labels != B.labels or A.field != B.field:
        raise MatroidError("matrices must share field and column labels")
    MA, MB = A.matroid(), B.matroid()
    if not np.array_equal(MA.table, MB.table):
        return False
    basis = least_basis(MA)
    return canonical(A, basis).key() == canonical(B, basis).key()


# ---------------------------------------------------------------------------
# normal-form search


class _Search:
    def __init__(self, M: Matroid, field: FieldSpec, budget: int):
        self.M, self.f, self.budget = M, field, budget
        self.count = 0
        self.basis = least_basis(M)
        self.r = M.rank_all
        self.sup = _support(M, self.basis)
        self.forest = set(_forest(self.sup, self.basis))
        self.cols = [j for j in range(M.n) if not self.basis >> j & 1]
        brow = bits(self.basis)
        self.base = np.zeros((self.r, M.n), dtype=np.int64)
        for i, b in enumerate(brow):
            self.base[i, b] = 1
        # per column: the free rows, and the r-subsets to test once it is set
        assigned = self.basis
        self.free_rows, self.tests, self.want = [], [], []
        for j in self.cols:
            self.free_rows.append(
                [i for i in range(self.r) if self.sup[i, j] and (i, j) not in self.forest]
            )
            prev = bits(assigned)
            masks = [sum(1 << x for x in c) | (1 << j) for c in combinations(prev, self.r - 1)]
            masks = np.array(masks, dtype=np.int64)
            self.tests.append(masks)
            self.want.append(M.table[masks] if len(masks) else masks)
            assigned |= 1 << j

    def _column_options(self, k: int):
        j = self.cols[k]
        fixed = [i for i in range(self.r) if (i, j) in self.forest]
        free = self.free_rows[k]
        for vals in product(range(1, self.f.q), repeat=len(free)):
            col = np.zeros(self.r, dtype=np.int64)
            col[fixed] = 1
            col[free] = vals
            yield col

    def run(self, first_only: bool):
        found = []
        mat = self.base.copy()
        ncol = len(self.cols)

        def rec(k: int) -> bool:
            if k == ncol:
                found.append(mat.copy())
                return first_only
            j = self.cols[k]
            for col in self._column_options(k):
                self.count += 1
                if self.count > self.budget:
                    raise CapacityError(
                        f"representation search exceeded budget of {self.budget} candidates"
                    )
                mat[:, j] = col
                masks = self.tests[k]
                if len(masks):
                    ranks = K.linear_ranks(mat.T, masks, self.f)
                    if not np.array_equal(ranks == self.r, self.want[k] == self.r):
                        continue
                if rec(k + 1):
                    return True
            mat[:, j] = 0
            return False

        if self.r == 0:
            found.append(np.zeros((0, self.M.n), dtype=np.int64))
        else:
            rec(0)
        return found


def find_representation(M: Matroid, field: FieldSpec | int, budget: int | None = None):
    """A matrix over ``field`` whose column matroid is ``M``, or None."""
    field = gf(field) if isinstance(field, int) else field
    s = _Search(M, field, _budget(budget))
    found = s.run(first_only=True)
    if not found:
        return None
    mat = Matrix(field, list(M.elements), found[0])
    if not mat.represents(M):
        raise AssertionError("representation search produced a wrong matrix")
    return mat


def _is_connected(M: Matroid) -> bool:
    t = M.table
    full = M.full
    rE = int(t[full])
    idx = np.arange(1, full)
    return not np.any(t[idx].astype(np.int16) + t[full ^ idx] == rE)


def enumerate_inequivalent(M: Matroid, field: FieldSpec | int, budget: int | None = None,
                           check_pre: bool = True) -> list[RepClass]:
    """All inequivalent representations of ``M`` over ``field``, canonical order."""
    field = gf(field) if isinstance(field, int) else field
    if check_pre and M.n > 1:
        if not _is_connected(M):
            raise MatroidError("enumeration expects a connected matroid")
        pc = M.popcounts()
        t = M.table
        small = np.flatnonzero((pc >= 1) & (pc <= 2) & (t < pc))
        if len(small):
            raise MatroidError("enumeration expects a simple matroid")
        d = M.dual().table
        if len(np.flatnonzero((pc >= 1) & (pc <= 2) & (d < pc))):
            raise MatroidError("enumeration expects a cosimple matroid")
    s = _Search(M, field, _budget(budget))
    found = s.run(first_only=False)
    out = []
    for arr in found:
        mat = Matrix(field, list(M.elements), arr)
        if not mat.represents(M):
            raise AssertionError("enumeration produced a matrix for a different matroid")
        out.append(RepClass(s.basis, mat))
    out.sort(key=RepClass.key)
    return out


def kung_bound(q: int, r: int) -> int:
    """Largest size of a simple rank-r matroid representable over GF(q)."""
    return (q**r - 1) // (q - 1)


# ---------------------------------------------------------------------------
# swirls in the normal form used to exclude them


def swirl_alpha_matrix(alphas: Sequence[int], chosen: Sequence[bool], field: FieldSpec):
    """Square matrix of a leg transversal.

    ``alphas`` are the parameters of the second element of each leg
    (the last one belongs to the closing leg); ``chosen[i]`` selects that
    second element on leg ``i`` instead of the all-ones one.  The closing
    leg always contributes its parametrised element.
    """
    n = len(alphas)
    m = np.zeros((n, n), dtype=np.int64)
    for i in range(n - 1):
        m[i, i] = 1
        m[i + 1, i] = alphas[i] if chosen[i] else 1
    m[0, n - 1] = alphas[n - 1]
    m[n - 1, n - 1] = 1
    return m


def swirl_alpha_search(n: int, field: FieldSpec | int):
    """Parameters making every leg transversal through the closing leg nonsingular.

    Legs ``1..n-1`` carry ``(1, 1)`` and ``(1, a_i)`` on consecutive
    coordinates; simplicity forces ``a_i != 1``.  The closing leg's
    parametrised element is ``(a_n, 0, ..., 0, 1)``.  A transversal
    choosing the parametrised element on the legs in S has determinant
    ``1 + (-1)^(n-1) * a_n * prod_{i in S} a_i``, so it suffices to track
    the set of achievable products while extending the assignment.
    Returns the least witness ``[a_1, ..., a_n]`` or None.
    """
    if n < 3:
        raise MatroidError("swirl_alpha_search needs n >= 3")
    f = gf(field) if isinstance(field, int) else field
    sign = 1 if (n - 1) % 2 == 0 else int(f.neg[1])
    # det is zero exactly when sign * product == -1
    bad = int(f.neg[1])
    dead: set[tuple[int, frozenset]] = set()

    def rec(depth: int, prods: frozenset, acc: list[int]):
        if depth == n - 1:
            return list(acc)
        key = (depth, prods)
        if key in dead:
            return None
        for a in range(2, f.q):  # a != 0 and a != 1
            new = prods | frozenset(int(f.mul[p, a]) for p in prods)
            if any(int(f.mul[sign, p]) == bad for p in new):
                continue
            acc.append(a)
            got = rec(depth + 1, new, acc)
            if got is not None:
                return got
            acc.pop()
        dead.add(key)
        return None

    for an in range(1, f.q):
        if int(f.mul[sign, an]) == bad:
            continue
        got = rec(0, frozenset([an]), [])
        if got is not None:
            return got + [an]
    return None


def check_alpha_witness(alphas: Sequence[int], field: FieldSpec) -> bool:
    """Brute-force determinant check of every transversal (small n only)."""
    n = len(alphas)
    if any(a in (0, 1) for a in alphas[:-1]) or alphas[-1] == 0:
        return False
    for chosen in product([False, True], repeat=n - 1):
        if field.det(swirl_alpha_matrix(alphas, chosen, field)) == 0:
            return False
    return True
