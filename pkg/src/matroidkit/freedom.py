"""Cyclic flats, clones, and exact fixed/cofixed decisions.

An element e is not fixed when some single-element extension adds an
independent clone e' of e.  Extensions correspond to modular cuts, and the
clone requirement pins down which flats must be in the cut and which must
stay out:

* a flat F containing e with e in cl(F - e) must be in the cut;
* a flat avoiding e, and cl({e}) itself, must stay out.

The least modular cut containing the first family is generated by
up-closure and modular-pair intersections, so e is free exactly when that
generated cut misses the second family.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .connectivity import conn_table, linking_conn
from .core import CapacityError, Matroid, MatroidError, popcount

FREEDOM_CAP = 12
FLAT_GUARD = 22


def freedom_cap() -> int:
    raw = os.environ.get("MATROIDKIT_FREEDOM_CAP")
    return int(raw) if raw else FREEDOM_CAP


@dataclass
class CyclicFlatLattice:
    flats: list[int]

    def above(self, mask: int) -> list[int]:
        return [f for f in self.flats if f & mask == mask]


@dataclass
class ModularCut:
    flats: list[int]


@dataclass
class Verdict:
    fixed: bool
    witness: str
    cut: ModularCut | None = None


@dataclass
class FreedomReport:
    fixed: dict[str, bool] = field(default_factory=dict)
    cofixed: dict[str, bool] = field(default_factory=dict)
    clone_class: dict[str, int] = field(default_factory=dict)
    witnesses: dict[str, dict] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            e: {
                "fixed": self.fixed[e],
                "cofixed": self.cofixed[e],
                "clone_class": self.clone_class[e],
                **self.witnesses.get(e, {}),
            }
            for e in self.fixed
        }


def _flat_arrays(M: Matroid):
    got = M._cache.get("flat_arrays")
    if got is None:
        fl = np.array(M.flats(), dtype=np.int64)
        got = (fl, M.table[fl].astype(np.int64))
        M._cache["flat_arrays"] = got
    return got


def cyclic_flats(M: Matroid) -> CyclicFlatLattice:
    got = M._cache.get("cyclic")
    if got is None:
        t = M.table
        out = []
        for f in M.flats():
            if all(t[f & ~(1 << e)] == t[f] for e in range(M.n) if f >> e & 1):
                out.append(int(f))
        got = M._cache["cyclic"] = CyclicFlatLattice(out)
    return got


def _fingerprints(M: Matroid) -> list[int]:
    cf = cyclic_flats(M).flats
    return [sum(1 << i for i, f in enumerate(cf) if f >> e & 1) for e in range(M.n)]


def clonal_analysis(M: Matroid):
    """(clone classes as masks, freer-than predicate on element indices)."""
    fp = _fingerprints(M)
    classes: dict[int, int] = {}
    for e, f in enumerate(fp):
        classes[f] = classes.get(f, 0) | 1 << e
    cls = sorted(classes.values())

    def freer(a: int, b: int) -> bool:
        # every cyclic flat holding a also holds b
        return fp[a] & ~fp[b] == 0

    return cls, freer


def are_clones(M: Matroid, e, f) -> bool:
    fp = _fingerprints(M)
    return fp[M.index(e)] == fp[M.index(f)]


def swap_is_automorphism(M: Matroid, e, f) -> bool:
    """Oracle for clones: swapping e and f preserves every rank."""
    i, j = M.index(e), M.index(f)
    idx = np.arange(1 << M.n, dtype=np.int64)
    bi, bj = (idx >> i) & 1, (idx >> j) & 1
    swapped = idx & ~((1 << i) | (1 << j)) | (bi << j) | (bj << i)
    return bool(np.array_equal(M.table, M.table[swapped]))


# ---------------------------------------------------------------------------
# modular cuts


def _forced(M: Matroid, e: int):
    fl, rk = _flat_arrays(M)
    t = M.table
    bit = 1 << e
    has = (fl & bit) != 0
    spanned = has & (t[fl & ~bit] == rk)
    cle = M.closure(bit)
    out = (~has) | (fl == cle)
    return spanned, out


def generated_cut(M: Matroid, seed: np.ndarray) -> np.ndarray:
    """Least modular cut (boolean mask over ``M.flats()``) containing the seed."""
    fl, rk = _flat_arrays(M)
    t = M.table
    pos = {int(f): i for i, f in enumerate(fl)}
    member = seed.copy()
    while True:
        before = int(member.sum())
        for i in np.flatnonzero(member):
            member |= (fl & fl[i]) == fl[i]
        a = fl[member]
        ra = rk[member]
        inter = a[:, None] & a[None, :]
        modular = ra[:, None] + ra[None, :] == t[a[:, None] | a[None, :]] + t[inter]
        for x in {int(v) for v in inter[modular]}:
            member[pos[x]] = True  # intersections of flats are flats
        if int(member.sum()) == before:
            return member


def is_modular_cut(M: Matroid, member: np.ndarray) -> bool:
    fl, rk = _flat_arrays(M)
    t = M.table
    idx = np.flatnonzero(member)
    for i in idx:
        if (((fl & fl[i]) == fl[i]) & ~member).any():
            return False
    a, ra = fl[idx], rk[idx]
    inter = a[:, None] & a[None, :]
    modular = ra[:, None] + ra[None, :] == t[a[:, None] | a[None, :]] + t[inter]
    inside = {int(f) for f in a}
    return all(int(x) in inside for x in inter[modular])


def extension_table(M: Matroid, member: np.ndarray) -> np.ndarray:
    """Rank table of the extension by a new last element for the given cut."""
    fl, _ = _flat_arrays(M)
    from .structures import closure_table

    cl = closure_table(M)
    inside = np.zeros(1 << M.n, dtype=bool)
    inside[fl[member]] = True
    t = M.table.astype(np.int16)
    ext = t + (~inside[cl]).astype(np.int16)
    return np.concatenate([t, ext])


def _check_size(M: Matroid, cap: int | None):
    limit = freedom_cap() if cap is None else cap
    if M.n > limit:
        raise CapacityError(f"fixedness is limited to {limit} elements (got {M.n})")


def is_fixed(M: Matroid, e, cap: int | None = None, method: str = "cut") -> Verdict:
    _check_size(M, cap)
    i = M.index(e) if not isinstance(e, int) else e
    if M.loops() >> i & 1:
        return Verdict(True, "loop")  # no independent clone of a loop
    if method == "exhaustive":
        return _is_fixed_exhaustive(M, i)
    fp = _fingerprints(M)
    for j in range(M.n):
        if j != i and fp[j] == fp[i] and M.table[1 << i | 1 << j] == 2:
            return Verdict(False, f"independent clone {M.elements[j]}")
    need, out = _forced(M, i)
    cut = generated_cut(M, need)
    fl, _ = _flat_arrays(M)
    if (cut & out).any():
        return Verdict(True, "generated cut meets a forbidden flat")
    return Verdict(False, "extension", ModularCut([int(f) for f in fl[cut]]))


def is_cofixed(M: Matroid, e, cap: int | None = None, method: str = "cut") -> Verdict:
    D = M.dual()
    return is_fixed(D, D.index(e) if not isinstance(e, int) else e, cap, method)


def _extension_gives_clone(M: Matroid, i: int, member: np.ndarray) -> bool:
    ext = extension_table(M, member)
    n = M.n
    N = Matroid(list(M.elements) + ["__clone__"], ext)
    if N.table[1 << i | 1 << n] != 2:
        return False
    return swap_is_automorphism(N, M.elements[i], "__clone__")


def _is_fixed_exhaustive(M: Matroid, i: int, node_budget: int = 2_000_000) -> Verdict:
    """Oracle: enumerate modular cuts and test each extension directly."""
    fl, rk = _flat_arrays(M)
    t = M.table
    need, out = _forced(M, i)
    order = np.argsort(-rk, kind="stable")
    free = [int(k) for k in order if not need[k] and not out[k]]
    if len(free) > FLAT_GUARD:
        raise CapacityError(f"{len(free)} undetermined flats exceed the guard {FLAT_GUARD}")
    m = len(fl)
    nodes = 0
    supers = [np.flatnonzero(((fl & fl[k]) == fl[k]) & (np.arange(m) != k)) for k in range(m)]

    def rec(pos, member, decided):
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            raise CapacityError("modular cut enumeration exceeded its node budget")
        if pos == len(order):
            if is_modular_cut(M, member) and _extension_gives_clone(M, i, member):
                return member.copy()
            return None
        k = int(order[pos])
        choices = [True] if need[k] else [False] if out[k] else [False, True]
        for c in choices:
            if c and not member[supers[k]].all():
                continue  # up-closure: supersets come first in rank order
            member[k], decided[k] = c, True
            got = rec(pos + 1, member, decided)
            member[k], decided[k] = False, False
            if got is not None:
                return got
        return None

    found = rec(0, np.zeros(m, dtype=bool), np.zeros(m, dtype=bool))
    if found is None:
        return Verdict(True, "no modular cut yields an independent clone")
    return Verdict(False, "extension", ModularCut([int(f) for f in fl[found]]))


def freedom_report(M: Matroid, cap: int | None = None) -> FreedomReport:
    cls, _ = clonal_analysis(M)
    rep = FreedomReport()
    for e in M.elements:
        i = M.index(e)
        f, c = is_fixed(M, i, cap), is_cofixed(M, i, cap)
        rep.fixed[e], rep.cofixed[e] = f.fixed, c.fixed
        rep.clone_class[e] = next(k for k, m in enumerate(cls) if m >> i & 1)
        w = {"fixed_witness": f.witness, "cofixed_witness": c.witness}
        if f.cut is not None:
            w["cut"] = [sorted(M.labels(x)) for x in f.cut.flats]
        rep.witnesses[e] = w
    return rep


# ---------------------------------------------------------------------------
# certificates


def freedom_bound(M: Matroid, e, X, Y) -> int:
    """Local connectivity of (X, Y); an upper bound on the freedom of e."""
    i, x, y = M.mask(e), M.mask(X), M.mask(Y)
    if x & y or (x | y) & i:
        raise MatroidError("X, Y and e must be pairwise disjoint")
    if not (M.closure(x) & i and M.closure(y) & i):
        raise MatroidError("e must lie in the closure of both X and Y")
    bound = M.rank(x) + M.rank(y) - M.rank(x | y)
    if bound == 0 and not M.loops() & i:
        raise MatroidError("inconsistent inputs: skew sets cannot both span a non-loop")
    return bound


def _strands(M: Matroid, A: int, B: int) -> list[int]:
    t = M.table
    bits_b = [b for b in range(M.n) if B >> b & 1]
    out = []
    for sub in range(1, 1 << len(bits_b)):
        X = sum(1 << bits_b[k] for k in range(len(bits_b)) if sub >> k & 1)
        if int(t[A]) + int(t[X]) - int(t[A | X]) != 1:
            continue
        if all(int(t[A]) + int(t[X & ~(1 << b)]) - int(t[A | (X & ~(1 << b))]) == 0
               for b in range(M.n) if X >> b & 1):
            out.append(X)
    return out


def strand_certificate(M: Matroid, A, x, B) -> str:
    a, xm, b = M.mask(A), M.mask(x), M.mask(B)
    if popcount(xm) != 1 or a & b or (a | b) & xm or (a | b | xm) != M.full:
        raise MatroidError("(A, x, B) must partition the ground set with x a single element")
    lam = conn_table(M)
    if lam[a] != 2 or lam[a | xm] != 2 or linking_conn(M, a, b) != 2:
        raise MatroidError("(A, x, B) is not a path of 3-separations")
    if not (M.closure(a) & xm and M.closure(b) & xm):
        raise MatroidError("x is not a guts singleton")
    if any(M.closure(X) & xm for X in _strands(M, a, b)):
        return "fixed_right"
    if any(M.closure(X) & xm for X in _strands(M, b, a)):
        return "fixed_left"
    return "not_fixed"
