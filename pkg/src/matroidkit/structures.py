"""Fans, quads, wheels and whirls, series-parallel reduction and the delta-wye exchange."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .connectivity import NotThreeConnected, low_separation
from .core import Matroid, MatroidError, bits, popcount


@dataclass
class FanRecord:
    ordering: list[str]
    rim: int
    spoke: int
    maximal: bool = True
    alt_orderings: list[list[str]] = field(default_factory=list)

    def to_dict(self, M: Matroid) -> dict:
        return {
            "ordering": self.ordering,
            "rim": sorted(M.labels(self.rim)),
            "spoke": sorted(M.labels(self.spoke)),
            "maximal": self.maximal,
            "alt_orderings": self.alt_orderings,
        }


@dataclass
class QuadRecord:
    elements: int


@dataclass
class FanQuadReport:
    fans: list[FanRecord]
    quads: list[QuadRecord]
    triangles: list[int]
    triads: list[int]


def triangles(M: Matroid) -> list[int]:
    return [int(c) for c in M.circuit_masks() if popcount(int(c)) == 3]


def triads(M: Matroid) -> list[int]:
    return [int(c) for c in M.dual().circuit_masks() if popcount(int(c)) == 3]


def quads(M: Matroid) -> list[int]:
    co = {int(c) for c in M.dual().circuit_masks() if popcount(int(c)) == 4}
    return [int(c) for c in M.circuit_masks() if popcount(int(c)) == 4 and int(c) in co]


def _fan_orderings(tri: set[int], trd: set[int], n: int) -> dict[int, list[tuple]]:
    """All fan orderings of length >= 3, grouped by underlying set."""
    out: dict[int, list[tuple]] = {}

    def grow(seq: tuple, used: int, last_triangle: bool):
        out.setdefault(used, []).append(seq)
        a, b = seq[-2], seq[-1]
        want = trd if last_triangle else tri
        for e in range(n):
            if used >> e & 1:
                continue
            if (1 << a | 1 << b | 1 << e) in want:
                grow(seq + (e,), used | 1 << e, not last_triangle)

    for t in tri | trd:
        for seq in _perms3(t):
            m = t
            if t in tri:
                grow(seq, m, True)
            if t in trd:
                grow(seq, m, False)
    return out


def _perms3(mask: int):
    a, b, c = bits(mask)
    return [(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)]


def _rim_spoke(M: Matroid, seq: tuple, tri: set[int]) -> tuple[int, int]:
    # rims sit in the middle of triangles, spokes in the middle of triads
    first_triangle = (1 << seq[0] | 1 << seq[1] | 1 << seq[2]) in tri
    rim = spoke = 0
    for i, e in enumerate(seq):
        is_rim = (i % 2 == 1) == first_triangle
        if is_rim:
            rim |= 1 << e
        else:
            spoke |= 1 << e
    return rim, spoke


def find_fans_quads(M: Matroid) -> FanQuadReport:
    bad = low_separation(M, 3)
    if bad is not None:
        raise NotThreeConnected(M, bad)
    tri, trd = triangles(M), triads(M)
    groups = _fan_orderings(set(tri), set(trd), M.n)
    sets = sorted(groups, key=lambda m: (-popcount(m), m))
    fans = []
    for s in sets:
        if any(o != s and o & s == s for o in groups):
            continue
        orders = sorted(tuple(M.elements[i] for i in seq) for seq in groups[s])
        best = orders[0]
        seq = tuple(M.index(e) for e in best)
        rim, spoke = _rim_spoke(M, seq, set(tri))
        alts = [list(o) for o in orders[1:]] if popcount(s) == 4 else []
        fans.append(FanRecord(list(best), rim, spoke, True, alts))
    return FanQuadReport(fans, [QuadRecord(q) for q in quads(M)], tri, trd)


def is_fan(M: Matroid, ordering) -> bool:
    idx = [M.index(e) for e in ordering]
    if len(idx) < 3:
        return True
    tri, trd = set(triangles(M)), set(triads(M))
    kinds = []
    for i in range(len(idx) - 2):
        t = 1 << idx[i] | 1 << idx[i + 1] | 1 << idx[i + 2]
        if t not in tri and t not in trd:
            return False
        kinds.append((t in tri, t in trd))
    for (a_tri, a_trd), (b_tri, b_trd) in zip(kinds, kinds[1:]):
        if a_tri != b_trd:
            return False
    return True


def recognize_wheel_whirl(M: Matroid) -> tuple[str, int | None]:
    """('wheel', n), ('whirl', n) or ('neither', None)."""
    if M.n < 6 or M.n % 2 or low_separation(M, 3) is not None:
        return "neither", None
    tri, trd = set(triangles(M)), set(triads(M))
    groups = _fan_orderings(tri, trd, M.n)
    if M.full not in groups:
        return "neither", None
    seq = min(groups[M.full])
    rim, _ = _rim_spoke(M, seq, tri)
    n = M.n // 2
    r = M.rank(rim)
    if r == n - 1:
        return "wheel", n
    if r == n:
        return "whirl", n
    return "neither", None


# ---------------------------------------------------------------------------
# series and parallel classes


def parallel_classes(M: Matroid) -> list[int]:
    t = M.table
    loops = M.loops()
    seen, out = 0, []
    for i in range(M.n):
        if (loops | seen) >> i & 1:
            continue
        cls = 1 << i
        for j in range(i + 1, M.n):
            if not (loops >> j & 1) and t[1 << i | 1 << j] == 1:
                cls |= 1 << j
        seen |= cls
        out.append(cls)
    return out


def series_classes(M: Matroid) -> list[int]:
    return parallel_classes(M.dual())


def _least(M: Matroid, cls: int) -> int:
    return M.index(min(M.labels(cls)))


def simplify_cosimplify(M: Matroid):
    """(si(M), co(M), parallel classes, series classes); one kept label per class."""
    par = parallel_classes(M)
    keep = sum(1 << _least(M, c) for c in par)
    si = M.restrict(keep)
    ser = series_classes(M)
    keep_c = sum(1 << _least(M, c) for c in ser)
    co = M.contract(M.full ^ keep_c)
    return si, co, par, ser


def is_simple(M: Matroid) -> bool:
    return not M.loops() and all(popcount(c) == 1 for c in parallel_classes(M))


def is_cosimple(M: Matroid) -> bool:
    return is_simple(M.dual())


# ---------------------------------------------------------------------------
# delta-wye exchange

# K4 on vertices 1..4 with the triangle on {1,2,3}; local bits a,b,c,a',b',c'
_K4_EDGES = [(1, 2), (2, 3), (1, 3), (3, 4), (1, 4), (2, 4)]


def _k4_tables():
    from .core import from_graph

    k = from_graph([f"k{i}" for i in range(6)], _K4_EDGES)
    t = k.table
    cl = np.zeros(64, dtype=np.int64)
    for m in range(64):
        c = m
        for e in range(6):
            if t[m | 1 << e] == t[m]:
                c |= 1 << e
        cl[m] = c
    return t.astype(np.int64), cl


def closure_table(M: Matroid) -> np.ndarray:
    """cl(X) for every mask X, vectorised over the rank table."""
    got = M._cache.get("cltab")
    if got is None:
        t = M.table
        idx = np.arange(1 << M.n, dtype=np.int64)
        got = idx.copy()
        for e in range(M.n):
            got |= np.where(t[idx | (1 << e)] == t, 1 << e, 0)
        M._cache["cltab"] = got
    return got


def _in_four_fan(M: Matroid, T: int) -> bool:
    trd = set(triads(M))
    for e in range(M.n):
        if T >> e & 1:
            continue
        for a in bits(T):
            if (T ^ 1 << a | 1 << e) in trd:
                return True
    return False


def delta_y(M: Matroid, T, check_fan: bool = True, name: str | None = None) -> Matroid:
    """Delta-wye exchange on the triangle T, keeping the ground set.

    The result is the generalised parallel connection of M(K4) and M along
    T with T deleted and the complementary triad renamed onto T.  Element
    ``a`` of the result is the K4 edge opposite ``a``.
    """
    tm = M.mask(T)
    if popcount(tm) != 3 or M.rank(tm) != 2 or not any(int(c) == tm for c in M.circuit_masks()):
        raise MatroidError(f"{sorted(M.labels(tm))} is not a triangle")
    if check_fan and _in_four_fan(M, tm):
        raise MatroidError(f"{sorted(M.labels(tm))} lies in a 4-element fan")
    a, b, c = bits(tm)
    kt, kcl = _k4_tables()
    clM = closure_table(M)
    tM = M.table.astype(np.int64)
    n = M.n
    # result bits map: element i of M stays i; the new a,b,c reuse bits a,b,c
    idx = np.arange(1 << n, dtype=np.int64)
    base = idx & ~tm
    # K4 local mask for the primed elements a'=bit3, b'=bit4, c'=bit5
    kpart = (((idx >> a) & 1) << 3) | (((idx >> b) & 1) << 4) | (((idx >> c) & 1) << 5)
    mpart = base
    for _ in range(2 * n + 8):
        # shared triangle bits: M bits a,b,c <-> K4 bits 0,1,2
        shared_m = ((mpart >> a) & 1) | (((mpart >> b) & 1) << 1) | (((mpart >> c) & 1) << 2)
        k_new = kcl[kpart | shared_m]
        shared_k = k_new & 7
        lift = ((shared_k & 1) << a) | (((shared_k >> 1) & 1) << b) | (((shared_k >> 2) & 1) << c)
        m_new = clM[mpart | lift]
        if np.array_equal(m_new, mpart) and np.array_equal(k_new, kpart):
            break
        mpart, kpart = m_new, k_new
    else:  # pragma: no cover
        raise AssertionError("closure iteration did not converge")
    inter = (mpart >> a & 1) + (mpart >> b & 1) + (mpart >> c & 1)
    rT = np.minimum(inter, 2)
    ranks = tM[mpart] + kt[kpart] - rT
    return Matroid(M.elements, ranks.astype(np.int16), name=name or f"delta({M.name})")


def y_delta(M: Matroid, T, check_fan: bool = True, name: str | None = None) -> Matroid:
    d = delta_y(M.dual(), T, check_fan)
    out = d.dual()
    out.name = name or f"ydelta({M.name})"
    return out


def delta_y_clauses(M: Matroid, T, check_fan: bool = False) -> dict[str, bool]:
    """Check the four rank and connectivity laws of the exchange on T.

    The minor law is compared after swapping the labels of the two other
    triangle elements, since the exchange pairs each edge with its opposite.
    """
    from .connectivity import conn_table

    tm = M.mask(T)
    D = delta_y(M, tm, check_fan=check_fan)
    idx = np.arange(1 << M.n, dtype=np.int64)
    full_t = (idx & tm) == tm
    miss_t = (idx & tm) == 0
    tM, tD = M.table.astype(np.int64), D.table.astype(np.int64)
    lm, ld = conn_table(M), conn_table(D)
    out = {
        "rank_up": bool((tD[full_t] == tM[full_t] + 1).all()),
        "rank_same": bool((tD[miss_t] == tM[miss_t]).all()),
        "conn_same": bool((ld[full_t] == lm[full_t]).all()),
    }
    ok = True
    for t in bits(tm):
        u, v = bits(tm ^ 1 << t)
        left = M.delete(1 << t)
        right = D.contract(1 << t)
        names = {M.elements[u]: M.elements[v], M.elements[v]: M.elements[u]}
        right = right.relabel({e: names.get(e, e) for e in right.elements}).reorder(left.elements)
        ok &= bool(np.array_equal(left.table, right.table))
    out["minor_swap"] = ok
    return out


def fan_prefix_sequential(M: Matroid, ordering) -> bool:
    """Every prefix of the ordering is 3-separating (connectivity <= 2)."""
    from .connectivity import conn_table

    lam = conn_table(M)
    cur = 0
    for e in ordering:
        cur |= 1 << M.index(e)
        if lam[cur] > 2:
            return False
    return True


__all__ = [
    "FanRecord", "QuadRecord", "FanQuadReport", "find_fans_quads", "recognize_wheel_whirl",
    "simplify_cosimplify", "parallel_classes", "series_classes", "delta_y", "y_delta",
    "triangles", "triads", "quads", "is_fan", "closure_table", "is_simple", "is_cosimple",
    "fan_prefix_sequential", "delta_y_clauses",
]
