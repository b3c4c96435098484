"""Connectivity function, local connectivity, linkage and 3-separations.

Naming: ``connectivity`` is r(X) + r(E-X) - r(E); ``local_conn`` returns the
local connectivity of a pair in the matroid and in its dual;
``linking_conn`` is the least connectivity of a set squeezed between X and
the complement of Y; ``full_closure`` alternates closure and coclosure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Sequence

import numpy as np

from . import _kernels as K
from .core import Matroid, MatroidError, MinorSpec, bits, popcount


def conn_table(M: Matroid) -> np.ndarray:
    """Connectivity of every subset, as int8 (cached on the matroid)."""
    got = M._cache.get("conn")
    if got is None:
        t = M.table.astype(np.int16)
        idx = np.arange(len(t))
        got = (t + t[M.full ^ idx] - t[-1]).astype(np.int8)
        got.setflags(write=False)
        M._cache["conn"] = got
    return got


def connectivity(M: Matroid, X) -> int:
    m = M.mask(X)
    return int(conn_table(M)[m])


def _meet(t, x: int, y: int) -> int:
    return int(t[x]) + int(t[y]) - int(t[x | y])


def local_conn(M: Matroid, X, Y) -> tuple[int, int]:
    """Local connectivity of (X, Y) in M and in M*."""
    x, y = M.mask(X), M.mask(Y)
    if x & y:
        raise MatroidError("local connectivity needs disjoint sets")
    return _meet(M.table, x, y), _meet(M.dual().table, x, y)


def meet(M: Matroid, X, Y) -> int:
    """Local connectivity r(X) + r(Y) - r(X u Y) (sets may overlap)."""
    return _meet(M.table, M.mask(X), M.mask(Y))


def linking_conn(M: Matroid, X, Y, backend: str | None = None) -> int:
    """min connectivity(A) over X <= A <= E - Y, by branch and bound."""
    x, y = M.mask(X), M.mask(Y)
    if x & y:
        raise MatroidError("linking needs disjoint sets")
    free = M.full ^ x ^ y
    return K.min_conn(M.table, x, free, backend)


def linking_conn_exhaustive(M: Matroid, X, Y) -> int:
    x, y = M.mask(X), M.mask(Y)
    free = M.full ^ x ^ y
    sets = K.subset_masks(free) | x
    return int(conn_table(M)[sets].min())


def linking_witness(M: Matroid, X, Y) -> int:
    """Least mask A with X <= A <= E - Y attaining the minimum."""
    x, y = M.mask(X), M.mask(Y)
    free = M.full ^ x ^ y
    sets = K.subset_masks(free) | x
    vals = conn_table(M)[sets]
    return int(sets[np.flatnonzero(vals == vals.min())[0]])


def realize_linking(M: Matroid, X, Y) -> tuple[int, int]:
    """Partition (I, J) of E - X - Y with the linking value realised in M/I\\J.

    Also ``local_conn(X, I) == local_conn(Y, I) == 0``.  Among all such
    partitions the one with fewest contracted elements is returned, ties
    broken by the sorted index tuple of I.
    """
    x, y = M.mask(X), M.mask(Y)
    if x & y:
        raise MatroidError("linking needs disjoint sets")
    target = linking_conn(M, x, y)
    free = M.full ^ x ^ y
    I = K.subset_masks(free)
    t = M.table.astype(np.int16)
    rI = t[I]
    conn_minor = t[x | I] + t[y | I] - t[x | y | I] - rI
    ok = (
        (conn_minor == target)
        & (t[x] + rI - t[x | I] == 0)
        & (t[y] + rI - t[y | I] == 0)
    )
    hits = I[ok]
    if not len(hits):
        raise AssertionError("linking theorem violated: no realising minor found")
    pc = M.popcounts()[hits]
    best = hits[pc == pc.min()]
    i = min((int(h) for h in best), key=lambda h: bits(h))
    return i, free ^ i


def full_closure(M: Matroid, X) -> int:
    m = M.mask(X)
    while True:
        nxt = M.closure(m)
        nxt = M.coclosure(nxt)
        if nxt == m:
            return m
        m = nxt


def in_cl_either(M: Matroid, A, x) -> bool:
    """x lies in the closure or the coclosure of A."""
    a, b = M.mask(A), M.mask(x)
    return bool(M.closure(a) & b or M.coclosure(a) & b)


# ---------------------------------------------------------------------------
# separations


def low_separation(M: Matroid, k: int = 3) -> int | None:
    """Least side of a j-separation with j < k, or None (M is k-connected)."""
    lam = conn_table(M)
    pc = M.popcounts()
    cpc = M.n - pc
    bad = np.zeros(len(lam), dtype=bool)
    for j in range(1, k):
        bad |= (lam < j) & (pc >= j) & (cpc >= j)
    hit = np.flatnonzero(bad)
    return int(hit[0]) if len(hit) else None


def is_connected(M: Matroid) -> bool:
    return low_separation(M, 2) is None


def is_3_connected(M: Matroid) -> bool:
    return low_separation(M, 3) is None


class NotThreeConnected(MatroidError):
    def __init__(self, M: Matroid, side: int):
        self.side = side
        lam = connectivity(M, side)
        super().__init__(
            f"{M.name or 'matroid'} is not 3-connected: {sorted(M.labels(side))} has "
            f"connectivity {lam}"
        )


@dataclass
class SeparationRecord:
    side: int
    conn: int
    sequential: bool
    fcl_side: int
    fcl_coside: int

    def to_dict(self, M: Matroid) -> dict:
        return {
            "side": sorted(M.labels(self.side)),
            "coside": sorted(M.labels(M.full ^ self.side)),
            "lambda": self.conn,
            "sequential": self.sequential,
            "fcl_side": sorted(M.labels(self.fcl_side)),
            "fcl_coside": sorted(M.labels(self.fcl_coside)),
        }


def separation_record(M: Matroid, side: int) -> SeparationRecord:
    a = full_closure(M, side)
    b = full_closure(M, M.full ^ side)
    return SeparationRecord(side, connectivity(M, side), a == M.full or b == M.full, a, b)


def three_separating_sides(M: Matroid) -> np.ndarray:
    """Masks X containing element 0 with conn 2 and both sides of size >= 3."""
    lam = conn_table(M)
    pc = M.popcounts()
    idx = np.arange(len(lam))
    ok = (lam == 2) & (pc >= 3) & (M.n - pc >= 3) & ((idx & 1) == 1)
    return np.flatnonzero(ok)


def enumerate_3seps(M: Matroid) -> list[SeparationRecord]:
    bad = low_separation(M, 3)
    if bad is not None:
        raise NotThreeConnected(M, bad)
    return [separation_record(M, int(s)) for s in three_separating_sides(M)]


def non_sequential_3seps(M: Matroid) -> list[SeparationRecord]:
    return [r for r in enumerate_3seps(M) if not r.sequential]


def seps_equivalent(M: Matroid, A, B) -> bool:
    """Equivalence of the exact 3-separations (A, E-A) and (B, E-B)."""
    a, b = M.mask(A), M.mask(B)
    for s in (a, b):
        if connectivity(M, s) != 2:
            raise MatroidError(f"{sorted(M.labels(s))} is not exactly 3-separating")
    fa1, fa2 = full_closure(M, a), full_closure(M, M.full ^ a)
    fb1, fb2 = full_closure(M, b), full_closure(M, M.full ^ b)
    if fa1 == M.full or fa2 == M.full:
        return (fa1, fa2) in ((fb1, fb2), (fb2, fb1))
    return fa1 in (fb1, fb2)


def sep_class_key(M: Matroid, side: int) -> frozenset | None:
    """Key of the equivalence class of a non-sequential 3-separation.

    Two non-sequential separations are equivalent exactly when one side of
    each has the same full closure; the unordered pair of full closures is
    therefore a class invariant.  Sequential separations give None.
    """
    a = full_closure(M, side)
    b = full_closure(M, M.full ^ side)
    if a == M.full or b == M.full:
        return None
    return frozenset((a, b))


def sequential_order(M: Matroid, X) -> list[int] | None:
    """Greedy ordering of X whose prefixes stay 3-separating, or None."""
    x = M.mask(X)
    lam = conn_table(M)
    order, cur = [], 0
    while cur != x:
        nxt = next((i for i in bits(x & ~cur) if lam[cur | 1 << i] <= 2), None)
        if nxt is None:
            return None
        order.append(nxt)
        cur |= 1 << nxt
    return order


def side_classify(M: Matroid, A, x) -> str:
    """'guts', 'coguts' or 'neither' for x against (A, E - A - x)."""
    a, xm = M.mask(A), M.mask(x)
    if popcount(xm) != 1 or a & xm:
        raise MatroidError("x must be a single element outside A")
    if connectivity(M, a) != connectivity(M, a | xm):
        raise MatroidError("side classification needs connectivity(A) == connectivity(A + x)")
    b = M.full ^ a ^ xm
    if M.closure(a) & xm and M.closure(b) & xm:
        return "guts"
    if M.coclosure(a) & xm and M.coclosure(b) & xm:
        return "coguts"
    return "neither"


# ---------------------------------------------------------------------------
# blocking and bridging


@dataclass
class BridgingStatus:
    status: str  # "induced" or "bridged"
    witness: int | None  # extending side of M when induced


def _minor_masks(M: Matroid, spec: MinorSpec):
    c, d = M.mask(spec.contract), M.mask(spec.delete)
    N = M.minor(MinorSpec(c, d))
    return N, c, d


def _lift(M: Matroid, N: Matroid, a: int) -> int:
    return M.mask(N.labels(a))


def bridging_status(M: Matroid, spec: MinorSpec, A) -> BridgingStatus:
    """Is the separation (A, E(N) - A) of N = minor(M, spec) induced in M?"""
    N, c, d = _minor_masks(M, spec)
    a = N.mask(A) if not isinstance(A, (int, np.integer)) else int(A)
    k = connectivity(N, a)
    if not (0 < a < N.full):
        raise MatroidError("A must be a proper nonempty subset of E(N)")
    am = _lift(M, N, a)
    bm = _lift(M, N, N.full ^ a)
    if linking_conn(M, am, bm) == k:
        return BridgingStatus("induced", linking_witness(M, am, bm))
    return BridgingStatus("bridged", None)


def is_blocked(M: Matroid, x, A) -> bool:
    """x blocks the separation (A, E - x - A) of M \\ x."""
    xm = M.mask(x)
    return bridging_status(M, MinorSpec(0, xm), _project(M, xm, A)).status == "bridged"


def is_coblocked(M: Matroid, x, A) -> bool:
    xm = M.mask(x)
    return bridging_status(M, MinorSpec(xm, 0), _project(M, xm, A)).status == "bridged"


def _project(M, removed, A):
    keep = M.labels(M.full ^ removed)
    am = M.mask(A)
    return sum(1 << keep.index(e) for e in M.labels(am))


@dataclass
class BridgingSequence:
    order: list[str]
    roles: list[str]  # "delete" or "contract" per element

    def to_dict(self) -> dict:
        return {"order": self.order, "roles": self.roles}


def check_bridging_sequence(M: Matroid, spec: MinorSpec, A, order: Sequence[str],
                            roles: Sequence[str]) -> bool:
    """Check that the ordering and roles bridge the separation (A, E(N) - A).

    Roles alternate, deleted elements are coindependent, contracted ones
    independent, every prefix union with A keeps connectivity k, and removing
    each element drops the connectivity of the set before it.
    """
    N, c, d = _minor_masks(M, spec)
    a = N.mask(A) if not isinstance(A, (int, np.integer)) else int(A)
    k = connectivity(N, a) + 1
    vs = [M.index(v) for v in order]
    if sorted(vs) != bits(c | d):
        return False
    S = sum(1 << v for v, r in zip(vs, roles) if r == "delete")
    T = sum(1 << v for v, r in zip(vs, roles) if r == "contract")
    if S != d or T != c:
        return False
    # alternating parity
    for i in range(1, len(roles)):
        if roles[i] == roles[i - 1]:
            return False
    if not M.is_independent(T) or M.corank(S) != popcount(S):
        return False
    x1 = _lift(M, N, a)
    lam = conn_table(M)
    # the empty prefix counts too: without it a lone deletion can "bridge" an induced separation
    if lam[x1] != k:
        return False
    for i, v in enumerate(vs):
        pre = x1 | sum(1 << u for u in vs[: i + 1])
        if lam[pre] != k:
            return False
        left = x1 | sum(1 << u for u in vs[:i])
        sub = M.delete(1 << v) if roles[i] == "delete" else M.contract(1 << v)
        lm = sub.mask(M.labels(left))
        if connectivity(sub, lm) != k - 1:
            return False
    return True


def bridging_sequence(M: Matroid, spec: MinorSpec, A, max_removed: int = 8):
    """Shortest valid ordering of E(M) - E(N), or None.

    Every ordering of the removed set is a candidate; the roles are fixed by
    the spec (deleted elements play S, contracted ones T), and the two roles
    must alternate.
    """
    N, c, d = _minor_masks(M, spec)
    a = N.mask(A) if not isinstance(A, (int, np.integer)) else int(A)
    k = connectivity(N, a)
    if k < 0 or not (0 < a < N.full):
        raise MatroidError("A must be a proper nonempty subset of E(N)")
    removed = bits(c | d)
    if len(removed) > max_removed:
        raise MatroidError(f"bridging search is limited to {max_removed} removed elements")
    if not removed:
        return None
    if abs(popcount(c) - popcount(d)) > 1:
        return None
    for perm in permutations(removed):
        roles = ["delete" if d >> v & 1 else "contract" for v in perm]
        if any(roles[i] == roles[i - 1] for i in range(1, len(roles))):
            continue
        order = [M.elements[v] for v in perm]
        if check_bridging_sequence(M, spec, a, order, roles):
            seq = BridgingSequence(order, roles)
            if bridging_status(M, spec, a).status != "bridged":
                raise AssertionError("bridging sequence found for an induced separation")
            return seq
    return None


def minimal_bridging_sequence(M: Matroid, spec: MinorSpec, A, max_removed: int = 8):
    """Shortest bridging sequence over intermediate minors between M and N.

    Intermediate minors keep part of the removed set: M' = M \\ (D - S) / (C - T)
    for S <= D and T <= C, so that N = M' \\ S / T.  Returns ``(S, T, sequence)``
    for the first hit in order of |S| + |T|, or None.
    """
    N, c, d = _minor_masks(M, spec)
    a = N.mask(A) if not isinstance(A, (int, np.integer)) else int(A)
    removed = bits(c | d)
    for size in range(1, len(removed) + 1):
        for sub in combinations(removed, size):
            s = sum(1 << v for v in sub if d >> v & 1)
            t = sum(1 << v for v in sub if c >> v & 1)
            Mp = M.minor(MinorSpec(c & ~t, d & ~s))
            sp = MinorSpec(Mp.mask(M.labels(t)), Mp.mask(M.labels(s)))
            Np = Mp.minor(sp)
            ap = Np.mask(N.labels(a))
            seq = bridging_sequence(Mp, sp, ap, max_removed)
            if seq is not None:
                return s, t, seq
    return None


# ---------------------------------------------------------------------------
# paths of separations


@dataclass
class SepPath:
    kind: str  # "path3", "path2" or "strict2"
    steps: list[int]
    strong_pairs: list[tuple[int, int]] = field(default_factory=list)  # (step, pair mask)


@dataclass
class PathReport:
    valid: bool
    failures: list[str]
    displayed_flowers: list[list[int]] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.valid


def verify_path(M: Matroid, P: SepPath) -> PathReport:
    steps = [M.mask(s) for s in P.steps]
    fails: list[str] = []
    cover = 0
    for s in steps:
        if cover & s:
            fails.append("steps overlap")
        cover |= s
    if cover != M.full:
        fails.append("steps do not cover the ground set")
    if len(steps) < 2 or not steps[0] or not steps[-1]:
        fails.append("end steps must be nonempty")
    if fails:
        return PathReport(False, fails)
    lam = conn_table(M)
    want = 2 if P.kind == "path3" else 1
    if P.kind not in ("path3", "path2", "strict2"):
        raise MatroidError(f"unknown path kind {P.kind!r}")
    if P.kind == "strict2" and any(not s for s in steps):
        fails.append("strict paths have no empty steps")
    pre = 0
    for i, s in enumerate(steps[:-1]):
        pre |= s
        if lam[pre] != want:
            fails.append(f"prefix {i} has connectivity {int(lam[pre])}, expected {want}")
    if P.kind == "path3" and linking_conn(M, steps[0], steps[-1]) != 2:
        fails.append("end steps are not 3-linked")
    if P.kind in ("path2", "strict2") and not is_connected(M):
        fails.append("paths of 2-separations need a connected matroid")
    if P.kind == "strict2":
        for i, s in enumerate(steps[1:-1], start=1):
            if lam[s] != 2:
                fails.append(f"internal step {i} has connectivity {int(lam[s])}")
        bad = _irrelevant_2seps(M, steps)
        if bad is not None:
            fails.append(f"2-separation {sorted(M.labels(bad))} is neither relevant nor "
                         "inside a step")
    for i, pair in P.strong_pairs:
        pm = M.mask(pair)
        if pm & ~steps[i] or popcount(pm) != 2:
            fails.append(f"pair {sorted(M.labels(pm))} is not inside step {i}")
            continue
        if linking_conn(M, pm, M.full ^ steps[i]) != 2:
            fails.append(f"pair {sorted(M.labels(pm))} is not strong")
    flowers = []
    if P.kind == "path3" and not fails:
        from .flowers import is_flower

        pre = 0
        for i in range(1, len(steps) - 1):
            pre |= steps[i - 1]
            if steps[i] and is_flower(M, [pre, steps[i], M.full ^ pre ^ steps[i]]):
                flowers.append([pre, steps[i], M.full ^ pre ^ steps[i]])
    return PathReport(not fails, fails, flowers)


def _irrelevant_2seps(M: Matroid, steps: list[int]) -> int | None:
    lam = conn_table(M)
    pc = M.popcounts()
    two = np.flatnonzero((lam <= 1) & (pc >= 2) & (M.n - pc >= 2))
    l = len(steps) - 1
    prefixes = [0]
    for s in steps:
        prefixes.append(prefixes[-1] | s)
    for x in two:
        x = int(x)
        y = M.full ^ x
        relevant = False
        for j in range(1, l):
            base = prefixes[j]  # P_0 .. P_{j-1}
            for side in (x, y):
                if side & base == base and not side & ~(base | steps[j]):
                    relevant = True
        if relevant:
            continue
        if any(not x & ~s or not y & ~s for s in steps):
            continue
        return x
    return None


def path_to_dot(M: Matroid, P: SepPath) -> str:
    lam = conn_table(M)
    lines = ["graph path {", "  rankdir=LR;"]
    for i, s in enumerate(P.steps):
        m = M.mask(s)
        lines.append(f'  s{i} [shape=box,label="{" ".join(sorted(M.labels(m)))}"];')
    pre = 0
    for i, s in enumerate(P.steps[:-1]):
        pre |= M.mask(s)
        lines.append(f'  s{i} -- s{i + 1} [label="{int(lam[pre])}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
