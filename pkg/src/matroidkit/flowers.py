"""Flowers: verification, classification, order, and the k-fracture search.

A petal element is loose when it lies in the full closure of some other
petal; a petal is loose when all its elements are.  Three-petal flowers
whose local connectivities are all one are resolved with a loose element
when there is one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from .connectivity import NotThreeConnected, conn_table, full_closure, low_separation
from .core import Matroid, MatroidError, popcount

CLASSES = (
    "anemone_paddle", "anemone_copaddle", "spike_like", "swirl_like", "vamos_like",
    "unresolved", "trivial", "two_petal", "not_a_flower",
)


@dataclass
class FlowerReport:
    petals: list[int]
    kind: str
    violation: str | None = None
    tight_elements: int = 0
    loose_fans: list[list[tuple[str, str]]] = field(default_factory=list)
    order: int | None = None
    ambiguous: bool = False
    tight_equivalent: list[int] | None = None
    meets: list[list[int]] = field(default_factory=list)

    @property
    def is_flower(self) -> bool:
        return self.kind != "not_a_flower"

    def to_dict(self, M: Matroid) -> dict:
        out = {
            "petals": [sorted(M.labels(p)) for p in self.petals],
            "class": self.kind,
            "order": self.order,
            "tight_elements": sorted(M.labels(self.tight_elements)),
            "loose_fans": [[list(x) for x in fan] for fan in self.loose_fans],
            "meets": self.meets,
        }
        if self.violation:
            out["violation"] = self.violation
        if self.ambiguous:
            out["ambiguous"] = True
        if self.tight_equivalent is not None:
            out["tight_equivalent"] = [sorted(M.labels(p)) for p in self.tight_equivalent]
        return out


def _fcl(M: Matroid, X: int) -> int:
    cache = M._cache.setdefault("fcl", {})
    got = cache.get(X)
    if got is None:
        got = cache[X] = full_closure(M, X)
    return got


def _meet(t, x: int, y: int) -> int:
    return int(t[x]) + int(t[y]) - int(t[x | y])


def _masks(M: Matroid, petals) -> list[int]:
    return [M.mask(p) for p in petals]


def flower_violation(M: Matroid, petals: Sequence[int]) -> str | None:
    """None when the partition is a flower, else the first failed clause."""
    ps = list(petals)
    cover = 0
    for p in ps:
        if not p:
            return "empty petal"
        if cover & p:
            return "petals overlap"
        cover |= p
    if cover != M.full:
        return "petals do not cover the ground set"
    lam = conn_table(M)
    n = len(ps)
    if low_separation(M, 2) is not None:
        return "matroid is not connected"
    if n > 1:
        for i, p in enumerate(ps):
            if lam[p] != 2:
                return f"petal {i + 1} has connectivity {int(lam[p])}"
    if n > 2:
        for i in range(n):
            u = ps[i] | ps[(i + 1) % n]
            if lam[u] != 2:
                return f"petals {i + 1},{(i + 1) % n + 1} have union connectivity {int(lam[u])}"
    two = _two_separations(M)
    for x in two:
        y = M.full ^ x
        if not any((x & ~p) == 0 or (y & ~p) == 0 for p in ps):
            return f"2-separation {sorted(M.labels(x))} crosses the petals"
    return None


def _two_separations(M: Matroid) -> list[int]:
    lam = conn_table(M)
    pc = M.popcounts()
    idx = np.arange(len(lam))
    hit = np.flatnonzero((lam <= 1) & (pc >= 2) & (M.n - pc >= 2) & ((idx & 1) == 1))
    return [int(h) for h in hit]


def is_flower(M: Matroid, petals) -> bool:
    return flower_violation(M, _masks(M, petals)) is None


def is_quasi_flower(M: Matroid, petals) -> bool:
    ps = _masks(M, petals)
    lam = conn_table(M)
    n = len(ps)
    if sum(ps) != M.full or any(a & b for a, b in combinations(ps, 2)):
        return False
    for i in range(n):
        u = 0
        for k in range(n):
            u |= ps[(i + k) % n]
            if lam[u] > 2:
                return False
    for x in _two_separations(M):
        y = M.full ^ x
        if not any((x & ~p) == 0 or (y & ~p) == 0 for p in ps):
            return False
    return True


def is_anemone(M: Matroid, petals: Sequence[int]) -> bool:
    lam = conn_table(M)
    n = len(petals)
    for r in range(2, n - 1):
        for sub in combinations(petals, r):
            if lam[sum(sub)] != 2:
                return False
    return True


def meet_table(M: Matroid, petals: Sequence[int]) -> list[list[int]]:
    t = M.table
    return [[_meet(t, a, b) if a != b else 0 for b in petals] for a in petals]


def _class(M: Matroid, ps: list[int], meets) -> str:
    n = len(ps)
    if n == 1:
        return "trivial"
    if n == 2:
        return "two_petal"
    off = {meets[i][j] for i in range(n) for j in range(n) if i != j}
    anemone = is_anemone(M, ps)
    if anemone:
        if off == {2}:
            return "anemone_paddle"
        if off == {0}:
            return "anemone_copaddle"
        if off == {1}:
            return "spike_like" if n >= 4 else "unresolved"
    else:
        cons = {meets[i][(i + 1) % n] for i in range(n)}
        non = {meets[i][j] for i in range(n) for j in range(n)
               if i != j and (j - i) % n not in (1, n - 1)}
        if n >= 4 and cons == {1} and non == {0}:
            return "swirl_like"
        if n == 4 and cons == {1} and {meets[0][2], meets[1][3]} == {0, 1}:
            return "vamos_like"
        if n == 3 and off == {1}:
            return "unresolved"
    raise AssertionError(f"local connectivity pattern {meets} fits no flower class")


def loose_elements(M: Matroid, ps: Sequence[int]) -> int:
    loose = 0
    for p in ps:
        loose |= _fcl(M, p) & ~p
    return loose


def _cl_either(M: Matroid, X: int, e: int) -> bool:
    b = 1 << e
    return bool(M.closure(X) & b or M.coclosure(X) & b)


def _resolve_three(M: Matroid, ps: list[int], loose: int) -> str:
    for i, p in enumerate(ps):
        for e in (b for b in range(M.n) if loose >> b & 1 and p >> b & 1):
            others = [ps[(i + 1) % 3], ps[(i + 2) % 3]]
            for a, c in (others, others[::-1]):
                if _cl_either(M, a, e):
                    return "spike_like" if _cl_either(M, c, e) else "swirl_like"
    return "unresolved"


def displayed_sides(ps: Sequence[int], anemone: bool, full: int) -> list[int]:
    n = len(ps)
    out = set()
    if anemone:
        for r in range(1, n):
            for sub in combinations(ps, r):
                out.add(sum(sub))
    else:
        for i in range(n):
            u = 0
            for k in range(n - 1):
                u |= ps[(i + k) % n]
                out.add(u)
    return sorted(s for s in out if 0 < s < full)


def nonsequential_classes(M: Matroid, ps: Sequence[int], anemone: bool) -> set[frozenset]:
    keys = set()
    for s in displayed_sides(ps, anemone, M.full):
        a, b = _fcl(M, s), _fcl(M, M.full ^ s)
        if a != M.full and b != M.full:
            keys.add(frozenset((a, b)))
    return keys


def _tighten(M: Matroid, ps: list[int], anemone: bool, keys: set) -> tuple[list[int], bool]:
    ps = list(ps)
    while True:
        loose = loose_elements(M, ps)
        bad = [i for i, p in enumerate(ps) if p & ~loose == 0]
        if not bad:
            return ps, False
        merged = False
        for i in bad:
            n = len(ps)
            partners = range(n) if anemone else sorted({(i - 1) % n, (i + 1) % n})
            for j in partners:
                if j == i:
                    continue
                new = [p for k, p in enumerate(ps) if k != i]
                new[j - (j > i)] = ps[j] | ps[i]
                if len(new) >= 1 and flower_violation(M, new) is None:
                    an = len(new) < 4 or is_anemone(M, new)
                    if nonsequential_classes(M, new, an) == keys:
                        ps = new
                        merged = True
                        break
            if merged:
                break
        if not merged:
            return ps, True


def _loose_fans(M: Matroid, ps: list[int], loose: int) -> list[list[tuple[str, str]]]:
    fans = []
    n = len(ps)
    for i in range(n):
        plus = _fcl(M, ps[i]) & _fcl(M, ps[(i + 1) % n]) & loose
        left = ps[i] & ~loose
        seq = []
        while plus:
            nxt = None
            for e in range(M.n):
                if plus >> e & 1 and _cl_either(M, left, e):
                    nxt = e
                    break
            if nxt is None:  # fall back to index order
                nxt = (plus & -plus).bit_length() - 1
            tag = "guts" if M.closure(left) >> nxt & 1 else "coguts"
            seq.append((M.elements[nxt], tag))
            left |= 1 << nxt
            plus &= ~(1 << nxt)
        fans.append(seq)
    return fans


def classify_flower(M: Matroid, petals) -> FlowerReport:
    ps = _masks(M, petals)
    bad = flower_violation(M, ps)
    if bad is not None:
        return FlowerReport(ps, "not_a_flower", violation=bad)
    meets = meet_table(M, ps)
    kind = _class(M, ps, meets)
    loose = loose_elements(M, ps)
    if kind == "unresolved" and loose:
        kind = _resolve_three(M, ps, loose)
    rep = FlowerReport(ps, kind, tight_elements=M.full & ~loose, meets=meets)
    order, tight, amb = _order(M, ps)
    rep.order, rep.tight_equivalent, rep.ambiguous = order, tight, amb
    if kind == "swirl_like" or (kind == "unresolved" and len(ps) == 3):
        rep.loose_fans = _loose_fans(M, ps, loose)
    return rep


def _order(M: Matroid, ps: list[int]) -> tuple[int, list[int] | None, bool]:
    n = len(ps)
    anemone = n < 4 or is_anemone(M, ps)
    keys = nonsequential_classes(M, ps, anemone)
    if not keys:
        return 1, [M.full], False
    if len(keys) == 1:
        (pair,) = keys
        a = min(pair)
        return 2, [a, M.full ^ a], False
    tight, amb = _tighten(M, ps, anemone, keys)
    return len(tight), tight, amb


def flower_order(M: Matroid, petals) -> tuple[int, list[int] | None]:
    rep = classify_flower(M, petals)
    if not rep.is_flower:
        raise MatroidError(f"not a flower: {rep.violation}")
    return rep.order, rep.tight_equivalent


def canonical_petals(M: Matroid, ps: Sequence[int], anemone: bool = False) -> list[int]:
    """Least label sequence among rotations and reflections (any order for anemones)."""
    key = lambda seq: [sorted(M.labels(p)) for p in seq]  # noqa: E731
    if anemone:
        return sorted(ps, key=lambda p: sorted(M.labels(p)))
    n = len(ps)
    cands = []
    for seq in (list(ps), list(ps)[::-1]):
        for r in range(n):
            cands.append(seq[r:] + seq[:r])
    return min(cands, key=key)


# ---------------------------------------------------------------------------
# k-fractures


def _require_3conn(M: Matroid):
    bad = low_separation(M, 3)
    if bad is not None:
        raise NotThreeConnected(M, bad)


def _swirl_chains(M: Matroid, min_petals: int):
    """Cyclic sequences of 3-separating sets with the swirl-like meet pattern.

    The first petal holds element 0.  Consecutive petals meet in rank one,
    non-consecutive ones are skew, and every prefix stays 3-separating.
    """
    lam = conn_table(M)
    t = M.table.astype(np.int64)
    pc = M.popcounts()
    cand = np.flatnonzero((lam == 2) & (pc >= 2) & (M.n - pc >= 2)).astype(np.int64)
    full = M.full
    firsts = cand[(cand & 1) == 1]
    out = []

    def close(ps, rest):
        if len(ps) + 1 < min_petals or lam[rest] != 2:
            return
        last, first, prev = rest, ps[0], ps[-1]
        if _meet(t, prev, last) != 1 or _meet(t, first, last) != 1:
            return
        if lam[prev | last] != 2 or lam[first | last] != 2:
            return
        if any(_meet(t, p, last) for p in ps[1:-1]):
            return
        out.append(ps + [last])

    def grow(ps, used):
        rest = full ^ used
        if len(ps) >= 3:
            close(ps, rest)
        if len(ps) + 1 + popcount(rest) // 2 < min_petals:
            return
        opts = cand[((cand & used) == 0) & (cand != rest)]
        opts = opts[pc[rest ^ opts] >= 2]
        prev = ps[-1]
        ok = (t[prev] + t[opts] - t[prev | opts] == 1) & (lam[prev | opts] == 2)
        ok &= lam[used | opts] == 2
        for p in ps[:-1]:
            ok &= t[p] + t[opts] - t[p | opts] == 0
        for x in opts[ok]:
            grow(ps + [int(x)], used | int(x))

    for f in firsts:
        grow([int(f)], int(f))
    return out


def swirl_like_flowers(M: Matroid, min_petals: int = 4) -> list[FlowerReport]:
    _require_3conn(M)
    reps = []
    for ps in _swirl_chains(M, max(min_petals, 4)):
        rep = classify_flower(M, ps)
        if rep.kind == "swirl_like":
            reps.append(rep)
    return reps


def _fracture_key(M: Matroid, rep: FlowerReport):
    seq = canonical_petals(M, rep.petals)
    return (-len(seq), [sorted(M.labels(p)) for p in seq])


def find_k_fracture(M: Matroid, k: int) -> FlowerReport | None:
    """A swirl-like flower of order >= k with the most petals, or None."""
    if k < 4:
        raise MatroidError("k-fractures are defined for k >= 4")
    _require_3conn(M)
    if M.n < 2 * k:
        return None
    best = None
    for rep in swirl_like_flowers(M, k):
        if rep.order is None or rep.order < k:
            continue
        if best is None or _fracture_key(M, rep) < _fracture_key(M, best):
            best = rep
    if best is not None:
        best.petals = canonical_petals(M, best.petals)
        best.loose_fans = _loose_fans(M, best.petals, M.full & ~best.tight_elements)
    return best


def find_k_fracture_exhaustive(M: Matroid, k: int) -> FlowerReport | None:
    """Oracle: every cyclic sequence of disjoint 3-separating sets, checked by definition."""
    _require_3conn(M)
    lam = conn_table(M)
    pc = M.popcounts()
    cand = np.flatnonzero((lam == 2) & (pc >= 2) & (M.n - pc >= 2)).astype(np.int64)
    found = []

    def grow(ps, used):
        if used == M.full:
            if len(ps) >= k:
                rep = classify_flower(M, ps)
                if rep.kind == "swirl_like" and rep.order is not None and rep.order >= k:
                    found.append(rep)
            return
        rest = M.n - popcount(used)
        if len(ps) + rest // 2 < k:
            return  # petals have at least two elements
        ok = (cand & used) == 0
        if ps:
            ok &= lam[ps[-1] | cand] == 2  # consecutive petals have a 3-separating union
        else:
            ok &= (cand & 1) == 1
        for x in cand[ok]:
            grow(ps + [int(x)], used | int(x))

    grow([], 0)
    if not found:
        return None
    best = min(found, key=lambda r: (-(r.order or 0), _fracture_key(M, r)))
    return best


def is_k_coherent(M: Matroid, k: int) -> bool:
    if low_separation(M, 3) is not None:
        return False
    return find_k_fracture(M, k) is None


def coherence_report(M: Matroid, k: int) -> dict:
    bad = low_separation(M, 3)
    if bad is not None:
        return {"three_connected": False, "k": k, "coherent": False,
                "separation": sorted(M.labels(bad))}
    rep = find_k_fracture(M, k)
    out = {"three_connected": True, "k": k, "coherent": rep is None}
    out["status"] = "coherent" if rep is None else f"{k}-fractured"
    if rep is not None:
        out["fracture"] = rep.to_dict(M)
    return out


def flower_to_dot(M: Matroid, rep: FlowerReport) -> str:
    lines = ["graph flower {", "  layout=circo;"]
    n = len(rep.petals)
    for i, p in enumerate(rep.petals):
        lines.append(f'  p{i} [shape=ellipse,label="{" ".join(sorted(M.labels(p)))}"];')
    for i in range(n):
        for j in range(i + 1, n):
            m = rep.meets[i][j] if rep.meets else 0
            if m or (j - i) % n in (1, n - 1):
                lines.append(f'  p{i} -- p{j} [label="{m}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
