"""k-skeletons: element profiles, display verification, and the reduction chain."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations

from .connectivity import NotThreeConnected, bridging_status, conn_table, low_separation
from .core import Matroid, MatroidError, MinorSpec, popcount
from .flowers import (
    FlowerReport,
    classify_flower,
    find_k_fracture,
    is_k_coherent,
    loose_elements,
    nonsequential_classes,
)
from .freedom import clonal_analysis, is_cofixed, is_fixed
from .structures import find_fans_quads, recognize_wheel_whirl, triads, triangles


# ---------------------------------------------------------------------------
# per-element profile


@dataclass
class ElementProfile:
    element: str
    del_3conn: bool
    con_3conn: bool
    del_k_coherent: bool
    con_k_coherent: bool
    tags: set[str] = field(default_factory=set)

    def to_dict(self) -> dict:
        return {
            "element": self.element,
            "del_3conn": self.del_3conn,
            "con_3conn": self.con_3conn,
            "del_k_coherent": self.del_k_coherent,
            "con_k_coherent": self.con_k_coherent,
            "tags": sorted(self.tags),
        }


def _three_connected(M: Matroid) -> bool:
    return low_separation(M, 3) is None


def _fractured(M: Matroid, k: int) -> bool:
    """3-connected with a k-fracture."""
    return _three_connected(M) and find_k_fracture(M, k) is not None


def wild_triangles(M: Matroid, k: int) -> list[int]:
    return [T for T in triangles(M)
            if all(_fractured(M.delete(1 << t), k) for t in range(M.n) if T >> t & 1)]


def wild_triads(M: Matroid, k: int) -> list[int]:
    return wild_triangles(M.dual(), k)


def element_profile(M: Matroid, k: int) -> list[ElementProfile]:
    if not _three_connected(M):
        raise NotThreeConnected(M, low_separation(M, 3))
    cls, _ = clonal_analysis(M)
    wt = 0
    for T in wild_triangles(M, k):
        wt |= T
    wd = 0
    for T in wild_triads(M, k):
        wd |= T
    out = []
    for i, e in enumerate(M.elements):
        d, c = M.delete(1 << i), M.contract(1 << i)
        d3, c3 = _three_connected(d), _three_connected(c)
        dfr = d3 and find_k_fracture(d, k) is not None
        cfr = c3 and find_k_fracture(c, k) is not None
        prof = ElementProfile(e, d3, c3, d3 and not dfr, c3 and not cfr)
        if is_fixed(M, i).fixed:
            prof.tags.add("fixed")
        if is_cofixed(M, i).fixed:
            prof.tags.add("cofixed")
        if dfr and cfr:
            prof.tags.add("feral")
        if (dfr and not c3) or (cfr and not d3):
            prof.tags.add("semi_feral")
        if wt >> i & 1:
            prof.tags.add("in_k_wild_triangle")
        if wd >> i & 1:
            prof.tags.add("in_k_wild_triad")
        if any(popcount(m) == 2 and m >> i & 1 for m in cls):
            prof.tags.add("clonal_pair_member")
        out.append(prof)
    return out


# ---------------------------------------------------------------------------
# skeletons


@dataclass
class SkeletonVerdict:
    ok: bool
    reason: str | None = None
    element: str | None = None

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict:
        out = {"skeleton": self.ok}
        if self.reason:
            out["reason"] = self.reason
        if self.element is not None:
            out["element"] = self.element
        return out


def is_k_skeleton(M: Matroid, k: int) -> SkeletonVerdict:
    if k < 5:
        raise MatroidError("k-skeletons need k >= 5")
    if not is_k_coherent(M, k):
        return SkeletonVerdict(False, "not k-coherent")
    kind, n = recognize_wheel_whirl(M)
    if kind != "neither" and n is not None and n >= 3:
        return SkeletonVerdict(False, f"{kind} of rank {n}")
    for i, e in enumerate(M.elements):
        if is_fixed(M, i).fixed and is_k_coherent(M.delete(1 << i), k):
            return SkeletonVerdict(False, "fixed element whose deletion stays k-coherent", e)
        if is_cofixed(M, i).fixed and is_k_coherent(M.contract(1 << i), k):
            return SkeletonVerdict(False, "cofixed element whose contraction stays k-coherent", e)
    return SkeletonVerdict(True)


# ---------------------------------------------------------------------------
# displays


@dataclass
class DisplayCandidate:
    kind: str
    parts: dict


@dataclass
class DisplayReport:
    kind: str
    clauses: dict[str, bool]

    @property
    def valid(self) -> bool:
        return all(self.clauses.values())

    def to_dict(self) -> dict:
        return {"kind": self.kind, "valid": self.valid, "clauses": self.clauses}


def _m(M: Matroid, part) -> int:
    return M.mask(part) if part is not None else 0


def _disjoint_cover(M: Matroid, masks: list[int], target: int, allow_empty: set[int] = frozenset()):
    seen = 0
    for idx, m in enumerate(masks):
        if not m and idx not in allow_empty:
            raise MatroidError("display parts must be nonempty")
        if seen & m:
            raise MatroidError("display parts overlap")
        seen |= m
    if seen != target:
        raise MatroidError("display parts do not cover the required set")


def _is_fracture(N: Matroid, petals: list[int], k: int) -> bool:
    if not _three_connected(N):
        return False
    rep = classify_flower(N, petals)
    return rep.kind == "swirl_like" and rep.order is not None and rep.order >= k


def _swirl_order(N: Matroid, petals: list[int]) -> int | None:
    rep = classify_flower(N, petals)
    return rep.order if rep.kind == "swirl_like" else None


def _tight_swirl(N: Matroid, petals: list[int]) -> bool:
    rep = classify_flower(N, petals)
    if rep.kind != "swirl_like":
        return False
    loose = loose_elements(N, petals)
    return all(p & ~loose for p in petals)


def _canonical(N: Matroid, petals: list[int]) -> bool:
    return loose_elements(N, petals) == 0


def all_flowers(N: Matroid, min_petals: int = 3) -> list[FlowerReport]:
    """Every flower whose petals are 3-separating sets, first petal holding element 0."""
    lam = conn_table(N)
    pc = N.popcounts()
    cand = [x for x in range(1, N.full) if lam[x] == 2 and pc[x] >= 2 and N.n - pc[x] >= 2]
    out = []

    def grow(ps, used):
        if used == N.full:
            if len(ps) >= min_petals:
                rep = classify_flower(N, ps)
                if rep.is_flower:
                    out.append(rep)
            return
        for x in cand:
            if x & used or (not ps and not x & 1):
                continue
            grow(ps + [x], used | x)

    grow([], 0)
    return out


def _flower_keys(N: Matroid, rep: FlowerReport) -> set:
    n = len(rep.petals)
    anem = rep.kind.startswith("anemone") or rep.kind in ("spike_like", "unresolved")
    return nonsequential_classes(N, rep.petals, anem or n < 4)


def is_maximal(N: Matroid, petals: list[int]) -> bool:
    rep = classify_flower(N, petals)
    if not rep.is_flower:
        return False
    mine = _flower_keys(N, rep)
    for other in all_flowers(N):
        theirs = _flower_keys(N, other)
        if mine <= theirs and not theirs <= mine:
            return False
    return True


def is_unique_fracture(N: Matroid, petals: list[int], k: int) -> bool:
    """Every k-fracture of N is dominated by the given flower."""
    rep = classify_flower(N, petals)
    mine = _flower_keys(N, rep)
    for other in all_flowers(N, k):
        if other.kind == "swirl_like" and (other.order or 0) >= k:
            if not _flower_keys(N, other) <= mine:
                return False
    return True


def verify_display(M: Matroid, D: DisplayCandidate, k: int) -> DisplayReport:
    kind = D.kind
    if kind == "k_wild_display":
        return _verify_wild(M, D.parts, k)
    if kind == "feral_display":
        return _verify_feral(M, D.parts, k)
    if kind == "bogan_display":
        return _verify_bogan(M, D.parts, k)
    if kind == "gang_of_three":
        return _verify_gang(M, D.parts, k)
    raise MatroidError(f"unknown display kind {kind!r}")


def _lst(M, parts, key):
    return [_m(M, p) for p in parts.get(key, [])]


def _verify_wild(M: Matroid, parts: dict, k: int) -> DisplayReport:
    A, B, C = _lst(M, parts, "A"), _lst(M, parts, "B"), _lst(M, parts, "C")
    a, b, c = (M.mask(x) for x in parts["T"])
    T = a | b | c
    if len(A) != k - 2 or len(B) != k - 2 or len(C) != k - 2:
        raise MatroidError("each of A, B and C needs k - 2 parts")
    _disjoint_cover(M, A + B + C + [a, b, c], M.full)
    uA, uB, uC = sum(A), sum(B), sum(C)
    cl = {}
    cl["three_tight_swirls"] = (_tight_swirl(M, A + [uB | uC | T]) and _tight_swirl(M, B + [uA | uC | T])
                 and _tight_swirl(M, C + [uA | uB | T]))
    ok = True
    for t, petals in ((a, A + [uB | b, uC | c]), (b, [uA | a] + B + [uC | c]),
                      (c, [uA | a, uB | b] + C)):
        N = M.delete(t)
        ok &= _is_fracture(N, [N.mask(M.labels(p)) for p in petals], k)
    cl["deletions_fractured"] = ok
    return DisplayReport("k_wild_display", cl)


def _verify_feral(M: Matroid, parts: dict, k: int) -> DisplayReport:
    P, Q = _lst(M, parts, "P"), _lst(M, parts, "Q")
    f = M.mask(parts["f"])
    i = int(parts["i"])
    m, kk = len(P), len(Q)
    if not (2 <= i <= m - 1) or kk != k:
        raise MatroidError("feral display needs 2 <= i <= m - 1 and exactly k parts of Q")
    rest = M.full ^ f
    _disjoint_cover(M, P, rest)
    _disjoint_cover(M, Q, rest)
    Nd, Nc = M.delete(f), M.contract(f)
    tr = lambda N, xs: [N.mask(M.labels(x)) for x in xs]  # noqa: E731
    cl = {}
    cl["minors_fractured"] = _is_fracture(Nd, tr(Nd, P), k) and _is_fracture(Nc, tr(Nc, Q), k)
    Z1, Z2 = Q[0] & P[0], Q[1] & P[0]
    pieces = P[1:] + Q[2:] + [Z1, Z2]
    nonempty = all(pieces[:-2]) and (Z1 or Z2)
    cover = sum(pieces) == rest and all(not (x & y) for x, y in combinations(pieces, 2))
    cl["parts_partition"] = bool(nonempty and cover)
    cl["first_petal_split"] = P[0] == sum(Q[2:]) | Z1 | Z2
    cl["first_copetal_split"] = Q[0] == sum(P[i:]) | Z1
    cl["second_copetal_split"] = Q[1] == Z2 | sum(P[1:i])
    cl["copetal_swirl_order"] = _swirl_order(M, [Q[0] | Q[1] | f] + Q[2:]) == k - 1
    cl["left_swirl_order"] = _swirl_order(M, P[1:i] + [sum(P[i:]) | P[0] | f]) == i
    cl["right_swirl_order"] = _swirl_order(M, P[i:] + [sum(P[:i]) | f]) == m - i + 1
    lam = conn_table(M)
    cl["z_parts_low_conn"] = bool((Z1 or Z2) and lam[Z1] <= 3 and lam[Z2] <= 3)
    blocks = bridging_status(M, MinorSpec(0, f), Nd.mask(M.labels(P[0]))).status == "bridged"
    coblocks = bridging_status(M, MinorSpec(f, 0), Nc.mask(M.labels(Q[0]))).status == "bridged"
    cl["bridged_both_ways"] = blocks and coblocks
    return DisplayReport("feral_display", cl)


def _verify_bogan(M: Matroid, parts: dict, k: int) -> DisplayReport:
    R, S, T = _lst(M, parts, "R"), _lst(M, parts, "S"), _lst(M, parts, "T")
    a, b = M.mask(parts["a"]), M.mask(parts["b"])
    if len(R) != k - 2 or len(T) != k - 2 or not S:
        raise MatroidError("bogan display needs k - 2 parts of R and T and some parts of S")
    _disjoint_cover(M, R + S + T + [a, b], M.full)
    uR, uS, uT = sum(R), sum(S), sum(T)
    tr = lambda N, xs: [N.mask(M.labels(x)) for x in xs]  # noqa: E731

    def maxfrac(N, petals):
        ps = tr(N, petals)
        return _is_fracture(N, ps, k) and is_maximal(N, ps)

    def coguts(N, x, side, other):
        xi = N.mask(M.labels(x))
        return bool(N.coclosure(N.mask(M.labels(side & ~x))) & xi
                    and N.coclosure(N.mask(M.labels(other))) & xi)

    cl = {}
    Na, Nb = M.delete(a), M.delete(b)
    cl["delete_a_fracture"] = maxfrac(Na, [R[0] | b] + R[1:] + S + [uT]) and coguts(Na, b, R[0] | b, uT)
    cl["contract_a_fracture"] = maxfrac(M.contract(a), [uR, uS | b] + T)
    cl["delete_b_fracture"] = (maxfrac(Nb, [uR] + S + T[:-1] + [T[-1] | a])
                   and coguts(Nb, a, T[-1] | a, uR))
    cl["contract_b_fracture"] = maxfrac(M.contract(b), R + [uS | a, uT])
    flows = (R + [uS | uT | a | b], S + [uR | uT | a | b], T + [uR | uS | a | b])
    cl["three_swirls"] = all(_swirl_order(M, fl) is not None and is_maximal(M, fl) for fl in flows)
    cl["pair_cofixed"] = is_cofixed(M, M.labels(a)[0]).fixed and is_cofixed(M, M.labels(b)[0]).fixed
    return DisplayReport("bogan_display", cl)


def _verify_gang(M: Matroid, parts: dict, k: int) -> DisplayReport:
    R, S, T = _lst(M, parts, "R"), _lst(M, parts, "S"), _lst(M, parts, "T")
    Z = _m(M, parts.get("Z"))
    r, s, t = (M.mask(x) for x in parts["rst"])
    if len(R) != k - 2 or len(S) != k - 2 or len(T) != k - 2:
        raise MatroidError("each of R, S and T needs k - 2 parts")
    _disjoint_cover(M, R + S + T + [Z, r, s, t], M.full, allow_empty={3 * (k - 2)})
    uR, uS, uT = sum(R), sum(S), sum(T)
    tr = lambda N, xs: [N.mask(M.labels(x)) for x in xs]  # noqa: E731
    cl = {}
    cl["contractions_coherent"] = all(is_k_coherent(M.contract(x), k) for x in (r, s, t))
    cl["deletions_3_connected"] = all(_three_connected(M.delete(x)) for x in (r, s, t))
    cl["three_tight_swirls"] = all(_tight_swirl(M, X + [M.full ^ u]) for X, u in ((R, uR), (S, uS), (T, uT)))
    ok = True
    for x, pair, X, rest in ((r, s | t, R, uS | uT | Z), (s, r | t, S, uR | uT | Z),
                             (t, r | s, T, uR | uS | Z)):
        N = M.delete(x)
        ps = tr(N, [pair] + X + [rest])
        ok = ok and _is_fracture(N, ps, k) and _canonical(N, ps) and is_maximal(N, ps)
        ok = ok and is_unique_fracture(N, ps, k)
    cl["unique_deletion_fractures"] = ok
    cl["rst_fixed"] = all(is_fixed(M, M.labels(x)[0]).fixed for x in (r, s, t))
    return DisplayReport("gang_of_three", cl)


def find_gangs(M: Matroid, k: int) -> list[DisplayCandidate]:
    """Gang-of-three candidates read off the fractures of single deletions."""
    fr = {}
    for i in range(M.n):
        N = M.delete(1 << i)
        if not _three_connected(N):
            continue
        rep = find_k_fracture(N, k)
        if rep is not None and len(rep.petals) == k:
            fr[i] = (N, rep)
    out = []
    for trio in combinations(sorted(fr), 3):
        sides = {}
        for x in trio:
            N, rep = fr[x]
            pair = sum(1 << y for y in trio if y != x)
            ps = [M.mask(N.labels(p)) for p in rep.petals]
            if pair not in ps:
                break
            j = ps.index(pair)
            seq = ps[j + 1:] + ps[:j]
            sides[x] = seq[:-1]
        else:
            r, s, t = trio
            R, S, T = sides[r], sides[s], sides[t]
            used = sum(R) | sum(S) | sum(T) | (1 << r) | (1 << s) | (1 << t)
            parts = {"R": [M.labels(x) for x in R], "S": [M.labels(x) for x in S],
                     "T": [M.labels(x) for x in T], "Z": M.labels(M.full ^ used),
                     "rst": [M.elements[r], M.elements[s], M.elements[t]]}
            out.append(DisplayCandidate("gang_of_three", parts))
    return out


# ---------------------------------------------------------------------------
# reduction chain


@dataclass
class ChainStep:
    move: str
    deleted: list[str]
    contracted: list[str]
    result: str
    size: int

    def to_dict(self) -> dict:
        return {"move": self.move, "delete": self.deleted, "contract": self.contracted,
                "result": self.result, "size": self.size}


class ChainError(MatroidError):
    def __init__(self, message: str, bundle: dict | None = None):
        super().__init__(message)
        self.bundle = bundle


def _moves(M: Matroid, k: int):
    """Candidate (move, delete, contract) triples in menu order."""
    E = M.elements
    for e in E:
        yield "delete", [e], []
        yield "contract", [], [e]
    cls, _ = clonal_analysis(M)
    pairs = []
    for c in cls:
        for p, q in combinations(M.labels(c), 2):
            pairs += [(p, q), (q, p)]
    pairs.sort()
    for p, q in pairs:
        yield "clonal_pair", [p], [q]
    for D in find_gangs(M, k):
        if verify_display(M, D, k).valid:
            r, s, t = D.parts["rst"]
            yield "gang", [s, t], [r]
    Md = M.dual()
    for D in find_gangs(Md, k):
        if verify_display(Md, D, k).valid:
            r, s, t = D.parts["rst"]
            yield "cogang", [r], [s, t]
    for p, q in pairs:
        rest = [e for e in E if e not in (p, q)]
        for f in rest:
            yield "four_element", [p, f], [q]
            yield "four_element", [p], [q, f]
        for f in rest:
            for g in rest:
                if f != g:
                    yield "four_element", [p, f], [q, g]


def chain_reduce(M: Matroid, k: int) -> list[ChainStep]:
    v = is_k_skeleton(M, k)
    if not v:
        raise ChainError(f"{M.name or 'input'} is not a {k}-skeleton: {v.reason}")
    steps: list[ChainStep] = []
    cur = M
    while cur.n > 4:
        for move, dele, con in _moves(cur, k):
            N = cur.minor(MinorSpec(cur.mask(con), cur.mask(dele)))
            if is_k_skeleton(N, k):
                steps.append(ChainStep(move, dele, con, N.name, N.n))
                cur = N
                break
        else:
            bundle = {"matroid": json.loads(cur.to_json()), "k": k,
                      "steps": [s.to_dict() for s in steps]}
            raise ChainError("no k-skeleton minor within four elements", bundle)
    for s in steps:
        if len(s.deleted) + len(s.contracted) > 4:
            raise AssertionError("chain step removes more than four elements")
    return steps


def chain_minors(M: Matroid, steps: list[ChainStep]) -> list[Matroid]:
    out, cur = [M], M
    for s in steps:
        cur = cur.minor(MinorSpec(cur.mask(s.contracted), cur.mask(s.deleted)))
        out.append(cur)
    return out


def has_four_element_fan(M: Matroid) -> bool:
    return any(len(f.ordering) >= 4 for f in find_fans_quads(M).fans)


__all__ = [
    "ElementProfile", "element_profile", "is_k_skeleton", "SkeletonVerdict",
    "DisplayCandidate", "DisplayReport", "verify_display", "ChainStep", "ChainError",
    "chain_reduce", "chain_minors", "has_four_element_fan", "wild_triangles", "wild_triads",
    "find_gangs", "is_maximal", "is_unique_fracture", "all_flowers", "triads",
]
