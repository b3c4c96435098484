"""The twelve acceptance checks, each with its own time limit.

Every check returns ``(passed, detail)``; :func:`run` times it and fails a
check that overruns its limit even if the verdict was positive.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import _kernels as K
from . import families as F
from .catalog import catalog
from .connectivity import (
    conn_table, is_connected, linking_conn, minimal_bridging_sequence, realize_linking,
)
from .core import MinorSpec, bits, find_isomorphism
from .fields import gf

GOLDEN_COUNTS = {("free_swirl3", 7): 140, ("free_spike3", 8): 390}


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float
    limit: float | None

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        lim = f" (limit {self.limit:g}s)" if self.limit else ""
        return f"[{verdict}] {self.number:>2}. {self.title}: {self.detail} [{self.seconds:.2f}s{lim}]"

    def to_dict(self) -> dict:
        return {
            "criterion": self.number, "title": self.title, "passed": self.passed,
            "detail": self.detail, "seconds": round(self.seconds, 3), "limit": self.limit,
        }


# ---------------------------------------------------------------------------


def check_isomorphisms(seed: int = 0):
    d3, l3, u36 = F.free_swirl(3), F.free_spike(3), F.uniform(3, 6)
    ok = all(find_isomorphism(a, b) is not None for a, b in [(d3, l3), (d3, u36), (l3, u36)])
    return ok, "free swirl, free spike and U(3,6) on six elements are pairwise isomorphic" if ok \
        else "an isomorphism is missing"


def check_self_duality(seed: int = 0):
    bad = []
    for n in (3, 4, 5):
        for M in (F.free_swirl(n), F.free_spike(n)):
            if find_isomorphism(M, M.dual()) is None:
                bad.append(M.name)
    return not bad, "all six are self-dual" if not bad else f"not self-dual: {bad}"


def nontrivial_3_separating(M) -> set[int]:
    lam = conn_table(M)
    pc = M.popcounts()
    return {int(x) for x in np.flatnonzero((lam <= 2) & (pc >= 3) & (M.n - pc >= 3))}


def consecutive_leg_unions(M, n: int) -> set[int]:
    legs = [M.mask([p, q]) for p, q in F.leg_labels(n)]
    out = set()
    for start in range(n):
        for length in range(1, n):
            out.add(sum(legs[(start + j) % n] for j in range(length)))
    return {x for x in out if 3 <= bin(x).count("1") <= M.n - 3}


def check_swirl_separations(seed: int = 0):
    parts = []
    for n in (4, 5, 6):
        M = F.free_swirl(n)
        got, want = nontrivial_3_separating(M), consecutive_leg_unions(M, n)
        if got != want:
            return False, f"n={n}: {len(got ^ want)} sets differ"
        parts.append(f"n={n}: {len(got)}")
    return True, "sets match (" + ", ".join(parts) + ")"


def connectivity_violations(M) -> dict[str, int]:
    """Count failures of the four connectivity identities over all subsets."""
    n = M.n
    lam = conn_table(M).astype(np.int64)
    D = M.dual()
    lam_d = conn_table(D).astype(np.int64)
    t, td = M.table.astype(np.int64), D.table.astype(np.int64)
    idx = np.arange(1 << n, dtype=np.int64)
    out = {"dual": int((lam != lam_d).sum()), "submodular": 0, "meet": 0, "skew": 0}
    for x in range(1 << n):
        # submodularity over every Y at once
        out["submodular"] += int((lam[x] + lam < lam[x | idx] + lam[x & idx]).sum())
        ys = K.subset_masks((1 << n) - 1 ^ x)
        u = x | ys
        meet = t[x] + t[ys] - t[u]
        comeet = td[x] + td[ys] - td[u]
        out["meet"] += int((lam[u] != lam[x] + lam[ys] - meet - comeet).sum())
        skew = (meet == 0) & (comeet == 0)
        out["skew"] += int((skew != (lam[u] == lam[x] + lam[ys])).sum())
    return out


def check_connectivity_identities(seed: int = 0):
    total = {"dual": 0, "submodular": 0, "meet": 0, "skew": 0}
    cat = catalog(10)
    for M in cat.values():
        for key, v in connectivity_violations(M).items():
            total[key] += v
    ok = not any(total.values())
    return ok, f"{len(cat)} matroids, violations {total}"


def check_rep_counts(seed: int = 0):
    from .gfrep import enumerate_inequivalent

    parts, ok = [], True
    for name, q, floor in (("free_swirl3", 7, 8), ("free_spike3", 8, 4)):
        start = time.perf_counter()
        c = len(enumerate_inequivalent(F.generate(F.parse_family(name)), gf(q)))
        sec = time.perf_counter() - start
        ok &= c >= floor and c == GOLDEN_COUNTS[(name, q)] and sec < 60
        parts.append(f"{name} over GF({q}): {c} in {sec:.1f}s")
    return ok, "; ".join(parts)


def check_non_representability(seed: int = 0):
    from .gfrep import find_representation, swirl_alpha_search

    ternary = find_representation(F.free_spike(3), gf(3))
    big = swirl_alpha_search(16, gf(4))
    control = swirl_alpha_search(3, gf(4))
    ok = ternary is None and big is None and control is not None
    detail = (f"GF(3) representation: {'none' if ternary is None else 'found'}; "
              f"n=16 over GF(4): {'none' if big is None else big}; "
              f"control n=3 over GF(4): {'none' if control is None else control}")
    return ok, detail


def fracture_disagreements(Ms, ks=(4, 5, 6)) -> list[str]:
    from .flowers import find_k_fracture, find_k_fracture_exhaustive

    bad = []
    for name, M in Ms.items():
        for k in ks:
            a, b = find_k_fracture(M, k), find_k_fracture_exhaustive(M, k)
            ka = None if a is None else (a.order, len(a.petals))
            kb = None if b is None else (b.order, len(b.petals))
            if ka != kb:
                bad.append(f"{name} k={k}")
    return bad


def check_coherence(seed: int = 0):
    from .flowers import is_k_coherent

    want = {
        "free_swirl5": False, "free_swirl6": False, "free_swirl4": True,
        "wheel6": True, "whirl6": True,
    }
    builds = {
        "free_swirl5": lambda: F.free_swirl(5), "free_swirl6": lambda: F.free_swirl(6),
        "free_swirl4": lambda: F.free_swirl(4), "wheel6": lambda: F.wheel(6),
        "whirl6": lambda: F.whirl(6),
    }
    wrong = [n for n, v in want.items() if is_k_coherent(builds[n](), 5) != v]
    cat = catalog(12)
    bad = fracture_disagreements(cat)
    ok = not wrong and not bad
    return ok, (f"verdicts {'ok' if not wrong else wrong}; oracle agreement on "
                f"{len(cat)} matroids x k=4..6: {len(bad)} disagreements")


def swirl_fixtures():
    """swirl_with_joints for n = 3, 4 with every nonempty joint set, plus duals."""
    from itertools import combinations

    out = []
    for n in (3, 4):
        for size in range(1, n + 1):
            for js in combinations(range(1, n + 1), size):
                M = F.swirl_with_joints(n, js)
                petals = []
                for i, (p, q) in enumerate(F.leg_labels(n), start=1):
                    nxt = i % n + 1
                    petals.append([p, q] + ([f"b{nxt}"] if nxt in js else []))
                out.append((M, petals))
                out.append((M.dual(), petals))
    return out


def loose_fixedness_failures() -> tuple[int, list[str]]:
    from .flowers import classify_flower
    from .freedom import is_cofixed, is_fixed

    checked, bad = 0, []
    for M, petals in swirl_fixtures():
        rep = classify_flower(M, petals)
        if rep.kind != "swirl_like":
            bad.append(f"{M.name}: flower is {rep.kind}")
            continue
        for fan in rep.loose_fans or []:
            for e, tag in fan:
                checked += 1
                v = is_fixed(M, e) if tag == "guts" else is_cofixed(M, e)
                if not v.fixed:
                    bad.append(f"{M.name}:{e}:{tag}")
    return checked, bad


def strand_paths(M):
    """Every (A, x, B) path of 3-separations with x a guts singleton, A < B as masks."""
    lam = conn_table(M)
    for x in range(M.n):
        xb = 1 << x
        rest = M.full ^ xb
        for A in K.subset_masks(rest).tolist():
            B = rest ^ A
            if not A or not B or A > B or lam[A] != 2 or lam[A | xb] != 2:
                continue
            if not (M.closure(A) & xb and M.closure(B) & xb):
                continue
            if linking_conn(M, A, B) != 2:
                continue
            yield A, x, B


def strand_disagreements(Ms) -> tuple[int, list[str]]:
    from .freedom import is_fixed, strand_certificate

    checked, bad = 0, []
    for name, M in Ms.items():
        fixed: dict[int, bool] = {}
        for A, x, B in strand_paths(M):
            cert = strand_certificate(M, A, 1 << x, B)
            if x not in fixed:
                fixed[x] = is_fixed(M, x).fixed
            checked += 1
            if (cert != "not_fixed") != fixed[x]:
                bad.append(f"{name}:{M.elements[x]}")
    return checked, bad


def check_fixedness(seed: int = 0):
    n1, bad1 = loose_fixedness_failures()
    n2, bad2 = strand_disagreements(catalog(12))
    ok = not bad1 and not bad2 and n1 > 0 and n2 > 0
    return ok, (f"{n1} loose elements, {len(bad1)} failures; {n2} guts singleton paths, "
                f"{len(bad2)} disagreements")


def clonal_pairs(M):
    from .freedom import clonal_analysis

    cls, _ = clonal_analysis(M)
    for c in cls:
        b = bits(c)
        for i in range(len(b)):
            for j in range(i + 1, len(b)):
                if M.table[1 << b[i] | 1 << b[j]] == 2:
                    yield b[i], b[j]


def bridging_instances(seed: int, count: int = 100, max_size: int = 10):
    """Seeded (M, contract, delete, p, q): a clonal pair of M parallel in a connected minor."""
    rng = random.Random(seed)
    pool = [(M, p, q) for M in catalog(max_size).values() for p, q in clonal_pairs(M)]
    out = []
    while len(out) < count:
        M, p, q = rng.choice(pool)
        rest = [e for e in range(M.n) if e not in (p, q)]
        rng.shuffle(rest)
        nc, nd = rng.randint(1, 3), rng.randint(0, 3)
        C = sum(1 << e for e in rest[:nc])
        D = sum(1 << e for e in rest[nc:nc + nd])
        pair = 1 << p | 1 << q
        if not M.is_independent(C) or M.rank(C | pair) != M.rank(C) + 1:
            continue  # the pair must become parallel
        if M.corank(D) != bin(D).count("1"):
            continue
        N = M.minor(MinorSpec(C, D))
        if N.n < 4 or not is_connected(N):
            continue
        out.append((M, C, D, p, q))
    return out


def linking_pairs(seed: int, count: int = 200, max_size: int = 10):
    rng = random.Random(seed)
    cat = list(catalog(max_size).values())
    out = []
    while len(out) < count:
        M = rng.choice(cat)
        labels = rng.sample(range(M.n), M.n)
        a = rng.randint(1, M.n - 2)
        b = rng.randint(1, M.n - a - 1)
        X = sum(1 << e for e in labels[:a])
        Y = sum(1 << e for e in labels[a:a + b])
        out.append((M, X, Y))
    return out


def verify_linking(M, X: int, Y: int) -> bool:
    I, J = realize_linking(M, X, Y)
    t = M.table
    if I & J or (I | J) != M.full ^ X ^ Y:
        return False
    if int(t[X]) + int(t[I]) - int(t[X | I]) or int(t[Y]) + int(t[I]) - int(t[Y | I]):
        return False
    N = M.minor(MinorSpec(I, J))
    return int(conn_table(N)[N.mask(M.labels(X))]) == linking_conn(M, X, Y)


def check_bridging(seed: int = 0):
    lengths: dict[int, int] = {}
    bad = 0
    for M, C, D, p, q in bridging_instances(seed):
        N = M.minor(MinorSpec(C, D))
        A = N.mask([M.elements[p], M.elements[q]])
        got = minimal_bridging_sequence(M, MinorSpec(C, D), A)
        if got is None:
            continue
        L = len(got[2].order)
        lengths[L] = lengths.get(L, 0) + 1
        bad += L > 2
    link_bad = sum(not verify_linking(M, X, Y) for M, X, Y in linking_pairs(seed))
    ok = bad == 0 and link_bad == 0 and sum(lengths.values()) > 0
    return ok, (f"sequence lengths {dict(sorted(lengths.items()))}, {bad} longer than 2; "
                f"linking failures {link_bad}/200")


def check_delta_wye(seed: int = 0):
    from .structures import delta_y_clauses, triangles

    count, bad = 0, []
    for name, M in catalog(10).items():
        for T in triangles(M):
            count += 1
            res = delta_y_clauses(M, T)
            if not all(res.values()):
                bad.append(f"{name}:{sorted(M.labels(T))}")
    return not bad, f"{count} triangles, {len(bad)} failures"


def chain_failures(n: int, k: int = 5) -> str | None:
    from .skeleton import ChainError, chain_minors, chain_reduce, is_k_skeleton

    M = F.free_swirl(n)
    try:
        steps = chain_reduce(M, k)
    except ChainError as exc:
        return f"n={n}: {exc}"
    for step, N in zip(steps, chain_minors(M, steps)[1:]):
        if len(step.deleted) + len(step.contracted) > 4:
            return f"n={n}: step {step.move} removes too much"
        if not is_k_skeleton(N, k):
            return f"n={n}: {N.name} is not a skeleton"
    return None


def check_chain(seed: int = 0):
    errs = [e for e in (chain_failures(4), chain_failures(5)) if e]
    return not errs, "chains verified for n=4,5" if not errs else "; ".join(errs)


def skeleton_hygiene(Ms, k: int = 5) -> tuple[int, list[str], list[str]]:
    from .skeleton import has_four_element_fan, is_k_skeleton

    passing, fans, dual_bad = 0, [], []
    for name, M in Ms.items():
        ok = bool(is_k_skeleton(M, k))
        if ok != bool(is_k_skeleton(M.dual(), k)):
            dual_bad.append(name)
        if ok:
            passing += 1
            if has_four_element_fan(M):
                fans.append(name)
    return passing, fans, dual_bad


def check_skeleton_hygiene(seed: int = 0):
    passing, fans, dual_bad = skeleton_hygiene(catalog(12))
    ok = not fans and not dual_bad
    return ok, (f"{passing} skeletons; with a 4-element fan: {fans or 'none'}; "
                f"duality mismatches: {dual_bad or 'none'}")


CRITERIA: dict[int, tuple[str, Callable, float | None]] = {
    1: ("isomorphisms", check_isomorphisms, 1.0),
    2: ("self-duality", check_self_duality, 30.0),
    3: ("swirl separation law", check_swirl_separations, None),
    4: ("connectivity identities", check_connectivity_identities, 120.0),
    5: ("representation counts", check_rep_counts, None),  # 60 s per enumeration, checked inside
    6: ("non-representability", check_non_representability, 300.0),
    7: ("k-coherence", check_coherence, 300.0),
    8: ("fixedness laws", check_fixedness, None),
    9: ("bridging and linking", check_bridging, None),
    10: ("delta-wye clauses", check_delta_wye, None),
    11: ("chain theorem", check_chain, 600.0),
    12: ("skeleton hygiene", check_skeleton_hygiene, None),
}

def run_one(number: int, seed: int = 0) -> CriterionResult:
    title, fn, limit = CRITERIA[number]
    start = time.perf_counter()
    try:
        passed, detail = fn(seed)
    except Exception as exc:  # a crash is a failure, reported in the line
        passed, detail = False, f"error: {type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - start
    if limit is not None and elapsed > limit:
        passed, detail = False, f"{detail}; exceeded {limit:g}s"
    return CriterionResult(number, title, bool(passed), detail, elapsed, limit)


def run(numbers=None, seed: int = 0):
    for n in numbers or sorted(CRITERIA):
        yield run_one(n, seed)
