"""A fixed catalog of small matroids used by the property checks and the acceptance suite."""

from __future__ import annotations

from itertools import combinations

from . import families as F
from .core import Matroid, from_bases, from_matrix


def fano() -> Matroid:
    cols = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 0], [1, 0, 1], [0, 1, 1], [1, 1, 1]]
    return from_matrix([f"f{i}" for i in range(1, 8)], list(map(list, zip(*cols))), 2, name="fano")


def non_fano() -> Matroid:
    cols = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 0], [1, 0, 1], [0, 1, 1], [1, 1, 1]]
    M = from_matrix([f"f{i}" for i in range(1, 8)], list(map(list, zip(*cols))), 3)
    M.name = "non_fano"
    return M


def vamos() -> Matroid:
    """Rank 4 on four pairs; five unions of two pairs are dependent."""
    labels = ["a1", "a2", "b1", "b2", "c1", "c2", "d1", "d2"]
    pairs = [("a1", "a2"), ("b1", "b2"), ("c1", "c2"), ("d1", "d2")]
    bad = [(0, 1), (0, 2), (0, 3), (1, 2), (2, 3)]  # the pair {b, d} stays spanning
    hyper = {frozenset(pairs[i] + pairs[j]) for i, j in bad}
    bases = [s for s in combinations(labels, 4) if frozenset(s) not in hyper]
    return from_bases(labels, bases, name="vamos")


def _entries():
    yield "U2,4", lambda: F.uniform(2, 4)
    yield "U2,5", lambda: F.uniform(2, 5)
    yield "U3,5", lambda: F.uniform(3, 5)
    yield "U3,6", lambda: F.uniform(3, 6)
    yield "U3,7", lambda: F.uniform(3, 7)
    yield "U4,8", lambda: F.uniform(4, 8)
    yield "k4", F.k4
    yield "fano", fano
    yield "non_fano", non_fano
    yield "vamos", vamos
    for n in (3, 4, 5, 6):
        yield f"wheel{n}", lambda n=n: F.wheel(n)
        yield f"whirl{n}", lambda n=n: F.whirl(n)
    for n in (3, 4, 5, 6):
        yield f"free_swirl{n}", lambda n=n: F.free_swirl(n)
    for n in (3, 4, 5):
        yield f"free_spike{n}", lambda n=n: F.free_spike(n)
        yield f"free_spike{n}_tip", lambda n=n: F.free_spike(n, tip=True)
    yield "free_spike6", lambda: F.free_spike(6)
    yield "swirl_with_joints3", lambda: F.swirl_with_joints(3)
    yield "swirl_with_joints4", lambda: F.swirl_with_joints(4)
    yield "mk3n3", lambda: F.mk3n(3)
    yield "mk3n_dual3", lambda: F.mk3n_dual(3)
    yield "mk3n4", lambda: F.mk3n(4)
    yield "mk3n_dual4", lambda: F.mk3n_dual(4)


def catalog(max_size: int = 12) -> dict[str, Matroid]:
    """Named matroids with at most ``max_size`` elements, in a fixed order."""
    out = {}
    for name, build in _entries():
        M = build()
        if M.n <= max_size:
            M.name = name
            out[name] = M
    return out
