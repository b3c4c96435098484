"""Named families: uniform matroids, wheels, whirls, swirls, spikes and friends.

Free swirls are bicircular matroids of a doubled cycle (every leg is a pair
of parallel edges), and adding half-edges at the cycle's vertices gives the
joints.  Free spikes come from truncating the cycle matroid of K_{2,n}, with
the tip as the edge joining the two hubs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .core import (
    Matroid,
    MatroidError,
    check_axioms,
    from_bicircular,
    from_graph,
    relax,
    uniform as _uniform,
)
from .fields import FieldSpec, gf

FAMILIES = (
    "uniform", "wheel", "whirl", "free_swirl", "swirl", "free_spike", "spike",
    "spike_with_tip", "mk3n", "mk3n_dual", "k4", "swirl_with_joints",
)


@dataclass(frozen=True)
class FamilySpec:
    family: str
    params: tuple = ()
    transversals: tuple = dc_field(default=())
    q: int | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise MatroidError(f"unknown family {self.family!r}")


def leg_labels(n: int) -> list[tuple[str, str]]:
    return [(f"p{i}", f"q{i}") for i in range(1, n + 1)]


def free_swirl(n: int) -> Matroid:
    if n < 3:
        raise MatroidError("swirls need n >= 3")
    labels, edges = [], []
    for i, (p, q) in enumerate(leg_labels(n)):
        labels += [p, q]
        edges += [(i, (i + 1) % n)] * 2
    return from_bicircular(labels, edges, name=f"free_swirl{n}")


def swirl_with_joints(n: int, joints: Sequence[int] | None = None) -> Matroid:
    """Free swirl plus the joints ``b_i`` (all of them by default).

    Joint ``b_i`` sits at the meeting point of legs ``i-1`` and ``i``.
    """
    if n < 3:
        raise MatroidError("swirls need n >= 3")
    joints = list(range(1, n + 1)) if joints is None else list(joints)
    labels, edges = [], []
    for i, (p, q) in enumerate(leg_labels(n)):
        labels += [p, q]
        edges += [(i, (i + 1) % n)] * 2
    for j in joints:
        labels.append(f"b{j}")
        edges.append(((j - 1) % n, None))
    tag = "" if len(joints) == n else "_" + "".join(map(str, joints))
    return from_bicircular(labels, edges, name=f"swirl_with_joints{n}{tag}")


def _spike_graph(n: int, tip: bool):
    labels, edges = [], []
    for i in range(1, n + 1):
        labels += [f"x{i}", f"y{i}"]
        edges += [("u", f"w{i}"), ("v", f"w{i}")]
    if tip:
        labels.append("t")
        edges.append(("u", "v"))
    return labels, edges


def free_spike(n: int, tip: bool = False) -> Matroid:
    if n < 3:
        raise MatroidError("spikes need n >= 3")
    labels, edges = _spike_graph(n, tip)
    name = f"free_spike{n}" + ("_tip" if tip else "")
    return from_graph(labels, edges, name=name, truncate=n)


def _tighten(base: Matroid, transversals, name: str) -> Matroid:
    """Declare the given bases to be circuit-hyperplanes."""
    t = base.table.copy()
    r = base.rank_all
    for tr in transversals:
        m = base.mask(tr)
        if t[m] != r or bin(m).count("1") != r:
            raise MatroidError(f"{sorted(base.labels(m))} is not a basis of {base.name}")
        t[m] = r - 1
    out = Matroid(base.elements, t, name=name)
    rep = check_axioms(out)
    if not rep.valid:
        raise MatroidError(
            f"declared transversals break the rank axioms ({rep.violation} at {rep.witness})"
        )
    for tr in transversals:
        m = out.mask(tr)
        if out.closure(m) != m:
            raise MatroidError(f"{sorted(out.labels(m))} is not a hyperplane after declaring")
    return out


def _check_transversal(n, tr, legs):
    if len(tr) != n or sorted(
        next(i for i, leg in enumerate(legs) if e in leg) for e in tr
    ) != list(range(n)):
        raise MatroidError(f"{list(tr)} is not a transversal of the legs")


def swirl(n: int, transversals: Sequence[Sequence[str]] = ()) -> Matroid:
    legs = leg_labels(n)
    for tr in transversals:
        _check_transversal(n, tr, legs)
    return _tighten(free_swirl(n), transversals, f"swirl{n}")


def spike(n: int, transversals: Sequence[Sequence[str]] = ()) -> Matroid:
    legs = [(f"x{i}", f"y{i}") for i in range(1, n + 1)]
    for tr in transversals:
        _check_transversal(n, tr, legs)
    return _tighten(free_spike(n), transversals, f"spike{n}")


def wheel(n: int) -> Matroid:
    if n < 2:
        raise MatroidError("wheels need n >= 2")
    labels, edges = [], []
    for i in range(1, n + 1):
        labels += [f"s{i}", f"r{i}"]
        edges += [("h", f"w{i}"), (f"w{i}", f"w{i % n + 1}")]
    return from_graph(labels, edges, name=f"wheel{n}")


def whirl(n: int) -> Matroid:
    w = wheel(n)
    rim = [f"r{i}" for i in range(1, n + 1)]
    return relax(w, rim, name=f"whirl{n}")


def mk3n(n: int) -> Matroid:
    labels, edges = [], []
    for i in range(1, n + 1):
        for c in "abc":
            labels.append(f"{c}{i}")
            edges.append((c, f"w{i}"))
    return from_graph(labels, edges, name=f"mk3n{n}")


def mk3n_dual(n: int) -> Matroid:
    d = mk3n(n).dual()
    d.name = f"mk3n_dual{n}"
    return d


def k4() -> Matroid:
    labels = ["12", "13", "14", "23", "24", "34"]
    return from_graph(labels, [(a, b) for a, b in labels], name="k4")


def uniform(rank: int, size: int) -> Matroid:
    return _uniform(rank, size, [f"e{i}" for i in range(1, size + 1)], name=f"U{rank},{size}")


_BUILDERS = {
    "uniform": lambda p, t: uniform(*p),
    "wheel": lambda p, t: wheel(*p),
    "whirl": lambda p, t: whirl(*p),
    "free_swirl": lambda p, t: free_swirl(*p),
    "swirl": lambda p, t: swirl(p[0], t),
    "free_spike": lambda p, t: free_spike(*p),
    "spike_with_tip": lambda p, t: free_spike(p[0], tip=True),
    "spike": lambda p, t: spike(p[0], t),
    "mk3n": lambda p, t: mk3n(*p),
    "mk3n_dual": lambda p, t: mk3n_dual(*p),
    "k4": lambda p, t: k4(),
    "swirl_with_joints": lambda p, t: swirl_with_joints(*p),
}

_ARITY = {"uniform": 2, "k4": 0}


def generate(spec: FamilySpec) -> Matroid:
    want = _ARITY.get(spec.family, 1)
    if spec.family == "swirl_with_joints" and len(spec.params) == 2:
        want = 2
    if len(spec.params) != want:
        raise MatroidError(f"{spec.family} takes {want} integer parameter(s)")
    return _BUILDERS[spec.family](tuple(spec.params), tuple(spec.transversals))


def parse_family(text: str, *params: str) -> FamilySpec:
    """``parse_family("free_swirl", "5")`` or ``parse_family("free_swirl5")``."""
    fam = text
    nums = [int(p) for p in params]
    if fam not in FAMILIES:
        m = re.fullmatch(r"([a-z_0-9]*?[a-z_])(\d+(?:,\d+)*)", text)
        if not m or m.group(1) not in FAMILIES:
            raise MatroidError(f"unknown family {text!r}")
        fam = m.group(1)
        nums = [int(x) for x in m.group(2).split(",")] + nums
    return FamilySpec(fam, tuple(nums))


# ---------------------------------------------------------------------------
# representations


def _incidence(M: Matroid, edges, field: FieldSpec):
    verts = sorted({v for e in edges for v in e}, key=str)
    vi = {v: i for i, v in enumerate(verts)}
    mat = np.zeros((len(verts), len(edges)), dtype=np.int64)
    for j, (u, v) in enumerate(edges):
        if u != v:
            mat[vi[u], j] = 1
            mat[vi[v], j] = field.neg[1]
    return mat


def natural_seed(spec: FamilySpec, field: FieldSpec):
    """A candidate matrix from the family's construction, or None."""
    fam, p = spec.family, spec.params
    if fam == "wheel":
        n = p[0]
        edges = []
        for i in range(1, n + 1):
            edges += [("h", f"w{i}"), (f"w{i}", f"w{i % n + 1}")]
        return _incidence(None, edges, field)
    if fam == "k4":
        return _incidence(None, [(a, b) for a, b in ["12", "13", "14", "23", "24", "34"]], field)
    if fam == "mk3n":
        edges = [(c, f"w{i}") for i in range(1, p[0] + 1) for c in "abc"]
        return _incidence(None, edges, field)
    if fam == "uniform":
        r, n = p
        if n > field.q + 1 or r == 0:
            return None
        pts = list(range(field.q))[: n]
        cols = [[field.power(x, k) for k in range(r)] for x in pts]
        if len(cols) < n:  # point at infinity
            cols.append([0] * (r - 1) + [1])
        return np.array(cols, dtype=np.int64).T
    return None


def generate_rep(spec: FamilySpec, field: FieldSpec | int):
    """Matrix over ``field`` representing ``generate(spec)``, or None."""
    from .gfrep import Matrix, find_representation

    field = gf(field) if isinstance(field, int) else field
    M = generate(spec)
    seed = natural_seed(spec, field)
    if seed is not None:
        cand = Matrix(field, list(M.elements), seed)
        if cand.matroid().table.tobytes() == M.table.tobytes():
            return cand
    return find_representation(M, field)
