"""Matroids on small labelled ground sets, stored as full rank tables.

Subsets are bit masks: bit ``i`` is the ``i``-th label of ``Matroid.elements``.
Every matroid owns (lazily) a numpy ``int8`` array of length ``2**n`` holding
the rank of every subset; minors and duals derive their table from the
parent's with a handful of vectorised index operations.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterable, Sequence

import numpy as np

from . import _kernels as K
from .fields import FieldSpec, gf

DEFAULT_CAP = 20
HARD_CAP = 24


class MatroidError(ValueError):
    """Malformed input or a violated precondition."""


class CapacityError(RuntimeError):
    """A size or search budget was exceeded; no partial answer is given."""


def ground_cap() -> int:
    raw = os.environ.get("MATROID_CAP")
    if not raw:
        return DEFAULT_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise MatroidError(f"MATROID_CAP must be an integer, got {raw!r}") from exc
    return max(0, min(cap, HARD_CAP))


def bits(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class MinorSpec:
    contract: int = 0
    delete: int = 0

    def __post_init__(self):
        if self.contract & self.delete:
            raise MatroidError("contract and delete sets overlap")


class Matroid:
    """Immutable matroid given by a rank table over its ground set.

    ``backend`` records how the matroid was specified and is what
    :func:`to_json` writes back out; minors and duals carry
    ``{"kind": "rank_table"}`` plus the view bookkeeping in ``view``.
    """

    def __init__(
        self,
        elements: Sequence[str],
        fill: Callable[[], np.ndarray] | np.ndarray,
        *,
        name: str = "",
        backend: dict | None = None,
        view: dict | None = None,
        cap: int | None = None,
    ):
        elements = [str(e) for e in elements]
        if len(set(elements)) != len(elements):
            raise MatroidError("element labels must be distinct")
        limit = ground_cap() if cap is None else cap
        if len(elements) > min(limit, HARD_CAP):
            raise CapacityError(
                f"ground set of size {len(elements)} exceeds cap {min(limit, HARD_CAP)}"
            )
        self.elements: tuple[str, ...] = tuple(elements)
        self.name = name
        self.backend = backend or {"kind": "rank_table"}
        self.view = view or {"dualized": False, "contracted": 0, "deleted": 0}
        self._index = {e: i for i, e in enumerate(elements)}
        self._lock = threading.Lock()
        self._cache: dict = {}
        if isinstance(fill, np.ndarray):
            self._table = self._freeze(fill)
            self._fill = None
        else:
            self._table = None
            self._fill = fill

    # basics ---------------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.elements)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def _freeze(self, table) -> np.ndarray:
        table = np.asarray(table, dtype=np.int8)
        if table.shape != (1 << self.n,):
            raise MatroidError(f"rank table has shape {table.shape}, expected ({1 << self.n},)")
        table = table.copy()
        table.setflags(write=False)
        return table

    @property
    def table(self) -> np.ndarray:
        if self._table is None:
            with self._lock:
                if self._table is None:
                    self._table = self._freeze(self._fill())
                    self._fill = None
        return self._table

    @property
    def rank_all(self) -> int:
        return int(self.table[self.full])

    def index(self, label: str) -> int:
        try:
            return self._index[str(label)]
        except KeyError:
            raise MatroidError(f"{label!r} is not an element of the ground set") from None

    def mask(self, subset) -> int:
        """Bit mask of a subset given as a mask, a label, or labels."""
        if isinstance(subset, (int, np.integer)):
            m = int(subset)
            if m < 0 or m > self.full:
                raise MatroidError(f"mask {m} is not a subset of the ground set")
            return m
        if isinstance(subset, str):
            return 1 << self.index(subset)
        m = 0
        for e in subset:
            m |= 1 << self.index(e)
        return m

    def labels(self, mask: int) -> list[str]:
        return [self.elements[i] for i in bits(mask)]

    def key(self, mask: int) -> str:
        return ",".join(sorted(self.labels(mask)))

    def rank(self, subset) -> int:
        return int(self.table[self.mask(subset)])

    def corank(self, subset) -> int:
        m = self.mask(subset)
        return popcount(m) - self.rank_all + int(self.table[self.full ^ m])

    def popcounts(self) -> np.ndarray:
        pc = self._cache.get("pc")
        if pc is None:
            pc = self._cache["pc"] = K.popcounts(self.n)
        return pc

    def __repr__(self) -> str:
        label = self.name or "matroid"
        return f"<{label}: {self.n} elements, rank {self.rank_all}>"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matroid)
            and other.elements == self.elements
            and np.array_equal(other.table, self.table)
        )

    def __hash__(self) -> int:
        return hash((self.elements, self.table.tobytes()))

    # derived matroids -----------------------------------------------------

    def dual(self) -> "Matroid":
        cached = self._cache.get("dual")
        if cached is not None:
            return cached
        parent = self

        def fill():
            t = parent.table.astype(np.int16)
            pc = parent.popcounts()
            idx = np.arange(len(t))
            return pc - t[-1] + t[parent.full ^ idx]

        view = dict(self.view)
        view["dualized"] = not view["dualized"]
        d = Matroid(self.elements, fill, name=_dual_name(self.name), view=view, cap=HARD_CAP)
        d._cache["dual"] = self
        self._cache["dual"] = d
        return d

    def minor(self, spec: MinorSpec | None = None, *, contract=0, delete=0) -> "Matroid":
        if spec is None:
            spec = MinorSpec(self.mask(contract), self.mask(delete))
        c, d = self.mask(spec.contract), self.mask(spec.delete)
        if c & d:
            raise MatroidError("contract and delete sets overlap")
        if not c and not d:
            return self
        keep = self.full & ~(c | d)
        parent = self

        def fill():
            idx = K.subset_masks(keep) | c
            t = parent.table
            return t[idx].astype(np.int16) - t[c]

        view = {
            "dualized": self.view["dualized"],
            "contracted": c,
            "deleted": d,
            "parent": self.name,
        }
        tag = ""
        if d:
            tag += "\\" + ",".join(self.labels(d))
        if c:
            tag += "/" + ",".join(self.labels(c))
        return Matroid(self.labels(keep), fill, name=f"{self.name}{tag}", view=view, cap=HARD_CAP)

    def delete(self, subset) -> "Matroid":
        return self.minor(delete=self.mask(subset))

    def contract(self, subset) -> "Matroid":
        return self.minor(contract=self.mask(subset))

    def restrict(self, subset) -> "Matroid":
        return self.minor(delete=self.full & ~self.mask(subset))

    def relabel(self, mapping: dict[str, str] | Callable[[str], str], name: str | None = None):
        f = mapping.get if isinstance(mapping, dict) else mapping
        new = [f(e) if f(e) is not None else e for e in self.elements]
        return Matroid(new, self.table, name=self.name if name is None else name,
                       backend=_relabel_backend(self.backend, self.elements, new))

    def reorder(self, order: Sequence[str]) -> "Matroid":
        """Same matroid with the ground set listed in ``order``."""
        perm = [self.index(e) for e in order]
        if sorted(perm) != list(range(self.n)):
            raise MatroidError("reorder needs a permutation of the ground set")
        idx = _permute_masks(self.n, perm)
        return Matroid(order, self.table[idx], name=self.name)

    # closure operators ----------------------------------------------------

    def closure(self, subset) -> int:
        m = self.mask(subset)
        t = self.table
        r = t[m]
        out = m
        for i in range(self.n):
            b = 1 << i
            if not m & b and t[m | b] == r:
                out |= b
        return out

    def coclosure(self, subset) -> int:
        m = self.mask(subset)
        t = self.table
        rest = self.full ^ m
        r = t[rest]
        out = m
        for i in range(self.n):
            b = 1 << i
            if not m & b and t[rest ^ b] < r:
                out |= b
        return out

    def is_independent(self, subset) -> bool:
        m = self.mask(subset)
        return int(self.table[m]) == popcount(m)

    def loops(self) -> int:
        return self.closure(0)

    def coloops(self) -> int:
        return self.coclosure(0)

    # circuits --------------------------------------------------------------

    def circuit_masks(self) -> np.ndarray:
        got = self._cache.get("circuits")
        if got is None:
            t = self.table
            pc = self.popcounts()
            dep = t < pc
            circ = dep.copy()
            idx = np.arange(len(t))
            for i in range(self.n):
                b = 1 << i
                has = (idx & b) != 0
                circ &= ~(has & dep[idx ^ b])
            got = np.flatnonzero(circ)
            got = got[np.lexsort((got, pc[got]))]
            self._cache["circuits"] = got
        return got

    def circuits(self) -> list[int]:
        return [int(c) for c in self.circuit_masks()]

    def cocircuits(self) -> list[int]:
        return self.dual().circuits()

    def bases(self) -> list[int]:
        t = self.table
        pc = self.popcounts()
        return [int(b) for b in np.flatnonzero((pc == t[-1]) & (t == t[-1]))]

    def flats(self) -> list[int]:
        got = self._cache.get("flats")
        if got is None:
            t = self.table
            idx = np.arange(len(t))
            closed = np.ones(len(t), dtype=bool)
            for i in range(self.n):
                b = 1 << i
                out = (idx & b) == 0
                closed &= ~(out & (t[idx | b] == t))
            got = [int(f) for f in np.flatnonzero(closed)]
            got.sort(key=lambda f: (int(t[f]), f))
            self._cache["flats"] = got
        return got

    # serialisation ----------------------------------------------------------

    def to_dict(self) -> dict:
        doc = {"name": self.name, "elements": list(self.elements)}
        kind = self.backend.get("kind")
        if kind in ("linear", "bases"):
            doc["backend"] = self.backend
        else:
            doc["backend"] = {
                "kind": "rank_table",
                "ranks": {self.key(m): int(r) for m, r in enumerate(self.table)},
            }
        return doc

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def _dual_name(name: str) -> str:
    if name.endswith("*"):
        return name[:-1]
    return f"{name}*" if name else ""


def _relabel_backend(backend, old, new):
    kind = backend.get("kind")
    if kind == "bases":
        m = dict(zip(old, new))
        return {"kind": "bases", "bases": [[m[e] for e in b] for b in backend["bases"]]}
    if kind == "linear":
        return dict(backend)
    return {"kind": "rank_table"}


def _permute_masks(n: int, perm: Sequence[int]) -> np.ndarray:
    """idx[k] = old mask whose bit perm[j] is bit j of new mask k."""
    idx = np.zeros(1 << n, dtype=np.int64)
    for j, p in enumerate(perm):
        half = 1 << j
        idx[half : 2 * half] = idx[:half] | (1 << p)
    return idx


# ---------------------------------------------------------------------------
# constructors


def from_rank_table(elements, table, name="") -> Matroid:
    return Matroid(elements, np.asarray(table), name=name)


def from_matrix(elements, matrix, field: FieldSpec | int, name="") -> Matroid:
    """Column matroid of ``matrix`` (rows x n field indices)."""
    field = gf(field) if isinstance(field, int) else field
    mat = np.array(matrix, dtype=np.int64).reshape(-1, len(elements))
    if mat.size and (mat.min() < 0 or mat.max() >= field.q):
        raise MatroidError(f"matrix entries must lie in 0..{field.q - 1}")
    n = len(elements)
    cols = mat.T.copy()

    def fill():
        return K.linear_ranks(cols, np.arange(1 << n), field)

    backend = {"kind": "linear", "q": field.q, "matrix": mat.tolist()}
    return Matroid(elements, fill, name=name, backend=backend)


def from_bases(elements, bases: Iterable, name="", validate=True) -> Matroid:
    """Matroid with the given bases, each a mask or an iterable of labels."""
    elements = [str(e) for e in elements]
    pos = {e: i for i, e in enumerate(elements)}
    masks = []
    for b in bases:
        if isinstance(b, (int, np.integer)):
            masks.append(int(b))
        else:
            try:
                masks.append(sum(1 << pos[str(e)] for e in b))
            except KeyError as exc:
                raise MatroidError(f"basis uses unknown element {exc.args[0]!r}") from None
    masks = sorted(set(masks))
    if not masks:
        raise MatroidError("a matroid needs at least one basis")
    sizes = {popcount(b) for b in masks}
    if len(sizes) != 1:
        raise MatroidError("bases have different sizes")
    if validate:
        _check_exchange(masks, len(elements))
    n = len(elements)

    def fill():
        pc = K.popcounts(n)
        ind = np.zeros(1 << n, dtype=bool)
        ind[masks] = True
        idx = np.arange(1 << n)
        for i in range(n):  # close downwards
            b = 1 << i
            has = (idx & b) != 0
            ind[idx[has] ^ b] |= ind[idx[has]]
        t = np.where(ind, pc, 0).astype(np.int8)
        for i in range(n):  # max over subsets
            b = 1 << i
            has = (idx & b) != 0
            t[idx[has]] = np.maximum(t[idx[has]], t[idx[has] ^ b])
        return t

    backend = {"kind": "bases", "bases": [[elements[i] for i in bits(b)] for b in masks]}
    return Matroid(elements, fill, name=name, backend=backend)


def _check_exchange(masks, n):
    s = set(masks)
    for a in masks:
        for b in masks:
            diff = a & ~b
            if not diff:
                continue
            for x in bits(diff):
                if not any((a ^ (1 << x) | (1 << y)) in s for y in bits(b & ~a)):
                    raise MatroidError(
                        f"basis exchange fails for bases {bits(a)} and {bits(b)} at {x}"
                    )


def from_graph(elements, edges, name="", truncate: int | None = None) -> Matroid:
    """Cycle matroid; ``edges`` are (u, v) vertex pairs (u == v for a loop)."""
    return _graphlike(elements, edges, False, name, truncate)


def from_bicircular(elements, edges, name="", truncate: int | None = None) -> Matroid:
    """Bicircular matroid; an edge (u, None) is a half-edge at u."""
    return _graphlike(elements, edges, True, name, truncate)


def _graphlike(elements, edges, bicircular, name, truncate):
    verts = sorted({v for e in edges for v in e if v is not None}, key=str)
    vi = {v: i for i, v in enumerate(verts)}
    us = np.array([vi[u] for u, _ in edges], dtype=np.int64)
    vs = np.array([-1 if v is None else vi[v] for _, v in edges], dtype=np.int64)
    if not bicircular and (vs < 0).any():
        raise MatroidError("half-edges only make sense for bicircular matroids")
    n = len(elements)
    if len(edges) != n:
        raise MatroidError("need one edge per element")

    def fill():
        t = K.graph_ranks(us, vs, len(verts), np.arange(1 << n), bicircular)
        return t if truncate is None else np.minimum(t, truncate)

    return Matroid(elements, fill, name=name)


def uniform(rank: int, size: int, labels=None, name=None) -> Matroid:
    labels = labels or [f"e{i}" for i in range(size)]
    if not 0 <= rank <= size:
        raise MatroidError("uniform matroid needs 0 <= rank <= size")

    def fill():
        return np.minimum(K.popcounts(size), rank)

    return Matroid(labels, fill, name=name or f"U{rank},{size}")


def relax(M: Matroid, subset, name="") -> Matroid:
    """Relax a circuit-hyperplane to a basis."""
    m = M.mask(subset)
    r = M.rank_all
    if not (M.rank(m) == r - 1 == popcount(m) - 1 and M.closure(m) == m
            and int(m) in set(M.circuits())):
        raise MatroidError(f"{M.labels(m)} is not a circuit-hyperplane")
    t = M.table.copy()
    t[m] = r
    return Matroid(M.elements, t, name=name)


# ---------------------------------------------------------------------------
# JSON


def from_dict(doc, path: str = "$") -> Matroid:
    if not isinstance(doc, dict):
        raise MatroidError(f"{path}: expected an object")
    try:
        elements = doc["elements"]
        backend = doc["backend"]
    except KeyError as exc:
        raise MatroidError(f"{path}: missing key {exc.args[0]!r}") from None
    if not isinstance(elements, list) or not all(isinstance(e, str) for e in elements):
        raise MatroidError(f"{path}.elements: expected a list of strings")
    if not isinstance(backend, dict):
        raise MatroidError(f"{path}.backend: expected an object")
    name = doc.get("name", "")
    kind = backend.get("kind")
    if kind == "linear":
        try:
            field = gf(int(backend["q"]))
            mat = backend["matrix"]
        except KeyError as exc:
            raise MatroidError(f"{path}.backend: missing key {exc.args[0]!r}") from None
        except ValueError as exc:
            raise MatroidError(f"{path}.backend.q: {exc}") from None
        if not isinstance(mat, list) or any(
            not isinstance(row, list) or len(row) != len(elements) for row in mat
        ):
            raise MatroidError(f"{path}.backend.matrix: rows must have one entry per element")
        return from_matrix(elements, mat if mat else np.zeros((0, len(elements))), field, name)
    if kind == "bases":
        bases = backend.get("bases")
        if not isinstance(bases, list):
            raise MatroidError(f"{path}.backend.bases: expected a list")
        return from_bases(elements, bases, name)
    if kind == "rank_table":
        ranks = backend.get("ranks")
        if not isinstance(ranks, dict):
            raise MatroidError(f"{path}.backend.ranks: expected an object")
        n = len(elements)
        if n > ground_cap():
            raise CapacityError(f"ground set of size {n} exceeds cap {ground_cap()}")
        pos = {e: i for i, e in enumerate(elements)}
        table = np.full(1 << n, -1, dtype=np.int16)
        for k, r in ranks.items():
            try:
                m = sum(1 << pos[e] for e in k.split(",")) if k else 0
            except KeyError as exc:
                raise MatroidError(f"{path}.backend.ranks[{k!r}]: unknown element") from exc
            table[m] = int(r)
        if (table < 0).any():
            missing = int(np.flatnonzero(table < 0)[0])
            lbl = ",".join(sorted(elements[i] for i in bits(missing)))
            raise MatroidError(f"{path}.backend.ranks: missing subset {lbl!r}")
        return Matroid(elements, table.astype(np.int8), name=name)
    raise MatroidError(f"{path}.backend.kind: unknown backend {kind!r}")


def loads(text: str) -> Matroid:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatroidError(f"$: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    return from_dict(doc)


# ---------------------------------------------------------------------------
# operation-level API


def rank(M: Matroid, subset) -> int:
    return M.rank(subset)


def dual(M: Matroid) -> Matroid:
    return M.dual()


def minor(M: Matroid, spec: MinorSpec) -> Matroid:
    return M.minor(spec)


def closure_ops(M: Matroid, subset) -> tuple[int, int]:
    return M.closure(subset), M.coclosure(subset)


def circuits_cocircuits(M: Matroid) -> tuple[list[int], list[int]]:
    return M.circuits(), M.cocircuits()


@dataclass
class AxiomReport:
    valid: bool
    violation: str | None = None
    witness: tuple | None = None
    exhaustive: bool = True

    def __bool__(self) -> bool:
        return self.valid


def check_axioms(M: Matroid, exhaustive_limit: int = 20, samples: int = 200_000,
                 seed: int = 0) -> AxiomReport:
    """Normalisation, unit increase and local submodularity.

    Unit increase together with r(X+i) + r(X+j) >= r(X+i+j) + r(X) for all X
    and i, j outside X is equivalent to full submodularity, so the exhaustive
    check only looks at these diamonds.
    """
    t = M.table.astype(np.int16)
    n = M.n
    if t[0] != 0:
        return AxiomReport(False, "normalisation", (0,))
    if n <= exhaustive_limit:
        idx = np.arange(1 << n)
    else:
        rng = np.random.default_rng(seed)
        idx = rng.integers(0, 1 << n, size=samples)
    for i in range(n):
        b = 1 << i
        x = idx[(idx & b) == 0]
        step = t[x | b] - t[x]
        bad = np.flatnonzero((step < 0) | (step > 1))
        if len(bad):
            X = int(x[bad[0]])
            return AxiomReport(False, "unit increase", (M.labels(X), M.elements[i]),
                               n <= exhaustive_limit)
    for i, j in combinations(range(n), 2):
        bi, bj = 1 << i, 1 << j
        x = idx[(idx & (bi | bj)) == 0]
        lhs = t[x | bi] + t[x | bj]
        rhs = t[x | bi | bj] + t[x]
        bad = np.flatnonzero(lhs < rhs)
        if len(bad):
            X = int(x[bad[0]])
            return AxiomReport(False, "submodularity",
                               (M.labels(X), M.elements[i], M.elements[j]),
                               n <= exhaustive_limit)
    return AxiomReport(True, exhaustive=n <= exhaustive_limit)


# ---------------------------------------------------------------------------
# isomorphism


ISO_CAP = 12


def _signature(M: Matroid) -> list[tuple]:
    sig = [[] for _ in range(M.n)]
    for which in (M, M.dual()):
        circ = which.circuit_masks()
        pc = which.popcounts()[circ]
        for i in range(M.n):
            hit = (circ >> i) & 1 == 1
            sig[i].append(tuple(np.bincount(pc[hit], minlength=M.n + 1).tolist()))
    return [tuple(s) for s in sig]


def find_isomorphism(M: Matroid, N: Matroid, cap: int = ISO_CAP) -> dict[str, str] | None:
    """Lexicographically least rank-preserving bijection E(M) -> E(N), or None.

    Candidates for each element are tried in ground-set order of ``N``, so the
    first complete map found is the least one in that order.
    """
    if M.n != N.n:
        return None
    if M.n > cap:
        raise CapacityError(f"isomorphism search is limited to {cap} elements")
    n = M.n
    tm, tn = M.table, N.table
    pc = M.popcounts()
    if M.rank_all != N.rank_all:
        return None
    # cheap global invariant: rank distribution per subset size
    hist_m = np.bincount(pc.astype(np.int64) * (n + 1) + tm, minlength=(n + 1) ** 2)
    hist_n = np.bincount(pc.astype(np.int64) * (n + 1) + tn, minlength=(n + 1) ** 2)
    if not np.array_equal(hist_m, hist_n):
        return None
    sm, sn = _signature(M), _signature(N)
    if sorted(sm) != sorted(sn):
        return None
    cands = [[j for j in range(n) if sn[j] == sm[i]] for i in range(n)]
    image = np.zeros(1 << n, dtype=np.int64)
    phi = [-1] * n
    used = [False] * n

    def extend(d: int) -> bool:
        if d == n:
            return True
        half = 1 << d
        lo = np.arange(half)
        src = lo | half
        for j in cands[d]:
            if used[j]:
                continue
            img = image[:half] | (1 << j)
            if not np.array_equal(tm[src], tn[img]):
                continue
            image[half : 2 * half] = img
            phi[d] = j
            used[j] = True
            if extend(d + 1):
                return True
            used[j] = False
        return False

    if not extend(0):
        return None
    return {M.elements[i]: N.elements[phi[i]] for i in range(n)}


def is_isomorphic(M: Matroid, N: Matroid, cap: int = ISO_CAP) -> bool:
    return find_isomorphism(M, N, cap) is not None
