"""Finite fields as explicit lookup tables.

Elements are the integers ``0..q-1``.  For prime ``q`` they are residues;
for ``q`` in {4, 8, 9} they are coefficient vectors of a polynomial basis,
packed little-endian in base ``p``.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

# irreducible polynomials, lowest coefficient first, monic top term implied
_MODULI = {4: (2, (1, 1)), 8: (2, (1, 1, 0)), 9: (3, (1, 0))}


class FieldError(ValueError):
    pass


def _is_prime(q: int) -> bool:
    return q >= 2 and all(q % d for d in range(2, int(q**0.5) + 1))


class FieldSpec:
    """GF(q) with add/mul/neg/inv tables (``inv[0]`` is 0 by convention)."""

    def __init__(self, q: int):
        if _is_prime(q):
            p, deg = q, 1
            a = np.arange(q)
            add = (a[:, None] + a[None, :]) % q
            mul = (a[:, None] * a[None, :]) % q
        elif q in _MODULI:
            p, low = _MODULI[q]
            deg = len(low)
            add, mul = _poly_tables(p, low)
        else:
            raise FieldError(f"unsupported field order {q}")
        self.q = q
        self.p = p
        self.degree = deg
        self.add = add.astype(np.int64)
        self.mul = mul.astype(np.int64)
        self.neg = np.argmax(self.add == 0, axis=1).astype(np.int64)
        inv = np.zeros(q, dtype=np.int64)
        for x in range(1, q):
            inv[x] = int(np.argmax(self.mul[x] == 1))
        self.inv = inv
        self.zero, self.one = 0, 1
        for t in (self.add, self.mul, self.neg, self.inv):
            t.setflags(write=False)
        if q <= 16:
            self._check_axioms()

    def __repr__(self) -> str:
        return f"GF({self.q})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldSpec) and other.q == self.q

    def __hash__(self) -> int:
        return hash(("GF", self.q))

    @property
    def units(self) -> range:
        return range(1, self.q)

    def sub(self, a, b):
        return self.add[a, self.neg[b]]

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero in finite field")
        return self.mul[a, self.inv[b]]

    def power(self, a: int, e: int) -> int:
        out = 1
        for _ in range(e):
            out = int(self.mul[out, a])
        return out

    def _check_axioms(self) -> None:
        add, mul, q = self.add, self.mul, self.q
        a = np.arange(q)
        ok = (
            (add[a, 0] == a).all()
            and (mul[a, 1] == a).all()
            and (add == add.T).all()
            and (mul == mul.T).all()
            and (add[add[a[:, None, None], a[None, :, None]], a[None, None, :]]
                 == add[a[:, None, None], add[a[None, :, None], a[None, None, :]]]).all()
            and (mul[mul[a[:, None, None], a[None, :, None]], a[None, None, :]]
                 == mul[a[:, None, None], mul[a[None, :, None], a[None, None, :]]]).all()
            and (mul[a[:, None, None], add[a[None, :, None], a[None, None, :]]]
                 == add[mul[a[:, None, None], a[None, :, None]],
                        mul[a[:, None, None], a[None, None, :]]]).all()
            and all(mul[x, self.inv[x]] == 1 for x in range(1, q))
            and (add[a, self.neg] == 0).all()
        )
        if not ok:
            raise FieldError(f"tables for GF({q}) do not define a field")

    # matrix helpers -------------------------------------------------------

    def rank(self, rows) -> int:
        """Rank of a small matrix given as a nested list or array."""
        m = np.array(rows, dtype=np.int64, copy=True)
        if m.size == 0:
            return 0
        r = 0
        nr, nc = m.shape
        for c in range(nc):
            piv = next((i for i in range(r, nr) if m[i, c]), None)
            if piv is None:
                continue
            m[[r, piv]] = m[[piv, r]]
            m[r] = self.mul[self.inv[m[r, c]], m[r]]
            for i in range(nr):
                if i != r and m[i, c]:
                    m[i] = self.add[m[i], self.mul[self.neg[m[i, c]], m[r]]]
            r += 1
            if r == nr:
                break
        return r

    def det(self, rows) -> int:
        m = np.array(rows, dtype=np.int64, copy=True)
        n = m.shape[0]
        out = 1
        for c in range(n):
            piv = next((i for i in range(c, n) if m[i, c]), None)
            if piv is None:
                return 0
            if piv != c:
                m[[c, piv]] = m[[piv, c]]
                out = int(self.neg[out])
            out = int(self.mul[out, m[c, c]])
            s = self.inv[m[c, c]]
            for i in range(c + 1, n):
                if m[i, c]:
                    f = self.mul[self.neg[m[i, c]], s]
                    m[i] = self.add[m[i], self.mul[f, m[c]]]
        return out

    def rref(self, rows):
        """Reduced row echelon form and pivot columns."""
        m = np.array(rows, dtype=np.int64, copy=True)
        nr, nc = m.shape
        pivots = []
        r = 0
        for c in range(nc):
            if r == nr:
                break
            piv = next((i for i in range(r, nr) if m[i, c]), None)
            if piv is None:
                continue
            m[[r, piv]] = m[[piv, r]]
            m[r] = self.mul[self.inv[m[r, c]], m[r]]
            for i in range(nr):
                if i != r and m[i, c]:
                    m[i] = self.add[m[i], self.mul[self.neg[m[i, c]], m[r]]]
            pivots.append(c)
            r += 1
        return m[:r], pivots


def _poly_tables(p: int, low: tuple[int, ...]):
    deg = len(low)
    q = p**deg

    def unpack(x):
        return [(x // p**i) % p for i in range(deg)]

    def pack(v):
        return sum(c * p**i for i, c in enumerate(v))

    vecs = [unpack(x) for x in range(q)]
    add = np.zeros((q, q), dtype=np.int64)
    mul = np.zeros((q, q), dtype=np.int64)
    for x in range(q):
        for y in range(q):
            add[x, y] = pack([(a + b) % p for a, b in zip(vecs[x], vecs[y])])
            prod = [0] * (2 * deg - 1)
            for i, a in enumerate(vecs[x]):
                for j, b in enumerate(vecs[y]):
                    prod[i + j] = (prod[i + j] + a * b) % p
            # reduce with t^deg = -(low)
            for k in range(len(prod) - 1, deg - 1, -1):
                c = prod[k]
                if c:
                    prod[k] = 0
                    for i, a in enumerate(low):
                        prod[k - deg + i] = (prod[k - deg + i] - c * a) % p
            mul[x, y] = pack(prod[:deg])
    return add, mul


@lru_cache(maxsize=None)
def gf(q: int) -> FieldSpec:
    """Cached field constructor."""
    return FieldSpec(q)
