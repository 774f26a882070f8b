"""GF(2^32) arithmetic and evaluation of K-coordinates at random points.

Used for membership of very large characteristic-2 fractions.  Substituting
values for x1^q..xn^q is a ring map on the polynomial part of K, so the
K-rank of coordinate vectors can only drop: a rank increase after
evaluation proves non-membership, and equal ranks at two independent points
make membership overwhelmingly likely (Schwartz-Zippel).
"""

from __future__ import annotations

import random

import numpy as np

from .scalars import FIELD_BITS, MultiPoly

BITS = 32
_MASK = (1 << BITS) - 1
_LOW = 0x8D  # x^32 + x^7 + x^3 + x^2 + 1 (irreducible)


def _fold(r: int) -> int:
    for _ in range(2):
        hi = r >> BITS
        if not hi:
            break
        r = (r & _MASK) ^ hi ^ (hi << 2) ^ (hi << 3) ^ (hi << 7)
    return r


def mul(a: int, b: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return _fold(r)


def inv(a: int) -> int:
    if not a:
        raise ZeroDivisionError("inverse of zero in GF(2^32)")
    # a^(2^32 - 2)
    out, base, e = 1, a, (1 << BITS) - 2
    while e:
        if e & 1:
            out = mul(out, base)
        base = mul(base, base)
        e >>= 1
    return out


def _fold_vec(r):
    for _ in range(2):
        hi = r >> np.uint64(BITS)
        r = (r & np.uint64(_MASK)) ^ hi ^ (hi << np.uint64(2)) ^ (hi << np.uint64(3)) ^ (hi << np.uint64(7))
    return r


def mul_vec(a, b):
    """Elementwise product of uint64 arrays holding GF(2^32) elements."""
    r = np.zeros_like(a)
    one = np.uint64(1)
    for i in range(BITS):
        bit = (b >> np.uint64(i)) & one
        r ^= (a << np.uint64(i)) * bit
    return _fold_vec(r)


def rank(rows) -> int:
    rows = [list(r) for r in rows]
    rk = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rk, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        pinv = inv(rows[rk][c])
        for i in range(len(rows)):
            if i != rk and rows[i][c]:
                f = mul(rows[i][c], pinv)
                rows[i] = [x ^ mul(f, y) for x, y in zip(rows[i], rows[rk])]
        rk += 1
    return rk


class Evaluator:
    """Coordinates over K at a random point z (values of x_i^q), up to a nonzero K-scalar."""

    def __init__(self, nvars: int, q: int, seed: int):
        rng = random.Random(seed)
        self.n = nvars
        self.q = q
        self.z = [rng.randrange(1, 1 << BITS) for _ in range(nvars)]
        self._pow = [[1] for _ in range(nvars)]
        self.size = q ** nvars

    def _powers(self, i: int, top: int):
        table = self._pow[i]
        while len(table) <= top:
            table.append(mul(table[-1], self.z[i]))
        return np.array(table, dtype=np.uint64)

    def poly(self, f: MultiPoly) -> list[int]:
        """Residue-class values of a polynomial: f = sum_S x^S f_S(x^q)."""
        out = [0] * self.size
        if not f.terms:
            return out
        if f.p != 2:
            raise ValueError("evaluation is implemented for characteristic 2")
        keys = np.fromiter(f.terms.keys(), dtype=np.uint64, count=len(f.terms))
        q = np.uint64(self.q)
        mask = np.uint64((1 << FIELD_BITS) - 1)
        vals = None
        cls = np.zeros(len(keys), dtype=np.int64)
        for i in range(self.n):
            shift = np.uint64(FIELD_BITS * (self.n - 1 - i))
            e = (keys >> shift) & mask
            cls = cls * self.q + (e % q).astype(np.int64)
            hi = e // q
            table = self._powers(i, int(hi.max()))
            v = table[hi.astype(np.int64)]
            vals = v if vals is None else mul_vec(vals, v)
        acc = np.zeros(self.size, dtype=np.uint64)
        np.bitwise_xor.at(acc, cls, vals)
        return [int(x) for x in acc]

    def cmul(self, u: list[int], v: list[int]) -> list[int]:
        """Product in coordinate form: x^T x^U = x^((T+U) mod q) (x^q)^carry."""
        q, n = self.q, self.n
        out = [0] * self.size
        digits = [self._digits(s) for s in range(self.size)]
        for s, a in enumerate(u):
            if not a:
                continue
            ds = digits[s]
            for t, b in enumerate(v):
                if not b:
                    continue
                dt = digits[t]
                idx = 0
                w = mul(a, b)
                for i in range(n):
                    tot = ds[i] + dt[i]
                    idx = idx * q + tot % q
                    if tot >= q:
                        w = mul(w, self.z[i])
                out[idx] ^= w
        return out

    def _digits(self, s: int):
        out = []
        for _ in range(self.n):
            out.append(s % self.q)
            s //= self.q
        return out[::-1]

    def fraction(self, num: MultiPoly, den: MultiPoly):
        """Coordinates of num/den scaled by den^q, or None when den^q vanishes at z."""
        u = self.poly(num)
        d = self.poly(den)
        acc = u
        power = [1] + [0] * (self.size - 1)
        for _ in range(self.q - 1):
            acc = self.cmul(acc, d)
            power = self.cmul(power, d)
        if not any(self.cmul(power, d)):
            return None
        return acc
