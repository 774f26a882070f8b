"""Exact scalars: GF(2), GF(4), GF(3), GF(9) and rational-function fields F_p(x1..xn).

Polynomials keep their exponent vectors packed into a single Python int, one
21-bit field per variable with x1 in the most significant field.  Integer order
on packed keys is then the lexicographic monomial order, and multiplying
monomials is integer addition.
"""

from __future__ import annotations

import heapq
import itertools
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

FIELD_BITS = 21
# fixed pseudo-random weights for the univariate divisibility filter
_IMAGE_WEIGHTS = (1, 11, 59, 131, 263, 521)
DEGREE_CAP = 1 << 20
_FIELD_MASK = (1 << FIELD_BITS) - 1
_NUMPY_THRESHOLD = 2048


class ScalarError(ValueError):
    pass


class ParseError(ScalarError):
    pass


class DescriptorMismatch(ScalarError):
    pass


class DegreeOverflow(ScalarError):
    pass


# --------------------------------------------------------------------------
# field descriptors


_FINITE_MODULI = {
    # (p, k): coefficients (c0, c1) of w^2 = c0 + c1*w
    (2, 2): (1, 1),   # w^2 + w + 1
    (3, 2): (2, 0),   # w^2 + 1
}


@dataclass(frozen=True)
class FieldDescriptor:
    p: int
    kind: str
    degree: int = 1
    nvars: int = 0

    def __post_init__(self):
        if self.p not in (2, 3):
            raise ScalarError(f"characteristic must be 2 or 3, got {self.p}")
        if self.kind == "finite":
            if self.degree not in (1, 2) or self.nvars:
                raise ScalarError("finite fields are GF(p) or GF(p^2)")
        elif self.kind == "rational":
            if not 1 <= self.nvars <= 6 or self.degree != 1:
                raise ScalarError("rational fields take 1..6 variables")
        else:
            raise ScalarError(f"unknown field kind {self.kind!r}")

    # -- constructors ------------------------------------------------------

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    @property
    def order(self) -> int:
        if not self.is_finite:
            raise ScalarError("rational function fields are infinite")
        return self.p ** self.degree

    def zero(self) -> "Scalar":
        if self.is_finite:
            return FiniteScalar(self, 0)
        return Fraction(self, MultiPoly.zero(self.p, self.nvars))

    def one(self) -> "Scalar":
        return self.from_int(1)

    def from_int(self, c: int) -> "Scalar":
        if self.is_finite:
            return FiniteScalar(self, c % self.p)
        return Fraction(self, MultiPoly.constant(self.p, self.nvars, c))

    def var(self, i: int) -> "Scalar":
        """x_i for rational fields (1-based); the generator w for GF(p^2)."""
        if self.is_finite:
            if self.degree != 2:
                raise ScalarError(f"{self} has no generator symbol")
            return FiniteScalar(self, self.p)
        if not 1 <= i <= self.nvars:
            raise ParseError(f"variable x{i} out of range for {self}")
        e = [0] * self.nvars
        e[i - 1] = 1
        return Fraction(self, MultiPoly.monomial(self.p, self.nvars, e))

    def from_poly(self, num: "MultiPoly", den: "MultiPoly | None" = None) -> "Fraction":
        if den is None:
            den = MultiPoly.constant(self.p, self.nvars, 1)
        return Fraction(self, num, den)

    def elements(self) -> list["FiniteScalar"]:
        return [FiniteScalar(self, v) for v in range(self.order)]

    def parse(self, text: str) -> "Scalar":
        return parse_scalar(text, self)

    def __str__(self):
        if self.is_finite:
            return f"GF({self.order})"
        return f"F{self.p}(" + ",".join(f"x{i + 1}" for i in range(self.nvars)) + ")"

    # -- finite field tables -------------------------------------------------

    @cached_property
    def _tables(self):
        p, k = self.p, self.degree
        q = p**k
        pairs = [(v % p, v // p) for v in range(q)]
        enc = {pr: v for v, pr in enumerate(pairs)}
        add = [[enc[((a0 + b0) % p, (a1 + b1) % p)] for (b0, b1) in pairs] for (a0, a1) in pairs]
        if k == 1:
            mul = [[(a * b) % p for b in range(q)] for a in range(q)]
        else:
            c0, c1 = _FINITE_MODULI[(p, k)]
            mul = []
            for a0, a1 in pairs:
                row = []
                for b0, b1 in pairs:
                    # (a0 + a1 w)(b0 + b1 w) with w^2 = c0 + c1 w
                    hi = a1 * b1
                    r0 = (a0 * b0 + hi * c0) % p
                    r1 = (a0 * b1 + a1 * b0 + hi * c1) % p
                    row.append(enc[(r0, r1)])
                mul.append(row)
        neg = [enc[((-a0) % p, (-a1) % p)] for (a0, a1) in pairs]
        inv = [0] * q
        for a in range(1, q):
            inv[a] = next(b for b in range(1, q) if mul[a][b] == 1)
        return add, mul, neg, inv


def GF(q: int) -> FieldDescriptor:
    table = {2: (2, 1), 3: (3, 1), 4: (2, 2), 9: (3, 2)}
    if q not in table:
        raise ScalarError(f"unsupported finite field GF({q})")
    p, k = table[q]
    return FieldDescriptor(p, "finite", k, 0)


def RationalField(p: int, nvars: int) -> FieldDescriptor:
    return FieldDescriptor(p, "rational", 1, nvars)


_FIELD_RE = re.compile(r"^\s*(?:GF\((\d+)\)|F(\d)\(\s*(x\d+(?:\s*,\s*x\d+)*)\s*\))\s*$")


def parse_field(text: str) -> FieldDescriptor:
    """Parse "GF(4)" or "F2(x1,x2)" into a descriptor."""
    m = _FIELD_RE.match(text)
    if not m:
        raise ParseError(f"cannot parse field {text!r}")
    if m.group(1):
        return GF(int(m.group(1)))
    names = [s.strip() for s in m.group(3).split(",")]
    if names != [f"x{i + 1}" for i in range(len(names))]:
        raise ParseError(f"variables must be x1..xn in order: {text!r}")
    return RationalField(int(m.group(2)), len(names))


# --------------------------------------------------------------------------
# packed multivariate polynomials over GF(p)


def _shifts(n: int) -> tuple[int, ...]:
    return tuple(FIELD_BITS * (n - 1 - i) for i in range(n))


def pack(exps: Iterable[int], n: int) -> int:
    key = 0
    for e, s in zip(exps, _shifts(n)):
        if e < 0:
            raise ScalarError("negative exponent")
        if e >= DEGREE_CAP:
            raise DegreeOverflow(f"exponent {e} exceeds cap {DEGREE_CAP}")
        key |= e << s
    return key


def unpack(key: int, n: int) -> tuple[int, ...]:
    return tuple((key >> s) & _FIELD_MASK for s in _shifts(n))


def _guard(n: int) -> int:
    return sum(1 << (s + FIELD_BITS - 1) for s in _shifts(n))


def _to_bits(terms) -> int:
    """Char-2 univariate terms as an int bitmask."""
    x = 0
    for k in terms:
        x |= 1 << k
    return x


def _bit_positions(x: int) -> list[int]:
    s = bin(x)[:1:-1]
    return [i for i, ch in enumerate(s) if ch == "1"]


class MultiPoly:
    """Sparse polynomial over GF(p): packed exponent key -> nonzero coefficient."""

    __slots__ = ("p", "nvars", "terms", "_maxdeg")

    def __init__(self, p: int, nvars: int, terms: dict[int, int]):
        self.p = p
        self.nvars = nvars
        self.terms = terms
        self._maxdeg = None

    @classmethod
    def zero(cls, p, n):
        return cls(p, n, {})

    @classmethod
    def constant(cls, p, n, c):
        c %= p
        return cls(p, n, {0: c} if c else {})

    @classmethod
    def monomial(cls, p, n, exps, c=1):
        c %= p
        return cls(p, n, {pack(exps, n): c} if c else {})

    @classmethod
    def from_dict(cls, p, n, d: dict[tuple[int, ...], int]):
        terms = {}
        for e, c in d.items():
            c %= p
            if c:
                k = pack(e, n)
                terms[k] = (terms.get(k, 0) + c) % p
                if not terms[k]:
                    del terms[k]
        return cls(p, n, terms)

    def as_dict(self) -> dict[tuple[int, ...], int]:
        return {unpack(k, self.nvars): c for k, c in self.terms.items()}

    # -- predicates ----------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def constant_value(self):
        return self.terms.get(0, 0)

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def __len__(self):
        return len(self.terms)

    def maxdeg(self) -> tuple[int, ...]:
        if self._maxdeg is None:
            md = [0] * self.nvars
            for k in self.terms:
                for i, e in enumerate(unpack(k, self.nvars)):
                    if e > md[i]:
                        md[i] = e
            self._maxdeg = tuple(md)
        return self._maxdeg

    def leading_key(self) -> int:
        return max(self.terms)

    # -- ring operations -----------------------------------------------------

    def _new(self, terms):
        return MultiPoly(self.p, self.nvars, terms)

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        a, b = self.terms, other.terms
        if not a:
            return other
        if not b:
            return self
        if self.p == 2:
            return self._new(dict.fromkeys(a.keys() ^ b.keys(), 1))
        if len(a) < len(b):
            a, b = b, a
        res = dict(a)
        p = self.p
        for k, c in b.items():
            v = (res.get(k, 0) + c) % p
            if v:
                res[k] = v
            else:
                res.pop(k, None)
        return self._new(res)

    def __neg__(self):
        if self.p == 2:
            return self
        p = self.p
        return self._new({k: p - c for k, c in self.terms.items()})

    def __sub__(self, other):
        if self.p == 2:
            return self + other
        return self + (-other)

    def scale(self, c: int) -> "MultiPoly":
        c %= self.p
        if not c:
            return self._new({})
        if c == 1:
            return self
        p = self.p
        return self._new({k: (v * c) % p for k, v in self.terms.items()})

    def shift(self, key: int, c: int = 1) -> "MultiPoly":
        """Multiply by the monomial c * x^key."""
        p = self.p
        if p == 2:
            return self._new({k + key: 1 for k in self.terms})
        return self._new({k + key: (v * c) % p for k, v in self.terms.items()})

    def _check_overflow(self, other):
        for a, b in zip(self.maxdeg(), other.maxdeg()):
            if a + b >= DEGREE_CAP:
                raise DegreeOverflow("product degree exceeds cap")

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        a, b = self.terms, other.terms
        if not a or not b:
            return self._new({})
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            (k, c), = b.items()
            if k == 0 and c == 1:
                return self if a is self.terms else other
            self._check_overflow(other)
            src = self if a is self.terms else other
            return src.shift(k, c)
        self._check_overflow(other)
        if self.p == 2 and self.nvars == 1 and len(a) * len(b) > 32:
            big, small = _to_bits(a), _to_bits(b)
            res = 0
            for k in _bit_positions(small):
                res ^= big << k
            return self._new(dict.fromkeys(_bit_positions(res), 1))
        if len(a) * len(b) > _NUMPY_THRESHOLD and self.nvars * FIELD_BITS <= 63:
            return self._mul_numpy(a, b)
        res: dict[int, int] = {}
        if self.p == 2:
            for kb in b:
                for ka in a:
                    k = ka + kb
                    if k in res:
                        del res[k]
                    else:
                        res[k] = 1
            return self._new(res)
        p = self.p
        for kb, cb in b.items():
            for ka, ca in a.items():
                k = ka + kb
                v = (res.get(k, 0) + ca * cb) % p
                if v:
                    res[k] = v
                else:
                    res.pop(k, None)
        return self._new(res)

    def _mul_numpy(self, a, b):
        ka = np.fromiter(a.keys(), dtype=np.uint64, count=len(a))
        kb = np.fromiter(b.keys(), dtype=np.uint64, count=len(b))
        keys = np.add.outer(ka, kb).ravel()
        if self.p == 2:
            uniq, counts = np.unique(keys, return_counts=True)
            return self._new(dict.fromkeys(uniq[counts & 1 == 1].tolist(), 1))
        ca = np.fromiter(a.values(), dtype=np.int64, count=len(a))
        cb = np.fromiter(b.values(), dtype=np.int64, count=len(b))
        coeffs = np.multiply.outer(ca, cb).ravel()
        uniq, inv = np.unique(keys, return_inverse=True)
        sums = np.bincount(inv, weights=coeffs).astype(np.int64) % self.p
        nz = sums != 0
        return self._new(dict(zip(uniq[nz].tolist(), sums[nz].tolist())))

    def __pow__(self, e: int) -> "MultiPoly":
        if e < 0:
            raise ScalarError("negative power of a polynomial")
        result = MultiPoly.constant(self.p, self.nvars, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def frobenius(self, q: int | None = None) -> "MultiPoly":
        """Raise to the q-th power (q a power of p): exponents scale, coefficients are fixed."""
        q = q or self.p
        if self.terms:
            for d in self.maxdeg():
                if d * q >= DEGREE_CAP:
                    raise DegreeOverflow("frobenius exceeds degree cap")
        return self._new({k * q: c for k, c in self.terms.items()})

    # -- monomial content and division ---------------------------------------

    def monomial_content(self) -> int:
        """Packed key of the gcd of all monomials."""
        if not self.terms:
            return 0
        n = self.nvars
        mins = None
        for k in self.terms:
            e = unpack(k, n)
            mins = e if mins is None else tuple(min(x, y) for x, y in zip(mins, e))
            if not any(mins):
                return 0
        return pack(mins, n)

    def divide_monomial(self, key: int) -> "MultiPoly":
        if not key:
            return self
        return self._new({k - key: c for k, c in self.terms.items()})

    def divmod_exact(self, other: "MultiPoly") -> "MultiPoly | None":
        """Quotient if ``other`` divides ``self`` exactly, else None."""
        if not other.terms:
            raise ZeroDivisionError("polynomial division by zero")
        if not self.terms:
            return self
        p = self.p
        if p == 2 and self.nvars == 1:
            a, b = _to_bits(self.terms), _to_bits(other.terms)
            db = b.bit_length()
            q = 0
            while a and a.bit_length() >= db:
                sh = a.bit_length() - db
                q |= 1 << sh
                a ^= b << sh
            return None if a else self._new(dict.fromkeys(_bit_positions(q), 1))
        g = _guard(self.nvars)
        lb = max(other.terms)
        cb_inv = pow(other.terms[lb], p - 2, p)
        if len(other.terms) == 1:
            out = {}
            for k, c in self.terms.items():
                t = (k | g) - lb
                if t & g != g:
                    return None
                out[t & ~g] = (c * cb_inv) % p
            return self._new(out)
        for a, b in zip(self.maxdeg(), other.maxdeg()):
            if b > a:
                return None
        # lex leading and trailing monomials multiply
        if ((max(self.terms) | g) - lb) & g != g or ((min(self.terms) | g) - min(other.terms)) & g != g:
            return None
        if p == 2 and not self._image_divisible(other):
            return None
        rem = dict(self.terms)
        heap = [-k for k in rem]
        heapq.heapify(heap)
        quot = {}
        other_items = list(other.terms.items())
        while rem:
            la = -heapq.heappop(heap)
            if la not in rem:
                continue
            t = (la | g) - lb
            if t & g != g:
                return None
            qk = t & ~g
            qc = (rem[la] * cb_inv) % p
            quot[qk] = qc
            if p == 2:
                for kb, _ in other_items:
                    k = kb + qk
                    if k in rem:
                        del rem[k]
                    else:
                        rem[k] = 1
                        heapq.heappush(heap, -k)
            else:
                for kb, cb in other_items:
                    k = kb + qk
                    v = (rem.get(k, 0) - qc * cb) % p
                    if v:
                        if k not in rem:
                            heapq.heappush(heap, -k)
                        rem[k] = v
                    else:
                        rem.pop(k, None)
        return self._new(quot)

    def _image_divisible(self, other: "MultiPoly") -> bool:
        """Necessary test in characteristic 2: divisibility after x_i -> y^w_i."""
        n = self.nvars
        ws = _IMAGE_WEIGHTS[:n]

        def image(terms):
            x = 0
            for k in terms:
                x ^= 1 << sum(w * e for w, e in zip(ws, unpack(k, n)))
            return x

        b = image(other.terms)
        if not b:
            return True
        a = image(self.terms)
        db = b.bit_length()
        while a and a.bit_length() >= db:
            a ^= b << (a.bit_length() - db)
        return not a

    # -- univariate gcd ---------------------------------------------------------

    def _dense(self):
        if not self.terms:
            return []
        out = [0] * (max(self.terms) + 1)
        for k, c in self.terms.items():
            out[k] = c
        return out

    def gcd_univariate(self, other: "MultiPoly") -> "MultiPoly":
        """Monic gcd in one variable (Euclid); char 2 runs on bit-packed ints."""
        if self.nvars != 1:
            raise ScalarError("gcd is only provided for one variable")
        if self.p == 2:
            a, b = _to_bits(self.terms), _to_bits(other.terms)
            while b:
                db = b.bit_length()
                while a and a.bit_length() >= db:
                    a ^= b << (a.bit_length() - db)
                a, b = b, a
            return self._new(dict.fromkeys(_bit_positions(a), 1))
        p = self.p
        a, b = self._dense(), other._dense()
        while b:
            inv = pow(b[-1], p - 2, p)
            while len(a) >= len(b):
                f = a[-1] * inv % p
                sh = len(a) - len(b)
                for i, c in enumerate(b):
                    a[sh + i] = (a[sh + i] - f * c) % p
                while a and not a[-1]:
                    a.pop()
            a, b = b, a
        if not a:
            return self._new({})
        inv = pow(a[-1], p - 2, p)
        return self._new({k: c * inv % p for k, c in enumerate(a) if c})

    # -- subfield coordinates --------------------------------------------------

    def split_residues(self, q: int) -> dict[tuple[int, ...], "MultiPoly"]:
        """Group terms by exponent residues mod q; each part is returned compressed (exponents // q)."""
        n = self.nvars
        parts: dict[tuple[int, ...], dict[int, int]] = {}
        for k, c in self.terms.items():
            e = unpack(k, n)
            s = tuple(x % q for x in e)
            parts.setdefault(s, {})[pack([x // q for x in e], n)] = c
        return {s: self._new(t) for s, t in parts.items()}

    def expand(self, q: int) -> "MultiPoly":
        """Inverse of compression: substitute x_i -> x_i^q."""
        return self.frobenius(q)

    def compress(self, q: int) -> "MultiPoly":
        n = self.nvars
        out = {}
        for k, c in self.terms.items():
            e = unpack(k, n)
            if any(x % q for x in e):
                raise ScalarError(f"polynomial is not a polynomial in the {q}-th powers")
            out[pack([x // q for x in e], n)] = c
        return self._new(out)

    # -- rendering -------------------------------------------------------------

    def sorted_terms(self):
        """Terms in graded-lex descending order as (exponent tuple, coeff)."""
        n = self.nvars
        items = [(unpack(k, n), c) for k, c in self.terms.items()]
        items.sort(key=lambda t: (sum(t[0]), t[0]), reverse=True)
        return items

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                f"x{i + 1}" if x == 1 else f"x{i + 1}^{x}" for i, x in enumerate(e) if x
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}{mono}")
        return "+".join(parts)

    def __repr__(self):
        return f"MultiPoly({self.render()})"


# --------------------------------------------------------------------------
# scalars


class Scalar:
    """Element of an exact field; concrete subclasses are FiniteScalar and Fraction."""

    __slots__ = ("desc",)

    def _check(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, int):
                return self.desc.from_int(other)
            raise TypeError(f"cannot combine Scalar with {type(other).__name__}")
        if other.desc != self.desc:
            raise DescriptorMismatch(f"{self.desc} vs {other.desc}")
        return other

    def __radd__(self, other):
        return self.__add__(other)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __truediv__(self, other):
        return self * self._check(other).inv()

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        result = self.desc.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def is_one(self):
        return self == self.desc.one()

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"Scalar({self.render()} in {self.desc})"


class FiniteScalar(Scalar):
    __slots__ = ("v",)

    def __init__(self, desc: FieldDescriptor, v: int):
        self.desc = desc
        self.v = v

    def __add__(self, other):
        other = self._check(other)
        return FiniteScalar(self.desc, self.desc._tables[0][self.v][other.v])

    def __sub__(self, other):
        other = self._check(other)
        t = self.desc._tables
        return FiniteScalar(self.desc, t[0][self.v][t[2][other.v]])

    def __neg__(self):
        return FiniteScalar(self.desc, self.desc._tables[2][self.v])

    def __mul__(self, other):
        other = self._check(other)
        return FiniteScalar(self.desc, self.desc._tables[1][self.v][other.v])

    def inv(self):
        if not self.v:
            raise ZeroDivisionError("inverse of zero")
        return FiniteScalar(self.desc, self.desc._tables[3][self.v])

    def is_zero(self):
        return not self.v

    def is_one(self):
        return self.v == 1

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.desc.from_int(other)
        if not isinstance(other, FiniteScalar):
            return NotImplemented
        return self.desc == other.desc and self.v == other.v

    def __hash__(self):
        return hash((self.desc.p, self.desc.degree, self.v))

    def frobenius(self):
        return self ** self.desc.p

    def trim(self):
        return self

    def reduced(self):
        return self

    def render(self):
        p = self.desc.p
        c0, c1 = self.v % p, self.v // p
        if not c1:
            return str(c0)
        w = "w" if c1 == 1 else f"{c1}w"
        return w if not c0 else f"{w}+{c0}"


class Fraction(Scalar):
    """num/den over GF(p)[x1..xn]; kept unreduced, equality by cross-multiplication."""

    __slots__ = ("num", "den")

    def __init__(self, desc: FieldDescriptor, num: MultiPoly, den: MultiPoly | None = None):
        if den is None:
            den = MultiPoly.constant(desc.p, desc.nvars, 1)
        elif not den.terms:
            raise ZeroDivisionError("zero denominator")
        self.desc = desc
        # a constant denominator is folded into the numerator
        if den.is_constant() and den.terms[0] != 1:
            num = num.scale(pow(den.terms[0], desc.p - 2, desc.p))
            den = MultiPoly.constant(desc.p, desc.nvars, 1)
        self.num = num
        self.den = den

    def _one_den(self):
        return self.den.is_constant()

    def __add__(self, other):
        other = self._check(other)
        a, b = self.num, self.den
        c, d = other.num, other.den
        if not a.terms:
            return other
        if not c.terms:
            return self
        if b is d or b == d:
            return Fraction(self.desc, a + c, b)._trim_cheap()
        if self._one_den():
            return Fraction(self.desc, a * d + c, d)
        if other._one_den():
            return Fraction(self.desc, a + c * b, b)
        return Fraction(self.desc, a * d + c * b, b * d)._trim_cheap()

    def __neg__(self):
        return Fraction(self.desc, -self.num, self.den)

    def __sub__(self, other):
        other = self._check(other)
        return self + (-other)

    def __mul__(self, other):
        other = self._check(other)
        if not self.num.terms:
            return self
        if not other.num.terms:
            return other
        if self._one_den() and other._one_den():
            return Fraction(self.desc, self.num * other.num, self.den)
        # cross-cancel identical factors before multiplying out
        if self.den == other.num:
            return Fraction(self.desc, self.num, other.den)._trim_cheap()
        if self.num == other.den:
            return Fraction(self.desc, other.num, self.den)._trim_cheap()
        return Fraction(self.desc, self.num * other.num, self.den * other.den)._trim_cheap()

    def inv(self):
        if not self.num.terms:
            raise ZeroDivisionError("inverse of zero")
        return Fraction(self.desc, self.den, self.num)

    def is_zero(self):
        return not self.num.terms

    def is_one(self):
        return self.num == self.den

    def is_polynomial(self):
        return self._one_den()

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.desc.from_int(other)
        if not isinstance(other, Fraction):
            return NotImplemented
        if self.desc != other.desc:
            return False
        if self.den == other.den:
            return self.num == other.num
        return self.num * other.den == other.num * self.den

    __hash__ = None

    def frobenius(self):
        return Fraction(self.desc, self.num.frobenius(), self.den.frobenius())

    def _trim_cheap(self):
        """Divide out the common monomial content of numerator and denominator."""
        if self._one_den():
            return self
        cn = self.num.monomial_content()
        if not cn:
            return self
        cd = self.den.monomial_content()
        if not cd:
            return self
        n = self.desc.nvars
        common = pack([min(x, y) for x, y in zip(unpack(cn, n), unpack(cd, n))], n)
        if not common:
            return self
        return Fraction(self.desc, self.num.divide_monomial(common), self.den.divide_monomial(common))

    def trim(self) -> "Fraction":
        """Canonicalise when the reduced denominator is a monomial (Laurent polynomials).

        Divides out common monomial content, then tries exact division of the
        numerator by the non-monomial part of the denominator.  Other fractions
        are returned with monomial content removed only.
        """
        f = self._trim_cheap()
        if f._one_den():
            return f
        den = f.den
        cd = den.monomial_content()
        core = den.divide_monomial(cd)
        if core.is_constant():
            lead = core.terms[0]
            if lead != 1:
                inv = pow(lead, self.desc.p - 2, self.desc.p)
                return Fraction(self.desc, f.num.scale(inv), den.scale(inv))
            return f
        q = f.num.divmod_exact(core)
        if q is None:
            return f
        mono = MultiPoly(self.desc.p, self.desc.nvars, {cd: 1})
        return Fraction(self.desc, q, mono)._trim_cheap()

    def reduced(self) -> "Fraction":
        """Lowest terms with monic denominator for one variable; trim() otherwise."""
        if self.desc.nvars != 1:
            return self.trim()
        num, den = self.num, self.den
        if not num.terms:
            return Fraction(self.desc, num)
        g = num.gcd_univariate(den)
        if not g.is_constant():
            num, den = num.divmod_exact(g), den.divmod_exact(g)
        lead = den.terms[max(den.terms)]
        if lead != 1:
            inv = pow(lead, self.desc.p - 2, self.desc.p)
            num, den = num.scale(inv), den.scale(inv)
        return Fraction(self.desc, num, den)

    def render(self):
        if self._one_den():
            return self.num.render()
        return f"({self.num.render()})/({self.den.render()})"


# --------------------------------------------------------------------------
# parsing


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|(x\d+|w)|(.))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            break
        num, ident, op = m.groups()
        if num is not None:
            tokens.append(("int", int(num)))
        elif ident is not None:
            tokens.append(("var", ident))
        elif op.strip():
            if op not in "+-*/^()":
                raise ParseError(f"unexpected character {op!r} in {text!r}")
            tokens.append(("op", op))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text, desc):
        self.text = text
        self.desc = desc
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def expect(self, op):
        t = self.take()
        if t != ("op", op):
            raise ParseError(f"expected {op!r} in {self.text!r}")

    def parse(self):
        if not self.toks:
            raise ParseError("empty expression")
        v = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"trailing input in {self.text!r}")
        return v

    def expr(self):
        v = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            v = v + rhs if op == "+" else v - rhs
        return v

    def term(self):
        v = self.factor()
        while True:
            t = self.peek()
            if t in (("op", "*"), ("op", "/")):
                self.take()
                rhs = self.factor()
                if t[1] == "*":
                    v = v * rhs
                else:
                    if rhs.is_zero():
                        raise ParseError(f"division by zero in {self.text!r}")
                    v = v / rhs
            elif t[0] in ("var", "int") or t == ("op", "("):
                # implicit multiplication: "2x1", "x1 x2"
                v = v * self.factor()
            else:
                return v

    def factor(self):
        v = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, e = self.take()
            if kind != "int":
                raise ParseError(f"exponent must be a nonnegative integer in {self.text!r}")
            v = v**e
        return v

    def atom(self):
        kind, val = self.take()
        if kind == "int":
            return self.desc.from_int(val)
        if kind == "var":
            if val == "w":
                if not (self.desc.is_finite and self.desc.degree == 2):
                    raise ParseError(f"symbol w not defined over {self.desc}")
                return self.desc.var(0)
            if self.desc.is_finite:
                raise ParseError(f"variable {val} not defined over {self.desc}")
            return self.desc.var(int(val[1:]))
        if (kind, val) == ("op", "("):
            v = self.expr()
            self.expect(")")
            return v
        if (kind, val) == ("op", "-"):
            return -self.factor()
        raise ParseError(f"syntax error in {self.text!r}")


def parse_scalar(text: str, desc: FieldDescriptor) -> Scalar:
    """Parse an expression in x1..xn (or w for GF(4)/GF(9)) with + - * / ^."""
    return _Parser(text, desc).parse()


# --------------------------------------------------------------------------
# subfield coordinates


def frobenius(a: Scalar) -> Scalar:
    return a.frobenius()


def subfield_basis(desc: FieldDescriptor, q: int | None = None) -> list[tuple[int, ...]]:
    """Exponent vectors S in [0, q-1]^n indexing the monomial basis of F over K = F_p(x^q)."""
    q = q or desc.p
    return list(itertools.product(range(q), repeat=desc.nvars))


def compressed_coords(a: Fraction, q: int | None = None):
    """Coordinates of ``a`` over K = F_p(x1^q..xn^q), with K identified with F via x^q -> x.

    Returns (parts, den) with a = sum_S x^S * expand(parts[S]) / expand(den).
    """
    q = q or a.desc.p
    num, den = a.num, a.den
    if den.is_constant():
        return num.split_residues(q), den
    n2 = num * den ** (q - 1)
    return n2.split_residues(q), den


def coords_over_K(a: Scalar, q: int | None = None) -> list[Scalar]:
    """K-coordinates of ``a`` on the monomial basis x^S, S in [0, q-1]^n.

    For finite fields K is the prime field and the basis is (1, w).
    """
    desc = a.desc
    if desc.is_finite:
        p = desc.p
        v = a.v
        return [desc.from_int(v % p), desc.from_int(v // p)][: desc.degree]
    q = q or desc.p
    parts, den = compressed_coords(a, q)
    den_k = den.frobenius(q)
    zero = desc.zero()
    out = []
    for s in subfield_basis(desc, q):
        part = parts.get(s)
        out.append(Fraction(desc, part.frobenius(q), den_k)._trim_cheap() if part else zero)
    return out


def from_coords_over_K(desc: FieldDescriptor, coords: list[Scalar], q: int | None = None) -> Scalar:
    if desc.is_finite:
        total = desc.zero()
        for i, c in enumerate(coords):
            total = total + c * (desc.var(0) ** i if i else desc.one())
        return total
    total = desc.zero()
    for s, c in zip(subfield_basis(desc, q), coords):
        if c.is_zero():
            continue
        mono = Fraction(desc, MultiPoly.monomial(desc.p, desc.nvars, s))
        total = total + c * mono
    return total


def is_in_K(a: Scalar, q: int | None = None) -> bool:
    if a.desc.is_finite:
        return all(c.is_zero() for c in coords_over_K(a)[1:])
    parts, _ = compressed_coords(a, q)
    return all(s == (0,) * a.desc.nvars for s in parts)
