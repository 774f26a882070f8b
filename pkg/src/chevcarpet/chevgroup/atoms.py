"""Fractions whose denominators are products of registered polynomial atoms.

Matrix work over F_p(x1..xn) without a multivariate gcd tends to multiply
unrelated copies of the same denominators together.  Here every denominator
is a monomial in a small set of atoms (torus parameters, pivots, parameter
denominators), sums use the exponentwise maximum, and multiplying by an
atom only shifts an exponent, so t * t^-1 cancels exactly.
"""

from __future__ import annotations

from ..scalars import FieldDescriptor, Fraction, MultiPoly, Scalar


def _poly_key(p: MultiPoly):
    return tuple(sorted(p.terms.items()))


class AtomContext:
    def __init__(self, desc: FieldDescriptor, atoms=()):
        self.desc = desc
        self.atoms: list[MultiPoly] = []
        self._index: dict = {}
        self._pow: dict = {}
        self.one = AtomFrac(MultiPoly.constant(desc.p, desc.nvars, 1), {}, self)
        self.zero = AtomFrac(MultiPoly.zero(desc.p, desc.nvars), {}, self)
        for a in atoms:
            self.atom(a)

    def atom(self, poly: MultiPoly) -> int:
        key = _poly_key(poly)
        i = self._index.get(key)
        if i is None:
            i = len(self.atoms)
            self.atoms.append(poly)
            self._index[key] = i
        return i

    def power(self, i: int, e: int) -> MultiPoly:
        p = self._pow.get((i, e))
        if p is None:
            p = self.atoms[i] if e == 1 else self.power(i, e - 1) * self.atoms[i]
            self._pow[(i, e)] = p
        return p

    def _part(self, poly: MultiPoly, sign: int, exps: dict, register: bool):
        """Fold a numerator (sign -1) or denominator (sign +1) into (coeff poly, exps)."""
        if poly.is_constant():
            return poly
        if register or sign > 0:
            i = self.atom(poly)
            exps[i] = exps.get(i, 0) + sign
            return None
        return poly

    def lift(self, x: Scalar, atomic: bool = False) -> "AtomFrac":
        """x as an atom fraction; with ``atomic`` the numerator becomes an atom too."""
        if isinstance(x, AtomFrac):
            return x
        num, den = x.num, x.den
        exps: dict = {}
        one = self.one.num
        n = self._part(num, -1, exps, atomic) if num.terms else None
        if not num.terms:
            return self.zero
        d = self._part(den, +1, exps, True)
        top = one if n is None else n
        if d is not None:  # constant denominator
            top = top.scale(pow(d.constant_value(), d.p - 2, d.p))
        return AtomFrac(top, exps, self)

    def frac(self, num: MultiPoly, exps: dict) -> "AtomFrac":
        return AtomFrac(num, exps, self)


class AtomFrac:
    """num / prod(atoms[i]^e) with integer exponents of either sign."""

    __slots__ = ("num", "exps", "ctx")

    def __init__(self, num: MultiPoly, exps: dict, ctx: AtomContext):
        self.num = num
        self.exps = {i: e for i, e in exps.items() if e} if num.terms else {}
        self.ctx = ctx

    @property
    def desc(self):
        return self.ctx.desc

    def is_zero(self):
        return not self.num.terms

    def is_one(self):
        """Structural test: exact for values built without redundant atoms."""
        return not self.exps and self.num.is_constant() and self.num.constant_value() == 1

    def _lift_to(self, top: dict) -> MultiPoly:
        num = self.num
        for i, e in top.items():
            k = e - self.exps.get(i, 0)
            if k > 0:
                num = num * self.ctx.power(i, k)
        return num

    def __add__(self, other: "AtomFrac") -> "AtomFrac":
        if not self.num.terms:
            return other
        if not other.num.terms:
            return self
        if self.exps == other.exps:
            return AtomFrac(self.num + other.num, self.exps, self.ctx)
        top = dict(self.exps)
        for i, e in other.exps.items():
            top[i] = max(top.get(i, 0), e)
        for i in self.exps:
            top[i] = max(top[i], other.exps.get(i, 0))
        return AtomFrac(self._lift_to(top) + other._lift_to(top), top, self.ctx)

    def __neg__(self):
        return AtomFrac(-self.num, self.exps, self.ctx)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "AtomFrac") -> "AtomFrac":
        if not self.num.terms:
            return self
        if not other.num.terms:
            return other
        exps = dict(self.exps)
        for i, e in other.exps.items():
            exps[i] = exps.get(i, 0) + e
        if other.num.is_constant():
            c = other.num.constant_value()
            num = self.num if c == 1 else self.num.scale(c)
        elif self.num.is_constant():
            c = self.num.constant_value()
            num = other.num if c == 1 else other.num.scale(c)
        else:
            num = self.num * other.num
        return AtomFrac(num, exps, self.ctx)

    def inv(self) -> "AtomFrac":
        if not self.num.terms:
            raise ZeroDivisionError("inverse of zero")
        if self.num.is_constant():
            p = self.num.p
            c = pow(self.num.constant_value(), p - 2, p)
            return AtomFrac(self.ctx.one.num.scale(c), {i: -e for i, e in self.exps.items()}, self.ctx)
        i = self.ctx.atom(self.num)
        exps = {k: -e for k, e in self.exps.items()}
        exps[i] = exps.get(i, 0) + 1
        return AtomFrac(self.ctx.one.num, exps, self.ctx)

    def __pow__(self, k: int) -> "AtomFrac":
        base = self if k >= 0 else self.inv()
        out = self.ctx.one
        for _ in range(abs(k)):
            out = out * base
        return out

    def __eq__(self, other):
        if not isinstance(other, AtomFrac):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def scalar(self) -> Scalar:
        """The value as a reduced Fraction."""
        num, den = self.num, self.ctx.one.num
        for i, e in self.exps.items():
            if e > 0:
                den = den * self.ctx.power(i, e)
            else:
                num = num * self.ctx.power(i, -e)
        return Fraction(self.ctx.desc, num, den).reduced()

    def render(self):
        return self.scalar().render()
