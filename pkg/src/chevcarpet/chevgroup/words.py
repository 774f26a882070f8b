"""Generator words, their matrices, and the exceptional morphisms phi (C -> B), psi (B -> C)."""

from __future__ import annotations

import random
import re
from dataclasses import dataclass

from ..roots import RootDatum, RootSystem, build_system
from ..scalars import FieldDescriptor, Fraction, MultiPoly, Scalar, ScalarError, parse_scalar
from .atoms import AtomContext
from .matrices import GroupElement, GroupError, coroot_exponents


@dataclass(frozen=True)
class RootElt:
    root: RootDatum
    t: Scalar

    kind = "x"


@dataclass(frozen=True)
class Torus:
    root: RootDatum
    t: Scalar

    kind = "h"


@dataclass(frozen=True)
class WeylRep:
    root: RootDatum

    kind = "w"


class Word:
    """A list of RootElt / Torus / WeylRep symbols for type C_l or B_l (realized via psi)."""

    def __init__(self, system: RootSystem, desc: FieldDescriptor, symbols=()):
        if system.family not in ("B", "C"):
            raise GroupError("words exist for types B and C")
        self.system = system
        self.desc = desc
        self.symbols = list(symbols)

    @property
    def tag(self):
        return self.system.tag

    def __add__(self, other: "Word") -> "Word":
        if other.tag != self.tag:
            raise GroupError("cannot concatenate words of different types")
        return Word(self.system, self.desc, self.symbols + other.symbols)

    def __len__(self):
        return len(self.symbols)

    def inverse(self) -> "Word":
        out = []
        for s in reversed(self.symbols):
            if isinstance(s, RootElt):
                out.append(RootElt(s.root, -s.t))
            elif isinstance(s, Torus):
                out.append(Torus(s.root, s.t.inv()))
            else:
                # w_a(1)^-1 = w_a(-1) = w_a(1) in characteristic 2
                out.append(s)
        return Word(self.system, self.desc, out)

    def map_scalars(self, f) -> "Word":
        out = []
        for s in self.symbols:
            if isinstance(s, RootElt):
                out.append(RootElt(s.root, f(s.t)))
            elif isinstance(s, Torus):
                out.append(Torus(s.root, f(s.t)))
            else:
                out.append(s)
        return Word(self.system, self.desc, out)

    def frobenius(self) -> "Word":
        """Square every parameter."""
        return self.map_scalars(lambda t: t * t)

    def expand(self) -> "Word":
        """Replace Torus and WeylRep symbols by root elements.

        w_a(t) = x_a(t) x_-a(-t^-1) x_a(t),  h_a(t) = w_a(t) w_a(-1).
        """
        out = []
        one = self.desc.one()
        for s in self.symbols:
            if isinstance(s, RootElt):
                out.append(s)
                continue
            t = s.t if isinstance(s, Torus) else one
            out.extend(_w_symbols(s.root, t))
            if isinstance(s, Torus):
                out.extend(_w_symbols(s.root, -one))
        return Word(self.system, self.desc, out)

    def render(self) -> str:
        parts = []
        for s in self.symbols:
            if isinstance(s, WeylRep):
                parts.append(f"w[{s.root}]")
            else:
                parts.append(f"{s.kind}[{s.root}]({s.t.render()})")
        return "; ".join(parts)

    def __repr__(self):
        return f"Word({self.tag}: {self.render()})"


def _w_symbols(r, t):
    return [RootElt(r, t), RootElt(-r, -t.inv()), RootElt(r, t)]


_SYMBOL = re.compile(r"^\s*([xhw])\s*\[([^\]]+)\]\s*(?:\((.*)\))?\s*$")


def parse_word(text: str, system: RootSystem, desc: FieldDescriptor) -> Word:
    """Parse "x[2e1](x1+1); h[e1-e2](x1); w[e1]"."""
    symbols = []
    for chunk in text.split(";"):
        if not chunk.strip():
            continue
        m = _SYMBOL.match(chunk)
        if not m:
            raise GroupError(f"cannot parse symbol {chunk.strip()!r}")
        kind, rtext, ptext = m.groups()
        r = system.parse_root(rtext)
        if kind == "w":
            if ptext is not None and ptext.strip() not in ("", "1"):
                raise GroupError("w[...] takes no parameter (it is w_a(1))")
            symbols.append(WeylRep(r))
            continue
        if ptext is None:
            raise GroupError(f"{kind}[{rtext}] needs a parameter")
        t = parse_scalar(ptext, desc)
        if kind == "h":
            if t.is_zero():
                raise GroupError("torus parameter must be nonzero")
            symbols.append(Torus(r, t))
        else:
            symbols.append(RootElt(r, t))
    return Word(system, desc, symbols)


# --------------------------------------------------------------------------
# morphisms


def _c_system(system: RootSystem) -> RootSystem:
    return build_system(f"C{system.rank}") if system.family == "B" else system


def _b_system(system: RootSystem) -> RootSystem:
    return build_system(f"B{system.rank}") if system.family == "C" else system


def psi(word: Word) -> Word:
    """B -> C: long a -> c_a(r), short a -> c_2a(r^2)."""
    if word.system.family != "B":
        raise GroupError("psi takes a type B word")
    c = _c_system(word.system)
    out = []
    for s in word.expand().symbols:
        if s.root.long:
            out.append(RootElt(c.root(s.root.coords), s.t))
        else:
            out.append(RootElt(c.root(tuple(2 * x for x in s.root.coords)), s.t * s.t))
    return Word(c, word.desc, out)


def phi(word: Word) -> Word:
    """C -> B: long a -> b_{a/2}(r), short a -> b_a(r^2)."""
    if word.system.family != "C":
        raise GroupError("phi takes a type C word")
    b = _b_system(word.system)
    out = []
    for s in word.expand().symbols:
        if s.root.long:
            out.append(RootElt(b.root(tuple(x // 2 for x in s.root.coords)), s.t))
        else:
            out.append(RootElt(b.root(s.root.coords), s.t * s.t))
    return Word(b, word.desc, out)


def apply_morphism(direction: str, word: Word) -> Word:
    if direction in ("phi", "φ"):
        return phi(word)
    if direction in ("psi", "ψ"):
        return psi(word)
    raise GroupError(f"unknown morphism {direction!r}")


# --------------------------------------------------------------------------
# evaluation


def word_matrix(word: Word) -> GroupElement:
    """Matrix of a word; type B words are realized through psi.

    Over rational fields the product is accumulated with atom fractions so
    torus parameters and their inverses cancel exactly.
    """
    if word.system.family == "B":
        word = psi(word)
    desc = word.desc
    l = word.system.rank
    if desc.is_finite:
        ctx = None
        g = GroupElement.identity(desc, l)
        lift = lambda t, atomic=False: t
        one = desc.one()
    else:
        ctx = AtomContext(desc)
        g = GroupElement.identity(desc, l)
        g.rows = [[ctx.one if i == j else ctx.zero for j in range(2 * l)] for i in range(2 * l)]
        lift = ctx.lift
        one = ctx.one
    # build right to left with row operations
    for s in reversed(word.symbols):
        if isinstance(s, RootElt):
            g.left_root(s.root, lift(s.t))
        elif isinstance(s, Torus):
            t = lift(s.t, True)
            for k, e in enumerate(coroot_exponents(s.root)):
                if e:
                    f = t**e
                    g.rows[k] = [a if a.is_zero() else f * a for a in g.rows[k]]
        else:
            r = s.root
            g.left_root(r, one).left_root(-r, one).left_root(r, one)
    if ctx is not None:
        g.rows = [[a.scalar() for a in row] for row in g.rows]
    return g


def element(word: Word) -> GroupElement:
    g = word_matrix(word)
    g.word = word
    return g


# --------------------------------------------------------------------------
# random data


def random_scalar(desc: FieldDescriptor, rng: random.Random, max_deg: int = 2,
                  nonzero: bool = False, fractions: bool = False) -> Scalar:
    """Small random polynomial (optionally a ratio of two) over ``desc``."""
    while True:
        if desc.is_finite:
            t = desc.elements()[rng.randrange(desc.order)]
        else:
            terms = {}
            for _ in range(rng.randint(1, 3)):
                e = tuple(rng.randint(0, max_deg) for _ in range(desc.nvars))
                terms[e] = rng.randrange(1, desc.p)
            t = Fraction(desc, MultiPoly.from_dict(desc.p, desc.nvars, terms))
            if fractions and rng.random() < 0.3 and not t.is_zero():
                d = random_scalar(desc, rng, max_deg, nonzero=True)
                t = t / d
        if not nonzero or not t.is_zero():
            return t


def random_word(system: RootSystem, desc: FieldDescriptor, length: int, rng: random.Random,
                torus: bool = True, weyl: bool = True, max_deg: int = 2) -> Word:
    """Random word of exactly ``length`` symbols (mostly root elements)."""
    syms = []
    for _ in range(length):
        r = system.roots[rng.randrange(len(system.roots))]
        u = rng.random()
        if torus and u < 0.15:
            syms.append(Torus(r, random_scalar(desc, rng, 1, nonzero=True)))
        elif weyl and u < 0.25:
            syms.append(WeylRep(r))
        else:
            syms.append(RootElt(r, random_scalar(desc, rng, max_deg, nonzero=True)))
    return Word(system, desc, syms)
