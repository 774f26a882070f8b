"""Root systems B_l, C_l, F4, G2 in doubled integer coordinates, with Weyl group action."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction as Q
from functools import cached_property, lru_cache
from math import comb


class RootError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class RootDatum:
    coords: tuple[int, ...]  # doubled coordinates
    system: str = field(compare=False)
    long: bool = field(compare=False)

    def __neg__(self):
        return RootDatum(tuple(-c for c in self.coords), self.system, self.long)

    @property
    def norm2(self) -> int:
        return sum(c * c for c in self.coords)

    def dot(self, other: "RootDatum") -> int:
        return sum(a * b for a, b in zip(self.coords, other.coords))

    def __str__(self):
        return format_root(self.coords)

    def __repr__(self):
        return f"Root({self})"


def format_root(doubled: tuple[int, ...]) -> str:
    """Render doubled coordinates as e.g. "e1-e2", "2e1", "(e1-e2-e3-e4)/2"."""
    if any(c % 2 for c in doubled):
        inner = format_root(tuple(2 * c for c in doubled))
        return f"({inner})/2"
    out = ""
    for i, c in enumerate(doubled):
        c //= 2
        if not c:
            continue
        sign = "-" if c < 0 else ("+" if out else "")
        mag = "" if abs(c) == 1 else str(abs(c))
        out += f"{sign}{mag}e{i + 1}"
    return out or "0"


_ROOT_TERM = re.compile(r"([+-]?)(\d*)e(\d+)")


def parse_root_coords(text: str, rank: int) -> tuple[int, ...]:
    text = text.replace(" ", "")
    half = False
    m = re.fullmatch(r"\((.*)\)/2", text)
    if m:
        text, half = m.group(1), True
    pos, vec = 0, [0] * rank
    while pos < len(text):
        t = _ROOT_TERM.match(text, pos)
        if not t or (pos and not t.group(1)):
            raise RootError(f"cannot parse root {text!r}")
        i = int(t.group(3))
        if not 1 <= i <= rank:
            raise RootError(f"index e{i} out of range for rank {rank}")
        c = int(t.group(2) or 1) * (-1 if t.group(1) == "-" else 1)
        vec[i - 1] += c
        pos = t.end()
    if pos == 0:
        raise RootError(f"empty root {text!r}")
    return tuple(c if half else 2 * c for c in vec)


class RootSystem:
    """Roots of one of B_l, C_l (l >= 2), F4, G2."""

    def __init__(self, family: str, rank: int):
        family = family.upper()
        if family in ("B", "C"):
            if rank < 2:
                raise RootError("rank must be at least 2")
        elif (family, rank) not in (("F", 4), ("G", 2)):
            raise RootError(f"unsupported root system {family}{rank}")
        self.family = family
        self.rank = rank
        self.tag = f"{family}{rank}"
        vecs = _root_vectors(family, rank)
        norms = {sum(c * c for c in v) for v in vecs}
        long_norm = max(norms)
        self.roots = sorted(
            (RootDatum(v, self.tag, sum(c * c for c in v) == long_norm) for v in vecs),
            key=lambda r: r.coords,
        )
        self._index = {r.coords: i for i, r in enumerate(self.roots)}
        self.simple = [self.root(v) for v in _simple_roots(family, rank)]
        self._heights = {r.coords: self._simple_coeffs(r) for r in self.roots}
        self.positive = sorted(
            (r for r in self.roots if sum(self._heights[r.coords]) > 0),
            key=lambda r: (self.height(r), r.coords),
        )
        if len(self.positive) * 2 != len(self.roots):
            raise RootError("positive system is not half of the roots")

    # -- lookup ----------------------------------------------------------------

    def root(self, coords) -> RootDatum:
        coords = tuple(coords)
        i = self._index.get(coords)
        if i is None:
            raise RootError(f"{format_root(coords)} is not a root of {self.tag}")
        return self.roots[i]

    def is_root(self, coords) -> bool:
        return tuple(coords) in self._index

    def index(self, r: RootDatum) -> int:
        return self._index[r.coords]

    def parse_root(self, text: str) -> RootDatum:
        return self.root(parse_root_coords(text, len(self.roots[0].coords)))

    def add(self, a: RootDatum, b: RootDatum, i: int = 1, j: int = 1):
        """i*a + j*b as a root, or None."""
        v = tuple(i * x + j * y for x, y in zip(a.coords, b.coords))
        k = self._index.get(v)
        return None if k is None else self.roots[k]

    def _simple_coeffs(self, r: RootDatum) -> tuple[int, ...]:
        # solve r = sum c_i simple_i via Gram matrix with exact rationals
        s = self.simple
        n = len(s)
        gram = [[Q(a.dot(b)) for b in s] for a in s]
        rhs = [Q(r.dot(a)) for a in s]
        aug = [row + [v] for row, v in zip(gram, rhs)]
        for c in range(n):
            piv = next(i for i in range(c, n) if aug[i][c] != 0)
            aug[c], aug[piv] = aug[piv], aug[c]
            for i in range(n):
                if i != c and aug[i][c] != 0:
                    f = aug[i][c] / aug[c][c]
                    aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
        coeffs = [aug[i][n] / aug[i][i] for i in range(n)]
        if any(c.denominator != 1 for c in coeffs):
            raise RootError("non-integral simple-root coefficients")
        return tuple(int(c) for c in coeffs)

    def height(self, r: RootDatum) -> int:
        return sum(self._heights[r.coords])

    def is_positive(self, r: RootDatum) -> bool:
        return self.height(r) > 0

    def simple_coefficients(self, r: RootDatum) -> tuple[int, ...]:
        return self._heights[r.coords]

    @cached_property
    def highest_root(self) -> RootDatum:
        return max(self.positive, key=self.height)

    def highest_of_length(self, long: bool) -> RootDatum:
        return max((r for r in self.positive if r.long == long), key=self.height)

    # -- Cartan data -------------------------------------------------------------

    def pairing(self, a: RootDatum, b: RootDatum) -> int:
        """2(a, b)/(b, b)."""
        num = 2 * a.dot(b)
        den = b.norm2
        if num % den:
            raise RootError("non-integral pairing")
        return num // den

    def reflect(self, v: tuple[int, ...], r: RootDatum) -> tuple[int, ...]:
        num = 2 * sum(x * y for x, y in zip(v, r.coords))
        den = r.norm2
        if num % den:
            raise RootError("reflection leaves the lattice")
        k = num // den
        return tuple(x - k * y for x, y in zip(v, r.coords))

    def string_below(self, a: RootDatum, b: RootDatum) -> int:
        """Largest r with b - r*a a root (the a-string through b starts at b - r*a)."""
        r = 0
        while self.add(b, a, 1, -(r + 1)) is not None:
            r += 1
        return r

    def structure_constant_magnitude(self, a: RootDatum, b: RootDatum, i: int, j: int) -> int:
        """|C_{ij,ab}| from the Chevalley commutator formula, 0 when i*a + j*b is not a root."""
        if a.coords == b.coords or a.coords == (-b).coords:
            raise RootError("structure constants need a != +-b")
        if i < 1 or j < 1 or self.add(a, b, i, j) is None:
            return 0
        if j == 1:
            return comb(self.string_below(a, b) + i, i)
        if i == 1:
            return comb(self.string_below(b, a) + j, j)
        ab = self.add(a, b)
        if (i, j) == (3, 2):
            # C_32 = M_{a+b, a, 2} / 3 with M = N_{a+b,a} N_{a+b,2a+b} / 2
            n1 = self.string_below(ab, a) + 1
            n2 = self.string_below(ab, self.add(a, b, 2, 1)) + 1
            return n1 * n2 // 6
        if (i, j) == (2, 3):
            n1 = self.string_below(ab, b) + 1
            n2 = self.string_below(ab, self.add(a, b, 1, 2)) + 1
            return n1 * n2 // 3
        raise RootError(f"no commutator constant for (i, j) = ({i}, {j})")

    def commutator_terms(self, a: RootDatum, b: RootDatum):
        """[(i, j, i*a + j*b, |C_ij|)] over all roots i*a + j*b with i, j > 0."""
        out = []
        for i in range(1, 4):
            for j in range(1, 4):
                c = self.add(a, b, i, j)
                if c is not None:
                    out.append((i, j, c, self.structure_constant_magnitude(a, b, i, j)))
        return out

    def __repr__(self):
        return f"RootSystem({self.tag})"

    # -- Weyl group --------------------------------------------------------------

    @cached_property
    def simple_reflection_perms(self) -> list[tuple[int, ...]]:
        return [
            tuple(self._index[self.reflect(r.coords, s)] for r in self.roots) for s in self.simple
        ]

    def weyl(self, word=()) -> "WeylElement":
        return WeylElement.from_word(self, word)

    def reflection(self, r: RootDatum) -> "WeylElement":
        perm = tuple(self._index[self.reflect(x.coords, r)] for x in self.roots)
        return WeylElement.from_perm(self, perm)

    def weyl_group(self) -> list["WeylElement"]:
        """All Weyl group elements by BFS on simple reflections."""
        start = WeylElement.from_word(self, ())
        seen = {start.perm: start}
        frontier = [start]
        while frontier:
            nxt = []
            for w in frontier:
                for i in range(len(self.simple)):
                    v = w.left_mul(i)
                    if v.perm not in seen:
                        seen[v.perm] = v
                        nxt.append(v)
            frontier = nxt
        return list(seen.values())


def _root_vectors(family: str, l: int) -> list[tuple[int, ...]]:
    vecs = set()

    def unit(i, c):
        v = [0] * l
        v[i] = c
        return v

    for i in range(l) if family != "G" else ():
        for s in (1, -1):
            if family in ("B", "F"):
                vecs.add(tuple(unit(i, 2 * s)))
            if family == "C":
                vecs.add(tuple(unit(i, 4 * s)))
        for j in range(i + 1, l):
            for s, t in itertools.product((1, -1), repeat=2):
                v = [0] * l
                v[i], v[j] = 2 * s, 2 * t
                vecs.add(tuple(v))
    if family == "F":
        for signs in itertools.product((1, -1), repeat=4):
            vecs.add(tuple(signs))
    if family == "G":
        short = [(1, -1, 0), (1, 0, -1), (0, 1, -1)]
        long = [(2, -1, -1), (-1, 2, -1), (-1, -1, 2)]
        for v in short + long:
            vecs.add(tuple(2 * c for c in v))
            vecs.add(tuple(-2 * c for c in v))
    return sorted(vecs)


def _simple_roots(family: str, l: int) -> list[tuple[int, ...]]:
    def e(*pairs, n=l):
        v = [0] * n
        for i, c in pairs:
            v[i] += c
        return tuple(v)

    if family in ("B", "C"):
        out = [e((i, 2), (i + 1, -2)) for i in range(l - 1)]
        out.append(e((l - 1, 2 if family == "B" else 4)))
        return out
    if family == "F":
        return [e((1, 2), (2, -2)), e((2, 2), (3, -2)), e((3, 2)), (1, -1, -1, -1)]
    # G2: short simple root first
    return [(2, -2, 0), (-4, 2, 2)]


def build_system(tag: str) -> RootSystem:
    """"C2", "B3", "F4", "G2"."""
    m = re.fullmatch(r"\s*([BCFG])_?(\d+)\s*", tag.upper())
    if not m:
        raise RootError(f"cannot parse root system tag {tag!r}")
    return _system(m.group(1), int(m.group(2)))


@lru_cache(maxsize=None)
def _system(family: str, rank: int) -> RootSystem:
    return RootSystem(family, rank)


def pairing(a: RootDatum, b: RootDatum) -> int:
    num = 2 * a.dot(b)
    if num % b.norm2:
        raise RootError("non-integral pairing")
    return num // b.norm2


# --------------------------------------------------------------------------
# Weyl group elements


class WeylElement:
    """A Weyl group element: a reduced word in simple reflections plus its action on roots."""

    def __init__(self, system: RootSystem, perm: tuple[int, ...], word: tuple[int, ...] | None = None):
        self.system = system
        self.perm = perm
        self._word = word

    @classmethod
    def from_word(cls, system: RootSystem, word) -> "WeylElement":
        n = len(system.roots)
        perm = tuple(range(n))
        refl = system.simple_reflection_perms
        # w = s_{i1} ... s_{ik}: compose on the right so s_{ik} acts first
        for i in tuple(word):
            perm = tuple(perm[refl[i][k]] for k in range(n))
        w = cls(system, perm)
        if len(word) == w.length():
            w._word = tuple(word)
        return w

    @classmethod
    def from_perm(cls, system, perm):
        return cls(system, tuple(perm))

    def __call__(self, r: RootDatum) -> RootDatum:
        return self.system.roots[self.perm[self.system.index(r)]]

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        return WeylElement(self.system, tuple(self.perm[k] for k in other.perm))

    def inverse(self) -> "WeylElement":
        inv = [0] * len(self.perm)
        for i, j in enumerate(self.perm):
            inv[j] = i
        return WeylElement(self.system, tuple(inv))

    def left_mul(self, i: int) -> "WeylElement":
        refl = self.system.simple_reflection_perms[i]
        return WeylElement(self.system, tuple(refl[k] for k in self.perm))

    def __eq__(self, other):
        if not isinstance(other, WeylElement):
            return NotImplemented
        # equality by action on the simple roots determines the element
        s = self.system
        return all(self(a) == other(a) for a in s.simple)

    def __hash__(self):
        return hash(self.perm)

    def inversion_set(self) -> list[RootDatum]:
        """Positive roots sent to negative roots."""
        s = self.system
        return [r for r in s.positive if not s.is_positive(self(r))]

    def length(self) -> int:
        return len(self.inversion_set())

    @property
    def word(self) -> tuple[int, ...]:
        """Lexicographically minimal reduced word (0-based simple reflection indices)."""
        if self._word is None:
            self._word = self._lexmin_word()
        return self._word

    def _lexmin_word(self):
        s = self.system
        w = self
        out = []
        while True:
            winv = w.inverse()
            for i, a in enumerate(s.simple):
                # left descent: w^{-1}(a_i) < 0
                if not s.is_positive(winv(a)):
                    out.append(i)
                    w = w.left_mul(i)
                    break
            else:
                return tuple(out)

    def is_identity(self):
        return all(i == j for i, j in enumerate(self.perm))

    def render(self) -> str:
        return " ".join(f"s{i + 1}" for i in self.word)

    def __repr__(self):
        return f"WeylElement({self.render() or 'e'})"


def inversion_set(w: WeylElement) -> list[RootDatum]:
    return w.inversion_set()


def parse_weyl(system: RootSystem, text: str) -> WeylElement:
    text = text.strip()
    if text in ("", "e", "1"):
        return system.weyl(())
    word = []
    for tok in text.split():
        m = re.fullmatch(r"s(\d+)", tok)
        if not m or not 1 <= int(m.group(1)) <= len(system.simple):
            raise RootError(f"bad simple reflection {tok!r}")
        word.append(int(m.group(1)) - 1)
    return system.weyl(tuple(word))


# --------------------------------------------------------------------------
# commuting roots


def commutes(system: RootSystem, a: RootDatum, g: RootDatum, char: int | None = None) -> bool:
    """Root subgroups X_a and X_g commute.

    Without ``char`` this is the root-level condition a + g not a root; with a
    characteristic, commutator terms whose constants vanish mod char are ignored.
    """
    if a.coords == g.coords:
        return True
    if a.coords == (-g).coords:
        return False
    terms = system.commutator_terms(a, g)
    if char is None:
        return not terms
    return all(c % char == 0 for _, _, _, c in terms)


def _valid_commuting(system, alpha, delta, long, char):
    if alpha.long != long:
        return None
    if not all(commutes(system, alpha, g, char) for g in delta):
        return None
    for b in delta:
        if alpha.dot(b) != 0:
            return b
    return None


def find_commuting_root(delta, system: RootSystem, prefer_long: bool | None = None):
    """Root a > 0 of the preferred length commuting with every root of ``delta``,
    together with b in ``delta`` not orthogonal to a.

    Long roots for B_l and plain commuting; short roots for C_l where commuting
    is taken in characteristic 2.  Follows the highest-root recursion: try the
    highest admissible root of the current subsystem, and if it is orthogonal to
    all of ``delta`` pass to its orthogonal complement.
    """
    delta = list(delta)
    if not delta:
        raise RootError("delta must be nonempty")
    if any(not system.is_positive(g) for g in delta):
        raise RootError("delta must consist of positive roots")
    if system.family not in ("B", "C"):
        raise RootError("commuting-root search is for B_l and C_l")
    long = (system.family == "B") if prefer_long is None else prefer_long
    char = 2 if system.family == "C" else None
    sub = [r for r in system.positive]
    while True:
        cands = [
            r for r in sub
            if r.long == long and all(commutes(system, r, g, char) for g in delta)
        ]
        if not cands:
            break
        alpha = max(cands, key=lambda r: (system.height(r), r.coords))
        beta = next((b for b in delta if alpha.dot(b) != 0), None)
        if beta is not None:
            return alpha, beta
        sub = [r for r in sub if r.dot(alpha) == 0]
    # the recursion can stall on an orthogonal chain in rank >= 3; enumeration still decides
    found = brute_force_commuting(delta, system, long)
    if found:
        alpha = max(found, key=lambda r: (system.height(r), r.coords))
        return alpha, next(b for b in delta if alpha.dot(b) != 0)
    raise AssertionError(f"no commuting root for {[str(d) for d in delta]} in {system.tag}")


def brute_force_commuting(delta, system: RootSystem, prefer_long: bool | None = None):
    """All valid (a, b) answers, by enumeration."""
    long = (system.family == "B") if prefer_long is None else prefer_long
    char = 2 if system.family == "C" else None
    out = []
    for a in system.positive:
        b = _valid_commuting(system, a, delta, long, char)
        if b is not None:
            out.append(a)
    return out
