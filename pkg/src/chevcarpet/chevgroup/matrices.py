"""Sp_2l over a field of characteristic 2 in the basis e1..el, e_-l..e_-1."""

from __future__ import annotations

from ..roots import RootDatum, RootSystem, WeylElement
from ..scalars import FieldDescriptor, Scalar


class GroupError(ValueError):
    pass


def idx(i: int, l: int) -> int:
    """Matrix index of the signed basis label i in +-1..+-l."""
    return i - 1 if i > 0 else 2 * l + i


def label(k: int, l: int) -> int:
    return k + 1 if k < l else k - 2 * l


def _undoubled(r: RootDatum) -> list[int]:
    return [c // 2 for c in r.coords]


def root_entries(r: RootDatum) -> list[tuple[int, int]]:
    """Matrix positions carrying the parameter of x_r(t).

    e_i - e_j -> (i, j), (-j, -i); e_i + e_j -> (i, -j), (j, -i); 2e_i -> (i, -i),
    with signed labels (e_-k = -e_k).
    """
    v = _undoubled(r)
    l = len(v)
    nz = [(k + 1, c) for k, c in enumerate(v) if c]
    if len(nz) == 1:
        k, c = nz[0]
        if abs(c) != 2:
            raise GroupError(f"{r} is not a root of type C")
        i = k if c > 0 else -k
        return [(idx(i, l), idx(-i, l))]
    (a, ca), (b, cb) = nz
    i = a if ca > 0 else -a
    j = -b if cb > 0 else b  # r = e_i - e_j
    return [(idx(i, l), idx(j, l)), (idx(-j, l), idx(-i, l))]


def designated_entry(r: RootDatum) -> tuple[int, int]:
    """The entry read off when peeling a positive root factor."""
    return min(root_entries(r))


def coroot_exponents(r: RootDatum) -> list[int]:
    """Exponents of t on the diagonal of h_r(t), by matrix index."""
    v = _undoubled(r)
    l = len(v)
    n2 = sum(c * c for c in v)
    out = [0] * (2 * l)
    for k, c in enumerate(v):
        e = 2 * c // n2
        out[idx(k + 1, l)] = e
        out[idx(-(k + 1), l)] = -e
    return out


def character(r: RootDatum, diag: list[Scalar]) -> Scalar:
    """r(h) for h = diag(t1..tl, ...): prod t_k^{r_k}."""
    out = diag[0].desc.one()
    for k, c in enumerate(_undoubled(r)):
        if c:
            out = out * diag[k] ** c
    return out


class GroupElement:
    """A 2l x 2l matrix over a char-2 field, with optional word provenance."""

    __slots__ = ("rows", "desc", "l", "word")

    def __init__(self, rows, desc: FieldDescriptor, word=None):
        self.rows = rows
        self.desc = desc
        self.l = len(rows) // 2
        self.word = word

    @classmethod
    def identity(cls, desc: FieldDescriptor, l: int) -> "GroupElement":
        if desc.p != 2:
            raise GroupError("the symplectic realization here needs characteristic 2")
        z, o = desc.zero(), desc.one()
        n = 2 * l
        return cls([[o if i == j else z for j in range(n)] for i in range(n)], desc)

    @classmethod
    def diagonal(cls, desc, diag) -> "GroupElement":
        g = cls.identity(desc, len(diag) // 2)
        for k, t in enumerate(diag):
            g.rows[k][k] = t
        return g

    @property
    def n(self):
        return 2 * self.l

    def copy(self, word=None) -> "GroupElement":
        return GroupElement([list(r) for r in self.rows], self.desc, word)

    def __getitem__(self, ij):
        return self.rows[ij[0]][ij[1]]

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        n = self.n
        z = self.desc.zero()
        b = other.rows
        out = []
        for row in self.rows:
            nz = [(k, a) for k, a in enumerate(row) if not a.is_zero()]
            new = []
            for j in range(n):
                acc = z
                for k, a in nz:
                    c = b[k][j]
                    if not c.is_zero():
                        acc = acc + (c if a.is_one() else a * c)
                new.append(acc)
            out.append(new)
        word = None
        if self.word is not None and other.word is not None:
            word = self.word + other.word
        return GroupElement(out, self.desc, word)

    def inverse(self) -> "GroupElement":
        """J g^T J (signs vanish in characteristic 2)."""
        n = self.n
        r = self.rows
        out = [[r[n - 1 - j][n - 1 - i] for j in range(n)] for i in range(n)]
        word = self.word.inverse() if self.word is not None else None
        return GroupElement(out, self.desc, word)

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.n == other.n and all(
            a == b for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb)
        )

    __hash__ = None

    def is_identity(self) -> bool:
        return all(
            (a.is_one() if i == j else a.is_zero())
            for i, row in enumerate(self.rows)
            for j, a in enumerate(row)
        )

    def preserves_form(self) -> bool:
        """g^T J g == J with J the anti-diagonal unit matrix."""
        n = self.n
        r = self.rows
        z = self.desc.zero()
        for i in range(n):
            for j in range(i, n):
                acc = z
                for k in range(n):
                    a, b = r[k][i], r[n - 1 - k][j]
                    if not a.is_zero() and not b.is_zero():
                        acc = acc + a * b
                want = j == n - 1 - i
                if (acc.is_one() if want else acc.is_zero()) is False:
                    return False
        return True

    def is_upper_unitriangular(self) -> bool:
        return all(
            (a.is_one() if i == j else a.is_zero())
            for i, row in enumerate(self.rows)
            for j, a in enumerate(row)
            if j <= i
        )

    # in-place elementary operations -------------------------------------------

    def left_root(self, r: RootDatum, t: Scalar) -> "GroupElement":
        """self <- x_r(t) * self."""
        if t.is_zero():
            return self
        rows = self.rows
        for i, j in root_entries(r):
            src = rows[j]
            dst = rows[i]
            for c, v in enumerate(src):
                if not v.is_zero():
                    dst[c] = dst[c] + t * v
        return self

    def right_root(self, r: RootDatum, t: Scalar) -> "GroupElement":
        """self <- self * x_r(t)."""
        if t.is_zero():
            return self
        for i, j in root_entries(r):
            for row in self.rows:
                v = row[i]
                if not v.is_zero():
                    row[j] = row[j] + v * t
        return self

    def scale_columns(self, diag) -> "GroupElement":
        for row in self.rows:
            for k, t in enumerate(diag):
                if not row[k].is_zero():
                    row[k] = row[k] * t
        return self

    def permute_columns(self, perm) -> "GroupElement":
        """self <- self * P where P[k][perm[k]] = 1."""
        n = self.n
        for i, row in enumerate(self.rows):
            new = [None] * n
            for k in range(n):
                new[perm[k]] = row[k]
            self.rows[i] = new
        return self

    def render(self) -> list[list[str]]:
        return [[a.render() for a in row] for row in self.rows]

    def __repr__(self):
        return "GroupElement(" + "; ".join(" ".join(r) for r in self.render()) + ")"


def gen_matrix(system: RootSystem, r: RootDatum, t: Scalar) -> GroupElement:
    if system.family != "C":
        raise GroupError("matrices are realized for type C only")
    if not system.is_root(r.coords):
        raise GroupError(f"{r} is not a root of {system.tag}")
    return GroupElement.identity(t.desc, system.rank).left_root(r, t)


def torus_diag(r: RootDatum, t: Scalar) -> list[Scalar]:
    if t.is_zero():
        raise GroupError("torus parameter must be nonzero")
    return [t**e if e else t.desc.one() for e in coroot_exponents(r)]


def torus_matrix(system: RootSystem, r: RootDatum, t: Scalar) -> GroupElement:
    return GroupElement.diagonal(t.desc, torus_diag(r, t))


def weyl_rep_matrix(system: RootSystem, r: RootDatum, t: Scalar) -> GroupElement:
    """w_r(t) = x_r(t) x_{-r}(t^-1) x_r(t)."""
    if t.is_zero():
        raise GroupError("w_r(t) needs t != 0")
    g = GroupElement.identity(t.desc, system.rank)
    g.left_root(r, t).left_root(-r, t.inv()).left_root(r, t)
    return g


def torus_weyl_matrix(system: RootSystem, r: RootDatum, t: Scalar):
    """(w_r(t), h_r(t)) with h_r(t) = w_r(t) w_r(1) computed by multiplication."""
    w = weyl_rep_matrix(system, r, t)
    return w, w * weyl_rep_matrix(system, r, t.desc.one())


def weyl_permutation(w: WeylElement) -> list[int]:
    """perm with n_w e_k = e_perm[k] (as signed-label action of w on e1..el)."""
    system = w.system
    l = system.rank
    out = [0] * (2 * l)
    for k in range(1, l + 1):
        # image of e_k: apply w to the short/long root with a single coordinate
        coords = [0] * l
        coords[k - 1] = 4 if system.family == "C" else 2
        img = w(system.root(tuple(coords)))
        (m, c), = [(i + 1, c) for i, c in enumerate(img.coords) if c]
        s = m if c > 0 else -m
        out[idx(k, l)] = idx(s, l)
        out[idx(-k, l)] = idx(-s, l)
    return out


def weyl_from_permutation(system: RootSystem, perm: list[int]) -> WeylElement:
    l = system.rank
    images = []
    for r in system.roots:
        v = [0] * l
        for k, c in enumerate(r.coords):
            if c:
                s = label(perm[idx(k + 1, l)], l)
                v[abs(s) - 1] += c if s > 0 else -c
        images.append(system.index(system.root(tuple(v))))
    return WeylElement.from_perm(system, tuple(images))


def nw_matrix(w: WeylElement, desc: FieldDescriptor) -> GroupElement:
    """n_w = prod w_a(1) along the lexicographically minimal reduced word."""
    system = w.system
    g = GroupElement.identity(desc, system.rank)
    one = desc.one()
    for i in reversed(w.word):
        a = system.simple[i]
        g.left_root(a, one).left_root(-a, one).left_root(a, one)
    return g
