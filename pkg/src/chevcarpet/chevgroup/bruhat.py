"""Reduced Bruhat decomposition g = u h n_w v in Sp_2l (characteristic 2)."""

from __future__ import annotations

from dataclasses import dataclass

from ..roots import RootDatum, RootSystem, WeylElement, build_system, parse_weyl
from ..scalars import FieldDescriptor, Fraction, MultiPoly, Scalar, parse_scalar
from .atoms import AtomContext
from .matrices import (
    GroupElement,
    GroupError,
    designated_entry,
    idx,
    nw_matrix,
    weyl_from_permutation,
    weyl_permutation,
)


@dataclass
class BruhatForm:
    u: list[tuple[RootDatum, Scalar]]
    torus: list[Scalar]
    w: WeylElement
    v: list[tuple[RootDatum, Scalar]]

    @property
    def system(self) -> RootSystem:
        return self.w.system

    def diag(self) -> list[Scalar]:
        l = len(self.torus)
        d = [None] * (2 * l)
        for k, t in enumerate(self.torus):
            d[idx(k + 1, l)] = t
            d[idx(-(k + 1), l)] = t.inv()
        return d

    def torus_is_identity(self) -> bool:
        return all(t.is_one() for t in self.torus)

    def to_json(self) -> dict:
        return {
            "u": [[str(r), c.render()] for r, c in self.u],
            "torus": [t.render() for t in self.torus],
            "w": self.w.render(),
            "v": [[str(r), c.render()] for r, c in self.v],
        }

    def same_as(self, other: "BruhatForm") -> bool:
        """Exact equality of all components (values, not representations)."""
        if self.w != other.w or len(self.u) != len(other.u) or len(self.v) != len(other.v):
            return False
        pairs = list(zip(self.u, other.u)) + list(zip(self.v, other.v))
        if any(a[0] != b[0] or a[1] != b[1] for a, b in pairs):
            return False
        return all(a == b for a, b in zip(self.torus, other.torus))


def form_from_json(obj: dict, system: RootSystem, desc: FieldDescriptor) -> BruhatForm:
    def coords(items):
        return [(system.parse_root(r), parse_scalar(c, desc)) for r, c in items]

    return BruhatForm(
        coords(obj["u"]),
        [parse_scalar(t, desc) for t in obj["torus"]],
        parse_weyl(system, obj["w"]),
        coords(obj["v"]),
    )


# --------------------------------------------------------------------------
# exact elimination back ends


class _PolyRing:
    """Entries are polynomials (a common denominator cleared); divisions are exact."""

    def __init__(self, desc):
        self.desc = desc
        self.one = MultiPoly.constant(desc.p, desc.nvars, 1)
        self.zero = MultiPoly.zero(desc.p, desc.nvars)

    @staticmethod
    def nz(x):
        return bool(x.terms)

    def div(self, a, b):
        q = a.divmod_exact(b)
        if q is None:
            raise GroupError("inexact division in fraction-free elimination")
        return q

    def frac(self, a, b) -> Scalar:
        return Fraction(self.desc, a, b)._trim_cheap()

    def clear(self, g: GroupElement):
        if self.desc.nvars == 1:
            return self._clear_univariate(g)
        dens = []
        for row in g.rows:
            for a in row:
                if a.num.terms and not a.den.is_constant():
                    if not any(a.den == d for d in dens):
                        dens.append(a.den)
        d = self.one
        for x in dens:
            d = d * x
        # cofactor products so each entry is scaled without division
        cof = []
        for i in range(len(dens)):
            c = self.one
            for j, x in enumerate(dens):
                if j != i:
                    c = c * x
            cof.append(c)
        rows = []
        for row in g.rows:
            new = []
            for a in row:
                if not a.num.terms:
                    new.append(MultiPoly.zero(self.desc.p, self.desc.nvars))
                elif a.den.is_constant():
                    new.append(a.num.scale(a.den.constant_value()) * d if dens else a.num)
                else:
                    k = next(i for i, x in enumerate(dens) if a.den == x)
                    new.append(a.num * cof[k])
            rows.append(new)
        return rows, d


    def _clear_univariate(self, g):
        """Lowest-terms entries over their lcm denominator."""
        ents = [[a.reduced() for a in row] for row in g.rows]
        d = self.one
        for row in ents:
            for a in row:
                if a.num.terms and not a.den.is_constant():
                    gg = d.gcd_univariate(a.den)
                    d = d * self.div(a.den, gg)
        rows = [
            [a.num * self.div(d, a.den) if a.num.terms else self.zero for a in row] for row in ents
        ]
        return rows, d


class _FieldRing:
    def __init__(self, desc):
        self.desc = desc
        self.one = desc.one()
        self.zero = desc.zero()

    @staticmethod
    def nz(x):
        return not x.is_zero()

    def div(self, a, b):
        return a * b.inv()

    def frac(self, a, b):
        return a * b.inv()

    def clear(self, g):
        return [list(r) for r in g.rows], self.one


def _ring(desc):
    return _FieldRing(desc) if desc.is_finite else _PolyRing(desc)


def _reduced(x: Scalar) -> Scalar:
    return x.reduced()


def _work_identity(n, zero, one):
    g = GroupElement.__new__(GroupElement)
    g.rows = [[one if i == j else zero for j in range(n)] for i in range(n)]
    g.desc = None
    g.l = n // 2
    g.word = None
    return g


def _eliminate(g: GroupElement):
    """Upward row and rightward column elimination to a monomial matrix.

    Returns (U0, Vp, pivot_rows, pivot_values, to_scalar) with
    g = U0 * m * Vp and m[pivot_rows[t]][t] = pivot_values[t].  Bareiss
    minors keep the working entries polynomial; the multipliers are ratios
    of minors sharing a scale.  For rational fields the returned entries
    are atom fractions over (d, pivot_1, ..., pivot_n).
    """
    desc = g.desc
    ring = _ring(desc)
    M, d = ring.clear(g)
    n = g.n
    used = [False] * n
    prev_i = None
    nz = ring.nz
    finite = desc.is_finite
    steps = []
    prev = ring.one
    for t in range(n):
        r = next((k for k in range(n - 1, -1, -1) if not used[k] and nz(M[k][t])), None)
        if r is None:
            raise GroupError("matrix is singular")
        piv = M[r][t]
        prow = M[r]
        lcol = [(k, M[k][t]) for k in range(n) if k != r and not used[k] and nz(M[k][t])]
        vrow = [(c, prow[c]) for c in range(t + 1, n) if nz(prow[c])]
        steps.append((r, piv, lcol, vrow))
        used[r] = True
        for k in range(n):
            if used[k]:
                continue
            row = M[k]
            a = row[t]
            an = nz(a)
            for c in range(t + 1, n):
                x = row[c]
                xn = nz(x)
                y = prow[c]
                if an and nz(y):
                    x = piv * x - a * y if xn else -(a * y)
                elif xn:
                    x = piv * x
                else:
                    continue
                row[c] = ring.div(x, prev) if nz(x) else ring.zero
            row[t] = ring.zero
        prev = piv
    if finite:
        zero, one = desc.zero(), desc.one()
        U0 = _work_identity(n, zero, one)
        Vp = _work_identity(n, zero, one)
        vals = []
        prevv = one
        for t, (r, piv, lcol, vrow) in enumerate(steps):
            pinv = piv.inv()
            for k, a in lcol:
                U0.rows[k][r] = a * pinv
            for c, y in vrow:
                Vp.rows[t][c] = y * pinv
            vals.append(piv * prevv.inv())
            prevv = piv
        return U0, Vp, [s[0] for s in steps], vals, lambda x: x
    # atoms: 0 -> d, t + 1 -> pivot of column t
    ctx = AtomContext(desc)
    ctx.atoms = [d] + [s[1] for s in steps]
    U0 = _work_identity(n, ctx.zero, ctx.one)
    Vp = _work_identity(n, ctx.zero, ctx.one)
    vals = []
    for t, (r, piv, lcol, vrow) in enumerate(steps):
        for k, a in lcol:
            U0.rows[k][r] = ctx.frac(a, {t + 1: 1})
        for c, y in vrow:
            Vp.rows[t][c] = ctx.frac(y, {t + 1: 1})
        ex = {0: 1, t + 1: -1}
        if t:
            ex[t] = 1
        vals.append(ctx.frac(ring.one, ex))
    return U0, Vp, [s[0] for s in steps], vals, lambda x: x.scalar()


def _peel(res: GroupElement, order):
    out = []
    for r in order:
        i, j = designated_entry(r)
        c = res.rows[i][j]
        if c.is_zero():
            continue
        out.append((r, c))
        res.left_root(r, -c)
    return out


def unipotent_coordinates(u: GroupElement, order) -> list[tuple[RootDatum, Scalar]]:
    """Peel root factors in ``order`` off an upper unitriangular matrix (zeros omitted)."""
    res = u.copy()
    out = [(r, _reduced(c)) for r, c in _peel(res, order)]
    if not res.is_identity():
        raise GroupError("residual after peeling is not the identity (factor order is not compatible)")
    return out


def bruhat_decompose(g: GroupElement, system: RootSystem | None = None) -> BruhatForm:
    """Unique g = u h n_w v with u in U, h diagonal, v over the inversion set of w."""
    if system is None:
        system = build_system(f"C{g.l}")
    U0, Vp, rows, vals, conv = _eliminate(g)
    n = g.n
    l = g.l
    perm = list(rows)
    try:
        w = weyl_from_permutation(system, perm)
    except Exception as e:
        raise GroupError(f"pivot pattern is not a signed permutation: {e}") from None
    if weyl_permutation(w) != perm:
        raise GroupError("pivot permutation does not match its Weyl element")
    diag = [None] * n
    for t, r in enumerate(rows):
        diag[r] = vals[t]
    for k in range(1, l + 1):
        if not conv(diag[idx(k, l)] * diag[idx(-k, l)]).is_one():
            raise GroupError("torus part is not symplectic (input violates the form)")
    inv = set(r.coords for r in w.inversion_set())
    non_inv = [r for r in system.positive if r.coords not in inv]
    inv_roots = [r for r in system.positive if r.coords in inv]
    # v' = v1 v2 with v1 over the non-inversions, v2 over the inversion set
    v1 = _peel(Vp, non_inv)
    v2 = _peel(Vp, inv_roots)
    if not Vp.is_identity():
        raise GroupError("right unipotent factor does not split over the inversion set")
    # (h n_w) x_b(c) (h n_w)^-1 = x_{w b}(w(b)(h) c)
    for b, c in v1:
        wb = w(b)
        U0.right_root(wb, _character(wb, diag) * c)
    u = _peel(U0, system.positive)
    if not U0.is_identity():
        raise GroupError("left unipotent factor is not in U")
    fin = lambda items: [(r, _reduced(conv(c))) for r, c in items]
    torus = [_reduced(conv(diag[idx(k, l)])) for k in range(1, l + 1)]
    return BruhatForm(fin(u), torus, w, fin(v2))


def _character(r: RootDatum, diag):
    out = None
    for k, c in enumerate(r.coords):
        c //= 2
        if c:
            f = diag[k] ** c
            out = f if out is None else out * f
    return out


def recompose(form: BruhatForm, desc: FieldDescriptor) -> GroupElement:
    system = form.system
    l = system.rank
    g = GroupElement.identity(desc, l)
    for r, c in form.u:
        g.right_root(r, c)
    g.scale_columns(form.diag())
    g = g * nw_matrix(form.w, desc)
    for r, c in form.v:
        g.right_root(r, c)
    return g


def check_form(form: BruhatForm) -> bool:
    """v-roots inside the inversion set of w."""
    inv = set(r.coords for r in form.w.inversion_set())
    return all(r.coords in inv for r, _ in form.v)
