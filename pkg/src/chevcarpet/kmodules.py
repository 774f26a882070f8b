"""Finite K-submodules of F, where K = F_p(x1^q..xn^q) (or the prime field inside GF(p^k)).

Elements are turned into coordinate vectors over K on the monomial basis
x^S, S in [0, q-1]^n.  K is identified with F_p(y1..yn) via y = x^q, so
vector entries are polynomials in y after clearing denominators, and all
elimination is fraction-free.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from itertools import combinations_with_replacement
from math import factorial

from .scalars import (
    FieldDescriptor,
    Fraction,
    MultiPoly,
    Scalar,
    compressed_coords,
    parse_field,
    parse_scalar,
    subfield_basis,
    unpack,
    pack,
)
from ._gf2k import Evaluator, rank as gf_rank

# beyond this many term products the coordinate product is not formed exactly
EXACT_PRODUCT_LIMIT = 4_000_000
EVALUATION_POINTS = 2


class ModuleError(ValueError):
    pass


class Membership:
    """Membership verdict; K-coefficients are computed on first access."""

    def __init__(self, member: bool, coefficients=None, residual_coord=None, method: str = "exact"):
        self.member = member
        self._coeffs = coefficients
        self.residual_coord = residual_coord
        # "exact" (linear algebra over K) or "evaluation" (rank at random points)
        self.method = method

    @property
    def coefficients(self) -> list[Scalar] | None:
        if callable(self._coeffs):
            self._coeffs = self._coeffs()
        return self._coeffs

    def __bool__(self):
        return self.member

    def __repr__(self):
        return f"Membership({self.member}, residual_coord={self.residual_coord})"


@dataclass
class SubsetResult:
    holds: bool
    witness: Scalar | None = None

    def __bool__(self):
        return self.holds


def _poly_one(desc):
    return MultiPoly.constant(desc.p, max(desc.nvars, 1), 1)


def _content_key(polys):
    """Common monomial content (packed) of a list of nonzero polys."""
    n = polys[0].nvars
    mins = None
    for f in polys:
        c = unpack(f.monomial_content(), n)
        mins = c if mins is None else tuple(min(a, b) for a, b in zip(mins, c))
        if not any(mins):
            return 0
    return pack(mins, n)


class KModule:
    """K-span of a finite list of elements of F, with a K-linearly independent basis."""

    def __init__(self, desc: FieldDescriptor, q: int | None = None):
        if desc.is_finite:
            q = desc.p
        self.desc = desc
        self.q = q or desc.p
        if self.q not in (desc.p, desc.p**2):
            raise ModuleError("K must be the field of p-th or p^2-th powers")
        self.basis: list[Scalar] = []
        self._cols = {s: i for i, s in enumerate(self._basis_labels())}
        # reduced echelon rows keyed by pivot column: (vector, combination of basis vectors)
        self._rows: dict[int, tuple[dict[int, MultiPoly], dict[int, MultiPoly]]] = {}
        self._vecs: list[tuple[dict[int, MultiPoly], MultiPoly]] = []

    def _basis_labels(self):
        if self.desc.is_finite:
            return [(i,) for i in range(self.desc.degree)]
        return subfield_basis(self.desc, self.q)

    # -- coordinates -------------------------------------------------------------

    def vector(self, a: Scalar) -> tuple[dict[int, MultiPoly], MultiPoly]:
        """(v, d) with coords_over_K(a) = v / d, entries compressed polynomials in y = x^q."""
        if a.desc != self.desc:
            raise ModuleError(f"descriptor mismatch: {a.desc} vs {self.desc}")
        if self.desc.is_finite:
            p = self.desc.p
            vals = [a.v % p, a.v // p][: self.desc.degree]
            vec = {i: MultiPoly.constant(p, 1, c) for i, c in enumerate(vals) if c}
            return vec, MultiPoly.constant(p, 1, 1)
        parts, den = compressed_coords(a, self.q)
        vec = {self._cols[s]: f for s, f in parts.items()}
        return vec, den

    def _scalar_from_K(self, f: MultiPoly, g: MultiPoly) -> Scalar:
        """The K-element f/g given in compressed coordinates."""
        if self.desc.is_finite:
            p = self.desc.p
            return self.desc.from_int(f.constant_value() * pow(g.constant_value(), p - 2, p))
        return Fraction(self.desc, f.expand(self.q), g.expand(self.q))._trim_cheap()

    def _combine(self, e, t, c, r):
        """e * t - c * r for sparse vectors."""
        out = {}
        for k, v in t.items():
            nv = e * v
            w = r.get(k)
            if w is not None:
                nv = nv - c * w
            if nv:
                out[k] = nv
        for k, w in r.items():
            if k not in t:
                out[k] = -(c * w)
        return out

    @staticmethod
    def _strip(t, lam, mu):
        polys = list(t.values()) + list(mu.values())
        if lam is not None:
            polys.append(lam)
        if not polys:
            return t, lam, mu
        ck = _content_key(polys)
        if not ck:
            return t, lam, mu
        t = {k: v.divide_monomial(ck) for k, v in t.items()}
        mu = {j: v.divide_monomial(ck) for j, v in mu.items()}
        if lam is not None:
            lam = lam.divide_monomial(ck)
        return t, lam, mu

    def _reduce(self, vec: dict[int, MultiPoly]):
        """Reduce ``vec`` against the (fully reduced) echelon rows.

        Returns (residual, lam, mu) with lam * vec - sum mu_j v_j = residual.
        Rows vanish on each other's pivots, so one pass over the pivots
        present in ``vec`` suffices.
        """
        t = dict(vec)
        lam = _poly_one(self.desc)
        mu: dict[int, MultiPoly] = {}
        for col in [k for k in vec if k in self._rows]:
            c = t.get(col)
            if c is None:
                continue
            rvec, rcomb = self._rows[col]
            e = rvec[col]
            t = self._combine(e, t, c, rvec)
            lam = e * lam
            mu = self._combine(e, mu, -c, rcomb)
            t, lam, mu = self._strip(t, lam, mu)
        return t, lam, mu

    def _insert(self, a: Scalar) -> bool:
        vec, den = self.vector(a)
        t, lam, mu = self._reduce(vec)
        if not t:
            return False
        j = len(self.basis)
        self.basis.append(a)
        self._vecs.append((vec, den))
        # t = lam * v_j - sum mu_i v_i
        comb = {i: -v for i, v in mu.items()}
        comb[j] = lam
        piv = min(t)
        e = t[piv]
        for col, (rvec, rcomb) in list(self._rows.items()):
            c = rvec.get(piv)
            if c is None:
                continue
            nvec = self._combine(e, rvec, c, t)
            ncomb = self._combine(e, rcomb, c, comb)
            nvec, _, ncomb = self._strip(nvec, None, ncomb)
            self._rows[col] = (nvec, ncomb)
        self._rows[piv] = (t, comb)
        return True

    # -- queries -------------------------------------------------------------------

    @property
    def full_dim(self) -> int:
        """Degree [F : K]."""
        return len(self._cols)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return self.dim

    def is_zero(self):
        return not self.basis

    def member(self, a: Scalar) -> Membership:
        """K-coefficients of ``a`` on the basis, or the first residual coordinate."""
        if a.is_zero():
            return Membership(True, lambda: [self.desc.zero() for _ in self.basis])
        if self._too_big(a):
            return self._member_by_evaluation(a)
        vec, den = self.vector(a)
        t, lam, mu = self._reduce(vec)
        if t:
            col = min(t)
            return Membership(False, residual_coord=self._basis_labels()[col])
        # lam * vec = sum_j mu_j * (v_j) where v_j = den_j * coords(b_j),
        # vec = den * coords(a)  =>  a = sum_j mu_j den_j / (lam den) b_j
        def coeffs():
            out = []
            for j in range(len(self.basis)):
                m = mu.get(j)
                if m is None:
                    out.append(self.desc.zero())
                else:
                    out.append(self._scalar_from_K(m * self._vecs[j][1], lam * den))
            return out

        return Membership(True, coeffs)

    def _too_big(self, a: Scalar) -> bool:
        d = self.desc
        if d.is_finite or d.p != 2 or not self.basis:
            return False
        return len(a.num.terms) * len(a.den.terms) ** (self.q - 1) > EXACT_PRODUCT_LIMIT

    def _evaluated_basis(self, seed: int):
        cache = self.__dict__.setdefault("_eval_cache", {})
        if seed not in cache:
            ev = Evaluator(self.desc.nvars, self.q, seed)
            rows = [ev.fraction(b.num, b.den) for b in self.basis]
            ok = all(r is not None for r in rows) and gf_rank(rows) == len(rows)
            cache[seed] = (ev, rows if ok else None)
        return cache[seed]

    def _member_by_evaluation(self, a: Scalar) -> Membership:
        """Rank test at random points of GF(2^32); a rank increase is a proof of non-membership."""
        agree = 0
        seed = 0
        while agree < EVALUATION_POINTS:
            if seed > 20 * EVALUATION_POINTS:
                raise ModuleError("no usable evaluation point")
            ev, rows = self._evaluated_basis(seed)
            seed += 1
            if rows is None:
                continue
            va = ev.fraction(a.num, a.den)
            if va is None:
                continue
            if gf_rank(rows + [va]) > len(rows):
                return Membership(False, method="evaluation")
            agree += 1
        return Membership(True, None, method="evaluation")

    def __contains__(self, a: Scalar) -> bool:
        return self.member(a).member

    def contains_one(self) -> bool:
        return self.desc.one() in self

    def element(self, coeffs) -> Scalar:
        total = self.desc.zero()
        for c, b in zip(coeffs, self.basis):
            if not c.is_zero():
                total = total + c * b
        return total

    def random_K(self, rng: random.Random, max_deg: int = 2, nonzero: bool = False) -> Scalar:
        """A random element of K with a small polynomial numerator in the q-th powers."""
        desc = self.desc
        while True:
            if desc.is_finite:
                c = desc.from_int(rng.randrange(desc.p))
            else:
                terms = {}
                for _ in range(rng.randint(1, 3)):
                    e = tuple(rng.randint(0, max_deg) * self.q for _ in range(desc.nvars))
                    terms[e] = rng.randrange(1, desc.p)
                c = Fraction(desc, MultiPoly.from_dict(desc.p, desc.nvars, terms))
            if not nonzero or not c.is_zero():
                return c

    def random_element(self, rng: random.Random, max_deg: int = 1) -> Scalar:
        coeffs = [self.random_K(rng, max_deg) for _ in self.basis]
        return self.element(coeffs)

    def render(self) -> list[str]:
        return [b.render() for b in self.basis]

    def __repr__(self):
        return f"KModule({self.desc}, q={self.q}, basis=[{', '.join(self.render())}])"

    # -- serialization ---------------------------------------------------------------

    def to_json(self) -> dict:
        d = self.desc
        if d.is_finite:
            field = {"p": d.p, "order": d.order}
        else:
            field = {"p": d.p, "vars": d.nvars, "power": self.q}
        return {"field": field, "basis": self.render()}


def reduce_basis(gens, desc: FieldDescriptor | None = None, q: int | None = None) -> KModule:
    """Independent K-basis of the span of ``gens``; keeps generators in their given order."""
    gens = list(gens)
    if desc is None:
        if not gens:
            raise ModuleError("descriptor required for an empty generator list")
        desc = gens[0].desc
    m = KModule(desc, q)
    for g in gens:
        if g.desc != desc:
            raise ModuleError("generators over different fields")
        if not g.is_zero():
            m._insert(g)
    return m


def span(desc: FieldDescriptor, texts, q: int | None = None) -> KModule:
    """Module spanned by parsed expression strings."""
    return reduce_basis([parse_scalar(t, desc) for t in texts], desc, q)


def module_from_json(obj: dict) -> KModule:
    field = obj["field"]
    if "order" in field:
        desc = parse_field(f"GF({field['order']})")
        q = None
    else:
        desc = FieldDescriptor(field["p"], "rational", 1, field["vars"])
        q = field.get("power", field["p"])
    return span(desc, obj["basis"], q)


def load_module(path) -> KModule:
    with open(path) as fh:
        return module_from_json(json.load(fh))


def _same(a: KModule, b: KModule):
    if a.desc != b.desc or a.q != b.q:
        raise ModuleError("modules over different fields or subfields")


def member(m: KModule, a: Scalar) -> Membership:
    return m.member(a)


def module_sum(a: KModule, b: KModule) -> KModule:
    _same(a, b)
    return reduce_basis(list(a.basis) + list(b.basis), a.desc, a.q)


def module_subset(a: KModule, b: KModule) -> SubsetResult:
    _same(a, b)
    for g in a.basis:
        if not b.member(g):
            return SubsetResult(False, g)
    return SubsetResult(True)


def modules_equal(a: KModule, b: KModule) -> bool:
    return bool(module_subset(a, b)) and bool(module_subset(b, a))


def multinomial(counts, p: int | None = None) -> int:
    n = sum(counts)
    r = factorial(n)
    for c in counts:
        r //= factorial(c)
    return r % p if p else r


def _power_terms(m: KModule, i: int):
    """(multinomial coefficient, product) for multisets of size i over the basis."""
    out = []
    for combo in combinations_with_replacement(range(m.dim), i):
        counts = [combo.count(k) for k in sorted(set(combo))]
        out.append((multinomial(counts), combo))
    return out


def power_product_generators(a: KModule, i: int, b: KModule, j: int, c: int) -> list[Scalar]:
    """Generators c * m(mu) m(nu) e^mu f^nu, mu a size-i multiset of a's basis, nu size j of b's.

    Order: a-multisets outer, b-multisets inner, both in basis order.  Terms
    whose combined coefficient is 0 mod p are dropped.
    """
    _same(a, b)
    if i < 1 or j < 1 or i + j > 5:
        raise ModuleError("powers must satisfy i, j >= 1 and i + j <= 5")
    p = a.desc.p
    c %= p
    desc = a.desc
    if c == 0 or a.is_zero() or b.is_zero():
        return []
    left = []
    for ma, combo in _power_terms(a, i):
        if ma % p:
            prod = desc.one()
            for k in combo:
                prod = prod * a.basis[k]
            left.append((ma, prod))
    right = []
    for mb, combo in _power_terms(b, j):
        if mb % p:
            prod = desc.one()
            for k in combo:
                prod = prod * b.basis[k]
            right.append((mb, prod))
    gens = []
    for ma, s in left:
        for mb, t in right:
            coef = (ma * mb * c) % p
            g = s * t
            gens.append(g if coef == 1 else g * desc.from_int(coef))
    return gens


def power_product_span(a: KModule, i: int, b: KModule, j: int, c: int) -> KModule:
    """K-span of power_product_generators(a, i, b, j, c).

    A K-module T contains every c * s^i * t^j (s in a, t in b) exactly when it
    contains this span.  Writing s = sum k_r e_r and t = sum l_s f_s, the
    product is a polynomial in the K-coefficients whose coefficient of
    k^mu l^nu is the generator for (mu, nu).  If all generators lie in T the
    product does; conversely, read modulo T the product is a polynomial map
    K^(a+b) -> F/T vanishing identically, and over the infinite field K this
    forces every coefficient into T.  ``failing_pair`` turns a failure into
    concrete elements.
    """
    return reduce_basis(power_product_generators(a, i, b, j, c), a.desc, a.q)


def failing_pair(a: KModule, i: int, b: KModule, j: int, c: int, target: KModule,
                 seed: int = 0, tries: int = 500):
    """Elements (s, t) of a, b with c * s^i * t^j outside ``target``, or None.

    Basis elements are tried first, then K-combinations with random
    coefficients; since the obstruction is a nonzero polynomial in the
    coefficients, a random evaluation misses it with small probability.
    """
    desc = a.desc
    cc = desc.from_int(c)
    for s in a.basis:
        for t in b.basis:
            if not target.member(cc * s**i * t**j):
                return s, t
    rng = random.Random(seed)
    for _ in range(tries):
        s = a.element([a.random_K(rng, 3) for _ in a.basis])
        t = b.element([b.random_K(rng, 3) for _ in b.basis])
        if not target.member(cc * s**i * t**j):
            return s, t
    return None


def generators_subset(gens, target: KModule) -> SubsetResult:
    """True iff every generator lies in ``target``; first failure as witness."""
    for g in gens:
        if not target.member(g):
            return SubsetResult(False, g)
    return SubsetResult(True)


def scaled(m: KModule, c: int) -> KModule:
    """The module c * m for an integer c."""
    if c % m.desc.p == 0:
        return KModule(m.desc, m.q)
    return m


def one_module(desc: FieldDescriptor, q: int | None = None) -> KModule:
    return reduce_basis([desc.one()], desc, q)


def is_multiplicatively_closed(m: KModule) -> SubsetResult:
    """Closure of a module containing 1 under products of basis elements."""
    if not m.contains_one():
        raise ModuleError("multiplicative-closure test needs 1 in the module")
    if m.dim == m.full_dim:
        return SubsetResult(True)
    for x in range(m.dim):
        for y in range(x, m.dim):
            prod = m.basis[x] * m.basis[y]
            if not m.member(prod):
                return SubsetResult(False, prod)
    return SubsetResult(True)


def inverse_closure_check(m: KModule, samples: int = 100, seed: int = 0) -> SubsetResult:
    """Sampled check that inverses of nonzero elements stay in the module."""
    if m.is_zero():
        raise ModuleError("inverse closure needs a nonzero module")
    rng = random.Random(seed)
    checked = 0
    while checked < samples:
        a = m.random_element(rng)
        if a.is_zero():
            continue
        checked += 1
        inv = a.inv()
        if not m.member(inv):
            return SubsetResult(False, inv)
    return SubsetResult(True)


def is_field(m: KModule, samples: int = 20, seed: int = 0) -> SubsetResult:
    """Computable field test: contains 1, closed under products and (sampled) inverses."""
    if not m.contains_one():
        return SubsetResult(False, m.desc.one())
    r = is_multiplicatively_closed(m)
    if not r:
        return r
    return inverse_closure_check(m, samples, seed)


# --------------------------------------------------------------------------
# sampled cross-check of power_product_span


@dataclass
class OracleCase:
    i: int
    j: int
    c: int
    a: list[str]
    b: list[str]
    target: list[str]
    verdict: bool
    samples: int
    witness: tuple[str, str] | None = None
    contradiction: bool = False

    def to_json(self):
        return dict(self.__dict__)


def _random_monomial_module(desc: FieldDescriptor, rng: random.Random, dim: int, max_deg: int) -> KModule:
    gens = []
    for _ in range(dim):
        e = [rng.randint(0, max_deg) for _ in range(desc.nvars)]
        gens.append(Fraction(desc, MultiPoly.monomial(desc.p, desc.nvars, e)))
    return reduce_basis(gens, desc)


def oracle_comparison(pairs: int = 50, samples: int = 200, seed: int = 0,
                      desc: FieldDescriptor | None = None) -> list[OracleCase]:
    """Span verdict vs brute-force sampling of c * s^i * t^j on random module pairs.

    A sampled product outside the target contradicts a PASS; a FAIL carries
    a replayable witness (s, t) from failing_pair.
    """
    desc = desc or parse_field("F2(x1,x2)")
    rng = random.Random(seed)
    out = []
    for _ in range(pairs):
        a = _random_monomial_module(desc, rng, rng.randint(1, 3), 2)
        b = _random_monomial_module(desc, rng, rng.randint(1, 3), 2)
        i, j = rng.choice([(1, 1), (1, 2), (2, 1)])
        c = rng.randrange(1, desc.p)
        span = power_product_span(a, i, b, j, c)
        if rng.randrange(2) and span.dim:
            # drop one generator so that roughly half the cases fail
            keep = span.basis[:-1]
            extra = _random_monomial_module(desc, rng, 1, 3).basis
            target = reduce_basis(keep + extra, desc)
        else:
            target = span
        verdict = all(target.member(g) for g in span.basis)
        case = OracleCase(i, j, c, a.render(), b.render(), target.render(), verdict, samples)
        cc = desc.from_int(c)
        for _ in range(samples):
            s = a.random_element(rng)
            t = b.random_element(rng)
            if not target.member(cc * s**i * t**j):
                if verdict:
                    case.contradiction = True
                    case.witness = (s.render(), t.render())
                break
        if not verdict:
            w = failing_pair(a, i, b, j, c, target, seed=rng.randrange(1 << 30))
            if w is None:
                case.contradiction = True
            else:
                case.witness = (w[0].render(), w[1].render())
        out.append(case)
    return out
