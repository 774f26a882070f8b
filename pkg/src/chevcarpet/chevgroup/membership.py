"""Carpet membership of matrices via the reduced Bruhat form, and the closure experiment."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from ..carpets import Carpet
from ..kmodules import KModule
from ..roots import RootDatum, build_system
from ..scalars import Fraction, MultiPoly, Scalar, unpack
from .bruhat import BruhatForm, bruhat_decompose
from .matrices import GroupElement, GroupError
from .words import RootElt, Torus, WeylRep, Word, element

MEMBER = "Member"
NOT_MEMBER = "NotMember"
TORUS_UNDETERMINED = "TorusUndetermined"


@dataclass
class MembershipVerdict:
    kind: str
    form: BruhatForm
    certificate: str | None = None
    witness: dict | None = None
    coordinates_checked: int = 0

    @property
    def is_member(self):
        return self.kind == MEMBER

    def to_json(self):
        d = {"verdict": self.kind, "coordinates_checked": self.coordinates_checked,
             "bruhat": self.form.to_json()}
        if self.certificate is not None:
            d["certificate"] = self.certificate
        if self.witness is not None:
            d["witness"] = self.witness
        return d


def square_root(c: Scalar) -> Scalar | None:
    """sqrt(c) in characteristic 2 when c is a square of F, else None."""
    desc = c.desc
    if desc.p != 2:
        raise GroupError("square roots are taken in characteristic 2")
    if desc.is_finite:
        # x -> x^2 is bijective on a finite field of characteristic 2
        return next(x for x in desc.elements() if x * x == c)
    if c.is_zero():
        return c
    num = c.num * c.den  # c = num*den / den^2
    half = {}
    for key in num.terms:
        e = unpack(key, desc.nvars)
        if any(x % 2 for x in e):
            return None
        half[tuple(x // 2 for x in e)] = 1
    root = MultiPoly.from_dict(desc.p, desc.nvars, half)
    return Fraction(desc, root, c.den)


class CarpetOnGroup:
    """The carpet read on Sp_2l coordinates.

    For type C this is the carpet itself.  For type B the group is the
    psi-image: a C-short root carries Lambda_long, and a C-long root 2a
    carries the squares of Lambda_short.
    """

    def __init__(self, carpet: Carpet):
        self.carpet = carpet
        sys = carpet.system
        if sys.family not in ("B", "C"):
            raise GroupError("membership is realized for types B and C")
        self.source = sys
        self.system = build_system(f"C{sys.rank}")

    def check(self, r: RootDatum, c: Scalar):
        """(ok, module label, tested value) for a coordinate at C-root r."""
        carpet = self.carpet
        if self.source.family == "C":
            m = carpet.module(r)
            return c in m, ("long" if r.long else "short"), c
        if not r.long:
            return c in carpet.long, "long", c
        s = square_root(c)
        if s is None:
            return False, "short (squares)", c
        return s in carpet.short, "short (squares)", s

    def generator_ok(self, sym) -> bool:
        """Whether a word symbol is a generator of the carpet subgroup."""
        carpet = self.carpet
        if isinstance(sym, RootElt):
            return sym.t in carpet.module(sym.root)
        m = carpet.module(sym.root)
        if isinstance(sym, WeylRep):
            return m.contains_one()
        t = sym.t
        # h_a(t) = w_a(t) w_a(-1) needs t, t^-1 and 1 in the module
        return m.contains_one() and t in m and t.inv() in m


def _torus_factorization(carpet: CarpetOnGroup, form: BruhatForm):
    """h = prod h_{a_k}(c_k) over simple C-roots, c_k = t_1 ... t_k."""
    system = carpet.system
    out = []
    c = None
    for k, t in enumerate(form.torus):
        c = t if c is None else c * t
        out.append((system.simple[k], c))
    return out


def carpet_membership(g: GroupElement, carpet: Carpet) -> MembershipVerdict:
    """Member / NotMember / TorusUndetermined for g against E(Phi, carpet)."""
    on = CarpetOnGroup(carpet)
    if g.l != on.system.rank:
        raise GroupError("matrix size does not match the carpet rank")
    form = bruhat_decompose(g, on.system)
    checked = 0
    for part, items in (("u", form.u), ("v", form.v)):
        for r, c in items:
            checked += 1
            ok, label, value = on.check(r, c)
            if not ok:
                return MembershipVerdict(NOT_MEMBER, form, witness={
                    "factor": part, "root": str(r), "value": c.render(),
                    "module": label, "tested": value.render()}, coordinates_checked=checked)
    if form.torus_is_identity():
        return MembershipVerdict(MEMBER, form, "torus is the identity", coordinates_checked=checked)
    facts = _torus_factorization(on, form) if on.source.family == "C" else None
    if facts and all(
        on.carpet.module(a).contains_one() and c in on.carpet.module(a) and c.inv() in on.carpet.module(a)
        for a, c in facts
    ):
        cert = " * ".join(f"h[{a}]({c.render()})" for a, c in facts)
        return MembershipVerdict(MEMBER, form, f"torus = {cert}", coordinates_checked=checked)
    word = g.word
    if word is not None and word.tag == carpet.system.tag and all(on.generator_ok(s) for s in word.symbols):
        return MembershipVerdict(MEMBER, form, "provenance: word in carpet generators",
                                 coordinates_checked=checked)
    return MembershipVerdict(TORUS_UNDETERMINED, form, coordinates_checked=checked)


def coordinates_inside(carpet: Carpet, form: BruhatForm) -> bool:
    on = CarpetOnGroup(carpet)
    return all(on.check(r, c)[0] for r, c in form.u + form.v)


# --------------------------------------------------------------------------
# closure experiment


def sparse_element(m: KModule, rng: random.Random) -> Scalar:
    """A basis element times 1 or a q-th power of one variable."""
    b = m.basis[rng.randrange(len(m.basis))]
    desc = m.desc
    if desc.is_finite or rng.randrange(2) == 0:
        return b
    e = [0] * desc.nvars
    e[rng.randrange(desc.nvars)] = m.q
    return b * Fraction(desc, MultiPoly.monomial(desc.p, desc.nvars, e))


def random_carpet_word(carpet: Carpet, length: int, rng: random.Random) -> Word:
    system = carpet.system
    syms = []
    for _ in range(length):
        r = system.roots[rng.randrange(len(system.roots))]
        syms.append(RootElt(r, sparse_element(carpet.module(r), rng)))
    return Word(system, carpet.desc, syms)


@dataclass
class ClosureReport:
    trials: int
    seed: int
    clean: dict = field(default_factory=dict)
    injected: dict = field(default_factory=dict)
    problems: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.problems and self.injected.get(NOT_MEMBER, 0) >= 0.95 * self.trials

    def to_json(self):
        return {"trials": self.trials, "seed": self.seed, "clean": self.clean,
                "injected": self.injected, "problems": self.problems, "ok": self.ok}


def closure_experiment(carpet: Carpet, injected_value: Scalar, trials: int = 100, max_len: int = 25,
                       seed: int = 0, root: RootDatum | None = None) -> ClosureReport:
    """Random carpet words stay inside; one injected outside parameter is detected."""
    if carpet.system.family != "C":
        raise GroupError("the closure experiment runs on type C carpets")
    rng = random.Random(seed)
    system = carpet.system
    longs = [r for r in system.roots if r.long]
    rep = ClosureReport(trials, seed)
    for k in range(trials):
        n = rng.randint(1, max_len)
        w = random_carpet_word(carpet, n, rng)
        v = carpet_membership(element(w), carpet)
        rep.clean[v.kind] = rep.clean.get(v.kind, 0) + 1
        if v.kind == NOT_MEMBER or not coordinates_inside(carpet, v.form):
            rep.problems.append({"trial": k, "kind": "clean word left the carpet", "word": w.render()})
        a = root or longs[rng.randrange(len(longs))]
        pos = rng.randint(0, len(w.symbols))
        syms = list(w.symbols)
        syms.insert(pos, RootElt(a, injected_value))
        bad = Word(system, carpet.desc, syms)
        v = carpet_membership(element(bad), carpet)
        rep.injected[v.kind] = rep.injected.get(v.kind, 0) + 1
        if v.kind == MEMBER and not coordinates_inside(carpet, v.form):
            rep.problems.append({"trial": k, "kind": "member without inside coordinates", "word": bad.render()})
    return rep
