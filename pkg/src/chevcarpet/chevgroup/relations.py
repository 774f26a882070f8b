"""Chevalley commutator relations, symbol images and the phi/psi Frobenius check."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from ..roots import RootDatum, RootSystem, build_system
from ..scalars import FieldDescriptor, RationalField, Scalar
from .matrices import GroupElement, GroupError, torus_weyl_matrix
from .words import RootElt, Word, phi, psi, random_scalar, random_word, word_matrix


@dataclass
class RelationReport:
    tag: str
    checked: int = 0
    failures: list[dict] = field(default_factory=list)
    seed: int = 0

    @property
    def ok(self):
        return not self.failures

    def to_json(self):
        return {"tag": self.tag, "seed": self.seed, "checked": self.checked,
                "ok": self.ok, "failures": self.failures}


def _x(system, desc, *pairs) -> Word:
    return Word(system, desc, [RootElt(r, t) for r, t in pairs])


def commutator(g: GroupElement, h: GroupElement) -> GroupElement:
    """g h g^-1 h^-1."""
    return g * h * g.inverse() * h.inverse()


def expected_commutator(system: RootSystem, a: RootDatum, b: RootDatum, r: Scalar, s: Scalar) -> Word:
    """Right-hand side of the commutator formula, as a word in the same type.

    Terms with an even structure constant vanish in characteristic 2; the
    surviving factors commute with each other, so their order is immaterial.
    """
    desc = r.desc
    syms = []
    for i, j, target, mag in system.commutator_terms(a, b):
        if mag % desc.p:
            syms.append(RootElt(target, r**i * s**j))
    return Word(system, desc, syms)


def verify_relations(tag: str, samples: int = 50, seed: int = 0,
                     desc: FieldDescriptor | None = None, max_deg: int = 2) -> RelationReport:
    """Additivity and the commutator formula over every ordered root pair.

    Type C words act directly on the symplectic space; type B words are
    realized through psi, which is what word_matrix does for them.
    """
    system = build_system(tag)
    if system.family not in ("B", "C"):
        raise GroupError("relations are realized for types B and C")
    desc = desc or RationalField(2, 2)
    rng = random.Random(seed)
    rep = RelationReport(tag, seed=seed)
    ident = GroupElement.identity(desc, system.rank)
    for a in system.roots:
        for b in system.roots:
            if a.coords == (-b).coords:
                continue
            for _ in range(samples):
                r = random_scalar(desc, rng, max_deg, nonzero=True)
                s = random_scalar(desc, rng, max_deg, nonzero=True)
                rep.checked += 1
                if a.coords == b.coords:
                    lhs = word_matrix(_x(system, desc, (a, r), (a, s)))
                    rhs = word_matrix(_x(system, desc, (a, r + s)))
                    name = "additivity"
                else:
                    lhs = word_matrix(_x(system, desc, (a, r), (b, s), (a, -r), (b, -s)))
                    rhs = word_matrix(expected_commutator(system, a, b, r, s)) if system.commutator_terms(a, b) else ident
                    name = "commutator"
                if lhs != rhs:
                    rep.failures.append({"relation": name, "alpha": str(a), "beta": str(b),
                                         "r": r.render(), "s": s.render()})
    return rep


def symbol_image(r: Scalar, s: Scalar, root: RootDatum, system: RootSystem) -> GroupElement:
    """{r, s} = h(r) h(s) h(rs)^-1 with h(t) = w(t) w(-1) computed as matrices."""
    if r.is_zero() or s.is_zero():
        raise GroupError("symbols need invertible arguments")
    h = lambda t: torus_weyl_matrix(system, root, t)[1]
    return h(r) * h(s) * h(r * s).inverse()


def symbol_check(tag: str = "C2", samples: int = 50, seed: int = 0,
                 desc: FieldDescriptor | None = None) -> RelationReport:
    system = build_system(tag)
    desc = desc or RationalField(2, 1)
    rng = random.Random(seed)
    rep = RelationReport(tag, seed=seed)
    for _ in range(samples):
        a = system.roots[rng.randrange(len(system.roots))]
        r = random_scalar(desc, rng, 2, nonzero=True, fractions=True)
        s = random_scalar(desc, rng, 2, nonzero=True, fractions=True)
        rep.checked += 1
        if not symbol_image(r, s, a, system).is_identity():
            rep.failures.append({"root": str(a), "r": r.render(), "s": s.render()})
    return rep


def frobenius_roundtrip_check(rank: int, word_len: int = 20, trials: int = 100, seed: int = 0,
                              desc: FieldDescriptor | None = None) -> RelationReport:
    """matrix(psi(phi(W))) == matrix(Frob W) on C words and phi(psi(W)) likewise on B words."""
    if rank < 2:
        raise GroupError("rank must be at least 2")
    desc = desc or RationalField(2, 2)
    rng = random.Random(seed)
    rep = RelationReport(f"C{rank}/B{rank}", seed=seed)
    for fam in ("C", "B"):
        system = build_system(f"{fam}{rank}")
        for _ in range(trials):
            w = random_word(system, desc, rng.randint(0, word_len), rng, max_deg=1)
            rep.checked += 1
            twice = psi(phi(w)) if fam == "C" else phi(psi(w))
            if word_matrix(twice) != word_matrix(w.frobenius()):
                rep.failures.append({"type": fam, "word": w.render()})
    return rep
