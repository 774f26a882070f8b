"""Commutator certificates x_a(q) = [x_a(s), h_b(t)] inside a carpet subgroup."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from ..carpets import Carpet
from ..scalars import Scalar
from .finite import DEFAULT_CAP, MatrixSpace, bfs, commutator_subgroup
from .matrices import GroupElement, gen_matrix, torus_matrix
from .membership import sparse_element


def group_commutator(a: GroupElement, b: GroupElement) -> GroupElement:
    """a^-1 b^-1 a b."""
    return a.inverse() * b.inverse() * a * b


@dataclass
class Certificate:
    root: str
    target: str
    s: str
    beta: str
    t: str
    m: int
    verified: bool

    def to_json(self):
        return dict(self.__dict__)


@dataclass
class PerfectnessReport:
    instance: str
    applicable: bool
    certificates: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    note: str = ""
    group_order: int | None = None
    derived_order: int | None = None
    seed: int = 0

    @property
    def ok(self):
        if not self.applicable:
            # the honest outcome: no certificate exists and the group is not perfect
            return self.derived_order is not None and self.derived_order < self.group_order
        return not self.failures

    def to_json(self):
        d = {"instance": self.instance, "applicable": self.applicable, "ok": self.ok,
             "certificates": len(self.certificates), "failures": self.failures, "seed": self.seed,
             "note": self.note}
        if self.group_order is not None:
            d["group_order"] = self.group_order
            d["derived_order"] = self.derived_order
        return d


def _subfield_parameter(carpet: Carpet) -> Scalar | None:
    """An element t of K = F^q with t^2 != 1, or None when K has none."""
    desc = carpet.desc
    q = carpet.long.q
    if not desc.is_finite:
        return desc.var(1) ** q
    one = desc.one()
    good = [x for x in desc.elements() if not x.is_zero() and x**q == x and not (x * x - one).is_zero()]
    return good[0] if good else None


def perfectness_certificates(carpet: Carpet, samples: int = 20, seed: int = 0) -> PerfectnessReport:
    """For every root a and sampled q in A_a, solve s (t^m - 1) = q with b = -a, m = 2."""
    system = carpet.system
    desc = carpet.desc
    rep = PerfectnessReport(f"E({system.tag}) over {desc}", True, seed=seed)
    t = _subfield_parameter(carpet)
    if t is None:
        rep.applicable = False
        rep.note = "the subfield K has no t with t^m != 1"
        if desc.is_finite:
            rep.group_order, rep.derived_order = _finite_orders(carpet)
        return rep
    rng = random.Random(seed)
    for a in system.roots:
        b = -a
        m = -system.pairing(a, b)
        mod = carpet.module(a)
        h = torus_matrix(system, b, t)
        denom = t**m - desc.one()
        for k in range(samples):
            q = desc.zero() if k == 0 else sparse_element(mod, rng)
            s = q * denom.inv()
            inside = s in mod and t in carpet.module(b) and t.inv() in carpet.module(b)
            lhs = group_commutator(gen_matrix(system, a, s), h)
            ok = inside and lhs == gen_matrix(system, a, q)
            cert = Certificate(str(a), q.render(), s.render(), str(b), t.render(), m, ok)
            rep.certificates.append(cert)
            if not ok:
                rep.failures.append(cert.to_json())
    return rep


def _finite_orders(carpet: Carpet, cap: int = DEFAULT_CAP):
    """|E| and |[E, E]| for a carpet over a finite field, by enumeration."""
    system = carpet.system
    desc = carpet.desc
    space = MatrixSpace(desc, 2 * system.rank)
    gens = [space.from_element(gen_matrix(system, r, c)) for r in system.roots
            for c in carpet.module(r).basis]
    group = bfs(space, gens, cap)
    derived = commutator_subgroup(space, group, cap=cap, inverse=space.sp_inverse)
    return group.order, derived.order
