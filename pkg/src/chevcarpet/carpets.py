"""Admissible pairs, carpets and the carpet commutator conditions."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product

from .kmodules import (
    KModule,
    ModuleError,
    SubsetResult,
    generators_subset,
    is_field,
    is_multiplicatively_closed,
    inverse_closure_check,
    module_from_json,
    module_subset,
    module_sum,
    power_product_generators,
    reduce_basis,
    scaled,
    one_module,
)
from .roots import RootDatum, RootSystem, build_system
from .scalars import Fraction, MultiPoly, RationalField, Scalar


@dataclass
class Check:
    condition: str
    status: str  # "pass" | "fail" | "skip"
    witness: str | None = None

    @property
    def ok(self):
        return self.status != "fail"

    def to_json(self):
        d = {"condition": self.condition, "status": self.status}
        if self.witness is not None:
            d["witness"] = self.witness
        return d


def _check(condition: str, res: SubsetResult | bool, witness=None) -> Check:
    if isinstance(res, SubsetResult):
        witness = res.witness if witness is None else witness
        res = res.holds
    w = None
    if not res and witness is not None:
        w = witness.render() if hasattr(witness, "render") else str(witness)
    return Check(condition, "pass" if res else "fail", w)


def root_p(family: str) -> int:
    """Largest structure constant: 3 for G2, 2 otherwise."""
    return 3 if family.upper() == "G" else 2


@dataclass
class AdmissiblePair:
    long: KModule
    short: KModule
    family: str
    rank: int

    @property
    def tag(self):
        return f"{self.family}{self.rank}"

    @property
    def p(self):
        return root_p(self.family)

    def to_json(self):
        return {
            "type": self.family,
            "rank": self.rank,
            "p": self.p,
            "lambda_long": self.long.to_json(),
            "lambda_short": self.short.to_json(),
        }


def pair_from_json(obj: dict) -> AdmissiblePair:
    try:
        fam = obj["type"].upper()
        rank = int(obj["rank"])
        long = module_from_json(obj["lambda_long"])
        short = module_from_json(obj["lambda_short"])
    except KeyError as e:
        raise ModuleError(f"pair JSON is missing {e}") from None
    if "p" in obj and int(obj["p"]) != root_p(fam):
        raise ModuleError(f"p = {obj['p']} does not match type {fam}")
    build_system(f"{fam}{rank}")
    return AdmissiblePair(long, short, fam, rank)


def load_pair(path) -> AdmissiblePair:
    with open(path) as fh:
        return pair_from_json(json.load(fh))


def _ring_check(name: str, m: KModule) -> Check:
    if not m.contains_one():
        return Check(name, "fail", "1")
    return _check(name, is_multiplicatively_closed(m))


def check_admissible(long: KModule, short: KModule, tag: str) -> list[Check]:
    """AP1..AP4 for (long, short) of the given type, plus the long*short product rule.

    The last check (Ll*Ls in Ls) is what the long+short=short commutator
    demands; AP1..AP4 alone do not imply it for type B.
    """
    system = build_system(tag)
    fam, rank = system.family, system.rank
    p = root_p(fam)
    out = [
        _check("AP1: p*Ls in Ll", module_subset(scaled(short, p), long)),
        _check("AP1: Ll in Ls", module_subset(long, short)),
        _check(
            "AP2: t^p*Ll in Ll (t in Ls)",
            generators_subset(power_product_generators(short, p, long, 1, 1), long),
        ),
    ]
    small = fam in ("B", "C") and rank == 2
    if fam != "B" and not small:
        out.append(_ring_check("AP3: Ls is a subring", short))
    else:
        out.append(Check("AP3: Ls is a subring", "skip"))
    if fam != "C" and not small:
        out.append(_ring_check("AP4: Ll is a subring", long))
    else:
        out.append(Check("AP4: Ll is a subring", "skip"))
    out.append(
        _check("Ll*Ls in Ls", generators_subset(power_product_generators(long, 1, short, 1, 1), short))
    )
    return out


def is_admissible(pair: AdmissiblePair) -> bool:
    return all(c.ok for c in check_admissible(pair.long, pair.short, pair.tag))


@dataclass
class Carpet:
    system: RootSystem
    long: KModule
    short: KModule

    def module(self, r: RootDatum) -> KModule:
        return self.long if r.long else self.short

    @property
    def desc(self):
        return self.long.desc


def carpet_from_pair(pair: AdmissiblePair) -> Carpet:
    return Carpet(build_system(pair.tag), pair.long, pair.short)


@dataclass
class CarpetVerdict:
    ok: bool
    checked: int
    failure: Check | None = None
    entries: list[Check] = field(default_factory=list)


def condition_name(a: RootDatum, b: RootDatum, i: int, j: int, c: int, target: RootDatum) -> str:
    """e.g. "P^2Q in Q" with P the short and Q the long module."""
    ps = (i if not a.long else 0) + (j if not b.long else 0)
    qs = (i if a.long else 0) + (j if b.long else 0)

    def pw(sym, k):
        return "" if k == 0 else sym if k == 1 else f"{sym}^{k}"

    lhs = (str(c) if c != 1 else "") + pw("P", ps) + pw("Q", qs)
    return f"{lhs} in {'Q' if target.long else 'P'}"


def check_carpet(carpet: Carpet, stop_at_first: bool = True) -> CarpetVerdict:
    """The commutator conditions C_ij A_a^i A_b^j in A_{ia+jb} over ordered root pairs.

    Results depend only on the length classes and the constant mod p, so each
    distinct condition is decided once and reused.
    """
    system = carpet.system
    p = carpet.desc.p
    cache: dict[tuple, SubsetResult] = {}
    entries = []
    checked = 0
    for a in system.roots:
        for b in system.roots:
            if a.coords == b.coords or a.coords == (-b).coords:
                continue
            for i, j, target, mag in system.commutator_terms(a, b):
                c = mag % p
                checked += 1
                key = (a.long, b.long, i, j, c, target.long)
                res = cache.get(key)
                if res is None:
                    gens = power_product_generators(carpet.module(a), i, carpet.module(b), j, c)
                    res = generators_subset(gens, carpet.module(target))
                    cache[key] = res
                name = f"[{a},{b}] ({i},{j}): " + condition_name(a, b, i, j, mag, target)
                chk = _check(name, res)
                entries.append(chk)
                if not chk.ok and stop_at_first:
                    return CarpetVerdict(False, checked, chk, entries)
    failure = next((e for e in entries if not e.ok), None)
    return CarpetVerdict(failure is None, checked, failure, entries)


def check_inclusion_chain(P: KModule, Q: KModule, p: int) -> list[Check]:
    """K in P^p in Q in P."""
    return [
        _check("K in P^p", P.contains_one(), P.desc.one()),
        _check(
            "P^p in Q",
            generators_subset(power_product_generators(P, p, one_module(P.desc, P.q), 1, 1), Q),
        ),
        _check("Q in P", module_subset(Q, P)),
    ]


# --------------------------------------------------------------------------
# counterexamples over F = F2(x1..xn)


def _mono(desc, exps) -> Scalar:
    return Fraction(desc, MultiPoly.monomial(desc.p, desc.nvars, exps))


def _xs(desc, *idx) -> Scalar:
    e = [0] * desc.nvars
    for i in idx:
        e[i - 1] += 1
    return _mono(desc, e)


def _graded_monomials(n: int, q: int):
    """Exponent vectors in [0, q-1]^n by degree, x1 first within a degree."""
    return sorted(product(range(q), repeat=n), key=lambda s: (sum(s), tuple(-x for x in s)))


def full_module(desc, q: int) -> KModule:
    return reduce_basis([_mono(desc, s) for s in _graded_monomials(desc.nvars, q)], desc, q)


def nonfield_pairs(n: int):
    """The three admissible pairs with non-field modules, as (label, tag, P, Q)."""
    F = RationalField(2, n)
    K = one_module(F)
    span3 = reduce_basis([F.one(), _xs(F, 1), _xs(F, 2)], F)
    Pb2 = reduce_basis(
        [F.one()] + [_xs(F, *m) for m in
                     [(1,), (2,), (3,), (4,), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (1, 2, 3), (1, 2, 4)]],
        F,
    )
    return [
        ("B3 pair", "B3", span3, K),
        ("C3 pair", "C3", full_module(F, 2), span3),
        ("B2=C2 pair", "B2", Pb2, span3),
    ]


def nonadmissible_pairs(n: int):
    """Two pairs that satisfy the inclusion chain yet fail a carpet condition."""
    F = RationalField(2, n)
    P1 = reduce_basis([F.one()] + [_xs(F, i) for i in range(1, n + 1)], F)
    Q1 = reduce_basis([F.one(), _xs(F, 1)], F)
    P2 = full_module(F, 4)
    sq = reduce_basis(power_product_generators(P2, 2, one_module(F, 4), 1, 1), F, 4)
    Q2 = module_sum(sq, reduce_basis([_xs(F, 1), _xs(F, 2)], F, 4))
    return [("field-Q pair", "B2", P1, Q1), ("field-P pair", "C2", P2, Q2)]


def counterexample_suite(n: int = 4) -> list[Check]:
    """Verdicts for the counterexample pairs; every entry passes when they behave as claimed."""
    if n < 4:
        raise ModuleError("the B2 = C2 counterexample needs n >= 4")
    out: list[Check] = []

    def expect(name, cond, witness=None):
        out.append(_check(name, cond, witness))

    for label, tag, P, Q in nonfield_pairs(n):
        tags = [tag, "C2"] if tag == "B2" else [tag]
        for t in tags:
            adm = check_admissible(Q, P, t)
            bad = next((c for c in adm if not c.ok), None)
            expect(f"{label}: admissible of type {t}", bad is None, bad and bad.condition)
            v = check_carpet(Carpet(build_system(t), Q, P))
            expect(f"{label}: carpet conditions on {t}", v.ok, v.failure and v.failure.condition)
        chain = check_inclusion_chain(P, Q, 2)
        bad = next((c for c in chain if not c.ok), None)
        expect(f"{label}: K in P^2 in Q in P", bad is None, bad and bad.condition)
        expect(f"{label}: dim P = {P.dim}, dim Q = {Q.dim}", True)
        for name, m in (("P", P), ("Q", Q)):
            closed = is_multiplicatively_closed(m)
            if label == "B3 pair" and name == "Q" or label == "C3 pair" and name == "P":
                expect(f"{label}: {name} is a field", is_field(m, samples=10))
            else:
                # dimension not a power of 2 rules out a field; the product witness shows it directly
                out.append(Check(f"{label}: {name} is not a field",
                                 "fail" if closed else "pass",
                                 None if closed else closed.witness.render()))
    first, second = nonadmissible_pairs(n)
    label, tag, P, Q = first
    expect(f"{label}: K in P^2 in Q in P", all(c.ok for c in check_inclusion_chain(P, Q, 2)))
    expect(f"{label}: Q is a field", is_field(Q, samples=10))
    v = check_carpet(Carpet(build_system(tag), Q, P))
    hit = v.failure is not None and v.failure.condition.endswith("PQ in P")
    out.append(Check(f"{label}: PQ in P fails on {tag}", "pass" if hit else "fail",
                     v.failure.witness if v.failure else None))
    label, tag, P, Q = second
    chain = check_inclusion_chain(P, Q, 2)
    expect(f"{label}: K in P^2 in Q in P (K of 4th powers)", all(c.ok for c in chain))
    expect(f"{label}: P is a field", is_multiplicatively_closed(P))
    v = check_carpet(Carpet(build_system(tag), Q, P))
    hit = v.failure is not None and "P^2Q in Q" in v.failure.condition
    out.append(Check(f"{label}: P^2Q in Q fails on {tag}", "pass" if hit else "fail",
                     v.failure.witness if v.failure else None))
    return out


def expected_witnesses(report: list[Check]) -> dict[str, str | None]:
    """Witnesses of the two failing-inclusion entries, keyed by pair label."""
    return {c.condition.split(":")[0]: c.witness for c in report if "fails on" in c.condition}
