"""Finite matrix groups by breadth-first closure, the SL2 cases, and BN-pair axiom checks."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from ..carpets import Carpet, full_module
from ..kmodules import one_module
from ..roots import WeylElement, build_system
from ..scalars import GF, FieldDescriptor, RationalField
from .bruhat import bruhat_decompose
from .matrices import (
    GroupElement,
    GroupError,
    gen_matrix,
    torus_matrix,
    weyl_from_permutation,
    weyl_rep_matrix,
)
from .membership import MEMBER, carpet_membership, sparse_element
from .words import RootElt, Torus, WeylRep, Word, element

DEFAULT_CAP = 2_000_000


# --------------------------------------------------------------------------
# batched matrices over GF(q), entries coded as FiniteScalar.v


class MatrixSpace:
    """n x n matrices over a finite field, stored as uint8 arrays of shape (N, n, n)."""

    def __init__(self, desc: FieldDescriptor, n: int):
        if not desc.is_finite:
            raise GroupError("batched matrices need a finite field")
        add, mul, neg, inv = desc._tables
        self.desc = desc
        self.n = n
        self.q = desc.order
        self.add = np.array(add, dtype=np.uint8)
        self.mul = np.array(mul, dtype=np.uint8)
        self.neg = np.array(neg, dtype=np.uint8)
        self._weights = np.array([self.q ** k for k in range(n * n)], dtype=np.int64)
        if self.q ** (n * n) >= 2**63:
            raise GroupError("matrices too large for integer keys")

    def identity(self):
        return np.eye(self.n, dtype=np.uint8)[None]

    def from_element(self, g: GroupElement):
        return np.array([[a.v for a in row] for row in g.rows], dtype=np.uint8)

    def to_element(self, a) -> GroupElement:
        from ..scalars import FiniteScalar

        return GroupElement([[FiniteScalar(self.desc, int(x)) for x in row] for row in a], self.desc)

    def matmul(self, a, b):
        """Batched product; either side may be a single matrix."""
        a = a if a.ndim == 3 else a[None]
        b = b if b.ndim == 3 else b[None]
        shape = (max(len(a), len(b)), self.n, self.n)
        out = np.zeros(shape, dtype=np.uint8)
        for k in range(self.n):
            term = self.mul[a[:, :, k][:, :, None], b[:, k, :][:, None, :]]
            out = self.add[out, term]
        return out

    def keys(self, a):
        return (a.reshape(len(a), -1).astype(np.int64) * self._weights).sum(axis=1)

    def decode(self, keys):
        keys = np.asarray(keys, dtype=np.int64)
        digits = (keys[:, None] // self._weights[None, :]) % self.q
        return digits.astype(np.uint8).reshape(len(keys), self.n, self.n)

    def sp_inverse(self, a):
        """J a^T J, valid for symplectic matrices in characteristic 2."""
        if self.desc.p != 2:
            raise GroupError("the transpose formula for inverses needs characteristic 2")
        return np.ascontiguousarray(a[:, ::-1, ::-1].transpose(0, 2, 1))

    def inverse(self, a):
        """Inverses for SL2 (adjugate) or, in characteristic 2, symplectic matrices."""
        if self.n == 2:
            out = np.empty_like(a)
            out[:, 0, 0], out[:, 1, 1] = a[:, 1, 1], a[:, 0, 0]
            out[:, 0, 1], out[:, 1, 0] = self.neg[a[:, 0, 1]], self.neg[a[:, 1, 0]]
            return out
        return self.sp_inverse(a)


@dataclass
class Enumeration:
    space: MatrixSpace
    keys: np.ndarray  # sorted

    @property
    def order(self):
        return len(self.keys)

    def matrices(self):
        return self.space.decode(self.keys)

    def contains(self, mats) -> np.ndarray:
        k = self.space.keys(mats)
        pos = np.searchsorted(self.keys, k)
        pos[pos >= len(self.keys)] = 0
        return self.keys[pos] == k

    def contains_all(self, mats) -> bool:
        return bool(self.contains(mats).all())


def bfs(space: MatrixSpace, gens, cap: int = DEFAULT_CAP, start=None) -> Enumeration:
    """Closure of the identity (or ``start``) under right multiplication by ``gens``."""
    gens = [g if g.ndim == 2 else g[0] for g in gens]
    frontier = space.identity() if start is None else start
    visited = np.unique(space.keys(frontier))
    frontier = space.decode(visited)
    while len(frontier):
        cand = np.concatenate([space.keys(space.matmul(frontier, g)) for g in gens]) if gens else np.array([], dtype=np.int64)
        cand = np.unique(cand)
        new = np.setdiff1d(cand, visited, assume_unique=True)
        if len(visited) + len(new) > cap:
            raise GroupError(f"enumeration cap {cap} exceeded")
        visited = np.union1d(visited, new)
        frontier = space.decode(new)
    return Enumeration(space, visited)


def subgroup_generated(space: MatrixSpace, elements, cap: int = DEFAULT_CAP) -> Enumeration:
    elements = np.asarray(elements, dtype=np.uint8)
    return bfs(space, list(elements), cap)


def commutator_subgroup(space: MatrixSpace, group: Enumeration, generators=None, cap: int = DEFAULT_CAP,
                        inverse=None) -> Enumeration:
    """<[a, b] : a in group, b in generators (default: all of group)>."""
    inverse = inverse or space.inverse
    elems = group.matrices()
    gens = elems if generators is None else np.asarray(generators, dtype=np.uint8)
    inv_e = inverse(elems)
    inv_g = inverse(gens)
    comms = []
    for b, bi in zip(gens, inv_g):
        c = space.matmul(space.matmul(space.matmul(elems, b), inv_e), bi)
        comms.append(np.unique(space.keys(c)))
    keys = np.unique(np.concatenate(comms))
    return bfs(space, list(space.decode(keys)), cap)


# --------------------------------------------------------------------------
# SL2 cases: <t21(K), t12(rK)> inside SL2(F)


@dataclass
class SL2Report:
    case: str
    order: int
    ok: bool
    details: dict = field(default_factory=dict)

    def to_json(self):
        return {"case": self.case, "order": self.order, "ok": self.ok, **self.details}


def _element_order(space: MatrixSpace, g, limit: int = 10_000) -> int:
    ident = space.keys(space.identity())[0]
    cur = g[None]
    for k in range(1, limit + 1):
        if space.keys(cur)[0] == ident:
            return k
        cur = space.matmul(cur, g)
    raise GroupError("element order exceeds limit")


def sl2_enumerate(case: str, cap: int = 10_000) -> SL2Report:
    """dihedral-F4: K = F2 in GF(4), r = w.  a5-F9: K = F3 in GF(9), r^2 = -1."""
    if case in ("dihedral-F4", "dihedral"):
        desc = GF(4)
    elif case in ("a5-F9", "a5"):
        desc = GF(9)
    else:
        raise GroupError(f"unknown sl2 case {case!r}")
    space = MatrixSpace(desc, 2)
    r = desc.var(1).v
    p = desc.p
    gens = []
    for k in range(1, p):
        gens.append(np.array([[1, 0], [k, 1]], dtype=np.uint8))  # t21(k)
        rk = desc._tables[1][r][k]
        gens.append(np.array([[1, rk], [0, 1]], dtype=np.uint8))  # t12(r k)
    group = bfs(space, gens, cap)
    s, t = gens[0], gens[1]
    ident = space.keys(space.identity())[0]
    if case.startswith("dihedral"):
        s2 = space.keys(space.matmul(s, s))[0] == ident
        t2 = space.keys(space.matmul(t, t))[0] == ident
        k = _element_order(space, space.matmul(s, t)[0])
        ok = s2 and t2 and group.order == 2 * k
        return SL2Report("dihedral-F4", group.order, ok, {
            "involutions": bool(s2 and t2), "product_order": k, "dihedral_order": 2 * k,
            "presentation": f"<s,t | s^2 = t^2 = (st)^{k} = 1>"})
    mats = group.matrices()
    # quotient by the center {+-I}
    minus = space.neg[mats]
    pair_keys = np.minimum(space.keys(mats), space.keys(minus))
    image = len(np.unique(pair_keys))
    center = [m for m in mats if not m[0, 1] and not m[1, 0] and m[0, 0] == m[1, 1]]
    derived = commutator_subgroup(space, group, cap=cap)
    perfect = derived.order == group.order
    ok = image == 60 and perfect
    return SL2Report("a5-F9", group.order, ok, {
        "psl_image_order": image, "center_order": len(center), "perfect": perfect,
        "derived_order": derived.order})


# --------------------------------------------------------------------------
# BN pair of Sp4(GF(4)), exhaustively


@dataclass
class AxiomReport:
    instance: str
    results: dict = field(default_factory=dict)
    counts: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    seed: int | None = None

    @property
    def ok(self):
        return all(self.results.values()) and not self.failures

    def to_json(self):
        d = {"instance": self.instance, "ok": self.ok, "axioms": self.results, "counts": self.counts,
             "failures": self.failures[:20]}
        if self.seed is not None:
            d["seed"] = self.seed
        return d


def _weyl_of_monomial(system, m) -> WeylElement:
    perm = [int(np.nonzero(m[:, k])[0][0]) for k in range(m.shape[0])]
    return weyl_from_permutation(system, perm)


def sp4_gf4_bn(cap: int = DEFAULT_CAP) -> AxiomReport:
    desc = GF(4)
    system = build_system("C2")
    space = MatrixSpace(desc, 4)
    rep = AxiomReport("sp4-gf4-exhaustive")
    basis = [desc.one(), desc.var(1)]
    mat = lambda g: space.from_element(g)
    root_gens = {r.coords: [mat(gen_matrix(system, r, t)) for t in basis] for r in system.roots}
    pos_gens = [g for r in system.positive for g in root_gens[r.coords]]
    all_gens = [g for gs in root_gens.values() for g in gs]
    torus_gens = [mat(torus_matrix(system, a, desc.var(1))) for a in system.simple]
    n_simple = [mat(weyl_rep_matrix(system, a, desc.one())) for a in system.simple]

    q = desc.order
    formula = q**4 * (q**2 - 1) * (q**4 - 1)
    U = bfs(space, pos_gens, cap)
    T = bfs(space, torus_gens, cap)
    B = bfs(space, pos_gens + torus_gens, cap)
    N = bfs(space, torus_gens + n_simple, cap)
    # BN1: <B, N> is the whole group: right order, and it holds every root element
    G = bfs(space, pos_gens + torus_gens + n_simple, cap)
    rep.counts = {"G": G.order, "formula": formula, "U": U.order, "T": T.order, "B": B.order, "N": N.order}
    rep.results["BN1"] = G.order == formula and G.contains_all(np.array(all_gens))
    # BN2: B n N = T, normal in N
    inter = np.intersect1d(B.keys, N.keys)
    Nm, Tm = N.matrices(), T.matrices()
    Ninv = space.sp_inverse(Nm)
    normal = all(T.contains_all(space.matmul(space.matmul(n, Tm), ni)) for n, ni in zip(Nm, Ninv))
    rep.results["BN2"] = bool(np.array_equal(inter, T.keys)) and normal
    # BN3: W = N/T generated by involutions
    patterns = {tuple((m != 0).astype(np.uint8).ravel()) for m in Nm}
    s_pats = [(g != 0).astype(np.uint8) for g in n_simple]
    pspace = MatrixSpace(GF(2), 4)
    W = bfs(pspace, s_pats)
    invol = all(pspace.keys(pspace.matmul(s, s))[0] == pspace.keys(pspace.identity())[0] for s in s_pats)
    rep.counts["W"] = len(patterns)
    rep.results["BN3"] = len(patterns) == W.order == len(system.weyl_group()) == 8 and invol
    # BN4: n_i u n lies in B s_i w B or B w B
    Um = U.matrices()
    weyl_n = [_weyl_of_monomial(system, n) for n in Nm]
    bn4 = 0
    for i, ni in enumerate(n_simple):
        si = system.weyl((i,))
        left = space.matmul(ni, Um)
        for n, wn in zip(Nm, weyl_n):
            prods = space.matmul(left, n)
            allowed = {si * wn, wn}
            for g in prods:
                w = bruhat_decompose(space.to_element(g), system).w
                bn4 += 1
                if w not in allowed:
                    rep.failures.append({"axiom": "BN4", "i": i + 1, "w(n)": wn.render(), "got": w.render()})
    rep.counts["BN4_products"] = bn4
    rep.results["BN4"] = not any(f["axiom"] == "BN4" for f in rep.failures)
    # BN5: n_i B n_i^-1 != B
    Bm = B.matrices()
    bn5 = True
    for ni in n_simple:
        conj = space.matmul(space.matmul(ni, Bm), space.sp_inverse(ni[None])[0])
        bn5 = bn5 and not B.contains_all(conj)
    rep.results["BN5"] = bn5
    # split: B = U T, U normal in B, U cap T = 1, U nilpotent
    Binv = space.sp_inverse(Bm)
    u_normal = all(U.contains_all(space.matmul(space.matmul(b, Um), bi)) for b, bi in
                   zip(space.decode(np.unique(space.keys(np.array(pos_gens + torus_gens)))),
                       space.sp_inverse(space.decode(np.unique(space.keys(np.array(pos_gens + torus_gens)))))))
    trivial_meet = len(np.intersect1d(U.keys, T.keys)) == 1
    series = [U.order]
    cur = U
    while cur.order > 1 and len(series) < 10:
        cur = commutator_subgroup(space, U, cur.matrices(), cap, inverse=space.sp_inverse)
        series.append(cur.order)
    rep.counts["lower_central_series"] = series
    rep.results["split"] = u_normal and trivial_meet and U.order * T.order == B.order and series[-1] == 1
    # saturated: intersection of all conjugates of B equals B n N
    common = B.keys
    for n, ni in zip(Nm, Ninv):
        conj = space.keys(space.matmul(space.matmul(n, Bm), ni))
        common = np.intersect1d(common, conj)
    rep.results["saturated"] = bool(np.array_equal(common, inter))
    del Binv
    return rep


# --------------------------------------------------------------------------
# sampled BN checks for the carpet group E(C2, (F, F^2)), F = F2(x1)


def mixed_carpet(desc: FieldDescriptor | None = None) -> Carpet:
    desc = desc or RationalField(2, 1)
    return Carpet(build_system("C2"), one_module(desc), full_module(desc, 2))


def _random_torus_word(carpet: Carpet, rng, k: int = 2) -> list:
    """h_a(t) with t, t^-1 in the module of a: monomials of F for short roots, of K for long."""
    system = carpet.system
    desc = carpet.desc
    out = []
    for _ in range(k):
        a = system.roots[rng.randrange(len(system.roots))]
        e = rng.randint(1, 2) * (1 if not a.long else 2)
        t = desc.var(1) ** e
        out.append(Torus(a, t))
    return out


def _random_n_word(carpet: Carpet, rng) -> list:
    system = carpet.system
    syms = _random_torus_word(carpet, rng, rng.randint(0, 2))
    for _ in range(rng.randint(0, 4)):
        syms.append(WeylRep(system.simple[rng.randrange(len(system.simple))]))
    return syms


def _random_b_word(carpet: Carpet, rng) -> list:
    system = carpet.system
    syms = []
    for _ in range(rng.randint(1, 4)):
        a = system.positive[rng.randrange(len(system.positive))]
        syms.append(RootElt(a, sparse_element(carpet.module(a), rng)))
    return syms + _random_torus_word(carpet, rng, rng.randint(0, 1))


def mixed_rational_bn(trials: int = 500, seed: int = 0) -> AxiomReport:
    carpet = mixed_carpet()
    system = carpet.system
    desc = carpet.desc
    rng = random.Random(seed)
    rep = AxiomReport("mixed-rational-sampled", seed=seed)
    counts = {"BN2": 0, "BN4": 0, "BN5": 0}
    word = lambda syms: element(Word(system, desc, syms))
    for k in range(trials):
        nw = _random_n_word(carpet, rng)
        n = word(nw)
        wn = bruhat_decompose(n, system).w
        # BN2: n h n^-1 is diagonal and in the carpet group
        h = word(_random_torus_word(carpet, rng, 1))
        conj = n * h * n.inverse()
        v = carpet_membership(conj, carpet)
        diag_ok = all(a.is_zero() for i, row in enumerate(conj.rows) for j, a in enumerate(row) if i != j)
        counts["BN2"] += 1
        if not (diag_ok and v.kind == MEMBER and v.form.w.is_identity()):
            rep.failures.append({"axiom": "BN2", "trial": k, "verdict": v.kind})
        # BN4: n_i b n in B s_i w B or B w B
        i = rng.randrange(system.rank)
        ni = word([WeylRep(system.simple[i])])
        b = word(_random_b_word(carpet, rng))
        g = ni * b * n
        w = bruhat_decompose(g, system).w
        counts["BN4"] += 1
        if w not in (system.weyl((i,)) * wn, wn):
            rep.failures.append({"axiom": "BN4", "trial": k, "i": i + 1, "w(n)": wn.render(), "got": w.render()})
        # BN5: n_i x_{a_i}(s) n_i^-1 leaves B for s != 0 in the module
        a = system.simple[i]
        s = sparse_element(carpet.module(a), rng)
        c = ni * word([RootElt(a, s)]) * ni.inverse()
        counts["BN5"] += 1
        if bruhat_decompose(c, system).w.is_identity():
            rep.failures.append({"axiom": "BN5", "trial": k, "i": i + 1})
    rep.counts = counts
    for ax in counts:
        rep.results[ax] = not any(f["axiom"] == ax for f in rep.failures)
    return rep


def bn_verify(instance: str, samples: int = 500, seed: int = 0, cap: int = DEFAULT_CAP) -> AxiomReport:
    if instance == "sp4-gf4-exhaustive":
        return sp4_gf4_bn(cap)
    if instance == "mixed-rational-sampled":
        return mixed_rational_bn(samples, seed)
    raise GroupError(f"unknown BN instance {instance!r}")
