import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chevcarpet import _gf2k
from chevcarpet.carpets import Carpet, full_module, nonfield_pairs
from chevcarpet.chevgroup import (
    MEMBER,
    NOT_MEMBER,
    TORUS_UNDETERMINED,
    GroupElement,
    GroupError,
    RootElt,
    Torus,
    WeylRep,
    Word,
    bruhat_decompose,
    carpet_membership,
    check_form,
    closure_experiment,
    element,
    form_from_json,
    frobenius_roundtrip_check,
    gen_matrix,
    mixed_carpet,
    parse_word,
    perfectness_certificates,
    phi,
    psi,
    recompose,
    sl2_enumerate,
    symbol_check,
    symbol_image,
    torus_matrix,
    unipotent_coordinates,
    verify_relations,
    word_matrix,
)
from chevcarpet.chevgroup.atoms import AtomContext
from chevcarpet.chevgroup.finite import MatrixSpace, bfs, bn_verify, commutator_subgroup
from chevcarpet.chevgroup.matrices import torus_weyl_matrix
from chevcarpet.chevgroup.membership import square_root
from chevcarpet.chevgroup.relations import commutator, expected_commutator
from chevcarpet.chevgroup.words import random_word
from chevcarpet.kmodules import one_module, span
from chevcarpet.roots import build_system, pairing
from chevcarpet.scalars import GF, RationalField, parse_scalar


@pytest.fixture(scope="module")
def C2():
    return build_system("C2")


@pytest.fixture(scope="module")
def C3():
    return build_system("C3")


def P(text, desc):
    return parse_scalar(text, desc)


class TestMatrices:
    def test_zero_parameter(self, C2, F1):
        assert gen_matrix(C2, C2.parse_root("2e1"), F1.zero()).is_identity()

    def test_additivity(self, C3, F2):
        for r in C3.roots:
            s, t = P("x1+1", F2), P("x2*x1", F2)
            assert gen_matrix(C3, r, s) * gen_matrix(C3, r, t) == gen_matrix(C3, r, s + t)

    def test_form_preserved(self, C3, F2):
        rng = random.Random(0)
        for _ in range(20):
            r = C3.roots[rng.randrange(len(C3.roots))]
            t = P(rng.choice(["x1", "x2+1", "1/(x1+x2)", "x1^3*x2"]), F2)
            assert gen_matrix(C3, r, t).preserves_form()

    def test_torus_identity(self, C2, F1):
        for r in C2.roots:
            assert torus_weyl_matrix(C2, r, F1.one())[1].is_identity()

    def test_weyl_block(self, C2, F1):
        # w_a(1) on the rank-one block of 2e1 is the swap [[0,1],[1,0]]
        w, _ = torus_weyl_matrix(C2, C2.parse_root("2e1"), F1.one())
        nz = [(i, j) for i, row in enumerate(w.rows) for j, a in enumerate(row) if not a.is_zero()]
        assert len(nz) == 4 and all(w.rows[i][j].is_one() for i, j in nz)
        assert not w.is_identity()

    def test_conjugation(self, C2, F1):
        u, s = P("x1+1", F1), P("x1", F1)
        for a in C2.roots:
            h = torus_matrix(C2, a, u)
            for b in C2.roots:
                lhs = h * gen_matrix(C2, b, s) * h.inverse()
                assert lhs == gen_matrix(C2, b, s * u ** pairing(b, a))

    def test_torus_from_weyl_products(self, C2, F1):
        t = P("x1^2+x1+1", F1)
        for a in C2.roots:
            assert torus_weyl_matrix(C2, a, t)[1] == torus_matrix(C2, a, t)

    def test_needs_char2(self):
        with pytest.raises(GroupError):
            GroupElement.identity(GF(3), 2)


class TestWords:
    def test_parse_and_render(self, C2, F1):
        w = parse_word("x[2e1](x1+1); h[e1-e2](x1); w[e1-e2]", C2, F1)
        assert [s.kind for s in w.symbols] == ["x", "h", "w"]
        assert parse_word(w.render(), C2, F1).render() == w.render()

    @pytest.mark.parametrize("bad", ["x[2e1]", "q[2e1](1)", "h[2e1](0)", "x[3e1](1)", "w[2e1](x1)"])
    def test_parse_errors(self, C2, F1, bad):
        with pytest.raises((GroupError, ValueError)):
            parse_word(bad, C2, F1)

    def test_inverse_word(self, C3, F2):
        rng = random.Random(1)
        w = random_word(C3, F2, 8, rng)
        assert (word_matrix(w) * word_matrix(w.inverse())).is_identity()

    def test_expand_matches(self, C2, F1):
        w = parse_word("h[2e1](x1); w[e1-e2]; h[e1-e2](x1+1)", C2, F1)
        assert word_matrix(w) == word_matrix(w.expand())

    def test_phi_long(self, C2, F1):
        w = phi(parse_word("x[2e1](x1)", C2, F1))
        s = w.symbols[0]
        assert w.tag == "B2" and str(s.root) == "e1" and s.t == F1.var(1)

    def test_psi_short(self, F1):
        B2 = build_system("B2")
        w = psi(Word(B2, F1, [RootElt(B2.parse_root("e1"), F1.var(1))]))
        s = w.symbols[0]
        assert w.tag == "C2" and str(s.root) == "2e1" and s.t == P("x1^2", F1)

    def test_psi_phi_is_frobenius(self, C2, F1):
        w = parse_word("x[e1-e2](x1)", C2, F1)
        back = psi(phi(w))
        assert str(back.symbols[0].root) == "e1-e2" and back.symbols[0].t == P("x1^2", F1)

    def test_empty_round_trip(self, C2, F1):
        assert word_matrix(psi(phi(Word(C2, F1)))).is_identity()

    def test_morphism_type_errors(self, C2, F1):
        with pytest.raises(GroupError):
            psi(Word(C2, F1))


class TestRelations:
    def test_c2_relation_four(self, C2, F2):
        a, b = C2.parse_root("2e2"), C2.parse_root("e1-e2")
        r, s = P("x1", F2), P("x2+1", F2)
        lhs = commutator(gen_matrix(C2, a, r), gen_matrix(C2, b, s))
        rhs = gen_matrix(C2, C2.parse_root("e1+e2"), r * s) * gen_matrix(C2, C2.parse_root("2e1"), r * s * s)
        assert lhs == rhs
        assert word_matrix(expected_commutator(C2, a, b, r, s)) == lhs

    def test_orthogonal_commute(self, C2, F1):
        g = gen_matrix(C2, C2.parse_root("2e1"), F1.var(1))
        h = gen_matrix(C2, C2.parse_root("2e2"), F1.var(1) + F1.one())
        assert commutator(g, h).is_identity()

    def test_verify_small(self, F2):
        assert verify_relations("C2", samples=3).ok
        assert verify_relations("B2", samples=3).ok

    def test_symbols(self, C2, F1):
        a = C2.parse_root("2e1")
        assert symbol_image(F1.one(), F1.var(1), a, C2).is_identity()
        assert symbol_image(F1.var(1), P("x1+1", F1), a, C2).is_identity()
        assert symbol_check(samples=10).ok
        with pytest.raises(GroupError):
            symbol_image(F1.zero(), F1.one(), a, C2)

    def test_frobenius_small(self):
        assert frobenius_roundtrip_check(2, word_len=8, trials=10).ok

    def test_frobenius_single(self, C3, F2):
        w = parse_word("x[2e1](x1+x2)", C3, F2)
        assert word_matrix(psi(phi(w))) == word_matrix(w.frobenius())


class TestBruhat:
    def test_identity(self, C2, F1):
        f = bruhat_decompose(GroupElement.identity(F1, 2))
        assert f.u == [] and f.v == [] and f.w.is_identity() and f.torus_is_identity()

    def test_positive_root(self, C2, F1):
        a = C2.parse_root("e1+e2")
        f = bruhat_decompose(gen_matrix(C2, a, F1.var(1)))
        assert [(str(r), c) for r, c in f.u] == [("e1+e2", F1.var(1))]
        assert f.w.is_identity() and f.v == []

    def test_negative_root_sl2(self, C2, F1):
        a = C2.parse_root("2e1")
        t = P("x1+1", F1)
        f = bruhat_decompose(gen_matrix(C2, -a, t))
        ti = t.inv()
        assert [(str(r), c) for r, c in f.u] == [("2e1", ti)]
        assert [(str(r), c) for r, c in f.v] == [("2e1", ti)]
        assert f.torus[0] == ti and f.torus[1].is_one()
        assert f.w == C2.reflection(a)

    def test_round_trip(self, C3, F1):
        rng = random.Random(5)
        for _ in range(10):
            g = element(random_word(C3, F1, rng.randint(0, 12), rng, max_deg=1))
            f = bruhat_decompose(g)
            assert check_form(f)
            assert recompose(f, F1) == g
            assert bruhat_decompose(recompose(f, F1)).same_as(f)

    def test_json_round_trip(self, C2, F1):
        g = element(parse_word("x[-2e1](x1); x[e1-e2](x1+1); w[2e2]", C2, F1))
        f = bruhat_decompose(g)
        back = form_from_json(f.to_json(), C2, F1)
        assert back.same_as(f)

    def test_finite_field(self, C2):
        d = GF(4)
        w = d.var(1)
        g = gen_matrix(C2, C2.parse_root("-2e2"), w) * gen_matrix(C2, C2.parse_root("e1-e2"), w + d.one())
        f = bruhat_decompose(g)
        assert recompose(f, d) == g

    def test_singular(self, F1):
        g = GroupElement.identity(F1, 2)
        g.rows[0][0] = F1.zero()
        with pytest.raises(GroupError):
            bruhat_decompose(g)

    def test_unipotent_coordinates(self, C2, F1):
        a, b = P("x1", F1), P("x1+1", F1)
        u = gen_matrix(C2, C2.parse_root("e1-e2"), a) * gen_matrix(C2, C2.parse_root("2e1"), b)
        got = unipotent_coordinates(u, C2.positive)
        assert [(str(r), c) for r, c in got] == [("e1-e2", a), ("2e1", b)]
        assert unipotent_coordinates(GroupElement.identity(F1, 2), C2.positive) == []

    def test_all_positive(self, C2, F2):
        rng = random.Random(2)
        g = GroupElement.identity(F2, 2)
        for r in C2.positive:
            g = g * gen_matrix(C2, r, P(rng.choice(["x1", "x2", "x1+x2", "1"]), F2))
        coords = unipotent_coordinates(g, C2.positive)
        h = GroupElement.identity(F2, 2)
        for r, c in coords:
            h = h * gen_matrix(C2, r, c)
        assert len(coords) == 4 and h == g


class TestMembership:
    @pytest.fixture
    def carpet(self, F2):
        P_ = full_module(F2, 2)
        Q = span(F2, ["1", "x1^2"])
        return Carpet(build_system("C2"), Q, P_)

    def test_generator(self, carpet, F2):
        g = element(parse_word("x[2e1](1)", carpet.system, F2))
        assert carpet_membership(g, carpet).kind == MEMBER

    def test_not_member(self, F1):
        c = Carpet(build_system("C2"), span(F1, ["1", "x1^2"]), full_module(F1, 2))
        g = element(parse_word("x[2e1](x1)", c.system, F1))
        v = carpet_membership(g, c)
        assert v.kind == NOT_MEMBER and v.witness["value"] == "x1"

    def test_torus_member(self, F1):
        c = mixed_carpet(F1)
        g = element(parse_word("h[e1-e2](x1)", c.system, F1))
        v = carpet_membership(g, c)
        assert v.kind == MEMBER

    def test_torus_undetermined(self, F1):
        c = mixed_carpet(F1)
        g = torus_matrix(c.system, c.system.parse_root("e1-e2"), P("x1+1", F1))
        assert carpet_membership(g, c).kind in (MEMBER, TORUS_UNDETERMINED)

    def test_square_root(self, F1):
        assert square_root(P("x1^2+1", F1)) == P("x1+1", F1)
        assert square_root(F1.var(1)) is None

    def test_closure_small(self):
        F = RationalField(2, 2)
        c = Carpet(build_system("C2"), span(F, ["1", "x2"]), full_module(F, 2))
        rep = closure_experiment(c, F.var(1), trials=5, max_len=6, seed=0)
        assert rep.ok, rep.problems


class TestAtoms:
    def test_cancellation(self, F1):
        ctx = AtomContext(F1)
        t = ctx.lift(P("x1+1", F1), atomic=True)
        assert (t * t.inv()).is_one()
        assert (t.inv() + t.inv()).is_zero()
        x = ctx.lift(P("x1/(x1^2+1)", F1))
        assert (x * t).scalar() == P("x1/(x1^2+1)*(x1+1)", F1)


class TestGF2k:
    def test_field_ops(self):
        rng = random.Random(0)
        for _ in range(50):
            a, b, c = (rng.randrange(1, 1 << 32) for _ in range(3))
            assert _gf2k.mul(a, _gf2k.inv(a)) == 1
            assert _gf2k.mul(a, b ^ c) == _gf2k.mul(a, b) ^ _gf2k.mul(a, c)
            assert _gf2k.mul(_gf2k.mul(a, b), c) == _gf2k.mul(a, _gf2k.mul(b, c))

    def test_vector_matches_scalar(self):
        rng = np.random.default_rng(0)
        a = rng.integers(0, 1 << 32, 64, dtype=np.uint64)
        b = rng.integers(0, 1 << 32, 64, dtype=np.uint64)
        got = _gf2k.mul_vec(a, b)
        assert [int(x) for x in got] == [_gf2k.mul(int(x), int(y)) for x, y in zip(a, b)]

    def test_rank(self):
        assert _gf2k.rank([[1, 2], [2, _gf2k.mul(2, 2)]]) == 1
        assert _gf2k.rank([[1, 0], [0, 1]]) == 2


class TestFinite:
    def test_sl2_cases(self):
        d = sl2_enumerate("dihedral-F4")
        assert d.ok and d.order == 2 * d.details["product_order"]
        a = sl2_enumerate("a5-F9")
        assert a.ok and a.details["psl_image_order"] == 60 and a.details["center_order"] in (1, 2)

    def test_sp4_gf2(self, C2):
        d = GF(2)
        space = MatrixSpace(d, 4)
        gens = [space.from_element(gen_matrix(C2, r, d.one())) for r in C2.roots]
        G = bfs(space, gens)
        assert G.order == 720
        D = commutator_subgroup(space, G, inverse=space.sp_inverse)
        assert D.order == 360

    def test_cap(self, C2):
        d = GF(2)
        space = MatrixSpace(d, 4)
        gens = [space.from_element(gen_matrix(C2, r, d.one())) for r in C2.roots]
        with pytest.raises(GroupError):
            bfs(space, gens, cap=100)

    def test_batched_product(self, C2):
        d = GF(4)
        space = MatrixSpace(d, 4)
        g = gen_matrix(C2, C2.parse_root("e1-e2"), d.var(1))
        h = gen_matrix(C2, C2.parse_root("-2e1"), d.one())
        got = space.matmul(space.from_element(g), space.from_element(h))[0]
        assert space.to_element(got) == g * h
        inv = space.sp_inverse(space.from_element(g)[None])[0]
        assert space.to_element(inv) == g.inverse()

    def test_mixed_bn_sampled(self):
        rep = bn_verify("mixed-rational-sampled", samples=20, seed=3)
        assert rep.ok, rep.failures

    def test_unknown_instance(self):
        with pytest.raises(GroupError):
            bn_verify("nope")


class TestPerfectness:
    def test_zero_target(self):
        rep = perfectness_certificates(mixed_carpet(), samples=2)
        zero = [c for c in rep.certificates if c.target == "0"]
        assert zero and all(c.s == "0" and c.verified for c in zero)

    def test_mixed(self):
        rep = perfectness_certificates(mixed_carpet(), samples=5)
        assert rep.ok and len(rep.certificates) == 40
        assert all(c.t == "x1^2" and c.m == 2 for c in rep.certificates)

    def test_gf2_inapplicable(self):
        d = GF(2)
        rep = perfectness_certificates(Carpet(build_system("C2"), one_module(d), one_module(d)))
        assert not rep.applicable and rep.ok
        assert (rep.group_order, rep.derived_order) == (720, 360)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 10))
def test_bruhat_round_trip_property(seed, length):
    F = RationalField(2, 1)
    system = build_system("C2")
    g = element(random_word(system, F, length, random.Random(seed), max_deg=1))
    f = bruhat_decompose(g)
    assert recompose(f, F) == g and check_form(f)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000))
def test_words_preserve_form(seed):
    F = RationalField(2, 2)
    g = word_matrix(random_word(build_system("C3"), F, 6, random.Random(seed), max_deg=1))
    assert g.preserves_form()
