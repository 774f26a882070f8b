import itertools

import pytest
from hypothesis import given, settings, strategies as st

from chevcarpet.roots import (
    RootError,
    brute_force_commuting,
    build_system,
    find_commuting_root,
    inversion_set,
    pairing,
)


def R(system, text):
    return system.parse_root(text)


class TestBuild:
    def test_c2_counts(self):
        s = build_system("C2")
        assert len(s.roots) == 8 and sum(r.long for r in s.roots) == 4

    def test_b3_counts(self):
        s = build_system("B3")
        assert len(s.roots) == 18 and sum(not r.long for r in s.roots) == 6

    def test_g2_counts(self):
        s = build_system("G2")
        assert len(s.roots) == 12 and sum(r.long for r in s.roots) == 6

    @pytest.mark.parametrize("tag,n", [("B2", 8), ("C3", 18), ("B4", 32), ("C4", 32), ("F4", 48)])
    def test_root_counts(self, tag, n):
        assert len(build_system(tag).roots) == n

    def test_bad_tags(self):
        for tag in ("A2", "B1", "G3"):
            with pytest.raises(RootError):
                build_system(tag)

    def test_cached(self):
        assert build_system("C3") is build_system("C3")


class TestPairing:
    def test_self(self):
        s = build_system("C3")
        assert all(pairing(r, r) == 2 for r in s.roots)

    def test_b2_values(self):
        s = build_system("B2")
        a, b = R(s, "e1-e2"), R(s, "e2")
        assert pairing(a, b) == -2 and pairing(b, a) == -1

    def test_orthogonal(self):
        s = build_system("C2")
        assert pairing(R(s, "2e1"), R(s, "2e2")) == 0


class TestStructureConstants:
    def test_b2_relation(self):
        s = build_system("B2")
        a, b = R(s, "e1-e2"), R(s, "e2")
        assert s.structure_constant_magnitude(a, b, 1, 1) == 1
        assert s.structure_constant_magnitude(a, b, 1, 2) == 1

    def test_orthogonal_nonaddable(self):
        s = build_system("C3")
        a, b = R(s, "2e1"), R(s, "2e2")
        assert s.commutator_terms(a, b) == [] or all(m == 0 for *_, m in s.commutator_terms(a, b))

    def test_g2_short_chain(self):
        # a short, b long: [x_a, x_{a+b}] has constants 2, 3, 3
        s = build_system("G2")
        a, b = sorted(s.simple, key=lambda r: r.long)
        ab = s.add(a, b)
        got = {(i, j): m for i, j, _, m in s.commutator_terms(a, ab)}
        assert got == {(1, 1): 2, (2, 1): 3, (1, 2): 3}
        # reversed order: reordering adds the 3 of [x_{a+b}, x_{2a+b}] to the top term
        rev = {(i, j): m for i, j, _, m in s.commutator_terms(b, a)}
        assert rev == {(1, 1): 1, (1, 2): 1, (1, 3): 1, (2, 3): 2}

    @pytest.mark.parametrize("tag", ["B3", "C3"])
    def test_nonzero_exactly_on_roots(self, tag):
        s = build_system(tag)
        for a in s.roots:
            for b in s.roots:
                if a.coords in (b.coords, (-b).coords):
                    continue
                nz = {(i, j) for i, j, _, m in s.commutator_terms(a, b) if m}
                roots = {(i, j) for i in range(1, 4) for j in range(1, 4) if s.add(a, b, i, j)}
                assert nz == roots

    def test_c2_terms(self):
        s = build_system("C2")
        terms = s.commutator_terms(R(s, "2e2"), R(s, "e1-e2"))
        targets = {(i, j, str(t)) for i, j, t, _ in terms}
        assert targets == {(1, 1, "e1+e2"), (1, 2, "2e1")}


class TestWeyl:
    @pytest.mark.parametrize("tag,order", [("C2", 8), ("B3", 48), ("G2", 12)])
    def test_orders(self, tag, order):
        assert len(build_system(tag).weyl_group()) == order

    def test_identity_inversions(self):
        assert inversion_set(build_system("C2").weyl()) == []

    def test_simple_reflection(self):
        s = build_system("C3")
        for i, a in enumerate(s.simple):
            assert inversion_set(s.weyl((i,))) == [a]

    def test_longest_c2(self):
        s = build_system("C2")
        w = max(s.weyl_group(), key=lambda w: w.length())
        assert sorted(inversion_set(w)) == sorted(s.positive)

    def test_lexmin_word_is_reduced(self):
        s = build_system("B3")
        for w in s.weyl_group():
            assert len(w.word) == w.length()
            assert s.weyl(w.word) == w

    def test_involutions(self):
        s = build_system("C3")
        for i in range(3):
            w = s.weyl((i,))
            assert (w * w).is_identity()

    def test_word_order(self):
        s = build_system("C2")
        w = s.weyl((0, 1))
        assert w == s.weyl((0,)) * s.weyl((1,))
        assert w(s.simple[1]) == s.weyl((0,))(s.weyl((1,))(s.simple[1]))


class TestCommuting:
    def test_b2_e1(self):
        s = build_system("B2")
        a, b = find_commuting_root([R(s, "e1")], s)
        assert str(a) == "e1+e2" and str(b) == "e1"

    def test_c2_all_positive(self):
        s = build_system("C2")
        a, _ = find_commuting_root(s.positive, s)
        assert str(a) == "e1+e2"

    def test_highest_root_b2(self):
        s = build_system("B2")
        delta = [s.highest_root]
        a, b = find_commuting_root(delta, s)
        assert a in brute_force_commuting(delta, s)

    @pytest.mark.parametrize("tag,sizes", [("B2", (1, 2, 3, 4)), ("C2", (1, 2, 3, 4)), ("B3", (1, 2)), ("C3", (1, 2))])
    def test_agrees_with_brute_force(self, tag, sizes):
        s = build_system(tag)
        for k in sizes:
            for delta in itertools.combinations(s.positive, k):
                found = brute_force_commuting(delta, s)
                if found:
                    a, b = find_commuting_root(delta, s)
                    assert a in found and b in delta and a.dot(b) != 0

    def test_errors(self):
        s = build_system("C2")
        with pytest.raises(RootError):
            find_commuting_root([], s)
        with pytest.raises(RootError):
            find_commuting_root([-s.simple[0]], s)


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(["B2", "C2", "B3", "C3", "G2"]), st.data())
def test_reflections_permute_roots(tag, data):
    s = build_system(tag)
    a = data.draw(st.sampled_from(s.roots))
    b = data.draw(st.sampled_from(s.roots))
    img = s.reflect(b.coords, a)
    assert s.is_root(img)
    assert s.reflect(img, a) == b.coords


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(["B3", "C3"]), st.data())
def test_weyl_preserves_pairing(tag, data):
    s = build_system(tag)
    w = data.draw(st.sampled_from(s.weyl_group()))
    a = data.draw(st.sampled_from(s.roots))
    b = data.draw(st.sampled_from(s.roots))
    assert pairing(w(a), w(b)) == pairing(a, b)
