import json

import pytest

from chevcarpet.carpets import (
    AdmissiblePair,
    Carpet,
    carpet_from_pair,
    check_admissible,
    check_carpet,
    check_inclusion_chain,
    counterexample_suite,
    expected_witnesses,
    full_module,
    load_pair,
    nonadmissible_pairs,
    nonfield_pairs,
    pair_from_json,
)
from chevcarpet.kmodules import ModuleError, is_field, inverse_closure_check, modules_equal, one_module, span
from chevcarpet.roots import build_system
from chevcarpet.scalars import GF, RationalField, parse_scalar


@pytest.fixture(scope="module")
def F4v():
    return RationalField(2, 4)


class TestAdmissible:
    @pytest.mark.parametrize("tag", ["B2", "C2", "B3", "C3"])
    def test_K_K(self, F2, tag):
        K = one_module(F2)
        assert all(c.ok for c in check_admissible(K, K, tag))

    def test_gf4_ap2_failure(self):
        d = GF(4)
        checks = check_admissible(one_module(d), span(d, ["1", "w"]), "C2")
        bad = [c for c in checks if not c.ok]
        assert [c.condition.split(":")[0] for c in bad] == ["AP2"]
        # w^2 = w + 1 is the offending square
        assert bad[0].witness == "w+1"

    def test_b3_nonfield_short(self, F2):
        P = span(F2, ["1", "x1", "x2"])
        checks = check_admissible(one_module(F2), P, "B3")
        assert all(c.ok for c in checks)
        assert next(c for c in checks if c.condition.startswith("AP3")).status == "skip"


class TestCarpets:
    def test_K_K_on_B2(self, F2):
        K = one_module(F2)
        pair = AdmissiblePair(K, K, "B", 2)
        c = carpet_from_pair(pair)
        assert all(c.module(r) is K for r in c.system.roots)
        assert check_carpet(c).ok

    def test_F_F2_on_C(self, F1):
        c = Carpet(build_system("C3"), one_module(F1), full_module(F1, 2))
        assert all(c.module(r).dim == (1 if r.long else 2) for r in c.system.roots)
        assert check_carpet(c).ok

    def test_B2_pair_dimensions(self, F4v):
        label, tag, P, Q = nonfield_pairs(4)[2]
        c = Carpet(build_system(tag), Q, P)
        assert {c.module(r).dim for r in c.system.roots if r.long} == {3}
        assert {c.module(r).dim for r in c.system.roots if not r.long} == {12}

    def test_first_nonadmissible(self):
        label, tag, P, Q = nonadmissible_pairs(4)[0]
        v = check_carpet(Carpet(build_system(tag), Q, P))
        assert not v.ok and v.failure.condition.endswith("PQ in P") and v.failure.witness == "x1*x2"

    def test_second_nonadmissible(self):
        label, tag, P, Q = nonadmissible_pairs(4)[1]
        v = check_carpet(Carpet(build_system(tag), Q, P))
        assert not v.ok and "P^2Q in Q" in v.failure.condition and v.failure.witness == "x1^3"

    def test_full_report(self, F1):
        c = Carpet(build_system("C2"), one_module(F1), full_module(F1, 2))
        v = check_carpet(c, stop_at_first=False)
        assert v.ok and v.checked == len(v.entries) > 0


class TestCounterexamples:
    def test_suite(self):
        report = counterexample_suite(4)
        assert all(c.ok for c in report)
        assert expected_witnesses(report) == {"field-Q pair": "x1*x2", "field-P pair": "x1^3"}

    def test_B2_basis(self, F4v):
        _, _, P, Q = nonfield_pairs(4)[2]
        expected = ["1", "x1", "x2", "x3", "x4", "x1*x2", "x1*x3", "x1*x4", "x2*x3", "x2*x4",
                    "x1*x2*x3", "x1*x2*x4"]
        assert modules_equal(P, span(F4v, expected))
        assert P.dim == 12 and Q.dim == 3

    def test_field_Q_is_field(self):
        _, _, P, Q = nonadmissible_pairs(4)[0]
        assert is_field(Q)

    def test_K_inverse_closed(self):
        _, _, P, Q = nonfield_pairs(4)[0]
        assert inverse_closure_check(Q)

    def test_needs_four_variables(self):
        with pytest.raises(ModuleError):
            counterexample_suite(3)


class TestInclusionChain:
    def test_K_K(self, F1):
        K = one_module(F1)
        assert all(c.ok for c in check_inclusion_chain(K, K, 2))

    def test_B_pair(self):
        _, _, P, Q = nonfield_pairs(4)[0]
        assert all(c.ok for c in check_inclusion_chain(P, Q, 2))

    def test_span_1_x1(self, F1):
        assert all(c.ok for c in check_inclusion_chain(span(F1, ["1", "x1"]), one_module(F1), 2))

    def test_failure(self, F2):
        P = span(F2, ["1", "x1"])
        Q = span(F2, ["x2"])
        assert not all(c.ok for c in check_inclusion_chain(P, Q, 2))


class TestPairJson:
    def test_round_trip(self, tmp_path, F2):
        pair = AdmissiblePair(one_module(F2), span(F2, ["1", "x1", "x2"]), "B", 3)
        path = tmp_path / "pair.json"
        path.write_text(json.dumps(pair.to_json()))
        back = load_pair(path)
        assert back.tag == "B3" and modules_equal(back.short, pair.short)

    def test_missing_key(self):
        with pytest.raises(ModuleError):
            pair_from_json({"type": "C", "rank": 2})

    def test_wrong_p(self, F2):
        obj = AdmissiblePair(one_module(F2), one_module(F2), "C", 2).to_json()
        obj["p"] = 3
        with pytest.raises(ModuleError):
            pair_from_json(obj)
