"""The ten acceptance criteria, each at its stated scale, tolerance and time budget.

Every test records a PASS/FAIL line that is printed in the terminal summary.
"""

import random
import time

import pytest

from chevcarpet.carpets import Carpet, counterexample_suite, expected_witnesses, full_module, nonfield_pairs
from chevcarpet.chevgroup import (
    MEMBER,
    NOT_MEMBER,
    TORUS_UNDETERMINED,
    bn_verify,
    bruhat_decompose,
    check_form,
    closure_experiment,
    frobenius_roundtrip_check,
    mixed_carpet,
    perfectness_certificates,
    recompose,
    sl2_enumerate,
    symbol_check,
    verify_relations,
    word_matrix,
)
from chevcarpet.chevgroup.words import random_word
from chevcarpet.kmodules import one_module, oracle_comparison, reduce_basis
from chevcarpet.roots import build_system
from chevcarpet.scalars import GF, RationalField

pytestmark = pytest.mark.slow


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.start


def test_criterion_01_counterexamples(record_criterion):
    with Timer() as t:
        report = counterexample_suite(4)
    dims = {c.condition for c in report if "dim P" in c.condition}
    witnesses = expected_witnesses(report)
    ok = (all(c.ok for c in report)
          and witnesses == {"field-Q pair": "x1*x2", "field-P pair": "x1^3"}
          and any("dim P = 3" in d for d in dims) and any("dim P = 12, dim Q = 3" in d for d in dims)
          and t.seconds < 10)
    record_criterion(1, ok, f"{len(report)} checks, witnesses {witnesses}", t.seconds)
    assert ok


def test_criterion_02_frobenius(record_criterion):
    F = RationalField(2, 2)
    with Timer() as t:
        reports = [frobenius_roundtrip_check(r, word_len=20, trials=100, seed=0, desc=F) for r in (2, 3)]
    checked = sum(r.checked for r in reports)
    ok = all(r.ok for r in reports) and checked == 400 and t.seconds < 60
    record_criterion(2, ok, f"{checked} words (C and B, ranks 2 and 3), "
                     f"{sum(len(r.failures) for r in reports)} mismatches", t.seconds)
    assert ok


def test_criterion_03_bruhat_round_trip(record_criterion):
    F = RationalField(2, 1)
    system = build_system("C3")
    rng = random.Random(0)
    bad = []
    with Timer() as t:
        for k in range(100):
            g = word_matrix(random_word(system, F, rng.randint(1, 30), rng))
            form = bruhat_decompose(g, system)
            back = recompose(form, F)
            again = bruhat_decompose(back, system)
            if back != g or not check_form(form) or again.to_json() != form.to_json() or not again.same_as(form):
                bad.append(k)
    ok = not bad and t.seconds < 120
    record_criterion(3, ok, f"100 words in Sp6(F2(x1)), failures {bad}", t.seconds)
    assert ok


def test_criterion_04_closure(record_criterion):
    F = RationalField(2, 3)
    P = full_module(F, 2)
    Q = reduce_basis([F.one(), F.var(2), F.var(3)], F)
    carpet = Carpet(build_system("C3"), Q, P)
    with Timer() as t:
        rep = closure_experiment(carpet, F.var(1), trials=100, max_len=25, seed=0)
    clean_ok = set(rep.clean) <= {MEMBER, TORUS_UNDETERMINED}
    detected = rep.injected.get(NOT_MEMBER, 0)
    ok = rep.ok and clean_ok and detected >= 95
    record_criterion(4, ok, f"clean {rep.clean}, injected {rep.injected}", t.seconds)
    assert ok, rep.problems


def test_criterion_05_relations(record_criterion):
    with Timer() as t:
        reports = [verify_relations(tag, samples=50, seed=0) for tag in ("C3", "B3")]
    checked = sum(r.checked for r in reports)
    ok = all(r.ok for r in reports) and t.seconds < 60
    record_criterion(5, ok, f"{checked} instances over C3 and B3", t.seconds)
    assert ok


def test_criterion_06_sl2(record_criterion):
    with Timer() as t:
        dih = sl2_enumerate("dihedral-F4")
        a5 = sl2_enumerate("a5-F9")
    ok = (dih.ok and dih.details["involutions"] and dih.order == 2 * dih.details["product_order"]
          and a5.ok and a5.details["psl_image_order"] == 60 and a5.details["perfect"] and t.seconds < 10)
    record_criterion(6, ok, f"dihedral order {dih.order}, PSL image {a5.details['psl_image_order']}", t.seconds)
    assert ok


def test_criterion_07_bn_pairs(record_criterion):
    with Timer() as t1:
        ex = bn_verify("sp4-gf4-exhaustive")
    with Timer() as t2:
        mixed = bn_verify("mixed-rational-sampled", samples=500, seed=0)
    ok = (ex.ok and ex.counts["G"] == ex.counts["formula"] == 979200 and t1.seconds < 600
          and mixed.ok and mixed.counts["BN4"] == 500 and t2.seconds < 120)
    record_criterion(7, ok, f"|G| = {ex.counts['G']}, exhaustive {t1.seconds:.0f} s, "
                     f"sampled 500 in {t2.seconds:.0f} s", t1.seconds + t2.seconds)
    assert ok


def test_criterion_08_symbols(record_criterion):
    with Timer() as t:
        rep = symbol_check("C2", samples=50, seed=0)
    ok = rep.ok and rep.checked == 50 and t.seconds < 5
    record_criterion(8, ok, f"{rep.checked} symbols", t.seconds)
    assert ok


def test_criterion_09_oracle(record_criterion):
    with Timer() as t:
        cases = oracle_comparison(pairs=50, samples=200, seed=0)
    contradictions = [c for c in cases if c.contradiction]
    fails = [c for c in cases if not c.verdict]
    ok = not contradictions and all(c.witness for c in fails) and t.seconds < 60
    record_criterion(9, ok, f"{len(cases) - len(fails)} PASS / {len(fails)} FAIL verdicts, "
                     f"{len(contradictions)} contradictions", t.seconds)
    assert ok


def test_criterion_10_perfectness(record_criterion):
    with Timer() as t:
        mixed = perfectness_certificates(mixed_carpet(), samples=20, seed=0)
        d = GF(2)
        small = perfectness_certificates(Carpet(build_system("C2"), one_module(d), one_module(d)))
    roots = {c.root for c in mixed.certificates}
    ok = (mixed.ok and len(roots) == 8 and len(mixed.certificates) == 160
          and not small.applicable and small.derived_order < small.group_order)
    record_criterion(10, ok, f"{len(mixed.certificates)} certificates; Sp4(GF(2)): "
                     f"|[G,G]| = {small.derived_order} < {small.group_order}", t.seconds)
    assert ok
