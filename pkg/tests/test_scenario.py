import random
from fractions import Fraction as F

import pytest

from hvmkit import generate as gen
from hvmkit.scenario import (EmpiricalModel, MeasurementScenario, marginal,
                             no_signaling_witnesses, validate_em)

EPR_ROWS = {
    ("A", "B"): [0, F(1, 2), F(1, 2), 0],
    ("A'", "B"): [F(1, 8), F(3, 8), F(3, 8), F(1, 8)],
    ("A", "B'"): [F(1, 8), F(3, 8), F(3, 8), F(1, 8)],
    ("A'", "B'"): [F(3, 8), F(1, 8), F(1, 8), F(3, 8)],
}
COLS = [("1", "1"), ("1", "-1"), ("-1", "1"), ("-1", "-1")]


def perturbed_epr(epr):
    tables = {c: dict(t) for c, t in epr.tables.items()}
    tables[("A", "B")][("1", "-1")] = F(3, 5)
    return EmpiricalModel(epr.scenario, tables)


def test_epr_fixture_matches_table(epr):
    for ctx, row in EPR_ROWS.items():
        assert [epr.table(ctx)[c] for c in COLS] == row


def test_example1_valid(ex1):
    assert validate_em(ex1).valid


def test_epr_valid(epr):
    report = validate_em(epr)
    assert report.valid, report.violations


def test_perturbed_epr_violations(epr):
    report = validate_em(perturbed_epr(epr))
    assert not report.valid
    norm = report.by_kind("normalization")
    assert [v.location for v in norm] == [(("A", "B"),)]
    assert "11/10" in norm[0].details
    cons = {(v.location[0], v.location[1]) for v in report.by_kind("consistency")}
    assert (("A",), (("A", "B"), ("A", "B'"))) in cons
    assert (("B",), (("A", "B"), ("A'", "B"))) in cons


def test_cover_and_antichain():
    s = MeasurementScenario(["A", "B", "C"], {x: ["0", "1"] for x in "ABC"},
                            [["A"], ["A", "B"]])
    em = EmpiricalModel(s, {("A",): {("0",): 1}, ("A", "B"): {("0", "0"): 1}})
    report = validate_em(em)
    assert [v.location for v in report.by_kind("cover")] == [("C",)]
    assert [v.location for v in report.by_kind("antichain")] == [(("A",), ("A", "B"))]


def test_negativity():
    s = MeasurementScenario(["A"], {"A": ["0", "1"]}, [["A"]])
    em = EmpiricalModel(s, {("A",): {("0",): F(3, 2), ("1",): F(-1, 2)}})
    report = validate_em(em)
    assert [v.kind for v in report.violations] == ["negativity"]


@pytest.mark.parametrize("bad", [
    dict(contexts=[["A", "Z"]]),
    dict(contexts=[["A", "A"]]),
    dict(contexts=[["A", "B"], ["B", "A"]]),
])
def test_structural_errors(bad):
    with pytest.raises(ValueError):
        MeasurementScenario(["A", "B"], {"A": ["0"], "B": ["0"]}, bad["contexts"])


def test_contexts_canonicalized():
    s = MeasurementScenario(["A", "B"], {"A": ["0", "1"], "B": ["x", "y"]}, [["B", "A"]])
    assert s.contexts == (("A", "B"),)
    em = EmpiricalModel(s, {("B", "A"): {("x", "1"): 1}})
    assert em.table(["A", "B"])[("1", "x")] == 1


def test_marginal_examples(epr):
    # direct summation of the AB row: P(A=1) = 0 + 1/2
    assert marginal(epr, ("A", "B"), ["A"]) == {("1",): F(1, 2), ("-1",): F(1, 2)}
    assert marginal(epr, ("A'", "B'"), ["B'"])[("1",)] == F(3, 8) + F(1, 8)
    assert marginal(epr, ("A", "B"), ["A", "B"]) == epr.table(("A", "B"))


def test_marginal_errors(epr):
    with pytest.raises(KeyError):
        marginal(epr, ("A", "A'"), ["A"])
    with pytest.raises(ValueError):
        marginal(epr, ("A", "B"), ["B'"])


def test_no_signaling_witnesses(epr, ex1):
    assert no_signaling_witnesses(epr) == []
    assert no_signaling_witnesses(ex1) == []
    ws = no_signaling_witnesses(perturbed_epr(epr))
    a = [w for w in ws if w.subset == ("A",) and w.contexts == (("A", "B"), ("A", "B'"))]
    assert len(a) == 1
    assert a[0].outcome == ("1",)
    assert a[0].values == (F(3, 5), F(1, 2))


def test_nested_marginal_idempotent():
    rng = random.Random(3)
    for _ in range(50):
        em = gen.random_classical_em(rng)
        for c in em.scenario.contexts:
            sub = c[: max(1, len(c) - 1)]
            inner = sub[:1]
            step = marginal(EmpiricalModel(
                em.scenario, em.tables), c, sub)
            twice = {}
            for k, p in step.items():
                twice[k[:1]] = twice.get(k[:1], F(0)) + p
            assert twice == marginal(em, c, inner)


def test_projection_generator_always_valid():
    rng = random.Random(11)
    for _ in range(200):
        em = gen.random_classical_em(rng)
        assert validate_em(em).valid


def test_perturbation_keeps_consistency():
    rng = random.Random(5)
    moved = 0
    for _ in range(100):
        em = gen.random_classical_em(rng, gen.bell_scenario())
        pem = gen.perturbed_em(rng, em)
        assert validate_em(pem).valid
        moved += pem != em
    assert moved > 50
