"""Acceptance gate.

One test per criterion; ``conftest.py`` prints a PASS/FAIL line for each at
the end of the run. Run alone with ``pytest tests/test_acceptance.py``.
"""
import itertools
import math
import random
from fractions import Fraction as F

from hvmkit import generate as gen
from hvmkit.contextuality import (build_joint_system, decide_common_cause_system,
                                  decide_contextuality, synthesize_sd_hvm, synthesize_wd_hvm)
from hvmkit.hvm import (all_properties, check_bell_locality, check_outcome_independence,
                        check_parameter_independence, find_signaling_states, is_equivalent)
from hvmkit.rational import verify_certificate
from hvmkit.spacetime import (IntervalClass, Order, SpacetimeEvent, boost_event,
                              find_order_reversing_velocity, interval_classify, li_audit,
                              temporal_order)


def test_ac1_epr_contextuality(epr):
    verdict = decide_contextuality(epr)
    assert verdict.contextual
    assert verify_certificate(verdict.equations.system, verdict.certificate)

    js = build_joint_system(epr)
    names = epr.scenario.measurements
    events = [((("A", "B"), ("1", "-1")), F(1, 2)),
              ((("A", "B'"), ("-1", "-1")), F(1, 8)),
              ((("A'", "B"), ("1", "1")), F(1, 8)),
              ((("A'", "B'"), ("1", "-1")), F(1, 8))]
    for (ctx, outcome), rhs in events:
        coeffs, b = js.row(ctx, outcome)
        assert b == rhs
        # independent enumeration of the global assignments consistent with the event
        expected = {g for g in itertools.product(["1", "-1"], repeat=4)
                    if all(g[names.index(x)] == o for x, o in zip(ctx, outcome))}
        support = {v for v, a in zip(js.variables, coeffs) if a}
        assert support == expected
        assert set(coeffs) == {0, 1}


def test_ac2_epr_wd_hvm(epr, epr_hvm):
    assert is_equivalent(epr_hvm, epr) == (True, None)
    props = all_properties(epr_hvm)
    assert props["WD"].holds
    assert props["OI"].holds
    assert not props["PI"].holds
    assert not props["SD"].holds

    witnesses, _ = find_signaling_states(epr_hvm)
    w = next(w for w in witnesses if w.state == "1")
    assert w.receiver == "B'"
    assert w.contexts == (("A", "B'"), ("A'", "B'"))
    assert w.deterministic_outcomes() == ("-1", "1")

    assert {w.state for w in witnesses} == {"0", "1", "2", "7"}


def test_ac3_example1(ex1, ex1_singleton):
    assert check_parameter_independence(ex1_singleton).holds
    assert not check_outcome_independence(ex1_singleton).holds

    verdict = decide_contextuality(ex1)
    assert not verdict.contextual
    assert {t: p for t, p in verdict.joint.distribution.items() if p} == \
        {("0", "1"): F(1, 2), ("1", "0"): F(1, 2)}

    hvm = synthesize_sd_hvm(ex1, verdict.joint)
    assert len(hvm.states) == 2
    assert all(r.holds for r in all_properties(hvm).values())
    rows = {t for s in hvm.states for t, p in hvm.conditional(("A", "B"), s).items() if p == 1}
    assert rows == {("0", "1"), ("1", "0")}


def test_ac4_existence(epr):
    hvm = synthesize_wd_hvm(epr)
    assert len(hvm.states) == 128
    props = all_properties(hvm)
    assert props["WD"].holds
    assert is_equivalent(hvm, epr)[0]
    assert not props["PI"].holds


def test_ac5_relation_lattice():
    rng = random.Random(2024)
    for _ in range(500):
        hvm = gen.random_hvm(rng)
        r = {k: v.holds for k, v in all_properties(hvm).items()}
        if r["SD"]:                                   # (1) and (2)
            assert r["WD"] and r["PI"]
        if r["WD"]:
            assert r["OI"]
        assert r["SD"] == (r["WD"] and r["PI"])       # (4)
        assert r["SD"] == (r["WD"] and r["BellLocal"])  # (5)
        assert (not find_signaling_states(hvm)[0]) == r["PI"]


def test_ac6_equivalence_theorem(epr):
    rng = random.Random(77)
    noncontextual = 0
    for _ in range(200):
        em = gen.random_classical_em(rng)
        verdict = decide_contextuality(em)
        assert not verdict.contextual
        noncontextual += 1
        hvm = synthesize_sd_hvm(em, verdict.joint)
        assert is_equivalent(hvm, em)[0]
        assert check_bell_locality(hvm).holds
    assert noncontextual == 200

    def local_and_equivalent(hvm):
        return (check_parameter_independence(hvm).holds
                and check_outcome_independence(hvm).holds
                and is_equivalent(hvm, epr)[0])

    assert not local_and_equivalent(synthesize_wd_hvm(epr))
    for i in range(10_000):
        hvm = gen.random_coupling_hvm(rng, epr, merges=i % 4)
        if i % 250 == 0:
            assert is_equivalent(hvm, epr)[0]   # the search stays inside the equivalent set
        assert not local_and_equivalent(hvm)


def test_ac7_li_audit(epr_file):
    hvm, tag = epr_file.hvm, epr_file.coordinates
    assert tag["A"] == tag["A'"] == SpacetimeEvent(0)
    assert tag["B"] == tag["B'"] == SpacetimeEvent(0, 1)
    report = li_audit(hvm, tag)
    assert not report.passes_necessary_condition
    for v in report.violations:
        for w in v.witnesses:
            assert abs(w.velocity) < 1
            # the receiver must come no later than the choice in the witness frame
            order = temporal_order(tag[w.member], tag[v.receiver], w.velocity)
            assert order is Order.BEFORE

    past = dict(tag)
    past["B"] = past["B'"] = SpacetimeEvent(2, 1)
    shifted = li_audit(hvm, past)
    assert not [v for v in shifted.violations if v.receiver in ("B", "B'")]
    assert shifted.blocked

    assert report.violating_states() == {"0", "1", "2", "7"}


def test_ac8_common_cause(epr):
    decision = decide_common_cause_system(epr)
    assert not decision.exists
    assert decision.verdict.certificate == decide_contextuality(epr).certificate

    product = gen.product_em(gen.bell_scenario(), {
        "A0": {"0": F(1, 3), "1": F(2, 3)}, "A1": {"0": F(1, 2), "1": F(1, 2)},
        "B0": {"0": F(1, 5), "1": F(4, 5)}, "B1": {"0": F(3, 4), "1": F(1, 4)}})
    assert decide_common_cause_system(product).exists


def test_ac9_geometry():
    rng = random.Random(9)

    def rat():
        return F(rng.randint(-40, 40), rng.randint(1, 4))

    for _ in range(1000):
        e = SpacetimeEvent(rat(), rat(), rat(), rat())
        v = rng.uniform(-0.999, 0.999)
        axis = rng.choice(["x", "y", "z", (1, 2, 2)])
        t, x, y, z = boost_event(e, v, axis)
        before = float(e.t ** 2 - e.x ** 2 - e.y ** 2 - e.z ** 2)
        assert math.isclose(t * t - x * x - y * y - z * z, before, rel_tol=1e-9, abs_tol=1e-9)

    spacelike = 0
    for _ in range(1000):
        e1 = SpacetimeEvent(rat(), rat(), rat(), rat())
        e2 = SpacetimeEvent(e1.t + rng.choice([-1, 1]) * F(rng.randint(1, 80), 4),
                            rat(), rat(), rat())
        _, cls = interval_classify(e1, e2)
        v = find_order_reversing_velocity(e1, e2)
        assert (v is not None) == (cls is IntervalClass.SPACELIKE)
        if v is not None:
            spacelike += 1
            assert abs(v) < 1
            assert temporal_order(e1, e2, v) is not temporal_order(e1, e2, 0)
    assert 0 < spacelike < 1000
