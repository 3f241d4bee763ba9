import math
import random
from fractions import Fraction as F

import pytest

from hvmkit import generate as gen
from hvmkit.hvm import all_properties
from hvmkit.spacetime import (IntervalClass, Order, SpacetimeEvent, _sign_minus_sqrt,
                              boost_event, boosted_order, find_order_reversing_velocity,
                              interval_classify, li_audit, temporal_order)

O = SpacetimeEvent(0)


@pytest.mark.parametrize("e2, s2, cls", [
    (SpacetimeEvent(0, 1), F(-1), IntervalClass.SPACELIKE),
    (SpacetimeEvent(2, 1), F(3), IntervalClass.TIMELIKE),
    (SpacetimeEvent(1, 1), F(0), IntervalClass.LIGHTLIKE),
    (SpacetimeEvent(5, 3, 4), F(0), IntervalClass.LIGHTLIKE),
    (SpacetimeEvent(F(1, 2), F(1, 3), F(1, 3), F(1, 3)), F(-1, 12), IntervalClass.SPACELIKE),
])
def test_interval_classify(e2, s2, cls):
    assert interval_classify(O, e2) == (s2, cls)
    assert interval_classify(e2, O) == (s2, cls)


def test_temporal_order_reverses_spacelike_pair():
    e2 = SpacetimeEvent(1, 2)
    assert temporal_order(O, e2, 0) is Order.AFTER
    assert temporal_order(O, e2, F(1, 2)) is Order.SIMULTANEOUS
    assert temporal_order(O, e2, F(3, 4)) is Order.BEFORE
    assert temporal_order(O, e2, F(-3, 4)) is Order.AFTER


def test_temporal_order_timelike_is_invariant():
    e2 = SpacetimeEvent(2, 1)
    for v in (F(-99, 100), F(0), F(1, 2), F(99, 100)):
        assert temporal_order(O, e2, v) is Order.AFTER
        assert temporal_order(e2, O, v) is Order.BEFORE


def test_temporal_order_rejects_superluminal():
    with pytest.raises(ValueError):
        temporal_order(O, SpacetimeEvent(1, 2), 1)
    with pytest.raises(ValueError):
        temporal_order(O, SpacetimeEvent(1), F(-3, 2))


def test_find_velocity_examples():
    assert find_order_reversing_velocity(O, SpacetimeEvent(0, 1)) == F(1, 2)
    assert find_order_reversing_velocity(O, SpacetimeEvent(0, 1), earlier="first") == F(-1, 2)
    assert find_order_reversing_velocity(O, SpacetimeEvent(1, 2)) == F(3, 4)
    assert find_order_reversing_velocity(O, SpacetimeEvent(2, 1)) is None
    assert find_order_reversing_velocity(O, SpacetimeEvent(1, 1)) is None


def test_find_velocity_irrational_ratio():
    e2 = SpacetimeEvent(1, 1, 1)   # |dr| = sqrt 2
    v = find_order_reversing_velocity(O, e2)
    assert 1 / math.sqrt(2) < v < 1
    assert temporal_order(O, e2, v) is Order.BEFORE


def test_find_velocity_property():
    rng = random.Random(3)
    checked = 0
    for _ in range(400):
        e1 = SpacetimeEvent(*(F(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(4)))
        e2 = SpacetimeEvent(*(F(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(4)))
        _, cls = interval_classify(e1, e2)
        v = find_order_reversing_velocity(e1, e2)
        if cls is not IntervalClass.SPACELIKE:
            assert v is None
            continue
        checked += 1
        assert abs(v) < 1
        before = temporal_order(e1, e2, 0)
        after = temporal_order(e1, e2, v)
        flipped = {Order.AFTER: Order.BEFORE, Order.BEFORE: Order.AFTER,
                   Order.SIMULTANEOUS: Order.BEFORE}
        assert after is flipped[before]
    assert checked > 50


def test_boost_event_values():
    t, x, y, z = boost_event(SpacetimeEvent(0, 1), 0.5)
    assert abs(t + 1 / math.sqrt(3)) < 1e-12
    assert abs(x - 2 / math.sqrt(3)) < 1e-12
    assert (y, z) == (0.0, 0.0)
    t, x, _, _ = boost_event(SpacetimeEvent(3, 3), 0.9)
    assert abs(t - x) < 1e-9
    with pytest.raises(ValueError):
        boost_event(O, 1.0)


def test_boost_preserves_interval_and_agrees_with_exact_sign():
    rng = random.Random(11)
    for _ in range(300):
        ev = [F(rng.randint(-20, 20), rng.randint(1, 4)) for _ in range(4)]
        e = SpacetimeEvent(*ev)
        v = F(rng.randint(-95, 95), 100)
        axis = [rng.randint(-3, 3) for _ in range(3)]
        if not any(axis):
            continue
        t, x, y, z = boost_event(e, float(v), axis)
        s_float = t * t - x * x - y * y - z * z
        s_exact = float(e.t ** 2 - e.x ** 2 - e.y ** 2 - e.z ** 2)
        assert abs(s_float - s_exact) < 1e-9 * max(1.0, abs(s_exact))
        exact = boosted_order(O, e, v, axis)
        if abs(t) > 1e-9:
            assert exact is (Order.AFTER if t > 0 else Order.BEFORE)


@pytest.mark.parametrize("p, q, s, sign", [
    (F(2), F(1), F(4), 0), (F(3), F(2), F(2), 1), (F(2), F(2), F(2), -1),
    (F(-1), F(-1), F(2), 1), (F(0), F(1), F(0), 0), (F(-3), F(2), F(2), -1),
])
def test_sign_minus_sqrt(p, q, s, sign):
    assert _sign_minus_sqrt(p, q, s) == sign


def test_li_audit_epr_spacelike(epr_file):
    report = li_audit(epr_file.hvm, epr_file.coordinates)
    assert not report.passes_necessary_condition
    assert report.violating_states() == {"0", "1", "2", "5", "6", "7"}
    assert report.blocked == ()
    v = next(v for v in report.violations if v.state == "1" and v.receiver == "B'")
    assert v.choice_set == ("A", "A'")
    for w in v.witnesses:
        assert w.velocity == F(1, 2)
        assert w.order is Order.BEFORE
        assert w.interval is IntervalClass.SPACELIKE
    assert v.shared_frame == (F(1, 2), (F(1), F(0), F(0)))


def test_li_audit_timelike_past_blocks(epr_file):
    tag = dict(epr_file.coordinates)
    tag["B"] = tag["B'"] = SpacetimeEvent(2, 1)
    report = li_audit(epr_file.hvm, tag)
    assert all(v.receiver in ("A", "A'") for v in report.violations)
    assert report.blocked
    assert all(b.receiver in ("B", "B'") for b in report.blocked)
    assert {b.state for b in report.blocked if b.receiver == "B'"} >= {"1"}


def test_li_audit_receiver_already_later_needs_no_boost(epr_file):
    tag = dict(epr_file.coordinates)
    tag["A"] = tag["A'"] = SpacetimeEvent(1, 0)     # choices spacelike, but later than B, B'
    report = li_audit(epr_file.hvm, tag)
    ws = [w for v in report.violations if v.receiver in ("B", "B'") for w in v.witnesses]
    assert ws and all(w.velocity == 0 and w.order is Order.BEFORE for w in ws)


def test_li_audit_pi_model_passes():
    rng = random.Random(5)
    found = 0
    for _ in range(200):
        hvm = gen.random_hvm(rng)
        if not all_properties(hvm)["PI"].holds:
            continue
        found += 1
        tag = {x: SpacetimeEvent(0, i) for i, x in enumerate(hvm.scenario.measurements)}
        assert li_audit(hvm, tag).passes_necessary_condition
    assert found > 10


def test_li_audit_incomplete_tag(epr_file):
    tag = dict(epr_file.coordinates)
    del tag["B'"]
    with pytest.raises(ValueError, match="B'"):
        li_audit(epr_file.hvm, tag)
