"""Minkowski geometry and the static Lorentz-invariance audit.

Units have c = 1. Every causal-order decision is an exact sign test on
``dt - v * (axis . dr) / |axis|``; the Lorentz factor is positive and never
needs to be computed. Only :func:`boost_event` uses floating point, and
only for display.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Mapping, Sequence, Union

from .hvm import HiddenVariableModel, context_dependences
from .scenario import Context

Vector = tuple[Fraction, Fraction, Fraction]


@dataclass(frozen=True)
class SpacetimeEvent:
    t: Fraction
    x: Fraction = Fraction(0)
    y: Fraction = Fraction(0)
    z: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("t", "x", "y", "z"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    @property
    def r(self) -> Vector:
        return (self.x, self.y, self.z)


SpacetimeTag = Mapping[str, SpacetimeEvent]


class IntervalClass(enum.Enum):
    TIMELIKE = "Timelike"
    SPACELIKE = "Spacelike"
    LIGHTLIKE = "Lightlike"


class Order(enum.Enum):
    """Position of the second event relative to the first."""

    BEFORE = "Before"
    AFTER = "After"
    SIMULTANEOUS = "Simultaneous"


def separation(e1: SpacetimeEvent, e2: SpacetimeEvent) -> tuple[Fraction, Vector]:
    return e2.t - e1.t, (e2.x - e1.x, e2.y - e1.y, e2.z - e1.z)


def _dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def _sign_minus_sqrt(p: Fraction, q: Fraction, s: Fraction) -> int:
    """Exact sign of ``p - q * sqrt(s)`` for ``s >= 0``."""
    if q == 0 or s == 0:
        return _sign(p)
    if p >= 0 and q < 0:
        return 1
    if p <= 0 and q > 0:
        return -1
    d = _sign(p * p - q * q * s)
    return d if p > 0 else -d


def interval_classify(e1: SpacetimeEvent, e2: SpacetimeEvent) -> tuple[Fraction, IntervalClass]:
    dt, dr = separation(e1, e2)
    s2 = dt * dt - _dot(dr, dr)
    if s2 > 0:
        return s2, IntervalClass.TIMELIKE
    if s2 < 0:
        return s2, IntervalClass.SPACELIKE
    return s2, IntervalClass.LIGHTLIKE


def _check_speed(v: Fraction) -> Fraction:
    v = Fraction(v)
    if abs(v) >= 1:
        raise ValueError(f"boost speed |v| = {abs(v)} must be < 1")
    return v


def boosted_order(e1: SpacetimeEvent, e2: SpacetimeEvent, v: Fraction,
                  axis: Sequence[Fraction]) -> Order:
    """Order of ``e2`` relative to ``e1`` seen from a frame moving at ``v`` along ``axis``."""
    v = _check_speed(v)
    dt, dr = separation(e1, e2)
    axis = tuple(Fraction(a) for a in axis)
    s = _dot(axis, axis)
    if s == 0:
        if v != 0:
            raise ValueError("boost axis must be nonzero")
        sign = _sign(dt)
    else:
        # sign(dt - v * (a.dr)/|a|) == sign(dt*|a| - v*(a.dr)) == -sign(w - dt*sqrt(s))
        sign = -_sign_minus_sqrt(v * _dot(axis, dr), dt, s)
    return {1: Order.AFTER, -1: Order.BEFORE, 0: Order.SIMULTANEOUS}[sign]


def temporal_order(e1: SpacetimeEvent, e2: SpacetimeEvent, v: Fraction) -> Order:
    """Order of ``e2`` relative to ``e1`` after a boost ``v`` along ``e2 - e1``."""
    _, dr = separation(e1, e2)
    if _dot(dr, dr) == 0:
        _check_speed(v)
        return boosted_order(e1, e2, Fraction(0), (0, 0, 0))
    return boosted_order(e1, e2, v, dr)


def _sqrt_upper(q: Fraction) -> Fraction:
    """Smallest-effort rational u >= sqrt(q) with u < 1, for 0 <= q < 1."""
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    scale = 1
    while True:
        scale *= 16
        # sqrt(n/d) = sqrt(n*d)/d <= (isqrt(n*d*scale^2) + 1) / (d*scale)
        u = Fraction(math.isqrt(n * d * scale * scale) + 1, d * scale)
        if u < 1:
            return u


def find_order_reversing_velocity(e1: SpacetimeEvent, e2: SpacetimeEvent,
                                  earlier: str = "second") -> Fraction | None:
    """Boost speed along ``e2 - e1`` that flips (or breaks) the order of a spacelike pair.

    Returns None for timelike and lightlike pairs, whose order no inertial
    frame can change. For simultaneous pairs ``earlier`` picks which event
    should come first.
    """
    s2, cls = interval_classify(e1, e2)
    if cls is not IntervalClass.SPACELIKE:
        return None
    dt, dr = separation(e1, e2)
    if dt == 0:
        if earlier not in ("first", "second"):
            raise ValueError("earlier must be 'first' or 'second'")
        return Fraction(1, 2) if earlier == "second" else Fraction(-1, 2)
    u = _sqrt_upper(dt * dt / _dot(dr, dr))
    v = (u + 1) / 2
    return v if dt > 0 else -v


def boost_event(e: SpacetimeEvent, v: float, axis: Union[str, Sequence[float]] = "x"
                ) -> tuple[float, float, float, float]:
    """Floating-point boost of one event; for display only."""
    if abs(v) >= 1:
        raise ValueError(f"boost speed |v| = {abs(v)} must be < 1")
    if isinstance(axis, str):
        axis = {"x": (1, 0, 0), "y": (0, 1, 0), "z": (0, 0, 1)}[axis]
    a = [float(c) for c in axis]
    norm = math.sqrt(sum(c * c for c in a))
    if norm == 0:
        raise ValueError("boost axis must be nonzero")
    n = [c / norm for c in a]
    t = float(e.t)
    r = [float(e.x), float(e.y), float(e.z)]
    v = float(v)
    gamma = 1.0 / math.sqrt(1.0 - v * v)
    r_par = sum(ri * ni for ri, ni in zip(r, n))
    t2 = gamma * (t - v * r_par)
    shift = (gamma - 1.0) * r_par - gamma * v * t
    return (t2, *(ri + shift * ni for ri, ni in zip(r, n)))


@dataclass(frozen=True)
class FrameWitness:
    """A frame in which the receiver occurs at or before one choice measurement."""

    member: str
    velocity: Fraction
    axis: Vector
    order: Order
    interval: IntervalClass


@dataclass(frozen=True)
class LIViolation:
    state: Hashable
    receiver: str
    contexts: tuple[Context, Context]
    choice_set: tuple[str, ...]
    outcome: Hashable
    values: tuple[Fraction, Fraction]
    witnesses: tuple[FrameWitness, ...]
    shared_frame: tuple[Fraction, Vector] | None = None


@dataclass(frozen=True)
class BlockedDependence:
    """A context dependence excused because a choice lies in the receiver's causal past."""

    state: Hashable
    receiver: str
    contexts: tuple[Context, Context]
    past_members: tuple[str, ...]


@dataclass(frozen=True)
class LIAuditReport:
    violations: tuple[LIViolation, ...] = field(default_factory=tuple)
    blocked: tuple[BlockedDependence, ...] = field(default_factory=tuple)

    @property
    def passes_necessary_condition(self) -> bool:
        return not self.violations

    def violating_states(self) -> set:
        return {v.state for v in self.violations}


def _frame_for(choice: SpacetimeEvent, receiver: SpacetimeEvent, member: str
               ) -> FrameWitness | None:
    _, cls = interval_classify(choice, receiver)
    dt, dr = separation(choice, receiver)
    if cls is not IntervalClass.SPACELIKE:
        if dt > 0:
            return None
        return FrameWitness(member, Fraction(0), dr, temporal_order(choice, receiver, 0), cls)
    v = Fraction(0) if dt < 0 else find_order_reversing_velocity(choice, receiver)
    return FrameWitness(member, v, dr, temporal_order(choice, receiver, v), cls)


def _shared_frame(tag: SpacetimeTag, receiver: str, witnesses: Sequence[FrameWitness]):
    boosted = [w for w in witnesses if w.velocity != 0]
    if not boosted:
        return Fraction(0), (Fraction(0),) * 3
    axis = boosted[0].axis
    v = max(w.velocity for w in boosted)
    for w in witnesses:
        if boosted_order(tag[w.member], tag[receiver], v, axis) is Order.AFTER:
            return None
    return v, axis


def li_audit(hvm: HiddenVariableModel, tag: SpacetimeTag) -> LIAuditReport:
    """Flag context dependences that temporal causality forbids in some frame.

    A per-state dependence of receiver ``A_i`` on the context is a violation
    when every measurement that differs between the two contexts can be placed
    at or after ``A_i`` in some inertial frame.
    """
    missing = [x for x in hvm.scenario.measurements if x not in tag]
    if missing:
        raise ValueError(f"no spacetime coordinates for {missing}")
    violations, blocked = [], []
    for dep in context_dependences(hvm):
        ca, cb = dep.contexts
        choice = tuple(x for x in hvm.scenario.measurements
                       if (x in ca) != (x in cb) and x != dep.measurement)
        witnesses, past = [], []
        for d in choice:
            w = _frame_for(tag[d], tag[dep.measurement], d)
            if w is None:
                past.append(d)
            else:
                witnesses.append(w)
        if past:
            blocked.append(BlockedDependence(dep.state, dep.measurement, dep.contexts,
                                             tuple(past)))
            continue
        violations.append(LIViolation(
            dep.state, dep.measurement, dep.contexts, choice, dep.outcome, dep.values,
            tuple(witnesses), _shared_frame(tag, dep.measurement, witnesses)))
    return LIAuditReport(tuple(violations), tuple(blocked))
