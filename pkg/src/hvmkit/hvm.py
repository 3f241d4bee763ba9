"""Hidden variables models and their property checkers.

An HVM shares the scenario of an empirical model and adds a finite state
space with a single prior and one conditional table per (context, state).
The prior does not depend on the context, so lambda-independence holds by
construction.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

from .scenario import (Context, EmpiricalModel, MeasurementScenario, Outcome, Table,
                       densify)

PROPERTIES = ("SD", "WD", "PI", "OI", "BellLocal")


@dataclass(frozen=True)
class HiddenVariableModel:
    scenario: MeasurementScenario
    states: tuple[Hashable, ...]
    prior: Mapping[Hashable, Fraction]
    conditionals: Mapping[tuple[Context, Hashable], Table]

    def __post_init__(self):
        states = tuple(self.states)
        if len(set(states)) != len(states):
            raise ValueError("duplicate state identifiers")
        unknown = [s for s in self.prior if s not in states]
        if unknown:
            raise ValueError(f"prior names unknown states {unknown}")
        prior = {s: Fraction(self.prior.get(s, 0)) for s in states}
        given = {}
        for (ctx, s), table in self.conditionals.items():
            c = self.scenario.canonical(ctx)
            if c not in self.scenario.contexts:
                raise ValueError(f"conditional for undeclared context {tuple(ctx)}")
            if s not in prior:
                raise ValueError(f"conditional for unknown state {s!r}")
            if tuple(ctx) != c:
                perm = [tuple(ctx).index(x) for x in c]
                table = {tuple(k[p] for p in perm): v for k, v in table.items()}
            given[(c, s)] = table
        dense = {(c, s): densify(self.scenario, c, given.get((c, s), {}))
                 for s in states for c in self.scenario.contexts}
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "prior", prior)
        object.__setattr__(self, "conditionals", dense)

    def conditional(self, context: Iterable[str], state: Hashable) -> Table:
        return self.conditionals[(self.scenario.canonical(context), state)]

    def problems(self) -> list[str]:
        """Reasons this HVM is malformed (negative or unnormalized tables)."""
        out = []
        if any(p < 0 for p in self.prior.values()):
            out.append("prior has a negative entry")
        total = sum(self.prior.values(), Fraction(0))
        if total != 1:
            out.append(f"prior sums to {total}")
        for (c, s), table in self.conditionals.items():
            if any(p < 0 for p in table.values()):
                out.append(f"conditional {c} | {s} has a negative entry")
            t = sum(table.values(), Fraction(0))
            if t != 1:
                out.append(f"conditional {c} | {s} sums to {t}")
        return out

    def restricted(self, states: Iterable[Hashable]) -> "HiddenVariableModel":
        """Sub-model on ``states`` with the prior renormalized."""
        keep = [s for s in self.states if s in set(states)]
        mass = sum((self.prior[s] for s in keep), Fraction(0))
        if mass == 0:
            raise ValueError("restriction carries zero prior mass")
        return HiddenVariableModel(
            self.scenario, tuple(keep), {s: self.prior[s] / mass for s in keep},
            {(c, s): t for (c, s), t in self.conditionals.items() if s in keep})


def induced_em(hvm: HiddenVariableModel) -> EmpiricalModel:
    tables = {}
    for c in hvm.scenario.contexts:
        acc = {t: Fraction(0) for t in hvm.scenario.outcome_tuples(c)}
        for s in hvm.states:
            w = hvm.prior[s]
            if not w:
                continue
            for t, p in hvm.conditionals[(c, s)].items():
                if p:
                    acc[t] += w * p
        tables[c] = acc
    return EmpiricalModel(hvm.scenario, tables)


@dataclass(frozen=True)
class Difference:
    context: Context
    outcome: Outcome
    hvm_value: Fraction
    em_value: Fraction


def is_equivalent(hvm: HiddenVariableModel, em: EmpiricalModel) -> tuple[bool, Difference | None]:
    """Exact equivalence plus the first differing entry, if any."""
    if hvm.scenario != em.scenario:
        raise ValueError("HVM and EM are defined on different scenarios")
    induced = induced_em(hvm)
    for c in em.scenario.contexts:
        for t in em.scenario.outcome_tuples(c):
            a, b = induced.tables[c][t], em.tables[c][t]
            if a != b:
                return False, Difference(c, t, a, b)
    return True, None


@dataclass(frozen=True)
class PropertyReport:
    property: str
    witnesses: tuple = field(default_factory=tuple)

    @property
    def holds(self) -> bool:
        return not self.witnesses


@dataclass(frozen=True)
class NotDeterminedWitness:
    """A conditional table (WD) or single-measurement marginal (SD) with no point mass."""

    state: Hashable
    context: Context
    measurement: str | None
    distribution: Table


@dataclass(frozen=True)
class ContextDependenceWitness:
    """The same measurement's marginal differs between two contexts in one state."""

    state: Hashable
    measurement: str
    contexts: tuple[Context, Context]
    outcome: Hashable
    values: tuple[Fraction, Fraction]
    marginals: tuple[Table, Table]


@dataclass(frozen=True)
class FactorizationWitness:
    state: Hashable
    context: Context
    outcome: Outcome
    joint: Fraction
    product: Fraction


def _point_mass(table: Table):
    hits = [t for t, p in table.items() if p == 1]
    return hits[0] if len(hits) == 1 and sum(table.values()) == 1 else None


def _single_marginals(hvm: HiddenVariableModel, context: Context, state) -> dict[str, Table]:
    margs = {x: dict.fromkeys(hvm.scenario.outcomes[x], Fraction(0)) for x in context}
    for t, p in hvm.conditionals[(context, state)].items():
        if p:
            for x, o in zip(context, t):
                margs[x][o] += p
    return margs


def check_weak_determinism(hvm: HiddenVariableModel) -> PropertyReport:
    witnesses = []
    for s in hvm.states:
        for c in hvm.scenario.contexts:
            table = hvm.conditionals[(c, s)]
            if _point_mass(table) is None:
                witnesses.append(NotDeterminedWitness(s, c, None, dict(table)))
    return PropertyReport("WD", tuple(witnesses))


def check_strong_determinism(hvm: HiddenVariableModel) -> PropertyReport:
    """Every state fixes one outcome per measurement, the same in every context."""
    scenario = hvm.scenario
    witnesses = []
    for s in hvm.states:
        margs = {c: _single_marginals(hvm, c, s) for c in scenario.contexts}
        for x in scenario.measurements:
            ctxs = scenario.contexts_containing(x)
            values = {}
            for c in ctxs:
                m = margs[c][x]
                v = _point_mass({(k,): p for k, p in m.items()})
                if v is None:
                    witnesses.append(NotDeterminedWitness(s, c, x, m))
                else:
                    values[c] = v[0]
            for ca, cb in itertools.combinations(ctxs, 2):
                if ca in values and cb in values and values[ca] != values[cb]:
                    ma, mb = margs[ca][x], margs[cb][x]
                    o = values[ca]
                    witnesses.append(ContextDependenceWitness(
                        s, x, (ca, cb), o, (ma[o], mb[o]), (ma, mb)))
    return PropertyReport("SD", tuple(witnesses))


def context_dependences(hvm: HiddenVariableModel) -> list[ContextDependenceWitness]:
    scenario = hvm.scenario
    found = []
    for s in hvm.states:
        margs = {c: _single_marginals(hvm, c, s) for c in scenario.contexts}
        for x in scenario.measurements:
            for ca, cb in itertools.combinations(scenario.contexts_containing(x), 2):
                ma, mb = margs[ca][x], margs[cb][x]
                for o in scenario.outcomes[x]:
                    if ma[o] != mb[o]:
                        found.append(ContextDependenceWitness(
                            s, x, (ca, cb), o, (ma[o], mb[o]), (ma, mb)))
                        break
    return found


def check_parameter_independence(hvm: HiddenVariableModel) -> PropertyReport:
    """One witness per (state, measurement, context pair) whose marginals differ."""
    return PropertyReport("PI", tuple(context_dependences(hvm)))


def check_outcome_independence(hvm: HiddenVariableModel) -> PropertyReport:
    witnesses = []
    for s in hvm.states:
        for c in hvm.scenario.contexts:
            table = hvm.conditionals[(c, s)]
            margs = _single_marginals(hvm, c, s)
            for t, p in table.items():
                prod = Fraction(1)
                for x, o in zip(c, t):
                    prod *= margs[x][o]
                if p != prod:
                    witnesses.append(FactorizationWitness(s, c, t, p, prod))
    return PropertyReport("OI", tuple(witnesses))


def check_bell_locality(hvm: HiddenVariableModel) -> PropertyReport:
    pi = check_parameter_independence(hvm)
    oi = check_outcome_independence(hvm)
    return PropertyReport("BellLocal", pi.witnesses + oi.witnesses)


def all_properties(hvm: HiddenVariableModel) -> dict[str, PropertyReport]:
    pi = check_parameter_independence(hvm)
    oi = check_outcome_independence(hvm)
    return {
        "SD": check_strong_determinism(hvm),
        "WD": check_weak_determinism(hvm),
        "PI": pi,
        "OI": oi,
        "BellLocal": PropertyReport("BellLocal", pi.witnesses + oi.witnesses),
    }


@dataclass(frozen=True)
class SignalingWitness:
    state: Hashable
    receiver: str
    contexts: tuple[Context, Context]
    outcome: Hashable
    values: tuple[Fraction, Fraction]
    marginals: tuple[Table, Table]

    @property
    def choices(self) -> tuple[Context, Context]:
        """Measurements the sender picks between (context minus the receiver)."""
        return tuple(tuple(x for x in c if x != self.receiver) for c in self.contexts)

    def deterministic_outcomes(self) -> tuple[Hashable | None, Hashable | None]:
        """Receiver outcome forced with probability 1 under each context, if any."""
        out = []
        for m in self.marginals:
            sure = [o for o, p in m.items() if p == 1]
            out.append(sure[0] if sure else None)
        return tuple(out)


def describe_protocol(w: SignalingWitness) -> str:
    (ca, cb), (sa, sb) = w.contexts, w.choices
    da, db = w.deterministic_outcomes()
    choice = f"{_join(sa)} / {_join(sb)}"
    if da is not None and db is not None:
        return (f"In state {w.state}, the sender can transmit the bit {da}/{db} to the "
                f"receiver measuring {w.receiver} by choosing to measure {choice} "
                f"respectively (contexts {_join(ca)} / {_join(cb)}).")
    return (f"In state {w.state}, choosing {choice} shifts P({w.receiver}={w.outcome}) "
            f"from {w.values[0]} to {w.values[1]} for the receiver measuring {w.receiver} "
            f"(contexts {_join(ca)} / {_join(cb)}).")


def _join(names: Sequence[str]) -> str:
    return "".join(names) if all(len(n) <= 2 for n in names) else ",".join(names)


def find_signaling_states(hvm: HiddenVariableModel) -> tuple[list[SignalingWitness], str]:
    witnesses = [SignalingWitness(w.state, w.measurement, w.contexts, w.outcome,
                                  w.values, w.marginals)
                 for w in context_dependences(hvm)]
    text = "\n".join(describe_protocol(w) for w in witnesses)
    return witnesses, text or "No state allows signaling."
