"""Measurement scenarios and empirical models.

A scenario fixes the measurements, their outcome labels and the cover of
contexts (jointly performable subsets). An empirical model attaches one
probability table per context. Contexts are stored in the canonical order
of measurement declaration, and outcome tuples follow that order.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

Context = tuple[str, ...]
Outcome = tuple[Hashable, ...]
Table = dict[Outcome, Fraction]

VIOLATION_KINDS = ("cover", "antichain", "negativity", "normalization", "consistency")


@dataclass(frozen=True)
class MeasurementScenario:
    measurements: tuple[str, ...]
    outcomes: Mapping[str, tuple[Hashable, ...]]
    contexts: tuple[Context, ...]

    def __init__(self, measurements: Sequence[str],
                 outcomes: Mapping[str, Sequence[Hashable]],
                 contexts: Iterable[Iterable[str]]):
        measurements = tuple(measurements)
        if len(set(measurements)) != len(measurements):
            raise ValueError(f"duplicate measurement in {measurements}")
        missing = [x for x in measurements if x not in outcomes]
        if missing:
            raise ValueError(f"no outcome set for measurements {missing}")
        extra = [x for x in outcomes if x not in measurements]
        if extra:
            raise ValueError(f"outcomes given for undeclared measurements {extra}")
        outs = {}
        for x in measurements:
            labels = tuple(outcomes[x])
            if not labels:
                raise ValueError(f"measurement {x!r} has an empty outcome set")
            if len(set(labels)) != len(labels):
                raise ValueError(f"duplicate outcome label for measurement {x!r}")
            outs[x] = labels
        order = {x: i for i, x in enumerate(measurements)}
        canon = []
        for ctx in contexts:
            ctx = tuple(ctx)
            unknown = [x for x in ctx if x not in order]
            if unknown:
                raise ValueError(f"context {ctx} names unknown measurements {unknown}")
            if len(set(ctx)) != len(ctx):
                raise ValueError(f"context {ctx} repeats a measurement")
            c = tuple(sorted(ctx, key=order.__getitem__))
            if c in canon:
                raise ValueError(f"duplicate context {c}")
            canon.append(c)
        object.__setattr__(self, "measurements", measurements)
        object.__setattr__(self, "outcomes", outs)
        object.__setattr__(self, "contexts", tuple(canon))

    def index(self, measurement: str) -> int:
        return self.measurements.index(measurement)

    def canonical(self, names: Iterable[str]) -> Context:
        """Order measurement names by declaration order."""
        return tuple(sorted(names, key=self.measurements.index))

    def outcome_tuples(self, names: Sequence[str]) -> list[Outcome]:
        """All outcome tuples over ``names`` in lexicographic index order."""
        return list(itertools.product(*(self.outcomes[x] for x in names)))

    def context_index(self, context: Iterable[str]) -> int:
        c = self.canonical(context)
        try:
            return self.contexts.index(c)
        except ValueError:
            raise KeyError(f"unknown context {c}") from None

    def contexts_containing(self, measurement: str) -> list[Context]:
        return [c for c in self.contexts if measurement in c]


_ZERO = Fraction(0)


def densify(scenario: MeasurementScenario, context: Context,
            table: Mapping[Outcome, object]) -> Table:
    """Complete a sparse table with explicit zeros; reject unknown tuples."""
    tuples = scenario.outcome_tuples(context)
    known = set(tuples)
    for key in table:
        if tuple(key) not in known:
            raise ValueError(f"outcome {key!r} is not valid for context {context}")
    out = {}
    for t in tuples:
        v = table.get(t, _ZERO)
        out[t] = v if type(v) is Fraction else Fraction(v)
    return out


@dataclass(frozen=True)
class EmpiricalModel:
    scenario: MeasurementScenario
    tables: Mapping[Context, Table]

    def __post_init__(self):
        given = {}
        for ctx, table in self.tables.items():
            c = self.scenario.canonical(ctx)
            if c not in self.scenario.contexts:
                raise ValueError(f"table for undeclared context {tuple(ctx)}")
            if tuple(ctx) != c:
                perm = [tuple(ctx).index(x) for x in c]
                table = {tuple(k[p] for p in perm): v for k, v in table.items()}
            given[c] = table
        dense = {c: densify(self.scenario, c, given.get(c, {}))
                 for c in self.scenario.contexts}
        object.__setattr__(self, "tables", dense)

    def table(self, context: Iterable[str]) -> Table:
        c = self.scenario.canonical(context)
        if c not in self.tables:
            raise KeyError(f"unknown context {c}")
        return self.tables[c]


def marginalize(table: Mapping[Outcome, Fraction], names: Sequence[str],
                subset: Iterable[str]) -> Table:
    """Sum a table over the measurements of ``names`` not in ``subset``.

    The result is keyed in the order the subset members appear in ``names``.
    """
    subset = set(subset)
    unknown = subset - set(names)
    if unknown:
        raise ValueError(f"{sorted(unknown)} not contained in {tuple(names)}")
    keep = [i for i, x in enumerate(names) if x in subset]
    out: Table = {}
    for key, p in table.items():
        k = tuple(key[i] for i in keep)
        if k not in out:
            out[k] = p
        elif p:
            out[k] += p
    return out


def marginal(em: EmpiricalModel, context: Iterable[str], subset: Iterable[str]) -> Table:
    """Marginal of a context table on ``subset``, keyed in declaration order."""
    c = em.scenario.canonical(context)
    if c not in em.tables:
        raise KeyError(f"unknown context {c}")
    return marginalize(em.tables[c], c, subset)


@dataclass(frozen=True)
class Violation:
    kind: str
    location: tuple
    details: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def valid(self) -> bool:
        return not self.violations

    def by_kind(self, kind: str) -> list[Violation]:
        return [v for v in self.violations if v.kind == kind]


@dataclass(frozen=True)
class MarginalWitness:
    """Two contexts disagreeing on the marginal of their shared measurements."""

    subset: Context
    contexts: tuple[Context, Context]
    outcome: Outcome
    values: tuple[Fraction, Fraction]


def no_signaling_witnesses(em: EmpiricalModel) -> list[MarginalWitness]:
    scenario = em.scenario
    found = []
    for (i, ca), (j, cb) in itertools.combinations(enumerate(scenario.contexts), 2):
        shared = scenario.canonical(set(ca) & set(cb))
        if not shared:
            continue
        ma = marginalize(em.tables[ca], ca, shared)
        mb = marginalize(em.tables[cb], cb, shared)
        for t in scenario.outcome_tuples(shared):
            pa, pb = ma.get(t, Fraction(0)), mb.get(t, Fraction(0))
            if pa != pb:
                found.append(MarginalWitness(shared, (ca, cb), t, (pa, pb)))
    return found


def validate_em(em: EmpiricalModel) -> ValidationReport:
    """List every structural and probabilistic violation of an empirical model."""
    scenario = em.scenario
    violations = []
    covered = set().union(*scenario.contexts) if scenario.contexts else set()
    for x in scenario.measurements:
        if x not in covered:
            violations.append(Violation("cover", (x,), f"measurement {x} is in no context"))
    for ca, cb in itertools.permutations(scenario.contexts, 2):
        if set(ca) <= set(cb):
            violations.append(Violation("antichain", (ca, cb),
                                        f"context {ca} is contained in {cb}"))
    for c in scenario.contexts:
        table = em.tables[c]
        for t, p in table.items():
            if p < 0:
                violations.append(Violation("negativity", (c, t), f"P{c}{t} = {p} < 0"))
        total = sum(table.values(), Fraction(0))
        if total != 1:
            violations.append(Violation("normalization", (c,),
                                        f"table for {c} sums to {total}"))
    for w in no_signaling_witnesses(em):
        violations.append(Violation(
            "consistency", (w.subset, w.contexts, w.outcome),
            f"marginal on {w.subset} at {w.outcome}: {w.values[0]} under {w.contexts[0]}"
            f" vs {w.values[1]} under {w.contexts[1]}"))
    return ValidationReport(tuple(violations))
