"""Seeded random generators for scenarios, empirical models and HVMs.

Used by the property tests and by ``hvmkit generate``. All randomness goes
through a caller-supplied :class:`random.Random`.
"""
from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .contextuality import GlobalJoint
from .hvm import HiddenVariableModel
from .scenario import EmpiricalModel, MeasurementScenario


def random_scenario(rng: random.Random, max_measurements: int = 4,
                    max_outcomes: int = 3, max_context_size: int = 3) -> MeasurementScenario:
    k = rng.randint(2, max_measurements)
    names = [f"M{i}" for i in range(k)]
    outcomes = {x: [str(o) for o in range(rng.randint(2, max_outcomes))] for x in names}
    candidates = set()
    for _ in range(rng.randint(1, 4)):
        size = rng.randint(2, min(max_context_size, k))
        candidates.add(frozenset(rng.sample(names, size)))
    maximal = [c for c in candidates if not any(c < d for d in candidates)]
    covered = set().union(*maximal)
    contexts = [sorted(c) for c in sorted(maximal, key=sorted)]
    contexts += [[x] for x in names if x not in covered]
    return MeasurementScenario(names, outcomes, contexts)


def bell_scenario(n_a: int = 2, n_b: int = 2, n_outcomes: int = 2) -> MeasurementScenario:
    a = [f"A{i}" for i in range(n_a)]
    b = [f"B{j}" for j in range(n_b)]
    labels = [str(o) for o in range(n_outcomes)]
    return MeasurementScenario(a + b, {x: labels for x in a + b},
                               [(x, y) for x in a for y in b])


def random_distribution(rng: random.Random, keys, max_weight: int = 6,
                        sparsity: float = 0.0) -> dict:
    keys = list(keys)
    weights = [0 if rng.random() < sparsity else rng.randint(0, max_weight) for _ in keys]
    if not any(weights):
        weights[rng.randrange(len(keys))] = 1
    total = sum(weights)
    return {k: Fraction(w, total) for k, w in zip(keys, weights) if w}


def random_joint(rng: random.Random, scenario: MeasurementScenario) -> GlobalJoint:
    keys = scenario.outcome_tuples(scenario.measurements)
    dist = random_distribution(rng, keys, sparsity=0.5)
    return GlobalJoint(scenario.measurements, {k: dist.get(k, Fraction(0)) for k in keys})


def project(joint: GlobalJoint, scenario: MeasurementScenario) -> EmpiricalModel:
    return EmpiricalModel(scenario, {c: joint.project(c) for c in scenario.contexts})


def random_classical_em(rng: random.Random, scenario: MeasurementScenario | None = None
                        ) -> EmpiricalModel:
    """Project a hidden joint onto the contexts; always consistent and non-contextual."""
    scenario = scenario or random_scenario(rng)
    return project(random_joint(rng, scenario), scenario)


def perturbed_em(rng: random.Random, em: EmpiricalModel, attempts: int = 20) -> EmpiricalModel:
    """Move mass inside one context without touching any shared marginal.

    The move adds ``+e`` at (x, y), (x', y') and ``-e`` at (x, y'), (x', y)
    for two measurements X, Y of the context that no other context contains
    together, so every marginal over a strict sub-pair is preserved.
    """
    scenario = em.scenario
    for _ in range(attempts):
        c = rng.choice(scenario.contexts)
        if len(c) < 2:
            continue
        X, Y = rng.sample(c, 2)
        if any(X in d and Y in d for d in scenario.contexts if d != c):
            continue
        x, x2 = rng.sample(scenario.outcomes[X], 2)
        y, y2 = rng.sample(scenario.outcomes[Y], 2)
        rest = {x_: rng.choice(scenario.outcomes[x_]) for x_ in c if x_ not in (X, Y)}

        def key(ox, oy):
            vals = {**rest, X: ox, Y: oy}
            return tuple(vals[m] for m in c)

        table = dict(em.tables[c])
        plus, minus = [key(x, y), key(x2, y2)], [key(x, y2), key(x2, y)]
        room = min(table[k] for k in minus)
        if room == 0:
            continue
        eps = room * Fraction(rng.randint(1, 4), 4)
        for k in plus:
            table[k] += eps
        for k in minus:
            table[k] -= eps
        return EmpiricalModel(scenario, {**em.tables, c: table})
    return em


def _prior(rng: random.Random, states, max_denominator: int = 24) -> dict:
    den = rng.randint(len(states), max_denominator)
    cuts = sorted(rng.randint(0, den) for _ in range(len(states) - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [den])]
    return {s: Fraction(p, den) for s, p in zip(states, parts)}


def random_hvm(rng: random.Random, scenario: MeasurementScenario | None = None,
               max_states: int = 6) -> HiddenVariableModel:
    """Random HVM mixing deterministic-assignment, point-mass and diffuse states."""
    scenario = scenario or random_scenario(rng, max_outcomes=2)
    states = tuple(str(i) for i in range(rng.randint(1, max_states)))
    conditionals = {}
    all_sd = rng.random() < 0.2
    for s in states:
        if all_sd or rng.random() < 0.3:
            assignment = {x: rng.choice(scenario.outcomes[x]) for x in scenario.measurements}
            for c in scenario.contexts:
                conditionals[(c, s)] = {tuple(assignment[x] for x in c): Fraction(1)}
            continue
        for c in scenario.contexts:
            tuples = scenario.outcome_tuples(c)
            if rng.random() < 0.5:
                conditionals[(c, s)] = {rng.choice(tuples): Fraction(1)}
            else:
                conditionals[(c, s)] = random_distribution(rng, tuples, max_weight=3)
    return HiddenVariableModel(scenario, states, _prior(rng, states), conditionals)


def random_coupling_hvm(rng: random.Random, em: EmpiricalModel, merges: int = 0
                        ) -> HiddenVariableModel:
    """Random HVM equivalent to ``em``.

    A randomized greedy coupling of the context tables gives a weakly
    deterministic model; merging random pairs of its states then blurs it
    into stochastic states without changing the induced tables.
    """
    scenario = em.scenario
    remaining = {c: dict(em.tables[c]) for c in scenario.contexts}
    choices, weights = [], []
    while True:
        pick = {}
        for c in scenario.contexts:
            live = [t for t, p in remaining[c].items() if p > 0]
            if not live:
                break
            pick[c] = rng.choice(live)
        if len(pick) < len(scenario.contexts):
            break
        w = min(remaining[c][t] for c, t in pick.items())
        for c, t in pick.items():
            remaining[c][t] -= w
        choices.append(pick)
        weights.append(w)
    groups = [[i] for i in range(len(choices))]
    for _ in range(merges):
        if len(groups) < 2:
            break
        i, j = sorted(rng.sample(range(len(groups)), 2))
        groups[i] += groups.pop(j)
    states, prior, conditionals = [], {}, {}
    for k, group in enumerate(groups):
        s = str(k)
        mass = sum(weights[i] for i in group)
        share = {i: weights[i] / mass for i in group}
        states.append(s)
        prior[s] = mass
        for c in scenario.contexts:
            table = {}
            for i in group:
                t = choices[i][c]
                table[t] = table[t] + share[i] if t in table else share[i]
            conditionals[(c, s)] = table
    return HiddenVariableModel(scenario, tuple(states), prior, conditionals)


def product_em(scenario: MeasurementScenario, marginals: dict | None = None) -> EmpiricalModel:
    """Every context table is the product of fixed single-measurement distributions."""
    if marginals is None:
        marginals = {x: {o: Fraction(1, len(scenario.outcomes[x])) for o in scenario.outcomes[x]}
                     for x in scenario.measurements}
    tables = {}
    for c in scenario.contexts:
        table = {}
        for t in itertools.product(*(scenario.outcomes[x] for x in c)):
            p = Fraction(1)
            for x, o in zip(c, t):
                p *= marginals[x][o]
            table[t] = p
        tables[c] = table
    return EmpiricalModel(scenario, tables)
