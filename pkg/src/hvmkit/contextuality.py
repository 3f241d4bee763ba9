"""Deciding contextuality and synthesizing equivalent hidden variables models.

An empirical model is non-contextual exactly when some joint distribution
over all measurements projects onto every context table. That question is a
linear feasibility problem over one unknown per full outcome assignment; the
exact solver either hands back such a joint or a Farkas vector refuting it.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Union

from .hvm import HiddenVariableModel
from .rational import (DEFAULT_MAX_VARIABLES, CapacityError, Feasible, Infeasible,
                       LinearSystem, solve_feasibility, verify_certificate)
from .scenario import Context, EmpiricalModel, Outcome, marginalize


@dataclass(frozen=True)
class JointSystem:
    """The marginal-problem equations of an EM, with row and column labels.

    ``rows[k]`` is ``(context, outcome)`` for a table constraint or
    ``(None, ())`` for the normalization row, which always comes last.
    """

    system: LinearSystem
    variables: tuple[Outcome, ...]
    rows: tuple[tuple[Context | None, Outcome], ...]

    def row(self, context, outcome) -> tuple[tuple[Fraction, ...], Fraction]:
        k = self.rows.index((tuple(context), tuple(outcome)))
        return self.system.A[k], self.system.b[k]


def build_joint_system(em: EmpiricalModel,
                       max_variables: int = DEFAULT_MAX_VARIABLES) -> JointSystem:
    scenario = em.scenario
    size = prod(len(scenario.outcomes[x]) for x in scenario.measurements)
    if size > max_variables:
        raise CapacityError(f"{size} joint outcomes exceeds the cap of {max_variables}")
    variables = scenario.outcome_tuples(scenario.measurements)
    A, b, rows = [], [], []
    for c in scenario.contexts:
        pos = [scenario.index(x) for x in c]
        lookup = {t: k for k, t in enumerate(scenario.outcome_tuples(c))}
        block = [[0] * len(variables) for _ in lookup]
        for j, full in enumerate(variables):
            block[lookup[tuple(full[p] for p in pos)]][j] = 1
        for t, k in lookup.items():
            A.append(block[k])
            b.append(em.tables[c][t])
            rows.append((c, t))
    A.append([1] * len(variables))
    b.append(Fraction(1))
    rows.append((None, ()))
    return JointSystem(LinearSystem(A, b, n_vars=len(variables)),
                       tuple(variables), tuple(rows))


@dataclass(frozen=True)
class GlobalJoint:
    measurements: tuple[str, ...]
    distribution: dict[Outcome, Fraction]

    def support(self) -> list[Outcome]:
        return [t for t, p in self.distribution.items() if p > 0]

    def project(self, context: Context) -> dict[Outcome, Fraction]:
        return marginalize(self.distribution, self.measurements, context)

    def reproduces(self, em: EmpiricalModel) -> bool:
        if any(p < 0 for p in self.distribution.values()):
            return False
        if sum(self.distribution.values(), Fraction(0)) != 1:
            return False
        for c in em.scenario.contexts:
            proj = self.project(c)
            if any(proj.get(t, 0) != p for t, p in em.tables[c].items()):
                return False
        return True


@dataclass(frozen=True)
class NonContextual:
    joint: GlobalJoint

    contextual = False


@dataclass(frozen=True)
class Contextual:
    """Contextuality proof: Farkas vector over the rows of ``equations``."""

    certificate: Infeasible
    equations: JointSystem

    contextual = True

    def verifies(self) -> bool:
        return verify_certificate(self.equations.system, self.certificate)

    def weighted_rows(self) -> list[tuple[Context | None, Outcome, Fraction]]:
        """Nonzero certificate weights paired with the constraint they scale."""
        return [(c, t, y) for (c, t), y in zip(self.equations.rows, self.certificate.y) if y]


ContextualityVerdict = Union[NonContextual, Contextual]


def decide_contextuality(em: EmpiricalModel,
                         max_variables: int = DEFAULT_MAX_VARIABLES) -> ContextualityVerdict:
    js = build_joint_system(em, max_variables)
    result = solve_feasibility(js.system, max_variables)
    if isinstance(result, Feasible):
        dist = dict(zip(js.variables, result.x))
        return NonContextual(GlobalJoint(em.scenario.measurements, dist))
    return Contextual(result, js)


def synthesize_sd_hvm(em: EmpiricalModel, joint: GlobalJoint) -> HiddenVariableModel:
    """Strongly deterministic HVM whose states are the joint's support points."""
    if joint.measurements != em.scenario.measurements or not joint.reproduces(em):
        raise ValueError("joint distribution does not reproduce the empirical model")
    scenario = em.scenario
    support = sorted(joint.support(), key=lambda t: [
        scenario.outcomes[x].index(o) for x, o in zip(scenario.measurements, t)])
    states = tuple(str(k) for k in range(len(support)))
    prior = {s: joint.distribution[a] for s, a in zip(states, support)}
    conditionals = {}
    for s, assignment in zip(states, support):
        for c in scenario.contexts:
            t = tuple(assignment[scenario.index(x)] for x in c)
            conditionals[(c, s)] = {t: Fraction(1)}
    return HiddenVariableModel(scenario, states, prior, conditionals)


def synthesize_wd_hvm(em: EmpiricalModel,
                      max_states: int = DEFAULT_MAX_VARIABLES) -> HiddenVariableModel:
    """Weakly deterministic HVM from the independent product of context tables.

    States are tuples picking one supported outcome per context; the prior is
    the product of the chosen entries, so each context marginal is its table.
    """
    scenario = em.scenario
    supports = [[t for t, p in em.tables[c].items() if p > 0] for c in scenario.contexts]
    n = prod(len(s) for s in supports)
    if n > max_states:
        raise CapacityError(f"{n} product states exceeds the cap of {max_states}")
    states, prior, conditionals = [], {}, {}
    for k, choice in enumerate(itertools.product(*supports)):
        s = str(k)
        states.append(s)
        prior[s] = prod((em.tables[c][t] for c, t in zip(scenario.contexts, choice)),
                        start=Fraction(1))
        for c, t in zip(scenario.contexts, choice):
            conditionals[(c, s)] = {t: Fraction(1)}
    return HiddenVariableModel(scenario, tuple(states), prior, conditionals)


@dataclass(frozen=True)
class Classification:
    label: str
    evidence: ContextualityVerdict

    @property
    def classical(self) -> bool:
        return self.label == "Classical"


def classify(em: EmpiricalModel) -> Classification:
    verdict = decide_contextuality(em)
    return Classification("NonClassical" if verdict.contextual else "Classical", verdict)


class ScenarioShapeError(ValueError):
    """The contexts are not the complete set of pairs between two families."""


def bipartite_families(em: EmpiricalModel) -> tuple[tuple[str, ...], tuple[str, ...]]:
    scenario = em.scenario
    contexts = scenario.contexts
    if not contexts or any(len(c) != 2 for c in contexts):
        raise ScenarioShapeError("every context must be a pair {A_i, B_j}")
    a0, b0 = contexts[0]
    left = {x for c in contexts for x in c if b0 in c and x != b0}
    right = {x for c in contexts for x in c if a0 in c and x != a0}
    if left & right or left | right != set(scenario.measurements):
        raise ScenarioShapeError("measurements do not split into two families")
    pairs = {frozenset(c) for c in contexts}
    expected = {frozenset((a, b)) for a in left for b in right}
    if pairs != expected:
        raise ScenarioShapeError("contexts are not the complete pairing of the two families")
    order = scenario.measurements.index
    return tuple(sorted(left, key=order)), tuple(sorted(right, key=order))


@dataclass(frozen=True)
class CommonCauseDecision:
    exists: bool
    families: tuple[tuple[str, ...], tuple[str, ...]]
    verdict: ContextualityVerdict
    no_conspiracy: str = "structural: one prior shared by every pair"


def decide_common_cause_system(em: EmpiricalModel) -> CommonCauseDecision:
    """A no-conspiracy common cause system exists iff the pair model is non-contextual."""
    families = bipartite_families(em)
    verdict = decide_contextuality(em)
    return CommonCauseDecision(not verdict.contextual, families, verdict)
