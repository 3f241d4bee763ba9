"""Exact rational arithmetic and linear feasibility with certificates.

Probabilities everywhere in the package are :class:`fractions.Fraction`
values. The feasibility solver decides ``{A x = b, x >= 0}`` with a
phase-1 simplex under Bland's rule and returns either a witness ``x`` or a
Farkas vector ``y`` with ``y^T A >= 0`` and ``y^T b < 0``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence, Union

Rational = Fraction

DEFAULT_MAX_VARIABLES = 2 ** 20

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


class CapacityError(ValueError):
    """Raised when a problem exceeds the configured variable cap."""


def parse_rational(text: Union[str, int]) -> Fraction:
    """Parse ``"p/q"`` or ``"n"`` into a Fraction; floats are rejected."""
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"not a rational string: {text!r}")
    match = _RATIONAL_RE.match(text)
    if match is None:
        raise ValueError(f"malformed rational {text!r} (expected 'p/q' or 'n')")
    num, den = match.groups()
    if den is not None and int(den) == 0:
        raise ValueError(f"malformed rational {text!r}: zero denominator")
    return Fraction(int(num), int(den) if den is not None else 1)


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class LinearSystem:
    """Equality system ``A x = b`` with the implicit bound ``x >= 0``."""

    A: tuple[tuple[Fraction, ...], ...]
    b: tuple[Fraction, ...]
    n_vars: int

    def __init__(self, A: Sequence[Sequence], b: Sequence, n_vars: int | None = None):
        rows = tuple(tuple(Fraction(v) for v in row) for row in A)
        rhs = tuple(Fraction(v) for v in b)
        if len(rows) != len(rhs):
            raise ValueError(f"A has {len(rows)} rows but b has {len(rhs)} entries")
        if n_vars is None:
            if not rows:
                raise ValueError("n_vars is required for a system without rows")
            n_vars = len(rows[0])
        for i, row in enumerate(rows):
            if len(row) != n_vars:
                raise ValueError(f"row {i} has {len(row)} columns, expected {n_vars}")
        object.__setattr__(self, "A", rows)
        object.__setattr__(self, "b", rhs)
        object.__setattr__(self, "n_vars", n_vars)

    @property
    def n_rows(self) -> int:
        return len(self.b)


@dataclass(frozen=True)
class Feasible:
    x: tuple[Fraction, ...]

    feasible = True


@dataclass(frozen=True)
class Infeasible:
    """Farkas certificate: ``y^T A >= 0`` componentwise and ``y^T b < 0``."""

    y: tuple[Fraction, ...]

    feasible = False


FeasibilityResult = Union[Feasible, Infeasible]


def _dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v) if a and b), Fraction(0))


def _integer_scaled(y: list[Fraction]) -> tuple[Fraction, ...]:
    # Positive rescaling keeps the Farkas inequalities intact.
    den = 1
    for v in y:
        den = den * v.denominator // gcd(den, v.denominator)
    ints = [int(v * den) for v in y]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    g = g or 1
    return tuple(Fraction(v // g) for v in ints)


def solve_feasibility(system: LinearSystem,
                      max_variables: int = DEFAULT_MAX_VARIABLES) -> FeasibilityResult:
    """Decide feasibility of ``A x = b, x >= 0`` exactly.

    Phase-1 simplex on artificials with Bland's lowest-index rule. When the
    phase-1 optimum is positive, the Farkas vector is read from the final
    reduced costs of the artificial columns.
    """
    n, m = system.n_vars, system.n_rows
    if n > max_variables:
        raise CapacityError(f"{n} variables exceeds the cap of {max_variables}")

    signs = [-1 if v < 0 else 1 for v in system.b]
    width = n + m + 1
    tab: list[list[Fraction]] = []
    for i in range(m):
        row = [signs[i] * v for v in system.A[i]]
        row.extend(Fraction(1 if k == i else 0) for k in range(m))
        row.append(signs[i] * system.b[i])
        tab.append(row)
    basis = [n + i for i in range(m)]

    # Reduced-cost row of the phase-1 objective (sum of artificials).
    z = [Fraction(0)] * width
    for row in tab:
        for j in range(n):
            if row[j]:
                z[j] -= row[j]
        z[-1] -= row[-1]

    while True:
        enter = next((j for j in range(n + m) if z[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i, row in enumerate(tab):
            if row[enter] > 0:
                ratio = row[-1] / row[enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            # Phase-1 objective is bounded below by zero.
            raise AssertionError("phase-1 simplex reported unbounded")
        _pivot(tab, z, leave, enter)
        basis[leave] = enter

    if z[-1] < 0:
        u = [1 - z[n + i] for i in range(m)]
        y = [-signs[i] * u[i] for i in range(m)]
        return Infeasible(_integer_scaled(y))

    x = [Fraction(0)] * n
    for i, var in enumerate(basis):
        if var < n:
            x[var] = tab[i][-1]
    return Feasible(tuple(x))


def _pivot(tab: list[list[Fraction]], z: list[Fraction], r: int, c: int) -> None:
    prow = tab[r]
    piv = prow[c]
    if piv != 1:
        prow[:] = [v / piv if v else v for v in prow]
    nz = [j for j, v in enumerate(prow) if v]
    for k, row in enumerate(tab):
        if k == r:
            continue
        f = row[c]
        if f:
            for j in nz:
                row[j] -= f * prow[j]
    f = z[c]
    if f:
        for j in nz:
            z[j] -= f * prow[j]


def verify_certificate(system: LinearSystem, result: FeasibilityResult) -> bool:
    """Check a feasibility result against its defining conditions exactly."""
    if isinstance(result, Feasible):
        x = result.x
        if len(x) != system.n_vars or any(v < 0 for v in x):
            return False
        return all(_dot(row, x) == rhs for row, rhs in zip(system.A, system.b))
    if isinstance(result, Infeasible):
        y = result.y
        if len(y) != system.n_rows:
            return False
        for j in range(system.n_vars):
            if sum((y[i] * system.A[i][j] for i in range(system.n_rows)), Fraction(0)) < 0:
                return False
        return _dot(y, system.b) < 0
    return False
