"""JSON scenario files.

One file carries an empirical model, optionally an HVM block and optionally
spacetime coordinates::

    {
      "measurements": {"A": ["1", "-1"], "B": ["1", "-1"]},
      "contexts": [["A", "B"]],
      "tables": {"A,B": {"1,-1": "1/2", "-1,1": "1/2"}},
      "hvm": {"states": ["0"], "prior": {"0": "1"},
              "conditionals": {"A,B": {"0": {"1,-1": "1/2", "-1,1": "1/2"}}}},
      "coordinates": {"A": ["0", "0", "0", "0"], "B": ["0", "1", "0", "0"]}
    }

Probabilities and coordinates are rational strings ("p/q" or "n"), never
floats. Context keys join measurement names with ","; outcome keys join
labels in the same order. Omitted outcome entries are zero.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Mapping

from .hvm import HiddenVariableModel
from .rational import format_rational, parse_rational
from .scenario import EmpiricalModel, MeasurementScenario
from .spacetime import SpacetimeEvent


class ScenarioParseError(ValueError):
    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location
        self.message = message


@dataclass(frozen=True)
class ScenarioFile:
    em: EmpiricalModel
    hvm: HiddenVariableModel | None = None
    coordinates: Mapping[str, SpacetimeEvent] | None = None

    @property
    def scenario(self) -> MeasurementScenario:
        return self.em.scenario


def _no_duplicates(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise ValueError(f"duplicate key {k!r}")
        out[k] = v
    return out


def _expect(value, kind, where):
    if not isinstance(value, kind):
        name = kind.__name__ if isinstance(kind, type) else "/".join(k.__name__ for k in kind)
        raise ScenarioParseError(where, f"expected {name}, got {type(value).__name__}")
    return value


def _rational(value, where) -> Fraction:
    try:
        return parse_rational(value)
    except ValueError as exc:
        raise ScenarioParseError(where, str(exc)) from None


def _label(value, where) -> str:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise ScenarioParseError(where, f"outcome label must be a string, got {value!r}")
    value = str(value)
    if "," in value:
        raise ScenarioParseError(where, f"label {value!r} may not contain ','")
    return value


def _context_key(scenario: MeasurementScenario, key: str, where: str) -> tuple[str, ...]:
    names = tuple(n.strip() for n in key.split(","))
    c = None
    if len(set(names)) == len(names) and all(n in scenario.outcomes for n in names):
        c = scenario.canonical(names)
    if c not in scenario.contexts:
        raise ScenarioParseError(where, f"{key!r} is not a declared context")
    return names


def _table(scenario, names, raw, where) -> dict:
    _expect(raw, dict, where)
    table = {}
    for okey, val in raw.items():
        loc = f"{where}[{okey!r}]"
        labels = tuple(s.strip() for s in okey.split(","))
        if len(labels) != len(names):
            raise ScenarioParseError(loc, f"expected {len(names)} labels for {','.join(names)}")
        for x, o in zip(names, labels):
            if o not in scenario.outcomes[x]:
                raise ScenarioParseError(loc, f"{o!r} is not an outcome of {x}")
        table[labels] = _rational(val, loc)
    return table


def from_dict(data: Mapping[str, Any]) -> ScenarioFile:
    _expect(data, dict, "$")
    unknown = set(data) - {"measurements", "contexts", "tables", "hvm", "coordinates"}
    if unknown:
        raise ScenarioParseError("$", f"unknown fields {sorted(unknown)}")
    for required in ("measurements", "contexts"):
        if required not in data:
            raise ScenarioParseError("$", f"missing field {required!r}")

    meas = _expect(data["measurements"], dict, "measurements")
    outcomes = {}
    for name, labels in meas.items():
        where = f"measurements[{name!r}]"
        if not name or "," in name:
            raise ScenarioParseError(where, "measurement names must be non-empty without ','")
        _expect(labels, list, where)
        outcomes[name] = [_label(o, f"{where}[{i}]") for i, o in enumerate(labels)]

    ctxs = _expect(data["contexts"], list, "contexts")
    contexts = []
    for i, ctx in enumerate(ctxs):
        _expect(ctx, list, f"contexts[{i}]")
        for name in ctx:
            if name not in outcomes:
                raise ScenarioParseError(f"contexts[{i}]", f"unknown measurement {name!r}")
        contexts.append(ctx)
    try:
        scenario = MeasurementScenario(list(outcomes), outcomes, contexts)
    except ValueError as exc:
        raise ScenarioParseError("contexts", str(exc)) from None

    tables = {}
    for key, raw in _expect(data.get("tables", {}), dict, "tables").items():
        where = f"tables[{key!r}]"
        names = _context_key(scenario, key, where)
        tables[names] = _table(scenario, names, raw, where)
    em = EmpiricalModel(scenario, tables)

    hvm = None
    if data.get("hvm") is not None:
        hvm = _hvm(scenario, _expect(data["hvm"], dict, "hvm"))

    coords = None
    if data.get("coordinates") is not None:
        coords = {}
        for name, vals in _expect(data["coordinates"], dict, "coordinates").items():
            where = f"coordinates[{name!r}]"
            if name not in outcomes:
                raise ScenarioParseError(where, f"unknown measurement {name!r}")
            _expect(vals, list, where)
            if len(vals) != 4:
                raise ScenarioParseError(where, "expected [t, x, y, z]")
            coords[name] = SpacetimeEvent(*(_rational(v, f"{where}[{i}]")
                                            for i, v in enumerate(vals)))
    return ScenarioFile(em, hvm, coords)


def _hvm(scenario: MeasurementScenario, block: Mapping[str, Any]) -> HiddenVariableModel:
    states = [str(_expect(s, (str, int), f"hvm.states[{i}]"))
              for i, s in enumerate(_expect(block.get("states"), list, "hvm.states"))]
    if len(set(states)) != len(states):
        raise ScenarioParseError("hvm.states", "duplicate state identifier")
    prior = {}
    for s, val in _expect(block.get("prior", {}), dict, "hvm.prior").items():
        if s not in states:
            raise ScenarioParseError(f"hvm.prior[{s!r}]", "unknown state")
        prior[s] = _rational(val, f"hvm.prior[{s!r}]")
    conditionals = {}
    for key, per_state in _expect(block.get("conditionals", {}), dict,
                                  "hvm.conditionals").items():
        where = f"hvm.conditionals[{key!r}]"
        names = _context_key(scenario, key, where)
        for s, raw in _expect(per_state, dict, where).items():
            if s not in states:
                raise ScenarioParseError(f"{where}[{s!r}]", "unknown state")
            conditionals[(names, s)] = _table(scenario, names, raw, f"{where}[{s!r}]")
    return HiddenVariableModel(scenario, tuple(states), prior, conditionals)


def parse_scenario(text: str) -> ScenarioFile:
    try:
        data = json.loads(text, object_pairs_hook=_no_duplicates)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    except ValueError as exc:
        raise ScenarioParseError("$", str(exc)) from None
    return from_dict(data)


def load_scenario(path) -> ScenarioFile:
    with open(path, encoding="utf-8") as f:
        return parse_scenario(f.read())


def _key(items) -> str:
    return ",".join(str(i) for i in items)


def _sparse(table) -> dict:
    return {_key(t): format_rational(p) for t, p in table.items() if p != 0}


def hvm_to_dict(hvm: HiddenVariableModel) -> dict:
    return {
        "states": [str(s) for s in hvm.states],
        "prior": {str(s): format_rational(hvm.prior[s]) for s in hvm.states},
        "conditionals": {
            _key(c): {str(s): _sparse(hvm.conditionals[(c, s)]) for s in hvm.states}
            for c in hvm.scenario.contexts
        },
    }


def to_dict(sf: ScenarioFile) -> dict:
    scenario = sf.scenario
    out = {
        "measurements": {x: list(scenario.outcomes[x]) for x in scenario.measurements},
        "contexts": [list(c) for c in scenario.contexts],
        "tables": {_key(c): {_key(t): format_rational(p) for t, p in sf.em.tables[c].items()}
                   for c in scenario.contexts},
    }
    if sf.hvm is not None:
        out["hvm"] = hvm_to_dict(sf.hvm)
    if sf.coordinates is not None:
        out["coordinates"] = {x: [format_rational(v) for v in (e.t, e.x, e.y, e.z)]
                              for x, e in sf.coordinates.items()}
    return out


def serialize_scenario(sf: ScenarioFile) -> str:
    return json.dumps(to_dict(sf), indent=2, ensure_ascii=False) + "\n"
