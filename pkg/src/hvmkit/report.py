"""Machine- and human-readable renderings of analysis results."""
from __future__ import annotations

import dataclasses
import enum
from fractions import Fraction
from typing import Any

from . import contextuality as ctxl
from .fileformat import ScenarioFile, hvm_to_dict
from .hvm import (HiddenVariableModel, PropertyReport, all_properties, describe_protocol,
                  find_signaling_states, is_equivalent)
from .rational import CapacityError, format_rational
from .scenario import ValidationReport, validate_em
from .spacetime import LIAuditReport, li_audit

MARK = {True: "✓", False: "✗"}
PROPERTY_LABELS = {"SD": "SD", "WD": "WD", "PI": "PI", "OI": "OI", "BellLocal": "Local"}


def _key(k) -> str:
    if isinstance(k, tuple):
        return ",".join(_key(x) for x in k)
    return str(k)


def jsonable(obj: Any) -> Any:
    """Convert results to JSON-ready values; rationals become exact strings."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, int):
        return obj
    if isinstance(obj, (str, float)):
        return obj
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, HiddenVariableModel):
        return hvm_to_dict(obj)
    if isinstance(obj, ctxl.JointSystem):
        return {"rows": [["normalization" if c is None else _key(c), _key(t)]
                         for c, t in obj.rows],
                "variables": [_key(v) for v in obj.variables]}
    if dataclasses.is_dataclass(obj):
        return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {_key(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        return [jsonable(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def validation_json(report: ValidationReport) -> dict:
    return {"valid": report.valid,
            "violations": [{"kind": v.kind, "location": jsonable(v.location),
                            "details": v.details} for v in report.violations]}


def validation_text(report: ValidationReport) -> str:
    if report.valid:
        return "valid: no violations"
    lines = [f"invalid: {len(report.violations)} violation(s)"]
    lines += [f"  [{v.kind}] {v.details}" for v in report.violations]
    return "\n".join(lines)


def verdict_json(verdict, full_certificate: bool = True) -> dict:
    if not verdict.contextual:
        return {"verdict": "NonContextual",
                "joint": {_key(t): format_rational(p)
                          for t, p in verdict.joint.distribution.items() if p},
                "measurements": list(verdict.joint.measurements)}
    out = {"verdict": "Contextual", "certificate_verifies": verdict.verifies(),
           "certificate": [
               {"row": "normalization" if c is None else _key(c), "outcome": _key(t),
                "weight": format_rational(y)} for c, t, y in verdict.weighted_rows()]}
    if full_certificate:
        out["y"] = [format_rational(v) for v in verdict.certificate.y]
        out["rows"] = jsonable(verdict.equations)["rows"]
    return out


def verdict_text(verdict, full_certificate: bool = False) -> str:
    if not verdict.contextual:
        joint = verdict.joint
        lines = ["NonContextual: global joint over " + ",".join(joint.measurements)]
        lines += [f"  {_key(t)}: {format_rational(p)}"
                  for t, p in joint.distribution.items() if p]
        return "\n".join(lines)
    rows = verdict.weighted_rows()
    b = sum((y * bi for y, bi in zip(verdict.certificate.y, verdict.equations.system.b)),
            Fraction(0))
    lines = [f"Contextual: Farkas certificate over {len(rows)} constraint(s), "
             f"y.b = {format_rational(b)} < 0 while y.A >= 0 "
             f"(verifies: {verdict.verifies()})"]
    if full_certificate:
        for c, t, y in rows:
            what = "sum of joint = 1" if c is None else f"P_{_key(c)}({_key(t)})"
            lines.append(f"  {format_rational(y):>6} x [{what}]")
    return "\n".join(lines)


def classification_text(cls: ctxl.Classification) -> str:
    head = "Classical (non-contextual)" if cls.classical else "NonClassical (contextual)"
    return head + "\n" + verdict_text(cls.evidence)


def properties_json(reports: dict[str, PropertyReport]) -> dict:
    return {name: {"holds": r.holds, "witnesses": jsonable(r.witnesses)}
            for name, r in reports.items()}


def properties_text(reports: dict[str, PropertyReport]) -> str:
    lines = []
    for name in ("SD", "WD", "PI", "OI", "BellLocal"):
        r = reports[name]
        extra = "" if r.holds else f"  ({len(r.witnesses)} witness(es))"
        lines.append(f"{PROPERTY_LABELS[name]:<6}{MARK[r.holds]}{extra}")
    return "\n".join(lines)


def signaling_json(hvm: HiddenVariableModel) -> dict:
    witnesses, text = find_signaling_states(hvm)
    states = []
    for w in witnesses:
        if w.state not in states:
            states.append(w.state)
    return {"signaling_states": jsonable(states),
            "witnesses": [dict(jsonable(w), protocol=describe_protocol(w)) for w in witnesses],
            "protocol": text}


def signaling_text(hvm: HiddenVariableModel) -> str:
    witnesses, text = find_signaling_states(hvm)
    if not witnesses:
        return text
    states = sorted({w.state for w in witnesses}, key=list(hvm.states).index)
    return f"signaling states: {', '.join(map(str, states))}\n{text}"


def audit_json(report: LIAuditReport) -> dict:
    return {"passes_necessary_condition": report.passes_necessary_condition,
            "violating_states": jsonable(sorted(report.violating_states(), key=str)),
            "violations": jsonable(report.violations),
            "blocked": jsonable(report.blocked)}


def audit_text(report: LIAuditReport) -> str:
    if report.passes_necessary_condition:
        lines = ["passes: no context dependence survives the frame analysis"]
    else:
        states = ", ".join(sorted(map(str, report.violating_states())))
        lines = [f"fails: {len(report.violations)} violation(s); states {states}"]
    for v in report.violations:
        frames = "; ".join(
            f"{w.member}: v={format_rational(w.velocity)} along "
            f"({','.join(format_rational(a) for a in w.axis)}) -> {v.receiver} "
            f"{w.order.value.lower()} {w.member}" for w in v.witnesses)
        lines.append(f"  state {v.state}, receiver {v.receiver}, "
                     f"{_key(v.contexts[0])} vs {_key(v.contexts[1])}: {frames}")
    for b in report.blocked:
        lines.append(f"  state {b.state}, receiver {b.receiver}: dependence on "
                     f"{','.join(b.past_members)} lies in its causal past (no violation)")
    return "\n".join(lines)


def _synthesis_summary(sf: ScenarioFile, verdict) -> dict:
    out = {}
    if not verdict.contextual:
        sd = ctxl.synthesize_sd_hvm(sf.em, verdict.joint)
        out["sd"] = {"states": len(sd.states), "equivalent": is_equivalent(sd, sf.em)[0]}
    try:
        wd = ctxl.synthesize_wd_hvm(sf.em, max_states=4096)
        out["wd"] = {"states": len(wd.states), "equivalent": is_equivalent(wd, sf.em)[0],
                     "parameter_independent": all_properties(wd)["PI"].holds}
    except CapacityError as exc:
        out["wd"] = {"skipped": str(exc)}
    return out


def build_report(sf: ScenarioFile) -> tuple[dict, bool]:
    """Full analysis; the flag is True when any finding should gate a pipeline."""
    validation = validate_em(sf.em)
    report: dict[str, Any] = {"validation": validation_json(validation)}
    finding = not validation.valid
    if validation.valid:
        cls = ctxl.classify(sf.em)
        report["classification"] = {"label": cls.label,
                                    "evidence": verdict_json(cls.evidence, False)}
        report["synthesized"] = _synthesis_summary(sf, cls.evidence)
        finding |= not cls.classical
    if sf.hvm is not None:
        props = all_properties(sf.hvm)
        report["hvm"] = {"equivalent": is_equivalent(sf.hvm, sf.em)[0],
                         "properties": properties_json(props),
                         "signaling": signaling_json(sf.hvm)}
        finding |= not all(r.holds for r in props.values())
    if sf.coordinates is not None:
        audit = li_audit(audit_model(sf), sf.coordinates)
        report["lorentz_audit"] = audit_json(audit)
        finding |= not audit.passes_necessary_condition
    return report, finding


def audit_model(sf: ScenarioFile) -> HiddenVariableModel:
    """The file's HVM, or the EM read as a single-state HVM."""
    if sf.hvm is not None:
        return sf.hvm
    em = sf.em
    return HiddenVariableModel(em.scenario, ("0",), {"0": Fraction(1)},
                               {(c, "0"): em.tables[c] for c in em.scenario.contexts})


def report_text(report: dict) -> str:
    lines = ["== validation", "valid" if report["validation"]["valid"] else
             "invalid: " + "; ".join(v["details"] for v in report["validation"]["violations"])]
    if "classification" in report:
        c = report["classification"]
        lines += ["== classification", c["label"]]
        for kind, s in report["synthesized"].items():
            lines.append(f"  synthesized {kind.upper()} HVM: " +
                         ", ".join(f"{k}={v}" for k, v in s.items()))
    if "hvm" in report:
        h = report["hvm"]
        lines += ["== hvm", f"equivalent to EM: {MARK[h['equivalent']]}"]
        lines += [f"{PROPERTY_LABELS[k]:<6}{MARK[v['holds']]}" for k, v in h["properties"].items()]
        states = h["signaling"]["signaling_states"]
        lines.append("signaling states: " + (", ".join(states) if states else "none"))
    if "lorentz_audit" in report:
        a = report["lorentz_audit"]
        lines += ["== lorentz audit", "passes" if a["passes_necessary_condition"] else
                  "fails; states " + ", ".join(a["violating_states"])]
    return "\n".join(lines)
