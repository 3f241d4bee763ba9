"""Command-line interface.

Exit status: 0 when the command succeeds with nothing to report, 1 when it
finds something (invalid model, contextuality, a failed property, signaling
states, a Lorentz-invariance violation), 2 on bad input.
"""
from __future__ import annotations

import argparse
import json
import random
import sys

from . import contextuality as ctxl
from . import generate as gen
from . import report as rep
from .fileformat import ScenarioFile, ScenarioParseError, load_scenario, serialize_scenario
from .hvm import all_properties, find_signaling_states
from .rational import CapacityError
from .scenario import validate_em
from .spacetime import li_audit

OK, FINDING, BAD_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _emit(args, text_out: str, json_out) -> None:
    if args.format == "json":
        body = json.dumps(json_out, indent=2, ensure_ascii=False) + "\n"
    else:
        body = text_out if text_out.endswith("\n") else text_out + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(body)
    else:
        sys.stdout.write(body)


def _emit_scenario(args, sf: ScenarioFile) -> None:
    body = serialize_scenario(sf)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(body)
    else:
        sys.stdout.write(body)


def _load(args) -> ScenarioFile:
    try:
        return load_scenario(args.input)
    except OSError as exc:
        raise InputError(f"cannot read {args.input}: {exc.strerror}") from None
    except ScenarioParseError as exc:
        raise InputError(f"{args.input}: {exc}") from None


def _require_valid(args, sf: ScenarioFile) -> bool:
    report = validate_em(sf.em)
    if not report.valid:
        _emit(args, rep.validation_text(report), {"validation": rep.validation_json(report)})
    return report.valid


def _require_hvm(sf: ScenarioFile):
    if sf.hvm is None:
        raise InputError("this command needs an 'hvm' block in the scenario file")
    problems = sf.hvm.problems()
    if problems:
        raise InputError("malformed hvm block: " + "; ".join(problems))
    return sf.hvm


def cmd_validate(args) -> int:
    report = validate_em(_load(args).em)
    _emit(args, rep.validation_text(report), rep.validation_json(report))
    return OK if report.valid else FINDING


def cmd_classify(args) -> int:
    sf = _load(args)
    if not _require_valid(args, sf):
        return FINDING
    cls = ctxl.classify(sf.em)
    _emit(args, rep.classification_text(cls),
          {"label": cls.label, "evidence": rep.verdict_json(cls.evidence, False)})
    return OK if cls.classical else FINDING


def cmd_contextuality(args) -> int:
    sf = _load(args)
    if not _require_valid(args, sf):
        return FINDING
    verdict = ctxl.decide_contextuality(sf.em)
    _emit(args, rep.verdict_text(verdict, args.certificate),
          rep.verdict_json(verdict, args.certificate))
    return FINDING if verdict.contextual else OK


def cmd_synthesize(args) -> int:
    sf = _load(args)
    if not _require_valid(args, sf):
        return FINDING
    if args.sd:
        verdict = ctxl.decide_contextuality(sf.em)
        if verdict.contextual:
            sys.stderr.write("no strongly deterministic HVM exists: the model is contextual\n")
            return FINDING
        hvm = ctxl.synthesize_sd_hvm(sf.em, verdict.joint)
    else:
        hvm = ctxl.synthesize_wd_hvm(sf.em)
    _emit_scenario(args, ScenarioFile(sf.em, hvm, sf.coordinates))
    return OK


def cmd_properties(args) -> int:
    hvm = _require_hvm(_load(args))
    reports = all_properties(hvm)
    _emit(args, rep.properties_text(reports), rep.properties_json(reports))
    return OK if all(r.holds for r in reports.values()) else FINDING


def cmd_signaling(args) -> int:
    hvm = _require_hvm(_load(args))
    witnesses, _ = find_signaling_states(hvm)
    _emit(args, rep.signaling_text(hvm), rep.signaling_json(hvm))
    return FINDING if witnesses else OK


def cmd_spacetime_audit(args) -> int:
    sf = _load(args)
    if sf.coordinates is None:
        raise InputError("spacetime-audit needs a 'coordinates' block")
    if sf.hvm is not None:
        _require_hvm(sf)
    try:
        audit = li_audit(rep.audit_model(sf), sf.coordinates)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    _emit(args, rep.audit_text(audit), rep.audit_json(audit))
    return OK if audit.passes_necessary_condition else FINDING


def cmd_report(args) -> int:
    sf = _load(args)
    if sf.hvm is not None:
        _require_hvm(sf)
    if sf.coordinates is not None:
        missing = [x for x in sf.scenario.measurements if x not in sf.coordinates]
        if missing:
            raise InputError(f"no spacetime coordinates for {missing}")
    report, finding = rep.build_report(sf)
    _emit(args, rep.report_text(report), report)
    return FINDING if finding else OK


def cmd_generate(args) -> int:
    rng = random.Random(args.seed)
    scenario = gen.random_scenario(rng, max_measurements=args.measurements,
                                   max_outcomes=args.outcomes)
    em = gen.random_classical_em(rng, scenario)
    if args.random:
        em = gen.perturbed_em(rng, em)
    _emit_scenario(args, ScenarioFile(em))
    return OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text",
                        help="report format (default: text)")
    common.add_argument("--out", metavar="PATH", help="write output to PATH instead of stdout")

    parser = argparse.ArgumentParser(
        prog="hvmkit",
        description="Exact analysis of empirical models and hidden variables models.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=func)
        return p

    for name, func, help_ in [
        ("validate", cmd_validate, "check cover, antichain, normalization and consistency"),
        ("classify", cmd_classify, "Classical or NonClassical"),
        ("properties", cmd_properties, "SD/WD/PI/OI/Local checks for the file's HVM"),
        ("signaling", cmd_signaling, "states of the file's HVM that allow signaling"),
        ("spacetime-audit", cmd_spacetime_audit, "static Lorentz-invariance audit"),
        ("report", cmd_report, "full analysis report"),
    ]:
        add(name, func, help_).add_argument("input")

    p = add("contextuality", cmd_contextuality, "contextuality verdict with evidence")
    p.add_argument("input")
    p.add_argument("--certificate", action="store_true",
                   help="print the full Farkas certificate")

    p = add("synthesize", cmd_synthesize, "emit an equivalent HVM in the hvm block")
    p.add_argument("input")
    kind = p.add_mutually_exclusive_group(required=True)
    kind.add_argument("--wd", action="store_true", help="weakly deterministic product model")
    kind.add_argument("--sd", action="store_true", help="strongly deterministic model")

    p = add("generate", cmd_generate, "write a random scenario file")
    kind = p.add_mutually_exclusive_group(required=True)
    kind.add_argument("--classical", action="store_true",
                      help="project a random joint distribution (always classical)")
    kind.add_argument("--random", action="store_true",
                      help="classical model perturbed inside one context")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--measurements", type=int, default=4, help="maximum measurement count")
    p.add_argument("--outcomes", type=int, default=3, help="maximum outcomes per measurement")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, CapacityError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
