"""Bundled scenario files: the two worked examples and the EPR weakly deterministic HVM."""
from importlib import resources

from .fileformat import ScenarioFile, parse_scenario

NAMES = ("example1", "epr", "epr_wd_hvm", "single_state_counterexample")


def fixture_path(name: str):
    if name not in NAMES:
        raise KeyError(f"unknown fixture {name!r}; choose from {NAMES}")
    return resources.files(__package__) / "data" / f"{name}.json"


def load_fixture(name: str) -> ScenarioFile:
    return parse_scenario(fixture_path(name).read_text(encoding="utf-8"))
