from fractions import Fraction as F

import pytest

from hvmkit.fixtures import load_fixture
from hvmkit.hvm import HiddenVariableModel


@pytest.fixture
def epr():
    return load_fixture("epr").em


@pytest.fixture
def epr_hvm():
    return load_fixture("epr_wd_hvm").hvm


@pytest.fixture
def epr_file():
    return load_fixture("epr_wd_hvm")


@pytest.fixture
def ex1():
    return load_fixture("example1").em


@pytest.fixture
def ex1_singleton():
    return load_fixture("example1").hvm


@pytest.fixture
def ex1_sd_hvm(ex1):
    c = ("A", "B")
    return HiddenVariableModel(
        ex1.scenario, ("0", "1"), {"0": F(1, 2), "1": F(1, 2)},
        {(c, "0"): {("0", "1"): F(1)}, (c, "1"): {("1", "0"): F(1)}})


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_ac" in nodeid and rep.when == "call":
                name = nodeid.split("::test_")[1]
                n = int(name[2:].split("_")[0])
                lines.append((n, f"AC{n} {'PASS' if rep.passed else 'FAIL'}  "
                                 f"{name.split('_', 1)[1].replace('_', ' ')}"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
