from pathlib import Path

import pytest
from hypothesis import settings

from shapcirc.circuit import And, Not, Or, Var, build_circuit
from shapcirc.frontends import parse_circuit

ROOT = Path(__file__).resolve().parent.parent
EXAMPLE = ROOT / "circuits" / "example.circ"
GOLDEN = Path(__file__).resolve().parent / "golden"

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

_ACCEPTANCE = []


@pytest.fixture
def example():
    return parse_circuit(EXAMPLE.read_text())


@pytest.fixture
def example_entity():
    return {"fg": 1, "dtr": 1, "nf": 0, "na": 1}


def example_circuit(and_order=(2, 3, 1)):
    """The four-feature example built in code; ``and_order`` permutes the inner and-gate."""
    gates = [Var("dtr"), Not(0), Var("nf"), Var("na"), And(*and_order), Or(0, 4), Var("fg"), And(6, 5)]
    return build_circuit(gates, 7, ["fg", "dtr", "nf", "na"])


@pytest.fixture
def record_criterion():
    def record(number, ok, detail):
        _ACCEPTANCE.append((number, ok, detail))
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, detail in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
