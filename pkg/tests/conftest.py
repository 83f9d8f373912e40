import random
from fractions import Fraction
from importlib.resources import files

import pytest

from gmak.linalg import QMatrix
from gmak.network import analyze_structure, parse_network

FIXTURES = ("lotka", "sir", "signaling", "futile", "futile-reversed")


def fixture_text(name: str) -> str:
    return files("gmak").joinpath(f"fixtures/{name}.gmak").read_text("utf-8")


def load(name: str, **params):
    return parse_network(fixture_text(name), params or None)


def structure(name: str, **params):
    return analyze_structure(load(name, **params))


def random_subspace(rng: random.Random, d: int, k: int | None = None, lo: int = -2, hi: int = 2) -> QMatrix:
    """Columns spanning a random rational subspace of R^d (small integer entries)."""
    k = rng.randint(0, d) if k is None else k
    cols = [[Fraction(rng.randint(lo, hi)) for _ in range(d)] for _ in range(k)]
    return QMatrix.from_columns(cols, d) if cols else QMatrix([[] for _ in range(d)], 0)


@pytest.fixture
def rng():
    return random.Random(20240601)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
