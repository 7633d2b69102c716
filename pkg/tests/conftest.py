import os
import sys
from fractions import Fraction as F

import pytest

from deforma.exactalg import parse_complex

HERE = os.path.dirname(os.path.abspath(__file__))
ROOT = os.path.dirname(HERE)
FIXTURES = os.path.join(ROOT, "fixtures")
GOLDENS = os.path.join(HERE, "goldens")

sys.path.insert(0, HERE)


def fixture_path(name):
    return os.path.join(FIXTURES, name)


def golden_path(name):
    return os.path.join(GOLDENS, name)


def cx(text):
    return parse_complex(text)[0]


# the small complexes used throughout
K = "complex K\nbasis a deg=0\n"
K2 = "complex K2\nbasis a deg=0\nbasis b deg=0\n"
CONE = "complex C\nbasis e deg=0\nbasis f deg=1\nd e -> 1*f\n"
SUSP = "complex S\nbasis u deg=-1\nbasis e deg=0\n"


@pytest.fixture
def X_K():
    return cx(K)


@pytest.fixture
def X_K2():
    return cx(K2)


@pytest.fixture
def X_cone():
    return cx(CONE)


@pytest.fixture
def X_susp():
    return cx(SUSP)


def vec(**kw):
    return {k: F(v) for k, v in kw.items()}


def pytest_terminal_summary(terminalreporter):
    acc = sys.modules.get("test_acceptance")
    if acc is None or not acc.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(acc.RESULTS):
        ok, summary = acc.RESULTS[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {summary}")
