import random

import pytest

from koszul.generate import context
from koszul.linalg import LMatrix
from koszul.ring import BaseField


@pytest.fixture
def ctx1():
    return context(1)


@pytest.fixture
def ctx2():
    return context(2)


@pytest.fixture
def rng():
    return random.Random(20240611)


def mat(ring, rows):
    """Matrix from nested lists of ints or scalar strings."""
    from koszul.io import parse_scalar
    conv = [[parse_scalar(ring, str(v)) for v in r] for r in rows]
    return LMatrix(ring, len(conv), len(conv[0]) if conv else 0, conv)


def sc(ring, text):
    from koszul.io import parse_scalar
    return parse_scalar(ring, str(text))


FIELDS = [BaseField.rationals(), BaseField.prime(101)]


# acceptance results, printed once at the end of the run
ACCEPTANCE: dict = {}


def record(number: int, title: str, ok: bool, detail: str):
    ACCEPTANCE[number] = (title, ok, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} | {title} | {detail}")
