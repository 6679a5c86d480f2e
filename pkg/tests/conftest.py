import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from signpat.pattern import MINUS, PLUS, ZERO, Sign, SignPattern, parse_pattern

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

SIGNS = st.sampled_from([MINUS, ZERO, PLUS])


def P(text: str) -> SignPattern:
    """Pattern from compact text such as ``0+0/00+/+00``."""
    return SignPattern.from_compact(text)


@st.composite
def patterns(draw, min_n=1, max_n=5):
    n = draw(st.integers(min_n, max_n))
    return SignPattern(tuple(tuple(draw(SIGNS) for _ in range(n)) for _ in range(n)))


@st.composite
def cycle_patterns(draw, min_n=3, max_n=6, zero_diag=False):
    """Patterns already labeled along the cycle 0 -> 1 -> ... -> n-1 -> 0."""
    n = draw(st.integers(min_n, max_n))
    e = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        j = (i + 1) % n
        f, g = draw(st.tuples(SIGNS, SIGNS).filter(lambda fg: fg != (ZERO, ZERO)))
        e[i][j], e[j][i] = f, g
        e[i][i] = ZERO if zero_diag else draw(SIGNS)
    return SignPattern(tuple(map(tuple, e)))


@pytest.fixture
def positive_three_cycle():
    return parse_pattern("0 + 0\n0 0 +\n+ 0 0")


ACCEPTANCE_LINES: list = []


@pytest.fixture
def acceptance():
    """Record one ``criterion k: PASS|FAIL ...`` line and return whether it passed."""
    def report(k: int, ok: bool, detail: str) -> bool:
        line = f"criterion {k}: {'PASS' if ok else 'FAIL'} {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
