import mpmath
import pytest
from hypothesis import HealthCheck, settings

from fhankel import PrecisionContext

settings.register_profile(
    "default", max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def ctx():
    return PrecisionContext(256)


def close(a, b, tol, bits=256):
    """Relative closeness of two mpmath numbers evaluated at ``bits``."""
    with mpmath.mp.workprec(bits):
        a, b = mpmath.mpmathify(a), mpmath.mpmathify(b)
        if b == 0:
            return abs(a) <= tol
        return abs(a - b) <= tol * abs(b)


ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
