import math
import sys

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from psi_approx import LogLogPower, LogPower, Power, TrigPoly

settings.register_profile(
    "pkg", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("pkg")


def families():
    """One representative per family and exponent regime."""
    return [
        Power(0.75),
        Power(2.0),
        LogPower(2, 1),
        LogPower(1, 2),
        LogLogPower(2, 0.5, 1),
        LogLogPower(1, 1, 2),
    ]


@pytest.fixture(params=families(), ids=str)
def psi(request):
    return request.param


def real_poly(draw, max_degree=16, mean_zero=False):
    deg = draw(st.integers(1, max_degree))
    # subnormal coefficients lose relative precision under any multiplier
    vals = st.floats(-3, 3, allow_nan=False, allow_infinity=False).filter(
        lambda x: x == 0 or abs(x) > 1e-100)
    re = draw(st.lists(vals, min_size=deg, max_size=deg))
    im = draw(st.lists(vals, min_size=deg, max_size=deg))
    d = {}
    for k in range(1, deg + 1):
        c = complex(re[k - 1], im[k - 1])
        if c != 0:
            d[k], d[-k] = c, c.conjugate()
    if not mean_zero:
        d[0] = draw(vals)
    return TrigPoly(d)


@st.composite
def real_polys(draw, max_degree=16, mean_zero=False):
    return real_poly(draw, max_degree, mean_zero)


TWO_PI = 2 * math.pi


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "ACCEPTANCE_LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
