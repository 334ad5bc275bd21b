import math

import pytest

from stdqbose._series import HAVE_NUMBA
from stdqbose.qkernel import Phase, Real

REAL_QS = [0.5, 0.7, 0.9, 1.0, 1.1, 1.3, 1.7, 2.0]
THETAS = [0.2, 0.7, math.pi / 6, math.pi / 4, math.pi / 3, 1.0, 2.0, 2.5, -0.4, math.pi]

DEFORMATIONS = [Real(q) for q in REAL_QS] + [Phase(t) for t in THETAS]


def dp_id(dp):
    return str(dp)


@pytest.fixture(params=DEFORMATIONS, ids=dp_id)
def dp(request):
    return request.param


BACKENDS = ["numpy"] + (["numba"] if HAVE_NUMBA else [])


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(results):
        terminalreporter.write_line(results[key])
