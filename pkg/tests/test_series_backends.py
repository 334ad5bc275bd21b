import math
import os
import subprocess
import sys

import numpy as np
import pytest

from stdqbose import _series
from stdqbose.qkernel import Phase, Real

needs_numba = pytest.mark.skipif(not _series.HAVE_NUMBA, reason="numba unavailable or disabled")

CASES = [
    (_series.KIND_CLASSICAL, 0j, 3, 0.1),
    (_series.KIND_STD, Real(1.3).log_q, 3, 3.0),
    (_series.KIND_STD, Real(0.7).log_q, 5, 2.0),
    (_series.KIND_STD, Phase(0.7).log_q, 4, 0.2),
    (_series.KIND_STD, Phase(math.pi / 4).log_q, 4, 0.5),
    (_series.KIND_BM, Real(1.2).log_q, 2, 1.5),
    (_series.KIND_BM, Phase(2.0).log_q, 3, 0.4),
]


@needs_numba
@pytest.mark.parametrize("kind,log_q,r,x", CASES)
def test_backends_agree(kind, log_q, r, x):
    a = _series.falling_series(kind, log_q, r, x, 1e-12, 10**6, backend="numpy")
    b = _series.falling_series(kind, log_q, r, x, 1e-12, 10**6, backend="numba")
    assert a[2] == b[2] == _series.STATUS_OK
    assert abs(a[0] - b[0]) <= 1e-13 * max(abs(a[0]), 1e-300) + 1e-300
    assert abs(a[1] - b[1]) <= 1


@pytest.mark.parametrize("backend", ["numpy"] + (["numba"] if _series.HAVE_NUMBA else []))
def test_max_terms_status(backend):
    _, n, status = _series.falling_series(_series.KIND_CLASSICAL, 0j, 4, 1e-3, 1e-12, 100, backend=backend)
    assert status == _series.STATUS_MAX_TERMS and n == 100


@pytest.mark.parametrize("backend", ["numpy"] + (["numba"] if _series.HAVE_NUMBA else []))
def test_overflow_status(backend):
    _, _, status = _series.falling_series(_series.KIND_STD, Real(3.0).log_q, 2, 0.5, 1e-12, 10**5, backend=backend)
    assert status == _series.STATUS_OVERFLOW


def test_unknown_backend():
    with pytest.raises(ValueError):
        _series.falling_series(_series.KIND_CLASSICAL, 0j, 1, 1.0, 1e-12, 100, backend="fortran")


def test_falling_products_zero_below_order():
    n = np.arange(6)
    out = _series.falling_products(_series.KIND_CLASSICAL, 0j, 3, n)
    assert list(out.real) == [0, 0, 0, 6, 24, 60]


def test_env_flag_forces_numpy():
    env = dict(os.environ, STDQBOSE_NO_NUMBA="1")
    code = "from stdqbose import _series; print(_series.DEFAULT_BACKEND, _series.HAVE_NUMBA)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["numpy", "False"]
