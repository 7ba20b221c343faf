import os
import subprocess
import sys

import numpy as np
import pytest

from ellsurf import kernels
from ellsurf.numth import legendre_symbol


def brute_rows(coef, p):
    out = []
    for t in range(p):
        s = 0
        for x in range(p):
            v = sum(int(coef[i, j]) * x**i * t**j for i in range(coef.shape[0]) for j in range(coef.shape[1]))
            s += legendre_symbol(v, p)
        out.append(s)
    return np.array(out)


@pytest.mark.parametrize("p", [3, 5, 7, 31, 101])
def test_char_table(p):
    chi = kernels.char_table(p)
    assert [int(c) for c in chi] == [legendre_symbol(a, p) for a in range(p)]


@pytest.mark.parametrize("p", [3, 7, 23])
def test_numpy_rows_match_brute(p):
    rng = np.random.default_rng(p)
    coef = rng.integers(0, p, size=(5, 3))
    got = kernels.row_sums_numpy(coef, p, kernels.char_table(p))
    assert np.array_equal(got, brute_rows(coef, p))


@pytest.mark.skipif(kernels.row_sums_numba is None, reason="numba not available")
@pytest.mark.parametrize("p", [3, 11, 101, 1009])
def test_numba_matches_numpy(p):
    rng = np.random.default_rng(1000 + p)
    for shape in [(4, 3), (5, 5), (2, 1)]:
        coef = rng.integers(0, p, size=shape)
        chi = kernels.char_table(p)
        assert np.array_equal(kernels.row_sums_numba(coef, p, chi), kernels.row_sums_numpy(coef, p, chi))


def test_poly_values():
    vals = kernels.poly_values(np.array([1, 0, 1]), 7)
    assert list(vals) == [(x * x + 1) % 7 for x in range(7)]


def test_disable_flag_selects_numpy():
    env = dict(os.environ, ELLSURF_DISABLE_NUMBA="1")
    code = "from ellsurf import kernels; print(kernels.BACKEND, kernels.row_sums is kernels.row_sums_numpy)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["numpy", "True"]
