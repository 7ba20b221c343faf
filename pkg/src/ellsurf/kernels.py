"""F_p character-sum kernels.

Two interchangeable implementations of the per-prime row sums
``S[t] = sum_x chi(f(x, t))``: a numba-compiled double loop and a
vectorized numpy path.  Set ``ELLSURF_DISABLE_NUMBA=1`` (or run without
numba installed) to force the numpy path.
"""
from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("ELLSURF_DISABLE_NUMBA", "").lower() in ("1", "true", "yes", "on")

try:
    if _DISABLED:
        raise ImportError("numba disabled by ELLSURF_DISABLE_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

BACKEND = "numba" if HAVE_NUMBA else "numpy"

# p * p must fit comfortably in int64
KERNEL_PRIME_BOUND = 2**31


def char_table(p: int) -> np.ndarray:
    """Quadratic character of F_p as an int8 lookup table."""
    chi = np.full(p, -1, dtype=np.int8)
    sq = (np.arange(1, p, dtype=np.int64) ** 2) % p
    chi[sq] = 1
    chi[0] = 0
    return chi


def row_sums_numpy(coef: np.ndarray, p: int, chi: np.ndarray) -> np.ndarray:
    """coef[i, j] is the coefficient of x^i T^j, already reduced mod p."""
    nx, nt = coef.shape
    ts = np.arange(p, dtype=np.int64)
    xs = np.arange(p, dtype=np.int64)[:, None]
    # polynomial in x with coefficients evaluated at every t: cx[i, t]
    cx = np.zeros((nx, p), dtype=np.int64)
    for i in range(nx):
        acc = np.zeros(p, dtype=np.int64)
        for j in range(nt - 1, -1, -1):
            acc = (acc * ts + coef[i, j]) % p
        cx[i] = acc
    out = np.empty(p, dtype=np.int64)
    # chunk over t to bound the (x, t) block size
    step = max(1, (1 << 22) // p)
    for lo in range(0, p, step):
        hi = min(p, lo + step)
        acc = np.zeros((p, hi - lo), dtype=np.int64)
        for i in range(nx - 1, -1, -1):
            acc = (acc * xs + cx[i, lo:hi]) % p
        out[lo:hi] = chi[acc].sum(axis=0, dtype=np.int64)
    return out


def _row_sums_loop(coef, p, chi):
    nx, nt = coef.shape
    out = np.zeros(p, dtype=np.int64)
    cx = np.zeros(nx, dtype=np.int64)
    for t in range(p):
        for i in range(nx):
            acc = 0
            for j in range(nt - 1, -1, -1):
                acc = (acc * t + coef[i, j]) % p
            cx[i] = acc
        s = 0
        for x in range(p):
            acc = 0
            for i in range(nx - 1, -1, -1):
                acc = (acc * x + cx[i]) % p
            s += chi[acc]
        out[t] = s
    return out


if HAVE_NUMBA:
    row_sums_numba = njit(cache=True, nogil=True)(_row_sums_loop)
    row_sums = row_sums_numba
else:
    row_sums_numba = None
    row_sums = row_sums_numpy


def poly_values(coeffs: np.ndarray, p: int) -> np.ndarray:
    """Values of a univariate polynomial (coefficients mod p, low first) at all of F_p."""
    ts = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for a in coeffs[::-1]:
        acc = (acc * ts + int(a)) % p
    return acc
