"""Truncated thermal-series summation kernels.

Two interchangeable backends compute
``S = sum_n f(n) e^{-nx}`` for the falling products
``f(n) = phi(n) phi(n-1) ... phi(n-r+1)`` of the built-in structure functions:

* ``"numba"``: a sequential ``@njit`` loop with Neumaier-compensated sums.
* ``"numpy"``: chunked vectorised evaluation, the truncation point located with
  array ops, the final sum taken with :func:`math.fsum`.

The numpy engine also serves arbitrary Python callables. Set
``STDQBOSE_NO_NUMBA=1`` to force the numpy backend globally.

Truncation rule (both backends): with ``M(n) = max_{m<=n} |f(m)|`` and
``rho`` the largest ratio ``M(m+1)/M(m)`` over the last ``WINDOW`` steps,
stop at the first ``n`` where ``rho e^{-x} < 1`` and
``M(n) e^{-nx} / (1 - rho e^{-x}) < rel_tol |S_n|``.
"""

from __future__ import annotations

import math
import os

import numpy as np

KIND_CLASSICAL = 0
KIND_STD = 1
KIND_BM = 2

WINDOW = 20

STATUS_OK = 0
STATUS_MAX_TERMS = 1
STATUS_OVERFLOW = 2

_DISABLED = os.environ.get("STDQBOSE_NO_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _DISABLED:
        raise ImportError("numba disabled by STDQBOSE_NO_NUMBA")
    import numba

    HAVE_NUMBA = True
except ImportError:
    numba = None
    HAVE_NUMBA = False

DEFAULT_BACKEND = "numba" if HAVE_NUMBA else "numpy"


def _phi_array(kind: int, log_q: complex, m: np.ndarray) -> np.ndarray:
    mf = m.astype(np.float64)
    if kind == KIND_CLASSICAL:
        v = mf.astype(np.complex128)
    elif kind == KIND_STD:
        h = (mf - 1.0) * log_q
        v = 0.5 * mf * (np.exp(h) + np.exp(-h))
    else:
        if log_q == 0:
            v = mf.astype(np.complex128)
        else:
            v = (np.exp(mf * log_q) - np.exp(-mf * log_q)) / (np.exp(log_q) - np.exp(-log_q))
    return np.where(m > 0, v, 0.0 + 0.0j)


def falling_products(kind: int, log_q: complex, r: int, n: np.ndarray) -> np.ndarray:
    """Vectorised ``phi(n) phi(n-1) ... phi(n-r+1)``; zero wherever ``n < r``."""
    out = np.ones(n.shape, dtype=np.complex128)
    for j in range(r):
        out *= _phi_array(kind, log_q, n - j)
    return np.where(n >= r, out, 0.0 + 0.0j)


def sum_series_numpy(values, x: float, rel_tol: float, max_terms: int) -> tuple[complex, int, int]:
    """Chunked truncated sum of ``values(n) * e^{-nx}``.

    ``values`` maps an int64 array of indices to a complex array.
    Returns ``(S, n_terms, status)``.
    """
    decay = math.exp(-x)
    env = 0.0
    ratios: list[float] = []  # trailing defined envelope ratios, at most WINDOW-1 kept
    n_defined = 0
    re_parts: list[np.ndarray] = []
    im_parts: list[np.ndarray] = []
    running = 0j
    n0 = 0
    chunk = 64
    while n0 < max_terms:
        stop = min(n0 + chunk, max_terms)
        n = np.arange(n0, stop, dtype=np.int64)
        try:
            with np.errstate(over="ignore", invalid="ignore"):
                fv = np.asarray(values(n), dtype=np.complex128)
                terms = fv * np.exp(-n.astype(np.float64) * x)
        except OverflowError:
            return complex(np.nan, np.nan), int(n0), STATUS_OVERFLOW
        # keep the finite prefix; the tail test may still stop before it ends
        bad = np.flatnonzero(~(np.isfinite(terms) & np.isfinite(fv)))
        overflowed = bad.size > 0
        if overflowed:
            if bad[0] == 0:
                return complex(np.nan, np.nan), int(n0), STATUS_OVERFLOW
            n, fv, terms = n[: bad[0]], fv[: bad[0]], terms[: bad[0]]

        absf = np.abs(fv)
        envs = np.maximum.accumulate(np.concatenate(([env], absf)))
        prev, cur = envs[:-1], envs[1:]
        defined = prev > 0.0
        step = np.where(defined, cur / np.where(defined, prev, 1.0), np.nan)

        # rolling max over the last WINDOW defined ratios ending at each index
        hist = np.concatenate((np.asarray(ratios, dtype=np.float64), step))
        count_def = n_defined - len(ratios) + np.cumsum(~np.isnan(hist))
        padded = np.concatenate((np.full(WINDOW - 1, -np.inf), np.where(np.isnan(hist), -np.inf, hist)))
        win = np.lib.stride_tricks.sliding_window_view(padded, WINDOW)[len(ratios):]
        rho = win.max(axis=1)
        enough = count_def[len(ratios):] >= WINDOW
        rho_e = rho * decay

        partial = running + np.cumsum(terms)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            tail = cur * np.exp(-n.astype(np.float64) * x) / (1.0 - rho_e)
        done = enough & (rho_e < 1.0) & (tail < rel_tol * np.abs(partial))
        hit = np.flatnonzero(done)

        if hit.size:
            i = int(hit[0])
            re_parts.append(terms.real[: i + 1])
            im_parts.append(terms.imag[: i + 1])
            re = math.fsum(np.concatenate(re_parts))
            im = math.fsum(np.concatenate(im_parts))
            return complex(re, im), int(n0 + i + 1), STATUS_OK

        if overflowed:
            return complex(np.nan, np.nan), int(n0 + len(n)), STATUS_OVERFLOW
        re_parts.append(terms.real)
        im_parts.append(terms.imag)
        running = partial[-1]
        env = float(cur[-1])
        n_defined = int(count_def[-1])
        ratios = [float(v) for v in hist[~np.isnan(hist)][-(WINDOW - 1):]]
        n0 = stop
        chunk = min(chunk * 2, 1 << 16)
    return complex(np.nan, np.nan), int(max_terms), STATUS_MAX_TERMS


def _falling_series_numpy(kind, log_q, r, x, rel_tol, max_terms):
    return sum_series_numpy(lambda n: falling_products(kind, log_q, r, n), x, rel_tol, max_terms)


if HAVE_NUMBA:

    @numba.njit(cache=True, nogil=True)
    def _phi_scalar(kind, log_q, m):
        if m <= 0:
            return 0.0 + 0.0j
        mf = float(m)
        if kind == 0:
            return mf + 0.0j
        if kind == 1:
            h = (mf - 1.0) * log_q
            return 0.5 * mf * (np.exp(h) + np.exp(-h))
        if log_q == 0:
            return mf + 0.0j
        return (np.exp(mf * log_q) - np.exp(-mf * log_q)) / (np.exp(log_q) - np.exp(-log_q))

    @numba.njit(cache=True, nogil=True)
    def _falling_series_numba(kind, log_q, r, x, rel_tol, max_terms):
        decay = np.exp(-x)
        ring = np.empty(WINDOW, dtype=np.float64)
        n_def = 0
        env = 0.0
        s_re = 0.0
        c_re = 0.0
        s_im = 0.0
        c_im = 0.0
        for n in range(max_terms):
            f = 0.0 + 0.0j
            if n >= r:
                f = 1.0 + 0.0j
                for j in range(r):
                    f *= _phi_scalar(kind, log_q, n - j)
            t = f * np.exp(-n * x)
            if not (np.isfinite(t.real) and np.isfinite(t.imag)):
                return complex(np.nan, np.nan), n, 2

            # Neumaier summation, real and imaginary parts separately
            v = t.real
            tot = s_re + v
            if abs(s_re) >= abs(v):
                c_re += (s_re - tot) + v
            else:
                c_re += (v - tot) + s_re
            s_re = tot
            v = t.imag
            tot = s_im + v
            if abs(s_im) >= abs(v):
                c_im += (s_im - tot) + v
            else:
                c_im += (v - tot) + s_im
            s_im = tot

            a = abs(f)
            new_env = env if env >= a else a
            if env > 0.0:
                ring[n_def % WINDOW] = new_env / env
                n_def += 1
            env = new_env
            if n_def >= WINDOW:
                rho = ring.max()
                rho_e = rho * decay
                if rho_e < 1.0:
                    tail = env * np.exp(-n * x) / (1.0 - rho_e)
                    pr = s_re + c_re
                    pi = s_im + c_im
                    if tail < rel_tol * np.sqrt(pr * pr + pi * pi):
                        return complex(pr, pi), n + 1, 0
        return complex(np.nan, np.nan), max_terms, 1


def falling_series(kind: int, log_q: complex, r: int, x: float, rel_tol: float, max_terms: int, backend: str | None = None):
    """Sum ``sum_n f(n) e^{-nx}`` for a built-in falling product.

    Returns ``(S, n_terms, status)``; ``status`` is one of ``STATUS_*``.
    """
    backend = backend or DEFAULT_BACKEND
    if backend == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba backend requested but numba is unavailable or disabled")
        s, n, status = _falling_series_numba(int(kind), complex(log_q), int(r), float(x), float(rel_tol), int(max_terms))
        return complex(s), int(n), int(status)
    if backend == "numpy":
        return _falling_series_numpy(kind, complex(log_q), int(r), float(x), float(rel_tol), int(max_terms))
    raise ValueError(f"unknown backend {backend!r}")
