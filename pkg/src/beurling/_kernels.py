"""Hot loops with a numba path and a pure-numpy fallback.

Set ``BEURLING_NUMBA=0`` in the environment before import to force the
numpy versions (the test suite runs both and compares them).
"""

from __future__ import annotations

import os

import numpy as np

_WANT_NUMBA = os.environ.get("BEURLING_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")

try:
    if not _WANT_NUMBA:
        raise ImportError("numba disabled by BEURLING_NUMBA")
    from numba import njit
    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False


# ---------------------------------------------------------------------------
# numpy reference versions
# ---------------------------------------------------------------------------

def _series_pair_np(nu, x, sign, max_terms):
    # sign=-1 gives the real-axis pair (A, B); sign=+1 the values on the
    # imaginary axis (A(iy), -iB(iy)), whose terms are all positive
    x = np.asarray(x, dtype=np.float64)
    h = 0.5 * x
    q = sign * h * h
    ta = np.ones_like(x)
    tb = h / (nu + 1.0)
    sa = ta.copy()
    sb = tb.copy()
    for n in range(1, max_terms):
        ta = ta * q / (n * (nu + n))
        tb = tb * q / (n * (nu + n + 1.0))
        sa += ta
        sb += tb
        if np.all(np.abs(ta) <= 1e-17 * np.abs(sa)) and np.all(np.abs(tb) <= 1e-17 * np.abs(sb) + 1e-300):
            break
    return sa, sb


def _stieltjes_np(x2, nodes2, weights, block_size=1 << 22):
    x2 = np.asarray(x2, dtype=np.float64)
    chunk = max(1, block_size // max(nodes2.size, 1))
    out = np.empty_like(x2)
    flat_in = x2.ravel()
    flat_out = out.ravel()
    for i in range(0, flat_in.size, chunk):
        block = flat_in[i:i + chunk]
        flat_out[i:i + chunk] = (weights[None, :] / (nodes2[None, :] + block[:, None])).sum(axis=1)
    return out


# ---------------------------------------------------------------------------
# numba versions
# ---------------------------------------------------------------------------

if HAS_NUMBA:

    @njit(cache=True)
    def _series_pair_nb(nu, x, sign, max_terms):
        sa = np.empty(x.size)
        sb = np.empty(x.size)
        for i in range(x.size):
            h = 0.5 * x[i]
            q = sign * h * h
            ta = 1.0
            tb = h / (nu + 1.0)
            a = ta
            b = tb
            for n in range(1, max_terms):
                ta = ta * q / (n * (nu + n))
                tb = tb * q / (n * (nu + n + 1.0))
                a += ta
                b += tb
                if abs(ta) <= 1e-17 * abs(a) and abs(tb) <= 1e-17 * abs(b) + 1e-300:
                    break
            sa[i] = a
            sb[i] = b
        return sa, sb

    @njit(cache=True)
    def _stieltjes_nb(x2, nodes2, weights):
        out = np.empty(x2.size)
        m = nodes2.size
        for i in range(x2.size):
            s = 0.0
            xi = x2[i]
            for k in range(m):
                s += weights[k] / (nodes2[k] + xi)
            out[i] = s
        return out


def series_pair(nu, x, sign=-1.0, max_terms=200, use_numba=None):
    """Power series for the pair (A_nu, B_nu) at real x.

    ``sign=+1`` evaluates the same series with all terms positive, which is
    A_nu(iy) and -i B_nu(iy) for real y.
    """
    x = np.asarray(x, dtype=np.float64)
    if use_numba is None:
        use_numba = HAS_NUMBA
    if use_numba and HAS_NUMBA:
        flat = np.ascontiguousarray(x.ravel())
        a, b = _series_pair_nb(float(nu), flat, float(sign), int(max_terms))
        return a.reshape(x.shape), b.reshape(x.shape)
    return _series_pair_np(float(nu), x, float(sign), int(max_terms))


def stieltjes(x2, nodes2, weights, use_numba=None):
    """sum_k weights[k] / (nodes2[k] + x2) for every entry of x2."""
    x2 = np.asarray(x2, dtype=np.float64)
    nodes2 = np.ascontiguousarray(nodes2, dtype=np.float64)
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    if use_numba is None:
        use_numba = HAS_NUMBA
    if use_numba and HAS_NUMBA:
        out = _stieltjes_nb(np.ascontiguousarray(x2.ravel()), nodes2, weights)
        return out.reshape(x2.shape)
    return _stieltjes_np(x2, nodes2, weights)
