"""Composite Gauss rules used for integrals along the imaginary axis."""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy import special


@lru_cache(maxsize=64)
def _legendre(n):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


@lru_cache(maxsize=64)
def _jacobi(n, beta):
    # weight (1+x)^beta on [-1, 1]
    x, w = special.roots_jacobi(n, 0.0, beta)
    return x, w


def panels_rule(breaks, n=16):
    """Gauss-Legendre nodes/weights on consecutive panels [breaks[i], breaks[i+1]]."""
    breaks = np.asarray(breaks, dtype=np.float64)
    x, w = _legendre(n)
    a = breaks[:-1, None]
    b = breaks[1:, None]
    half = 0.5 * (b - a)
    nodes = (a + b) * 0.5 + half * x[None, :]
    weights = half * w[None, :]
    return nodes.ravel(), weights.ravel()


def graded_rule(T, h, s=1.0, gamma=0.0, eps=1e-14, n=16, ratio=2.0):
    """Rule for int_0^T f, with f ~ eta^gamma smooth near 0.

    [0, eps*s] uses Gauss-Jacobi with the eta^gamma factor divided back out,
    [eps*s, s] geometric panels, [s, T] uniform panels of length <= h.
    """
    if gamma <= -1.0:
        raise ValueError("endpoint exponent must exceed -1")
    s = min(s, T)
    e0 = eps * s
    xj, wj = _jacobi(n, float(gamma))
    n0 = 0.5 * e0 * (xj + 1.0)
    # int_0^e0 eta^g f = (e0/2)^(g+1) sum wj f(n0)/... ; divide eta^g back out
    w0 = (0.5 * e0) ** (gamma + 1.0) * wj / n0 ** gamma
    k = int(np.ceil(np.log(s / e0) / np.log(ratio)))
    geo = np.geomspace(e0, s, k + 1)
    m = max(int(np.ceil((T - s) / h)), 1) if T > s else 0
    uni = np.linspace(s, T, m + 1) if m else np.array([s])
    breaks = np.concatenate([geo, uni[1:]])
    n1, w1 = panels_rule(breaks, n)
    return np.concatenate([n0, n1]), np.concatenate([w0, w1])
