"""Hermitian forms built from the Poisson kernel and their extremal bounds.

The Fourier transform of e^{-lam|x|} on R^N is the Poisson kernel
C_N lam (lam^2 + 4 pi^2 |y|^2)^{-(N+1)/2}.  Applying (-Delta)^r / (4 pi^2)^r
and integrating against mu gives a radial kernel Q whose off-diagonal
quadratic forms over separated points are bounded by the weighted
extremal errors U^{N-+}(2 pi delta, mu).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .bessel_core import Order, OrderLike, as_order
from .radial_measures import MeasureSpec, _table_rule, check_admissible, value_mu

__all__ = [
    "PointConfig",
    "FormSpec",
    "poisson_ft",
    "poisson_constant",
    "laplacian_terms",
    "Q_radial",
    "Q_matrix",
    "verify_bounds",
    "BoundReport",
]

MAX_POINTS = 64


def poisson_constant(N: int) -> float:
    N = int(N)
    return 2.0 ** N * math.pi ** (0.5 * (N - 1)) * math.gamma(0.5 * (N + 1))


def poisson_ft(N: int, lam: float, y) -> float | np.ndarray:
    """C_N lam / (lam^2 + 4 pi^2 |y|^2)^{(N+1)/2}; y has trailing dimension N."""
    if not lam > 0:
        raise ValueError("lambda must be positive")
    y = np.asarray(y, dtype=np.float64)
    if y.ndim == 0 or y.shape[-1] != int(N):
        raise ValueError(f"y must have trailing dimension {N}")
    rho2 = np.sum(y * y, axis=-1)
    out = poisson_constant(N) * lam / (lam * lam + 4.0 * math.pi ** 2 * rho2) ** (0.5 * (N + 1))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class PointConfig:
    N: int
    points: np.ndarray
    delta: float

    def __post_init__(self):
        N = int(self.N)
        if N < 1:
            raise ValueError("dimension must be positive")
        p = np.array(self.points, dtype=np.float64)
        if p.ndim == 1 and N == 1:
            p = p[:, None]
        if p.ndim != 2 or p.shape[1] != N:
            raise ValueError(f"points must be an (M, {N}) array")
        if not np.all(np.isfinite(p)):
            raise ValueError("points must be finite")
        if not self.delta > 0:
            raise ValueError("separation must be positive")
        if len(p) > 1:
            d = np.sqrt(np.sum((p[:, None, :] - p[None, :, :]) ** 2, axis=-1))
            d[np.diag_indices(len(p))] = np.inf
            if d.min() < self.delta * (1.0 - 1e-12):
                raise ValueError(f"points are not {self.delta}-separated (min distance {d.min():.6g})")
        p.setflags(write=False)
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "points", p)
        object.__setattr__(self, "delta", float(self.delta))

    @property
    def M(self) -> int:
        return len(self.points)

    def differences(self):
        p = self.points
        return p[:, None, :] - p[None, :, :]


@dataclass(frozen=True)
class FormSpec:
    order: Order
    r: int
    measure: MeasureSpec

    def __post_init__(self):
        object.__setattr__(self, "order", as_order(self.order))
        if int(self.r) != self.r or self.r < 0:
            raise ValueError("r must be a nonnegative integer")
        if self.r > 2:
            raise ValueError("r > 2 is not supported")
        object.__setattr__(self, "r", int(self.r))

    @property
    def N(self) -> int:
        # 2 nu + 2 - N = 2 r
        return int(round(2.0 * self.order.nu + 2.0 - 2.0 * self.r))

    def check_dimension(self, N: int):
        if abs(2.0 * self.order.nu + 2.0 - N - 2.0 * self.r) > 1e-12:
            raise ValueError(f"need 2 nu + 2 - N = 2 r; got nu={self.order.nu}, N={N}, r={self.r}")


def laplacian_terms(N: int, r: int) -> dict:
    """(4 pi^2)^{-r} (-Delta)^r of the Poisson profile as {(a, p): c}.

    Each entry stands for c lam^a s^{-p} with s = lam^2 + 4 pi^2 rho^2.
    """
    terms = {(1, 0.5 * (N + 1)): poisson_constant(N)}
    k = 4.0 * math.pi ** 2
    for _ in range(int(r)):
        nxt: dict = {}
        for (a, p), c in terms.items():
            # Delta s^-p = 8pi^2 p (2p+2-N) s^{-p-1} - 16 pi^2 p (p+1) lam^2 s^{-p-2}
            for key, v in (((a, p + 1.0), -8.0 * math.pi ** 2 * p * (2.0 * p + 2.0 - N)),
                           ((a + 2, p + 2.0), 16.0 * math.pi ** 2 * p * (p + 1.0))):
                nxt[key] = nxt.get(key, 0.0) + c * v / k
        terms = {key: v for key, v in nxt.items() if v != 0.0}
    return terms


def _terms_at(terms, lam, rho):
    s = lam * lam + 4.0 * math.pi ** 2 * rho * rho
    return sum(c * lam ** a * s ** (-p) for (a, p), c in terms.items())


def _power_integral(terms, alpha, rho):
    # int_0^inf lam^{a+alpha} (lam^2 + c)^{-p} d lam = c^{b-p} B(b, p-b) / 2, b = (a+alpha+1)/2
    c2 = 4.0 * math.pi ** 2 * rho * rho
    out = np.zeros_like(rho)
    for (a, p), c in terms.items():
        b = 0.5 * (a + alpha + 1.0)
        if not (b > 0 and p > b):
            raise ValueError(f"lambda integral diverges for alpha={alpha}")
        out += c * 0.5 * c2 ** (b - p) * math.exp(special.betaln(b, p - b))
    return out


def Q_radial(spec: FormSpec, N: int, rho):
    """Q_{mu,r} as a function of |y| > 0."""
    spec.check_dimension(N)
    rho = np.asarray(rho, dtype=np.float64)
    if np.any(rho <= 0):
        raise ValueError("Q is only defined away from the origin")
    terms = laplacian_terms(N, spec.r)
    m = spec.measure
    if m.kind in ("power", "log"):
        out = m.weight * _power_integral(terms, m.alpha, rho)
    elif m.kind == "atoms":
        out = np.zeros_like(rho)
        for lam, w in m.points:
            out = out + w * _terms_at(terms, lam, rho)
    else:
        nodes, weights = _table_rule(m)
        out = _terms_at(terms, nodes, rho[..., None]) @ weights
    return float(out) if np.ndim(out) == 0 else out


def Q_matrix(spec: FormSpec, config: PointConfig) -> np.ndarray:
    """Entries Q(y_j - y_l) off the diagonal, zero on it."""
    if config.M > MAX_POINTS:
        raise ValueError(f"at most {MAX_POINTS} points are supported")
    diff = config.differences()
    rho = np.sqrt(np.sum(diff * diff, axis=-1))
    off = ~np.eye(config.M, dtype=bool)
    Q = np.zeros((config.M, config.M))
    if off.any():
        Q[off] = Q_radial(spec, config.N, rho[off])
    return 0.5 * (Q + Q.T)


@dataclass(frozen=True)
class BoundReport:
    min_quadform_ratio: float
    max_quadform_ratio: float
    min_eigenvalue: float
    max_eigenvalue: float
    U_minus: float
    U_plus: float
    passed: bool

    def to_dict(self):
        return {
            "min_quadform_ratio": self.min_quadform_ratio,
            "max_quadform_ratio": self.max_quadform_ratio,
            "min_eigenvalue": self.min_eigenvalue,
            "max_eigenvalue": self.max_eigenvalue,
            "U_minus": self.U_minus,
            "U_plus": self.U_plus,
            "pass": self.passed,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


def _bound(spec, N, delta, side):
    if not check_admissible(spec.measure, spec.order, side):
        return math.inf
    return value_mu(spec.measure, spec.order, N, 2.0 * math.pi * delta, side)


def verify_bounds(spec: FormSpec, config: PointConfig, trials: int = 100, seed: int = 0,
                  atol: float = 1e-8) -> BoundReport:
    """Check -U^- |a|^2 <= sum_{j != l} a_j conj(a_l) Q_jl <= U^+ |a|^2 on random a."""
    spec.check_dimension(config.N)
    Um = _bound(spec, config.N, config.delta, "minus")
    Up = _bound(spec, config.N, config.delta, "plus")
    Q = Q_matrix(spec, config)
    ev = np.linalg.eigvalsh(Q)
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((trials, config.M)) + 1j * rng.standard_normal((trials, config.M))
    a /= np.linalg.norm(a, axis=1, keepdims=True)
    forms = np.einsum("tj,jl,tl->t", a, Q, a.conj()).real
    lo = min(float(forms.min()), float(ev[0])) if trials else float(ev[0])
    hi = max(float(forms.max()), float(ev[-1])) if trials else float(ev[-1])
    ok = lo >= -Um - atol and hi <= Up + atol
    return BoundReport(
        min_quadform_ratio=float(forms.min()) if trials else 0.0,
        max_quadform_ratio=float(forms.max()) if trials else 0.0,
        min_eigenvalue=float(ev[0]),
        max_eigenvalue=float(ev[-1]),
        U_minus=float(Um),
        U_plus=float(Up),
        passed=bool(ok),
    )
