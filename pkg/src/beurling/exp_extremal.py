"""Extremal values U_nu^{N+-}(delta, lam) and the radial extremal functions.

For type 2 in one dimension the optimal errors are explicit node sums

    U^{1-}(2, lam) = 2 Gamma(2nu+2)/lam^{2nu+2} - sum_{A(xi)=0} e^{-lam|xi|} / (c_nu K(xi, xi))
    U^{1+}(2, lam) = sum_{B(xi)=0} e^{-lam|xi|} / (c_nu K(xi, xi)) - 2 Gamma(2nu+2)/lam^{2nu+2}

and the general case follows from the scaling and dimension laws.  The two
terms cancel badly as lam -> 0, so an equivalent one-term integral

    U^{1-+}(2, lam) = (4/pi) int_0^inf eta^{2nu+1} sin(lam eta) K_mu(eta)/I_mu(eta) d eta

(mu = nu for the minorant, nu+1 for the majorant) is used there.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np
from scipy import special

from . import freq_laplace
from ._quad import graded_rule, _jacobi, _legendre
from .bessel_core import Order, OrderLike, as_order, c_nu, eval_A, eval_B, zeros_upto
from .freq_laplace import TruncationError, _axis_residual, _axis_weights

__all__ = [
    "ExtremalConfig",
    "ExtremalValueQuery",
    "QuadratureReport",
    "half_omega",
    "value_min_base",
    "value_max_base",
    "value_base",
    "zero_sum_terms",
    "value",
    "eval_extremal_radial",
    "verify_value_by_quadrature",
]


@dataclass(frozen=True)
class ExtremalConfig:
    sum_rtol: float = 1e-16
    sum_atol: float = 1e-15
    max_zeros: int = 400_000
    # the node sum is used while its cancellation costs fewer than this many
    # digits; below that the Bessel-ratio integral takes over
    max_cancellation: float = 1e4


DEFAULT_CONFIG = ExtremalConfig()


def _check_side(side):
    if side not in ("minus", "plus"):
        raise ValueError(f"side must be 'minus' or 'plus', got {side!r}")
    return side


def _log_lead(nu, lam):
    return math.log(2.0) + math.lgamma(2.0 * nu + 2.0) - (2.0 * nu + 2.0) * math.log(lam)


def _lead(nu, lam):
    return math.exp(_log_lead(nu, lam))


def _node_weights(order, kind, xi):
    """1/(c_nu K(xi, xi)) at positive zeros, written with J to avoid cancellation."""
    nu = order.nu
    mu = nu + 1.0 if kind == "A" else nu
    j = special.jv(mu, xi)
    return 2.0 * xi ** (2.0 * nu) / (j * j)


def zero_sum_terms(order: OrderLike, lam: float, side: str, config: ExtremalConfig | None = None):
    """Terms of the node sum (both signs folded together), in node order.

    For the majorant the first entry is the contribution of the origin.
    """
    order = as_order(order)
    cfg = config or DEFAULT_CONFIG
    kind = "A" if _check_side(side) == "minus" else "B"
    nu = order.nu
    ratio = math.exp(-lam * math.pi)
    # terms grow like xi^{2nu+1} until xi ~ (2nu+1)/lam, then decay
    peak = max(2.0 * nu + 1.0, 0.0) / lam
    bound = max(60.0, peak + 40.0 / lam)
    while True:
        if bound / math.pi > cfg.max_zeros:
            raise TruncationError(
                f"node sum at lambda={lam:g} needs more than {cfg.max_zeros} zeros;"
                " use method='integral' or a larger lambda"
            )
        xi = zeros_upto(order, kind, bound)
        terms = 2.0 * _node_weights(order, kind, xi) * np.exp(-lam * xi)
        if kind == "B":
            terms = np.concatenate([[2.0 * math.pi * (nu + 1.0) / c_nu(order)], terms])
            xi = np.concatenate([[0.0], xi])
        partial = np.cumsum(terms)
        tail = terms * ratio / (1.0 - ratio)
        ok = (terms + tail <= cfg.sum_rtol * np.abs(partial) + cfg.sum_atol) & (xi > peak)
        hit = np.nonzero(ok)[0]
        if hit.size:
            return terms[: hit[0] + 1]
        bound *= 1.5


def _zero_sum_value(order, lam, side, cfg):
    s = math.fsum(zero_sum_terms(order, lam, side, cfg))
    lead = _lead(order.nu, lam)
    return lead - s if side == "minus" else s - lead


@lru_cache(maxsize=64)
def _ratio_rule(nu, side, lam):
    mu = nu if side == "minus" else nu + 1.0
    T = 40.0 + 2.0 * abs(nu)
    gamma = min(2.0 * nu + 2.0, 2.0) if side == "minus" else 0.0
    nodes, weights = graded_rule(T, min(0.5, 1.0 / lam), s=min(1.0, 1.0 / lam), gamma=gamma)
    with np.errstate(over="ignore", under="ignore"):
        ratio = special.kve(mu, nodes) / special.ive(mu, nodes) * np.exp(-2.0 * nodes)
    return nodes, weights * nodes ** (2.0 * nu + 1.0) * ratio


def _integral_value(order, lam, side):
    nodes, w = _ratio_rule(order.nu, side, float(lam))
    return (4.0 / math.pi) * math.fsum(w * np.sin(lam * nodes))


def _use_integral(nu, lam, cfg):
    # node-sum cancellation ~ lead / (lam * const); stay with the sum while mild
    excess = _log_lead(nu, lam) - math.log(min(lam, 1.0)) - _log_lead(nu, 1.0)
    return excess > math.log(cfg.max_cancellation)


def value_base(order: OrderLike, lam: float, side: str, method: str = "auto",
               config: ExtremalConfig | None = None) -> float:
    """U_nu^{1-+}(2, lam).  method: "zeros", "integral" or "auto"."""
    order = as_order(order)
    _check_side(side)
    lam = float(lam)
    if not lam > 0 or not math.isfinite(lam):
        raise ValueError(f"lambda must be positive, got {lam!r}")
    cfg = config or DEFAULT_CONFIG
    if method == "auto":
        method = "integral" if _use_integral(order.nu, lam, cfg) else "zeros"
    if method == "zeros":
        return _zero_sum_value(order, lam, side, cfg)
    if method == "integral":
        return _integral_value(order, lam, side)
    raise ValueError(f"unknown method {method!r}")


def value_min_base(order: OrderLike, lam: float, method: str = "auto",
                   config: ExtremalConfig | None = None) -> float:
    """Optimal weighted L1 error of a type-2 minorant of e^{-lam|x|}."""
    return value_base(order, lam, "minus", method, config)


def value_max_base(order: OrderLike, lam: float, method: str = "auto",
                   config: ExtremalConfig | None = None) -> float:
    """Optimal weighted L1 error of a type-2 majorant of e^{-lam|x|}."""
    return value_base(order, lam, "plus", method, config)


def half_omega(N: int) -> float:
    """Half the surface area of the unit sphere in R^N (1 for N = 1)."""
    N = int(N)
    if N < 1:
        raise ValueError("dimension must be >= 1")
    return math.pi ** (0.5 * N) / math.gamma(0.5 * N)


@dataclass(frozen=True)
class ExtremalValueQuery:
    order: Order
    N: int
    delta: float
    lam: float
    side: str

    def __post_init__(self):
        object.__setattr__(self, "order", as_order(self.order))
        if int(self.N) != self.N or self.N < 1:
            raise ValueError("N must be a positive integer")
        if not self.delta > 0:
            raise ValueError("delta must be positive")
        if not self.lam > 0:
            raise ValueError("lambda must be positive")
        _check_side(self.side)


def value(query: ExtremalValueQuery, method: str = "auto", config: ExtremalConfig | None = None) -> float:
    """U_nu^{N-+}(delta, lam) = (omega_{N-1}/2) kappa^{2nu+2} U^{1-+}(2, kappa lam), kappa = 2/delta."""
    kappa = 2.0 / query.delta
    nu = query.order.nu
    base = value_base(query.order, kappa * query.lam, query.side, method, config)
    return half_omega(query.N) * kappa ** (2.0 * nu + 2.0) * base


def eval_extremal_radial(order: OrderLike, N: int, delta: float, lam: float, point, side: str):
    """Extremal minorant/majorant of e^{-lam|x|} of type delta on R^N at real points.

    `point` has trailing dimension N.  The function is L or M of type 2 at
    parameter kappa*lam evaluated at |x|/kappa, kappa = 2/delta.
    """
    _check_side(side)
    p = np.asarray(point, dtype=np.float64)
    if p.shape[-1] != int(N):
        raise ValueError(f"points must have trailing dimension {N}")
    r = np.sqrt(np.sum(p * p, axis=-1))
    kappa = 2.0 / float(delta)
    f = freq_laplace.eval_minorant if side == "minus" else freq_laplace.eval_majorant
    return f(order, kappa * lam, r / kappa)


# ---------------------------------------------------------------------------
# quadrature check of the node-sum values
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadratureReport:
    nu: float
    lam: float
    side: str
    computed_integral: float
    zero_sum_value: float
    abs_diff: float
    error_estimate: float
    cutoff: float
    tail: float

    def to_dict(self):
        return asdict(self)


def _osc_tail(s, X, phase, terms=8):
    # int_X^inf x^{-s} cos(2x - phase) dx through repeated integration by parts
    w = 2.0
    acc = 0j
    poch = 1.0
    for j in range(terms):
        acc += poch * X ** (-s - j) / (1j * w) ** j
        poch *= s + j
    val = -np.exp(1j * (w * X - phase)) / (1j * w) * acc
    return val.real


def _bessel_sq_tail(mu, p, X):
    """int_X^inf x^{-p} J_mu(x)^2 dx from the Hankel expansion."""
    m = 4.0 * mu * mu
    phase = (mu + 0.5) * math.pi
    smooth = X ** (-p) / p + (m - 1.0) / 8.0 * X ** (-p - 2.0) / (p + 2.0)
    osc = _osc_tail(p + 1.0, X, phase) - (m - 1.0) * (m - 5.0) / 32.0 * _osc_tail(p + 3.0, X, phase)
    # -2PQ sin(2 chi) = -(m-1)/(4x) sin(2 chi); sin(y) = cos(y - pi/2)
    osc -= (m - 1.0) / 4.0 * _osc_tail(p + 2.0, X, phase + 0.5 * math.pi)
    return (smooth + osc) / math.pi


def _panel_integral(f, a, b, n, beta=None):
    if beta is None:
        x, w = _legendre(n)
        nodes = 0.5 * (a + b) + 0.5 * (b - a) * x
        return float(np.sum(0.5 * (b - a) * w * f(nodes)))
    x, w = _jacobi(n, beta)
    nodes = 0.5 * (b - a) * (x + 1.0) + a
    return float(np.sum((0.5 * (b - a)) ** (beta + 1.0) * w * f(nodes)))


def verify_value_by_quadrature(order: OrderLike, lam: float, side: str, cutoff: float = 1500.0,
                               n: int = 24, max_depth: int = 8) -> QuadratureReport:
    """Integrate the weighted error of the constructed L (or M) and compare with the node sum.

    The integral runs panel by panel between consecutive nodes up to `cutoff`;
    the remainder comes from the large-x expansion of the error, which
    decays only like 1/x and cannot simply be dropped.
    """
    order = as_order(order)
    _check_side(side)
    lam = float(lam)
    if lam < 0.05:
        raise ValueError("quadrature check is limited to lambda >= 0.05")
    nu = order.nu
    kind = "A" if side == "minus" else "B"
    g = eval_A if kind == "A" else eval_B
    wexp = 2.0 * nu + 1.0

    def err(x):
        gx = np.asarray(g(order, x))
        return gx * gx * _axis_residual(nu, kind, lam, x)

    def weighted(x):
        return err(x) * x ** wexp

    nodes = zeros_upto(order, kind, cutoff)
    X = float(nodes[-1])
    breaks = np.concatenate([[0.0], nodes])
    total = 0.0
    est = 0.0
    # first panel carries the x^{2nu+1} weight exactly
    lo = _panel_integral(err, 0.0, breaks[1], n, wexp)
    hi = _panel_integral(err, 0.0, breaks[1], 2 * n, wexp)
    total += hi
    est += abs(hi - lo)
    stack = [(a, b, 0) for a, b in zip(breaks[1:-1], breaks[2:])]
    while stack:
        a, b, depth = stack.pop()
        lo = _panel_integral(weighted, a, b, n)
        hi = _panel_integral(weighted, a, b, 2 * n)
        if abs(hi - lo) > 1e-13 * max(1.0, abs(hi)) and depth < max_depth:
            m = 0.5 * (a + b)
            stack.extend([(a, m, depth + 1), (m, b, depth + 1)])
            continue
        total += hi
        est += abs(hi - lo)
    # tail: x^{2nu+1} G(x)^2 = C x J_mu(x)^2, residual ~ (2/pi) sum_k (-1)^k M_k x^{-2k-2}
    mu = nu if kind == "A" else nu + 1.0
    cn = math.gamma(nu + 1.0) ** 2 * 4.0 ** nu
    nodes2, q = _axis_weights(nu, kind, lam)
    tail = 0.0
    last = 0.0
    for k in range(3):
        mk = float(np.sum(q * nodes2 ** k))  # q already carries the 2/pi factor
        last = cn * (-1) ** k * mk * _bessel_sq_tail(mu, 2.0 * k + 1.0, X)
        tail += last
    est += abs(last)
    computed = 2.0 * (total + tail)
    zs = value_base(order, lam, side, method="zeros")
    return QuadratureReport(nu, lam, side, computed, zs, abs(computed - zs), 2.0 * est, X, 2.0 * tail)
