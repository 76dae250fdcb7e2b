"""Frequency functions of even Laguerre-Polya functions and the interpolants L, M.

For an even F in the Laguerre-Polya class and a real c with F(c) != 0,

    1/F(z) = int g_c(t) e^{-zt} dt,   g_c(t) = (2 pi i)^-1 int_{Re s = c} e^{st}/F(s) ds,

on the zero-free vertical strip containing c.  With F = A_nu^2 the function
L(x) agrees with e^{-lam|x|} to first order at every zero of A_nu and stays
below it; with F = B_nu^2 the function M touches from above at the zeros of
B_nu (value only at the origin).

L and M are evaluated through an integral along the imaginary axis,

    e^{-lam|x|} - L(x) = A(x)^2 (2/pi) int_0^inf eta sin(lam eta) / ((eta^2 + x^2) A(i eta)^2) d eta,
    M(x) - e^{-lam|x|} = B(x)^2 (2/pi) int_0^inf eta sin(lam eta) / ((eta^2 + x^2) |B(i eta)|^2) d eta,

where A(i eta), -i B(i eta) are positive modified-Bessel type functions.  The
integrand decays like e^{-2 eta} so a fixed composite rule gives ~1e-15
accuracy uniformly in x; no residue sums with alternating terms are needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import special

from . import _kernels
from ._quad import graded_rule
from .bessel_core import (
    Order,
    OrderLike,
    as_order,
    eval_A,
    eval_A_imag,
    eval_B,
    eval_B_imag,
    zeros_upto,
)

__all__ = [
    "TruncationError",
    "EvenLPFunction",
    "FrequencyFunction",
    "FreqConfig",
    "build_frequency",
    "eval_g",
    "eval_minorant",
    "eval_majorant",
    "error_bound",
    "axis_rule",
]


class TruncationError(ArithmeticError):
    """The requested tolerance cannot be met within the configured term cap."""


@dataclass(frozen=True)
class FreqConfig:
    tol: float = 1e-10
    max_poles: int = 20000
    # |t| below this uses the vertical-line integral, above it the residues
    contour_switch: float = 1.0


DEFAULT_CONFIG = FreqConfig()

# panels of width 1/lambda out to the decay cutoff; past this count the
# oscillatory axis integral is refused rather than exhausting memory
MAX_AXIS_NODES = 2_000_000

_KINDS = ("A_squared", "B_squared", "quadratic", "z_squared", "constant")


@dataclass(frozen=True)
class EvenLPFunction:
    """An even Laguerre-Polya function with F >= 0 on the real line.

    Bessel-backed kinds carry an order; the degenerate kinds C(1 - z^2/alpha^2),
    C z^2 and C carry their coefficients.
    """

    kind: str
    order: Order | None = None
    C: float = 1.0
    alpha: float | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unsupported kind {self.kind!r}")
        if self.kind in ("A_squared", "B_squared"):
            if self.order is None:
                raise ValueError(f"{self.kind} needs an order")
            object.__setattr__(self, "order", as_order(self.order))
        elif not self.C > 0:
            raise ValueError("C must be positive")
        if self.kind == "quadratic" and not (self.alpha and self.alpha > 0):
            raise ValueError("quadratic form needs alpha > 0")

    @classmethod
    def a_squared(cls, order: OrderLike):
        return cls("A_squared", as_order(order))

    @classmethod
    def b_squared(cls, order: OrderLike):
        return cls("B_squared", as_order(order))

    @classmethod
    def quadratic(cls, C: float, alpha: float):
        return cls("quadratic", None, float(C), float(alpha))

    @classmethod
    def z_squared(cls, C: float = 1.0):
        return cls("z_squared", None, float(C))

    @classmethod
    def constant(cls, C: float = 1.0):
        return cls("constant", None, float(C))

    @property
    def degree(self) -> float:
        """Number of zeros counted with multiplicity (inf for Bessel kinds)."""
        return {"A_squared": math.inf, "B_squared": math.inf, "quadratic": 2,
                "z_squared": 2, "constant": 0}[self.kind]

    @property
    def first_zero(self) -> float:
        """Smallest positive zero (alpha_F); inf when there is none."""
        if self.kind == "A_squared":
            return float(zeros_upto(self.order, "A", 50.0)[0])
        if self.kind == "B_squared":
            return float(zeros_upto(self.order, "B", 50.0)[0])
        if self.kind == "quadratic":
            return self.alpha
        return math.inf

    def __call__(self, z):
        z = np.asarray(z)
        if self.kind == "quadratic":
            out = self.C * (1.0 - z * z / self.alpha ** 2)
        elif self.kind == "z_squared":
            out = self.C * z * z
        elif self.kind == "constant":
            out = self.C * np.ones_like(z)
        elif np.iscomplexobj(z):
            out = _complex_pair(self.order.nu, z, self.kind) ** 2
        else:
            f = eval_A if self.kind == "A_squared" else eval_B
            out = np.asarray(f(self.order, z)) ** 2
        return out[()] if out.ndim == 0 else out


def _complex_pair(nu, z, kind):
    z = np.asarray(z, dtype=np.complex128)
    out = np.empty_like(z)
    small = np.abs(z) < 1e-6
    big = ~small
    zb = z[big]
    scale = np.exp(special.gammaln(nu + 1.0) - nu * np.log(0.5 * zb))
    mu = nu if kind == "A_squared" else nu + 1.0
    out[big] = scale * special.jv(mu, zb)
    zs = z[small]
    if kind == "A_squared":
        out[small] = 1.0 - zs * zs / (4.0 * (nu + 1.0))
    else:
        out[small] = zs / (2.0 * (nu + 1.0))
    return out


@dataclass(frozen=True)
class FrequencyFunction:
    """g_c for F along Re s = c, stored through its pole data.

    left/right are (poles, a, b): the residue of e^{st}/F(s) at pole p is
    e^{pt}(a + b t).  For the Bessel kinds the pole lists are generated on
    demand from the cached zero tables, so only the rule is stored.
    """

    source: EvenLPFunction
    c: float
    strip: tuple
    left: tuple = field(default=None, repr=False)
    right: tuple = field(default=None, repr=False)

    def __call__(self, t, derivative_order: int = 0):
        return eval_g(self, t, derivative_order)


def build_frequency(F: EvenLPFunction, c: float | None = None) -> FrequencyFunction:
    """Frequency function g_c of F (default c: 0 for F(0) > 0, alpha_F/2 otherwise)."""
    if F.kind == "constant":
        raise ValueError("1/C is the transform of a point mass; no frequency function")
    alpha = F.first_zero
    if c is None:
        if F.kind in ("A_squared", "quadratic"):
            c = 0.0
        else:
            c = 0.5 * alpha if math.isfinite(alpha) else 1.0
    c = float(c)
    if F.kind in ("A_squared", "quadratic"):
        strip = (-alpha, alpha)
    elif F.kind == "B_squared":
        strip = (0.0, alpha)
    else:
        strip = (0.0, math.inf)
    if not strip[0] < c < strip[1]:
        raise ValueError(f"c={c} is not inside the zero-free strip {strip} of F")
    left = right = None
    if F.kind == "quadratic":
        # simple poles at -alpha, +alpha with residue e^{pt}/F'(p)
        a0 = F.alpha / (2.0 * F.C)
        left = (np.array([-F.alpha]), np.array([a0]), np.array([0.0]))
        right = (np.array([F.alpha]), np.array([-a0]), np.array([0.0]))
    elif F.kind == "z_squared":
        left = (np.array([0.0]), np.array([0.0]), np.array([1.0 / F.C]))
        right = (np.empty(0), np.empty(0), np.empty(0))
    return FrequencyFunction(F, c, strip, left, right)


def _bessel_poles(F: EvenLPFunction, bound: float):
    """Residue data (p, a, b) for the Bessel kinds up to |p| <= bound."""
    nu = F.order.nu
    k = 2.0 * nu + 1.0
    if F.kind == "A_squared":
        xi = zeros_upto(F.order, "A", bound)
        bx = np.asarray(eval_B(F.order, xi))
        inv = 1.0 / (bx * bx)
    else:
        xi = zeros_upto(F.order, "B", bound)
        ax = np.asarray(eval_A(F.order, xi))
        inv = 1.0 / (ax * ax)
    # double poles: at -xi, a = -k/(xi G'^2), b = 1/G'^2; at +xi the signs of a flip
    left = (-xi, -k * inv / xi, inv)
    right = (xi, k * inv / xi, inv)
    if F.kind == "B_squared":
        beta = 2.0 * (nu + 1.0)
        left = tuple(np.concatenate([[v], arr]) for v, arr in zip((0.0, 0.0, beta * beta), left))
    return left, right


def _residue_sum(poles, a, b, t, k, sign):
    # sign * sum_p d^k/dt^k [e^{pt}(a + b t)]
    p = poles[None, :]
    tt = t[:, None]
    e = np.exp(p * tt)
    lin = a[None, :] + b[None, :] * tt
    if k == 0:
        val = e * lin
    elif k == 1:
        val = e * (p * lin + b[None, :])
    else:
        val = e * (p * p * lin + 2.0 * p * b[None, :])
    return sign * val.sum(axis=1)


def _tail_estimate(F, bound, t, k):
    # asymptotically 1/G'(xi)^2 ~ (pi/2) xi^{2nu+1} / (Gamma(nu+1)^2 4^nu) with spacing pi
    nu = F.order.nu
    cn = math.gamma(nu + 1.0) ** 2 * 4.0 ** nu
    amp = 0.5 / cn
    at = np.abs(t)
    tot = np.zeros_like(at)
    for power, coef in ((2.0 * nu + 1.0 + k, at + 2.0), (2.0 * nu + k, abs(2.0 * nu + 1.0))):
        s1 = power + 1.0
        if s1 <= 0:
            s1 = 1e-3
        tot += coef * at ** (-s1) * special.gamma(s1) * special.gammaincc(s1, bound * at)
    return 2.0 * amp * tot


def _contour(g: FrequencyFunction, t, k):
    F = g.source
    nu = F.order.nu
    T = _decay_cutoff(nu, "A" if F.kind == "A_squared" else "B")
    nodes, weights = graded_rule(T, 0.25, s=1.0)
    if F.kind == "A_squared":
        inv = 1.0 / np.asarray(eval_A_imag(F.order, nodes)) ** 2
        y = nodes[None, :]
        ph = y * t[:, None]
        if k == 0:
            f = np.cos(ph)
        elif k == 1:
            f = -y * np.sin(ph)
        else:
            f = -y * y * np.cos(ph)
        return (f * (inv * weights)[None, :]).sum(axis=1) / math.pi
    s = g.c + 1j * nodes
    inv = 1.0 / _complex_pair(nu, s, "B_squared") ** 2
    vals = np.real((s[None, :] ** k) * np.exp(s[None, :] * t[:, None]) * inv[None, :])
    return (vals * weights[None, :]).sum(axis=1) / math.pi


def eval_g(g: FrequencyFunction, t, derivative_order: int = 0, method: str = "auto",
           config: FreqConfig | None = None):
    """g_c(t) or one of its first two derivatives.

    method is "residue", "contour" or "auto" (contour near t = 0 where the
    residue series converges slowly).  Raises TruncationError when the
    residue tail cannot be brought under the tolerance.
    """
    cfg = config or DEFAULT_CONFIG
    k = int(derivative_order)
    if k not in (0, 1, 2):
        raise ValueError("derivative_order must be 0, 1 or 2")
    F = g.source
    if F.degree != math.inf and k > F.degree - 2:
        raise ValueError(f"g is only C^{int(F.degree) - 2} for this F")
    t_arr = np.atleast_1d(np.asarray(t, dtype=np.float64))
    out = np.empty_like(t_arr)
    if F.kind in ("quadratic", "z_squared"):
        pos = t_arr > 0
        out[pos] = _residue_sum(*g.left, t_arr[pos], k, 1.0)
        out[~pos] = _residue_sum(*g.right, t_arr[~pos], k, -1.0)
        if F.kind == "z_squared" and k == 1:
            # one-sided derivative jump at 0: use the symmetrised value
            out[t_arr == 0] = 0.5 / F.C
        return out[0] if np.ndim(t) == 0 else out
    if method == "auto":
        near = np.abs(t_arr) < cfg.contour_switch
    elif method == "contour":
        near = np.ones(t_arr.shape, dtype=bool)
    elif method == "residue":
        near = np.zeros(t_arr.shape, dtype=bool)
        if np.any(t_arr == 0):
            raise ValueError("the residue series does not converge at t = 0")
    else:
        raise ValueError(f"unknown method {method!r}")
    if np.any(near):
        out[near] = _contour(g, t_arr[near], k)
    far = ~near
    if np.any(far):
        tf = t_arr[far]
        tmin = np.min(np.abs(tf))
        bound = 40.0
        while True:
            tail = np.max(_tail_estimate(F, bound, np.array([tmin]), k))
            if tail < 0.1 * cfg.tol:
                break
            bound *= 1.5
            if bound / math.pi > cfg.max_poles:
                raise TruncationError(
                    f"residue series needs more than {cfg.max_poles} poles at |t|={tmin:g};"
                    " use the contour method or raise max_poles"
                )
        left, right = _bessel_poles(F, bound)
        res = np.empty_like(tf)
        pos = tf > 0
        res[pos] = _residue_sum(*left, tf[pos], k, 1.0)
        res[~pos] = _residue_sum(*right, tf[~pos], k, -1.0)
        out[far] = res
    return out[0] if np.ndim(t) == 0 else out


# ---------------------------------------------------------------------------
# L and M through the imaginary axis
# ---------------------------------------------------------------------------

@lru_cache(maxsize=32)
def _decay_cutoff(nu, kind):
    # where eta^2 / G(i eta)^2 has dropped by 1e-19 from its peak
    grid = np.linspace(0.5, 400.0, 3200)
    f = eval_A_imag if kind == "A" else eval_B_imag
    with np.errstate(over="ignore"):
        v = grid ** 2 / np.asarray(f(nu, grid)) ** 2
    peak = np.max(v[np.isfinite(v)])
    ok = np.nonzero(v > 1e-19 * peak)[0]
    return float(grid[ok[-1]]) + 1.0


@lru_cache(maxsize=64)
def _inverse_weight(nu, kind, T, h, s, gamma):
    nodes, weights = graded_rule(T, h, s=s, gamma=gamma)
    f = eval_A_imag if kind == "A" else eval_B_imag
    inv = 1.0 / np.asarray(f(nu, nodes)) ** 2
    nodes.setflags(write=False)
    weights.setflags(write=False)
    inv.setflags(write=False)
    return nodes, weights, inv


def axis_rule(nu: float, kind: str, freq_scale: float = 1.0, gamma: float = 0.0):
    """Nodes, weights and 1/|G(i eta)|^2 for eta-integrals against G = A or B.

    freq_scale bounds the oscillation rate of the remaining integrand.
    """
    T = _decay_cutoff(float(nu), kind)
    fs = max(float(freq_scale), 1e-300)
    h = min(0.5, 1.0 / fs)
    s = min(1.0, 1.0 / fs)
    if 16.0 * T / h > MAX_AXIS_NODES:
        raise TruncationError(
            f"oscillation rate {fs:g} needs about {16.0 * T / h:.3g} axis nodes"
            f" (cap {MAX_AXIS_NODES}); lambda must stay below about {MAX_AXIS_NODES / (16.0 * T):.0f}"
        )
    return _inverse_weight(float(nu), kind, T, round(h, 15), round(s, 15), float(gamma))


@lru_cache(maxsize=32)
def _axis_weights(nu, kind, lam):
    nodes, weights, inv = axis_rule(nu, kind, lam)
    q = (2.0 / math.pi) * weights * nodes * np.sin(lam * nodes) * inv
    q.setflags(write=False)
    return nodes * nodes, q


def _axis_residual(nu, kind, lam, x):
    nodes2, q = _axis_weights(float(nu), kind, float(lam))
    return _kernels.stieltjes(np.asarray(x, dtype=np.float64) ** 2, nodes2, q)


def _check_lam(lam):
    lam = float(lam)
    if not lam > 0 or not math.isfinite(lam):
        raise ValueError(f"lambda must be positive and finite, got {lam!r}")
    return lam


def eval_minorant(order: OrderLike, lam: float, x):
    """L(A_nu^2, lam, x): entire of exponential type 2, below e^{-lam|x|}."""
    order = as_order(order)
    lam = _check_lam(lam)
    x_arr = np.asarray(x, dtype=np.float64)
    a = np.asarray(eval_A(order, x_arr))
    out = np.exp(-lam * np.abs(x_arr)) - a * a * _axis_residual(order.nu, "A", lam, x_arr)
    return float(out) if out.ndim == 0 else out


def eval_majorant(order, lam: float, x):
    """M(B_nu^2, lam, x): entire of exponential type 2, above e^{-lam|x|}.

    `order` may also be EvenLPFunction.z_squared(C), for which M is 1.
    """
    lam = _check_lam(lam)
    x_arr = np.asarray(x, dtype=np.float64)
    if isinstance(order, EvenLPFunction):
        if order.kind == "z_squared":
            out = np.ones_like(x_arr)
            return float(out) if out.ndim == 0 else out
        if order.kind != "B_squared":
            raise ValueError(f"no majorant construction for kind {order.kind!r}")
        order = order.order
    order = as_order(order)
    b = np.asarray(eval_B(order, x_arr))
    out = np.exp(-lam * np.abs(x_arr)) + b * b * _axis_residual(order.nu, "B", lam, x_arr)
    return float(out) if out.ndim == 0 else out


@lru_cache(maxsize=32)
def _bound_constants(nu):
    nodes, weights, inv_a = axis_rule(nu, "A")
    m0 = float(np.sum(weights * inv_a))
    m2 = float(np.sum(weights * nodes ** 2 * inv_a))
    nodes_b, weights_b, inv_b = axis_rule(nu, "B")
    m2b = float(np.sum(weights_b * nodes_b ** 2 * inv_b))
    c_minus = 2.0 * (2.0 / math.pi) * max(m0, m2)
    c_plus = (2.0 / math.pi) * m2b
    return c_minus, c_plus


def error_bound(order: OrderLike, lam: float, x, side: str = "minus"):
    """Pointwise bound c lam (1+lam) F(x)/(1+x^2) (minus) or F(x)/x^2 (plus)."""
    order = as_order(order)
    lam = _check_lam(lam)
    x_arr = np.asarray(x, dtype=np.float64)
    c_minus, c_plus = _bound_constants(order.nu)
    if side == "minus":
        f = np.asarray(eval_A(order, x_arr)) ** 2
        out = c_minus * lam * (1.0 + lam) * f / (1.0 + x_arr ** 2)
    elif side == "plus":
        bx = np.asarray(eval_B(order, x_arr))
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(x_arr == 0, 1.0 / (2.0 * (order.nu + 1.0)) ** 2, bx * bx / np.where(x_arr == 0, 1.0, x_arr ** 2))
        out = c_plus * lam * (1.0 + lam) * ratio
    else:
        raise ValueError("side must be 'minus' or 'plus'")
    return float(out) if out.ndim == 0 else out

