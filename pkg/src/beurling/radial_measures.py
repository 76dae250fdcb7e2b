"""Measures on (0, inf) and the radial functions they subordinate.

A nonnegative measure mu gives

    G_mu(x) = int (e^{-lam|x|} - e^{-lam}) d mu(lam),

which covers |x|^{-alpha-1} (power measures) and -log|x|.  Integrating the
one-parameter extremals against mu gives one-sided approximations of G_mu
with error int U(delta, lam) d mu.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import integrate, special

from . import _kernels
from ._quad import _legendre, panels_rule
from .bessel_core import OrderLike, as_order, eval_A, eval_A_imag, eval_B, zeros
from .exp_extremal import ExtremalValueQuery, _check_side, half_omega, value, value_base
from .freq_laplace import _decay_cutoff, axis_rule

__all__ = [
    "MeasureSpec",
    "power",
    "log_measure",
    "atoms",
    "table",
    "check_admissible",
    "sine_transform",
    "G_mu",
    "value_mu",
    "eval_subordinated",
    "rescale_measure",
]


@dataclass(frozen=True)
class MeasureSpec:
    """kind is "power" (weight * lam^alpha d lam), "log" (weight * d lam / lam),
    "atoms" (points (lam_j, w_j)) or "table" (piecewise-linear density on a grid).

    A table is taken as zero outside its grid; tail_exponent declares how the
    true density behaves past the last grid point and only enters the
    admissibility test.
    """

    kind: str
    alpha: float | None = None
    weight: float = 1.0
    points: tuple = ()
    lam_grid: tuple = field(default=(), repr=False)
    density: tuple = field(default=(), repr=False)
    tail_exponent: float | None = None

    def __post_init__(self):
        if self.kind == "power":
            if self.alpha is None or not self.alpha > -2:
                raise ValueError("power measure needs alpha > -2")
        elif self.kind == "log":
            object.__setattr__(self, "alpha", -1.0)
        elif self.kind == "atoms":
            pts = tuple((float(a), float(w)) for a, w in self.points)
            if not pts:
                raise ValueError("atom list is empty")
            if any(a <= 0 or w < 0 for a, w in pts):
                raise ValueError("atoms need lambda_j > 0 and w_j >= 0")
            object.__setattr__(self, "points", pts)
        elif self.kind == "table":
            lam = tuple(float(v) for v in self.lam_grid)
            den = tuple(float(v) for v in self.density)
            if len(lam) < 2 or len(lam) != len(den):
                raise ValueError("table needs matching lambda/density arrays of length >= 2")
            if lam[0] < 0 or any(b <= a for a, b in zip(lam, lam[1:])):
                raise ValueError("table lambda grid must be nonnegative and increasing")
            if any(d < 0 for d in den):
                raise ValueError("table density must be nonnegative")
            if self.tail_exponent is None:
                raise ValueError("table measures need a declared tail_exponent")
            object.__setattr__(self, "lam_grid", lam)
            object.__setattr__(self, "density", den)
        else:
            raise ValueError(f"unknown measure kind {self.kind!r}")
        if not self.weight >= 0:
            raise ValueError("weight must be nonnegative")

    def to_dict(self):
        if self.kind == "power":
            d = {"kind": "power", "alpha": self.alpha}
        elif self.kind == "log":
            d = {"kind": "log"}
        elif self.kind == "atoms":
            return {"kind": "atoms", "points": [list(p) for p in self.points]}
        else:
            return {"kind": "table", "lambda": list(self.lam_grid), "density": list(self.density),
                    "tail_exponent": self.tail_exponent}
        if self.weight != 1.0:
            d["weight"] = self.weight
        return d

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d):
        kind = d.get("kind")
        if kind == "power":
            return power(d["alpha"], d.get("weight", 1.0))
        if kind == "log":
            return log_measure(d.get("weight", 1.0))
        if kind == "atoms":
            return atoms(d["points"])
        if kind == "table":
            return table(d["lambda"], d["density"], d.get("tail_exponent"))
        raise ValueError(f"unknown measure kind {kind!r}")

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def power(alpha: float, weight: float = 1.0) -> MeasureSpec:
    return MeasureSpec("power", alpha=float(alpha), weight=float(weight))


def log_measure(weight: float = 1.0) -> MeasureSpec:
    return MeasureSpec("log", weight=float(weight))


def atoms(points) -> MeasureSpec:
    return MeasureSpec("atoms", points=tuple(tuple(p) for p in points))


def table(lam, density, tail_exponent) -> MeasureSpec:
    return MeasureSpec("table", lam_grid=tuple(lam), density=tuple(density), tail_exponent=tail_exponent)


def _table_rule(m, n=8):
    # Gauss-Legendre per grid segment: exact for the linear density times
    # smooth integrands up to the panel resolution
    lam = np.asarray(m.lam_grid)
    den = np.asarray(m.density)
    x, w = _legendre(n)
    a = lam[:-1, None]
    b = lam[1:, None]
    nodes = 0.5 * (a + b) + 0.5 * (b - a) * x[None, :]
    dens = np.interp(nodes, lam, den)
    weights = 0.5 * (b - a) * w[None, :] * dens
    return nodes.ravel(), weights.ravel()


def _table_transform(m, s, kind):
    """int k(lam s) rho(lam) d lam for a piecewise-linear rho, k = sin or exp(-.).

    Segments with |s| * width >= 1 use the exact antiderivative; shorter
    ones, where it cancels, use 8-point Gauss which is exact there to rounding.
    """
    s = np.asarray(s, dtype=np.float64)
    lam = np.asarray(m.lam_grid)
    den = np.asarray(m.density)
    a, b = lam[:-1], lam[1:]
    da, db = den[:-1], den[1:]
    slope = (db - da) / (b - a)
    ss = s.reshape(-1, 1)
    wide = np.abs(ss) * (b - a)[None, :] >= 1.0
    safe = np.where(wide, ss, 1.0)
    with np.errstate(over="ignore", invalid="ignore"):
        if kind == "sin":
            exact = ((da * np.cos(a * safe) - db * np.cos(b * safe)) / safe
                     + slope * (np.sin(b * safe) - np.sin(a * safe)) / safe ** 2)
        else:
            ea, eb = np.exp(-a * safe), np.exp(-b * safe)
            exact = (da * ea - db * eb) / safe + slope * (ea - eb) / safe ** 2
    x, w = _legendre(8)
    nodes = 0.5 * (a + b)[:, None] + 0.5 * (b - a)[:, None] * x[None, :]
    weights = 0.5 * (b - a)[:, None] * w[None, :] * np.interp(nodes, lam, den)
    arg = ss[:, :, None] * nodes[None, :, :]
    k = np.sin(arg) if kind == "sin" else np.exp(-arg)
    gauss = np.sum(k * weights[None, :, :], axis=2)
    out = np.where(wide, exact, gauss).sum(axis=1)
    return out.reshape(s.shape)


def check_admissible(m: MeasureSpec, order: OrderLike, side: str) -> bool:
    """Integrability of lam/(1 + lam^{2nu+3}) (minus) or lam/(1+lam) (plus) against mu."""
    nu = as_order(order).nu
    _check_side(side)
    if m.kind == "atoms":
        return True
    if m.kind in ("power", "log"):
        upper = 2.0 * nu + 1.0 if side == "minus" else -1.0
        return -2.0 < m.alpha < upper
    upper = 2.0 * nu + 1.0 if side == "minus" else -1.0
    nodes, weights = _table_rule(m)
    f = nodes / (1.0 + nodes ** (2.0 * nu + 3.0)) if side == "minus" else nodes / (1.0 + nodes)
    return bool(np.isfinite(np.sum(weights * f))) and m.tail_exponent < upper


def _power_sine_constant(alpha):
    # int_0^inf sin(lam) lam^alpha d lam (Abel-summed for alpha >= 0)
    if alpha == -1.0:
        return 0.5 * math.pi
    return special.gamma(alpha + 1.0) * math.sin(0.5 * math.pi * (alpha + 1.0))


def sine_transform(m: MeasureSpec, eta):
    """S_mu(eta) = int sin(lam eta) d mu(lam)."""
    eta = np.asarray(eta, dtype=np.float64)
    if m.kind == "atoms":
        out = np.zeros_like(eta)
        for lam, w in m.points:
            out += w * np.sin(lam * eta)
        return out
    if m.kind in ("power", "log"):
        return m.weight * _power_sine_constant(m.alpha) * np.abs(eta) ** (-m.alpha - 1.0) * np.sign(eta)
    return _table_transform(m, eta, "sin")


def G_mu(m: MeasureSpec, x_norm):
    """int (e^{-lam r} - e^{-lam}) d mu(lam); +inf where the integral diverges (r = 0)."""
    r = np.asarray(x_norm, dtype=np.float64)
    if np.any(r < 0):
        raise ValueError("x_norm must be nonnegative")
    if m.kind == "atoms":
        out = np.zeros_like(r)
        for lam, w in m.points:
            out += w * (np.exp(-lam * r) - math.exp(-lam))
    elif m.kind == "log" or (m.kind == "power" and m.alpha == -1.0):
        with np.errstate(divide="ignore"):
            out = m.weight * np.where(r > 0, -np.log(np.where(r > 0, r, 1.0)), np.inf)
    elif m.kind == "power":
        a = m.alpha
        g = special.gamma(1.0 + a)
        with np.errstate(divide="ignore"):
            rp = np.where(r > 0, np.where(r > 0, r, 1.0) ** (-a - 1.0), np.inf if a > -1 else 0.0)
        out = m.weight * g * (rp - 1.0)
    else:
        out = _table_transform(m, r, "exp") - _table_transform(m, 1.0, "exp")
    return float(out) if out.ndim == 0 else out


def rescale_measure(m: MeasureSpec, kappa: float) -> MeasureSpec:
    """mu_kappa(E) = mu(kappa E)."""
    kappa = float(kappa)
    if not kappa > 0:
        raise ValueError("kappa must be positive")
    if kappa == 1.0:
        return m
    if m.kind == "atoms":
        return atoms([(lam / kappa, w) for lam, w in m.points])
    if m.kind in ("power", "log"):
        return replace(m, weight=m.weight * kappa ** (m.alpha + 1.0))
    return table(np.asarray(m.lam_grid) / kappa, np.asarray(m.density) * kappa, m.tail_exponent)


# ---------------------------------------------------------------------------
# subordinated values
# ---------------------------------------------------------------------------

def _closed_power_value(m, nu, N, delta, side):
    # int U^{1-+}(2, t) t^alpha dt = (4/pi) S_alpha int eta^{2nu-alpha} K_mu/I_mu d eta
    mu = nu if side == "minus" else nu + 1.0
    a = m.alpha
    if a >= 1.0:
        # K_mu/I_mu ~ eta^(-2 mu) makes the eta integral diverge at 0
        raise ValueError("the Bessel-ratio form needs alpha < 1; use method='quad'")

    def f(eta):
        return eta ** (2.0 * nu - a) * special.kve(mu, eta) / special.ive(mu, eta) * math.exp(-2.0 * eta)

    parts = [integrate.quad(f, lo, hi, limit=200, epsabs=0, epsrel=1e-13)[0]
             for lo, hi in ((0.0, 1e-6), (1e-6, 1.0), (1.0, 10.0), (10.0, 80.0))]
    base = (4.0 / math.pi) * _power_sine_constant(a) * math.fsum(parts)
    kappa = 2.0 / delta
    return m.weight * half_omega(N) * kappa ** (2.0 * nu + 2.0) * kappa ** (-a - 1.0) * base


def value_mu(m: MeasureSpec, order: OrderLike, N: int, delta: float, side: str,
             method: str = "quad", rtol: float = 1e-11) -> float:
    """int U_nu^{N-+}(delta, lam) d mu(lam).

    method "quad" integrates the extremal values over lam (split at 1,
    lam = e^u); "closed" uses the Bessel-ratio form, power and log only.
    """
    order = as_order(order)
    _check_side(side)
    if not check_admissible(m, order, side):
        raise ValueError(f"measure {m.to_dict()} is not admissible for the {side} side at nu={order.nu}")
    nu = order.nu
    if method not in ("quad", "closed"):
        raise ValueError(f"unknown method {method!r}")
    if method == "closed":
        if m.kind not in ("power", "log"):
            raise ValueError("closed form is only available for power and log measures")
        return _closed_power_value(m, nu, N, delta, side)
    if m.kind == "atoms":
        return math.fsum(w * value(ExtremalValueQuery(order, N, delta, lam, side)) for lam, w in m.points if w)
    kappa = 2.0 / delta
    scale = half_omega(N) * kappa ** (2.0 * nu + 2.0)
    if m.kind == "table":
        nodes, weights = _table_rule(m)
        keep = (nodes > 0) & (weights > 0)
        vals = np.array([value_base(order, kappa * lam, side) for lam in nodes[keep]])
        return scale * math.fsum(vals * weights[keep])
    a = m.alpha

    def integrand(u):
        if abs(u) > 600.0:
            return 0.0  # integrand decays geometrically in u at both ends
        v = value_base(order, kappa * math.exp(u), side)
        return math.exp(math.log(v) + (a + 1.0) * u) if v > 0 else 0.0

    total = 0.0
    for lo, hi in ((-math.inf, 0.0), (0.0, math.inf)):
        res, abserr = integrate.quad(integrand, lo, hi, epsabs=0.0, epsrel=rtol, limit=200)
        if not math.isfinite(res) or abserr > 1e3 * rtol * max(abs(res), 1e-300):
            raise ArithmeticError(f"lambda quadrature did not converge (estimate {abserr:.2e})")
        total += res
    return m.weight * scale * total


def _axis_exponent(m, side):
    # behaviour of eta S(eta)/|G(i eta)|^2 at eta -> 0
    if m.kind in ("power", "log"):
        return -m.alpha if side == "minus" else -m.alpha - 2.0
    return 0.0


def _freq_scale(m, kappa):
    if m.kind == "atoms":
        return kappa * max(lam for lam, _ in m.points)
    if m.kind == "table":
        return kappa * m.lam_grid[-1]
    return 1.0


def _taylor_odd(nu, y, terms):
    # eta/((eta^2+y^2) A(i eta)^2) = sum_k p_k eta^(2k+1)
    n = np.arange(terms)
    a = np.exp(-n * math.log(4.0) - special.gammaln(n + 1.0)
               - (special.gammaln(nu + 1.0 + n) - special.gammaln(nu + 1.0)))
    a2 = np.convolve(a, a)[:terms]
    inv = np.zeros(terms)
    inv[0] = 1.0 / a2[0]
    for k in range(1, terms):
        inv[k] = -np.dot(a2[1:k + 1], inv[k - 1::-1]) / a2[0]
    geo = (-1.0) ** n / y ** (2.0 * n + 2.0)
    return np.convolve(geo, inv)[:terms]


def _finite_part_error(m, order, kappa, y, terms=80):
    # The sine transform of lam^alpha for alpha >= 1 is the finite-part
    # distribution C eta^(-alpha-1); odd Taylor terms of the eta integrand
    # are integrated analytically on [0, c], the rest by Gauss panels.
    nu = order.nu
    a = m.alpha
    C = math.gamma(a + 1.0) * math.sin(0.5 * math.pi * (a + 1.0))
    xi1 = float(zeros(order, "A", 1).zeros[0])
    T = _decay_cutoff(nu, "A")
    out = np.empty_like(y)
    for i, yy in enumerate(y):
        c = 0.5 * min(yy, xi1, 1.0)
        p = _taylor_odd(nu, yy, terms)
        ex = 2.0 * np.arange(terms) + 1.0 - a
        hit = np.abs(ex) < 1e-12
        head = 0.0
        if np.any(hit):
            k = int(np.nonzero(hit)[0][0])
            # limit of C * p_k c^ex / ex as ex -> 0
            head = math.gamma(a + 1.0) * (-1.0) ** k * 0.5 * math.pi * p[k]
        keep = ~hit
        near = C * math.fsum(p[keep] * c ** ex[keep] / ex[keep])
        breaks = np.concatenate([np.geomspace(c, max(1.0, 2.0 * c), 12),
                                 np.arange(max(1.0, 2.0 * c) + 0.5, max(T, 2.0 * c + 1.0), 0.5)])
        eta, w = panels_rule(breaks, 16)
        f = eta / ((eta * eta + yy * yy) * np.asarray(eval_A_imag(nu, eta)) ** 2)
        far = C * float(np.sum(w * f * eta ** (-a - 1.0)))
        out[i] = (2.0 / math.pi) * (head + near + far)
    gy = np.asarray(eval_A(order, y))
    return m.weight * kappa ** (-a - 1.0) * gy * gy * out


def eval_subordinated(m: MeasureSpec, order: OrderLike, N: int, delta: float, point, side: str):
    """Subordinated minorant G_mu - D^- or majorant G_mu + D^+ of G_mu at real points."""
    order = as_order(order)
    _check_side(side)
    if not check_admissible(m, order, side):
        raise ValueError(f"measure {m.to_dict()} is not admissible for the {side} side")
    p = np.asarray(point, dtype=np.float64)
    if p.shape[-1] != int(N):
        raise ValueError(f"points must have trailing dimension {N}")
    r = np.sqrt(np.sum(p * p, axis=-1))
    g = np.asarray(G_mu(m, r))
    if np.any(~np.isfinite(g)):
        raise ValueError("G_mu is infinite at the origin; evaluate away from 0")
    kappa = 2.0 / float(delta)
    y = np.atleast_1d(r / kappa)
    nu = order.nu
    kind = "A" if side == "minus" else "B"
    if m.kind == "power" and side == "minus" and m.alpha >= 1.0:
        d = _finite_part_error(m, order, kappa, y)
    else:
        nodes, weights, inv = axis_rule(nu, kind, _freq_scale(m, kappa), _axis_exponent(m, side))
        q = (2.0 / math.pi) * weights * nodes * sine_transform(m, kappa * nodes) * inv
        gy = np.asarray(eval_A(order, y) if kind == "A" else eval_B(order, y))
        d = gy * gy * _kernels.stieltjes(y * y, nodes * nodes, q)
    d = d.reshape(r.shape)
    out = g - d if side == "minus" else g + d
    return float(out) if out.ndim == 0 else out
