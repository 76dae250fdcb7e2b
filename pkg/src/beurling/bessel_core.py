"""Structure functions A_nu, B_nu of the homogeneous de Branges spaces.

    A_nu(z) = sum_n (-1)^n (z/2)^(2n)   / (n! (nu+1)...(nu+n))
    B_nu(z) = sum_n (-1)^n (z/2)^(2n+1) / (n! (nu+1)...(nu+n+1))

so that A_nu = Gamma(nu+1) (z/2)^-nu J_nu and B_nu = Gamma(nu+1) (z/2)^-nu J_{nu+1}.
E_nu = A_nu - i B_nu is Hermite-Biehler and the reproducing kernel of
H(E_nu) is built from the pair.
"""

from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass, field
from typing import Union

import numpy as np
from scipy import special

from . import _kernels

__all__ = [
    "Order",
    "BesselConfig",
    "ZeroTable",
    "RootRefinementError",
    "as_order",
    "eval_A",
    "eval_B",
    "eval_A_prime",
    "eval_B_prime",
    "eval_A_imag",
    "eval_B_imag",
    "eval_E",
    "zeros",
    "zeros_upto",
    "kernel_diag",
    "kernel",
    "c_nu",
]


class RootRefinementError(RuntimeError):
    """Raised when bracketed Newton/bisection fails to converge."""


@dataclass(frozen=True)
class Order:
    nu: float

    def __post_init__(self):
        nu = float(self.nu)
        if not math.isfinite(nu) or nu <= -1.0:
            raise ValueError(f"order must satisfy nu > -1, got {self.nu!r}")
        object.__setattr__(self, "nu", nu)

    def __float__(self):
        return self.nu


OrderLike = Union[Order, float, int]


def as_order(order: OrderLike) -> Order:
    return order if isinstance(order, Order) else Order(order)


@dataclass(frozen=True)
class BesselConfig:
    # The power series is used for |x| <= series_switch.  Its terms grow like
    # e^|x| before cancelling, so past a handful of units the Bessel
    # identities are the accurate route.
    series_switch: float = 5.0
    max_terms: int = 200
    zero_rtol: float = 1e-13
    max_iter: int = 100
    scan_step: float = 0.1


DEFAULT_CONFIG = BesselConfig()


def c_nu(order: OrderLike) -> float:
    """Constant relating the H(E_nu) norm to the weight |x|^(2nu+1)."""
    nu = as_order(order).nu
    return math.pi * 2.0 ** (-2.0 * nu - 1.0) / math.gamma(nu + 1.0) ** 2


def _bessel_scale(nu, ax):
    # Gamma(nu+1) (x/2)^-nu, only called for ax > 0
    return np.exp(special.gammaln(nu + 1.0) - nu * np.log(0.5 * ax))


def _eval_pair(order, x, config):
    nu = as_order(order).nu
    cfg = config or DEFAULT_CONFIG
    x = np.asarray(x, dtype=np.float64)
    ax = np.abs(x)
    a = np.empty_like(ax)
    b = np.empty_like(ax)
    small = ax <= cfg.series_switch
    if np.any(small):
        sa, sb = _kernels.series_pair(nu, ax[small], -1.0, cfg.max_terms)
        a[small] = sa
        b[small] = sb
    big = ~small
    if np.any(big):
        xb = ax[big]
        s = _bessel_scale(nu, xb)
        a[big] = s * special.jv(nu, xb)
        b[big] = s * special.jv(nu + 1.0, xb)
    b = np.where(x < 0, -b, b)
    return a, b


def _scalarize(arr, like):
    if np.ndim(like) == 0:
        return float(arr)
    return arr


def eval_A(order: OrderLike, x, config: BesselConfig | None = None):
    """A_nu(x) for real x (scalar or array); even in x."""
    a, _ = _eval_pair(order, x, config)
    return _scalarize(a, x)


def eval_B(order: OrderLike, x, config: BesselConfig | None = None):
    """B_nu(x) for real x; odd in x."""
    _, b = _eval_pair(order, x, config)
    return _scalarize(b, x)


def eval_A_prime(order: OrderLike, x, config: BesselConfig | None = None):
    """A_nu'(x) = -B_nu(x)."""
    _, b = _eval_pair(order, x, config)
    return _scalarize(-b, x)


def _b_over_x(order, x, config):
    nu = as_order(order).nu
    x = np.asarray(x, dtype=np.float64)
    _, b = _eval_pair(order, x, config)
    out = np.empty_like(b)
    tiny = np.abs(x) < 1e-8
    out[~tiny] = b[~tiny] / x[~tiny]
    # B(x)/x = 1/(2(nu+1)) - x^2/(8(nu+1)(nu+2)) + ...
    xt = x[tiny]
    out[tiny] = 1.0 / (2.0 * (nu + 1.0)) - xt * xt / (8.0 * (nu + 1.0) * (nu + 2.0))
    return out


def eval_B_prime(order: OrderLike, x, config: BesselConfig | None = None):
    """B_nu'(x) = A_nu(x) - (2nu+1) B_nu(x)/x, continuous through x = 0."""
    nu = as_order(order).nu
    a, _ = _eval_pair(order, x, config)
    out = a - (2.0 * nu + 1.0) * _b_over_x(order, x, config)
    return _scalarize(out, x)


def eval_A_imag(order: OrderLike, y, config: BesselConfig | None = None):
    """A_nu(iy) = Gamma(nu+1) (y/2)^-nu I_nu(y); real, even, >= 1."""
    return _eval_imag_pair(order, y, config)[0]


def eval_B_imag(order: OrderLike, y, config: BesselConfig | None = None):
    """-i B_nu(iy) = Gamma(nu+1) (y/2)^-nu I_{nu+1}(y); real and odd."""
    return _eval_imag_pair(order, y, config)[1]


def _eval_imag_pair(order, y, config):
    nu = as_order(order).nu
    cfg = config or DEFAULT_CONFIG
    y = np.asarray(y, dtype=np.float64)
    ay = np.abs(y)
    a = np.empty_like(ay)
    b = np.empty_like(ay)
    # no cancellation on the imaginary axis, but the series needs ~y terms
    small = ay <= 40.0
    if np.any(small):
        sa, sb = _kernels.series_pair(nu, ay[small], 1.0, max(cfg.max_terms, 200))
        a[small] = sa
        b[small] = sb
    big = ~small
    if np.any(big):
        yb = ay[big]
        s = np.exp(special.gammaln(nu + 1.0) - nu * np.log(0.5 * yb) + yb)
        a[big] = s * special.ive(nu, yb)
        b[big] = s * special.ive(nu + 1.0, yb)
    b = np.where(y < 0, -b, b)
    return _scalarize(a, y), _scalarize(b, y)


def eval_E(order: OrderLike, x, config: BesselConfig | None = None):
    """E_nu(x) = A_nu(x) - i B_nu(x) on the real line."""
    a, b = _eval_pair(order, x, config)
    out = a - 1j * b
    return complex(out) if np.ndim(x) == 0 else out


def kernel_diag(order: OrderLike, xi, config: BesselConfig | None = None):
    """K_nu(xi, xi) = (B'(xi) A(xi) - A'(xi) B(xi)) / pi."""
    nu = as_order(order).nu
    xi_arr = np.asarray(xi, dtype=np.float64)
    a, b = _eval_pair(order, xi_arr, config)
    bx = _b_over_x(order, xi_arr, config)
    val = (a * a + b * b - (2.0 * nu + 1.0) * a * bx) / math.pi
    return _scalarize(val, xi)


def kernel(order: OrderLike, w, z, config: BesselConfig | None = None):
    """K_nu(w, z) for real w != z."""
    w_arr = np.asarray(w, dtype=np.float64)
    z_arr = np.asarray(z, dtype=np.float64)
    if np.any(w_arr == z_arr):
        raise ValueError("kernel requires w != z; use kernel_diag on the diagonal")
    aw, bw = _eval_pair(order, w_arr, config)
    az, bz = _eval_pair(order, z_arr, config)
    val = (bz * aw - az * bw) / (math.pi * (z_arr - w_arr))
    return _scalarize(val, np.broadcast(w_arr, z_arr))


# ---------------------------------------------------------------------------
# zeros
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ZeroTable:
    order: Order
    kind: str
    zeros: np.ndarray = field(repr=False)
    kernel_diag: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.kind not in ("A", "B"):
            raise ValueError(f"kind must be 'A' or 'B', got {self.kind!r}")
        z = np.array(self.zeros, dtype=np.float64)
        k = np.array(self.kernel_diag, dtype=np.float64)
        if z.shape != k.shape or z.ndim != 1:
            raise ValueError("zeros and kernel_diag must be 1-d and of equal length")
        z.setflags(write=False)
        k.setflags(write=False)
        object.__setattr__(self, "zeros", z)
        object.__setattr__(self, "kernel_diag", k)

    def __len__(self):
        return self.zeros.size

    def to_dict(self):
        return {
            "nu": self.order.nu,
            "kind": self.kind,
            "zeros": self.zeros.tolist(),
            "kernel_diag": self.kernel_diag.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d):
        return cls(Order(d["nu"]), d["kind"], d["zeros"], d["kernel_diag"])

    @classmethod
    def from_json(cls, text: str) -> "ZeroTable":
        return cls.from_dict(json.loads(text))


def _refine(mu, lo, hi, cfg):
    """Safeguarded Newton on J_mu inside the brackets [lo, hi] (vectorised)."""
    lo = lo.copy()
    hi = hi.copy()
    flo = special.jv(mu, lo)
    x = 0.5 * (lo + hi)
    done = np.zeros(x.shape, dtype=bool)
    for _ in range(cfg.max_iter):
        f = special.jv(mu, x)
        df = special.jvp(mu, x)
        same = np.sign(f) == np.sign(flo)
        lo = np.where(same, x, lo)
        flo = np.where(same, f, flo)
        hi = np.where(same, hi, x)
        with np.errstate(divide="ignore", invalid="ignore"):
            xn = x - f / df
        bad = ~np.isfinite(xn) | (xn <= lo) | (xn >= hi)
        xn = np.where(bad, 0.5 * (lo + hi), xn)
        # an exact zero must not be moved by the bisection fallback
        xn = np.where(f == 0.0, x, xn)
        step = np.abs(xn - x)
        x = np.where(done, x, xn)
        done |= step <= 0.25 * cfg.zero_rtol * x
        if np.all(done):
            break
    else:
        raise RootRefinementError(
            f"zero refinement for J_{mu} did not converge in {cfg.max_iter} iterations"
        )
    return x


def _scan_zeros(nu, kind, lo, hi, cfg):
    """Positive zeros in (lo, hi] of A_nu (kind A) or B_nu (kind B)."""
    mu = nu if kind == "A" else nu + 1.0
    step = cfg.scan_step
    grid = np.arange(lo, hi + step, step)
    if lo == 0.0:
        # zeros of J_nu approach 0 as nu -> -1; refine the scan there
        fine = np.geomspace(1e-8, 1.0, 200)
        grid = np.unique(np.concatenate([fine, grid[grid > 1.0]]))
    else:
        grid = grid[grid > lo]
        grid = np.concatenate([[lo], grid])
    if kind == "A" and lo == 0.0:
        vals = np.asarray(eval_A(nu, grid, cfg))
    else:
        vals = special.jv(mu, grid)
    s = np.sign(vals)
    idx = np.nonzero(s[:-1] * s[1:] < 0)[0]
    exact = grid[1:][vals[1:] == 0.0]
    roots = _refine(mu, grid[idx], grid[idx + 1], cfg) if idx.size else np.empty(0)
    roots = np.sort(np.concatenate([roots, exact]))
    return roots[(roots > lo) & (roots <= hi)]


class _ZeroCache:
    def __init__(self):
        self._lock = threading.Lock()
        self._store = {}

    def get(self, nu, kind, count=None, bound=None, cfg=DEFAULT_CONFIG):
        key = (nu, kind, cfg.zero_rtol, cfg.scan_step)
        with self._lock:
            have, reach = self._store.get(key, (np.empty(0), 0.0))
            while (count is not None and have.size < count) or (bound is not None and reach < bound):
                if count is not None:
                    need = max(count - have.size, 1)
                    target = max(reach + (need + 2) * math.pi + 10.0, reach * 1.25)
                else:
                    target = bound + 2.0 * math.pi
                new = _scan_zeros(nu, kind, reach, target, cfg)
                have = np.concatenate([have, new])
                reach = target
            self._store[key] = (have, reach)
        if count is not None:
            return have[:count]
        return have[have <= bound]


_CACHE = _ZeroCache()


def _positive_zeros(order, kind, count=None, bound=None, config=None):
    nu = as_order(order).nu
    return _CACHE.get(nu, kind, count=count, bound=bound, cfg=config or DEFAULT_CONFIG)


def zeros(order: OrderLike, kind: str, count: int, config: BesselConfig | None = None) -> ZeroTable:
    """First `count` nonnegative real zeros of A_nu or B_nu.

    For kind "B" the table starts with the zero at the origin.
    """
    order = as_order(order)
    if kind not in ("A", "B"):
        raise ValueError(f"kind must be 'A' or 'B', got {kind!r}")
    count = int(count)
    if count < 1:
        raise ValueError("count must be >= 1")
    if kind == "A":
        z = _positive_zeros(order, "A", count=count, config=config)
    else:
        z = np.concatenate([[0.0], _positive_zeros(order, "B", count=count - 1, config=config)])
    kd = np.asarray(kernel_diag(order, z, config), dtype=np.float64)
    return ZeroTable(order, kind, z, kd)


def zeros_upto(order: OrderLike, kind: str, bound: float, config: BesselConfig | None = None) -> np.ndarray:
    """All positive zeros of A_nu / B_nu not exceeding `bound` (B excludes 0)."""
    if kind not in ("A", "B"):
        raise ValueError(f"kind must be 'A' or 'B', got {kind!r}")
    return _positive_zeros(as_order(order), kind, bound=float(bound), config=config)
