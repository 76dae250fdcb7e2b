"""Orthogonal polynomials on the unit circle and extremal trigonometric polynomials.

For an even probability measure on R/Z the orthonormal polynomial phi_{n+1}
splits into A = (phi* + phi)/2 and B = i (phi* - phi)/2, whose zeros lie on
the circle and give two quadrature rules exact on trigonometric polynomials
of degree <= n.  Hermite interpolation of the periodized exponential f_lam at
those nodes gives its optimal one-sided approximations; integrating over a
measure in lam handles h_sigma and the lift to spheres.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate, optimize

from ._quad import _legendre
from .radial_measures import MeasureSpec, _table_rule

__all__ = [
    "CircleMeasure",
    "lebesgue",
    "density_measure",
    "sphere_measure",
    "OpucBasis",
    "OpucError",
    "build_basis",
    "quadrature",
    "TrigPoly",
    "f_lambda",
    "f_lambda_prime",
    "h_lambda",
    "h_sigma",
    "check_sigma",
    "extremal_trig",
    "extremal_trig_sigma",
    "sphere_basis",
    "sphere_value",
    "sphere_eval",
]

TABLE_GRID = 2 ** 12


class OpucError(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# measures on R/Z
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CircleMeasure:
    """Even probability measure on R/Z, given by a density on [-1/2, 1/2).

    kind is "lebesgue", "density" (tabulated) or "sphere".  `density` maps
    angles to density values and already includes the normalization.
    """

    kind: str
    density: Callable | None = field(default=None, repr=False, compare=False)
    normalization: float = 1.0
    params: dict = field(default_factory=dict, compare=False)
    _moment_rule: tuple | None = field(default=None, repr=False, compare=False)

    def moments(self, count: int) -> np.ndarray:
        """c_k = int cos(2 pi k theta) d theta-measure for k < count."""
        k = np.arange(count)
        if self.kind == "lebesgue":
            return (k == 0).astype(np.float64)
        nodes, weights = self._moment_rule
        return np.cos(2.0 * math.pi * np.outer(k, nodes)) @ weights

    def integrate(self, fn) -> float:
        """int fn d theta-measure for a vectorized fn of the angle."""
        if self.kind == "lebesgue":
            nodes, weights = _halves_rule(lambda t: np.ones_like(t))
        else:
            nodes, weights = self._moment_rule
        return float(np.sum(weights * fn(nodes)))

    def to_dict(self):
        return {"kind": self.kind, **self.params}

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d):
        kind = d.get("kind")
        if kind == "lebesgue":
            return lebesgue()
        if kind == "density":
            return density_measure(d["theta"], d["values"])
        if kind == "sphere":
            if "w_theta" in d:
                return sphere_measure(d["N"], w_theta=d["w_theta"], w_values=d["w_values"])
            return sphere_measure(d["N"])
        raise ValueError(f"unknown circle measure kind {kind!r}")

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def _halves_rule(dens, panels=64, n=20):
    # composite Gauss-Legendre on [-1/2, 0] and [0, 1/2]; kinks only at 0, +-1/2
    x, w = _legendre(n)
    b = np.linspace(0.0, 0.5, panels + 1)
    h = 0.5 * np.diff(b)[:, None]
    t = (0.5 * (b[:-1] + b[1:]))[:, None] + h * x[None, :]
    wt = h * w[None, :]
    t = t.ravel()
    wt = wt.ravel()
    nodes = np.concatenate([-t[::-1], t])
    weights = np.concatenate([wt[::-1], wt])
    return nodes, weights * dens(nodes)


def lebesgue() -> CircleMeasure:
    return CircleMeasure("lebesgue", density=lambda t: np.ones_like(np.asarray(t, dtype=np.float64)))


def density_measure(theta, values, grid: int = TABLE_GRID) -> CircleMeasure:
    """Tabulated density, linearly interpolated (1-periodic), symmetrized and normalized."""
    th = np.asarray(theta, dtype=np.float64)
    v = np.asarray(values, dtype=np.float64)
    if th.ndim != 1 or th.shape != v.shape or len(th) < 2:
        raise ValueError("theta and values must be 1-d arrays of equal length >= 2")
    if np.any(v < 0) or not np.all(np.isfinite(v)):
        raise ValueError("density values must be finite and nonnegative")
    if np.any(np.diff(th) <= 0):
        raise ValueError("theta must be increasing")

    def raw(t):
        t = np.asarray(t, dtype=np.float64)
        u = t - np.floor(t + 0.5)
        return np.interp(u, th, v, period=1.0)

    def sym(t):
        return 0.5 * (raw(t) + raw(-np.asarray(t, dtype=np.float64)))

    g = -0.5 + np.arange(grid) / grid
    vals = sym(g)
    mass = float(np.mean(vals))
    if not (math.isfinite(mass) and mass > 0):
        raise ValueError("density has no positive finite mass")
    if np.count_nonzero(vals) <= 1:
        raise ValueError("density support is too small (trivial measure)")
    weights = vals / (mass * grid)
    return CircleMeasure(
        "density",
        density=lambda t: sym(t) / mass,
        normalization=1.0 / mass,
        params={"theta": th.tolist(), "values": v.tolist()},
        _moment_rule=(g, weights),
    )


def sphere_constant(N: int) -> float:
    return math.sqrt(math.pi) * math.gamma(0.5 * N) / math.gamma(0.5 * (N - 1))


def sphere_measure(N: int, w: Callable | None = None, w_theta=None, w_values=None) -> CircleMeasure:
    """C_N w(cos 2 pi theta) |sin 2 pi theta|^{N-2} d theta, renormalized to mass one.

    w is a function of t = cos(2 pi theta); alternatively (w_theta, w_values)
    tabulate theta -> w(cos 2 pi theta) on [0, 1/2].
    """
    N = int(N)
    if N < 2:
        raise ValueError("sphere lift needs N >= 2")
    params: dict = {"N": N}
    if w is not None and w_theta is not None:
        raise ValueError("give either w or a tabulated profile, not both")
    if w_theta is not None:
        wt = np.asarray(w_theta, dtype=np.float64)
        wv = np.asarray(w_values, dtype=np.float64)
        if wt.shape != wv.shape or wt.ndim != 1 or len(wt) < 2:
            raise ValueError("w_theta and w_values must be 1-d arrays of equal length >= 2")
        params.update(w_theta=wt.tolist(), w_values=wv.tolist())

        def prof(t):
            return np.interp(np.abs(np.asarray(t, dtype=np.float64)), wt, wv)
    elif w is not None:
        def prof(t):
            return np.asarray(w(np.cos(2.0 * math.pi * np.asarray(t, dtype=np.float64))), dtype=np.float64)
    else:
        def prof(t):
            return np.ones_like(np.asarray(t, dtype=np.float64))
    C = sphere_constant(N)

    def dens0(t):
        t = np.asarray(t, dtype=np.float64)
        return C * prof(t) * np.abs(np.sin(2.0 * math.pi * t)) ** (N - 2)

    nodes, weights = _halves_rule(dens0)
    if np.any(weights < 0):
        raise ValueError("weight profile must be nonnegative")
    mass = float(np.sum(weights))
    if not (math.isfinite(mass) and mass > 0):
        raise ValueError("weight profile is not normalizable")
    return CircleMeasure(
        "sphere",
        density=lambda t: dens0(t) / mass,
        normalization=1.0 / mass,
        params=params,
        _moment_rule=(nodes, weights / mass),
    )


# ---------------------------------------------------------------------------
# orthonormal polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OpucBasis:
    """phi_0..phi_{n+1} (rows of `coeffs`, ascending powers, real), plus nodes in [-1/2, 1/2)."""

    measure: CircleMeasure
    n: int
    coeffs: np.ndarray = field(repr=False)
    verblunsky: np.ndarray = field(repr=False)
    a_nodes: np.ndarray = field(repr=False)
    b_nodes: np.ndarray = field(repr=False)
    a_kernel: np.ndarray = field(repr=False)
    b_kernel: np.ndarray = field(repr=False)

    def phi(self, k: int, z):
        return np.polynomial.polynomial.polyval(z, self.coeffs[k])

    def kernel_diag(self, theta):
        """K_n(zeta, zeta) = sum_{k <= n} |phi_k(zeta)|^2 at zeta = e^{2 pi i theta}."""
        z = np.exp(2j * math.pi * np.asarray(theta, dtype=np.float64))
        return sum(np.abs(self.phi(k, z)) ** 2 for k in range(self.n + 1))

    def A(self, z):
        c = self.coeffs[self.n + 1]
        return 0.5 * (np.polynomial.polynomial.polyval(z, c[::-1]) + np.polynomial.polynomial.polyval(z, c))

    def B(self, z):
        c = self.coeffs[self.n + 1]
        return 0.5j * (np.polynomial.polynomial.polyval(z, c[::-1]) - np.polynomial.polynomial.polyval(z, c))

    def nodes(self, which: str):
        if which == "A":
            return self.a_nodes, self.a_kernel
        if which == "B":
            return self.b_nodes, self.b_kernel
        raise ValueError(f"node set must be 'A' or 'B', got {which!r}")

    def orthonormality_residual(self) -> float:
        T = _toeplitz(self.measure.moments(self.n + 2))
        G = self.coeffs @ T @ self.coeffs.T
        return float(np.max(np.abs(G - np.eye(self.n + 2))))

    def max_zero_modulus(self) -> float:
        c = self.coeffs[self.n + 1]
        return float(np.max(np.abs(np.polynomial.polynomial.polyroots(c))))


def _toeplitz(c):
    k = np.arange(len(c))
    return c[np.abs(k[:, None] - k[None, :])]


def _szego(c, depth):
    # monic Phi_k via the Szego recursion, real coefficients for even measures
    Phi = np.zeros((depth + 1, depth + 1))
    Phi[0, 0] = 1.0
    norms = np.empty(depth + 1)
    norms[0] = c[0]
    alphas = np.empty(depth)
    for k in range(depth):
        p = Phi[k, : k + 1]
        a = float(np.dot(p, c[1 : k + 2])) / norms[k]  # <z Phi_k, 1> / ||Phi_k||^2
        if not abs(a) < 1.0:
            raise OpucError(f"Verblunsky coefficient |alpha_{k}| >= 1", k)
        Phi[k + 1, 1 : k + 2] = p
        Phi[k + 1, : k + 1] -= a * p[::-1]
        alphas[k] = a
        norms[k + 1] = (1.0 - a * a) * norms[k]
    return Phi / np.sqrt(norms)[:, None], alphas


def _gram_schmidt(c, depth):
    # modified Gram-Schmidt on the monomials under the Toeplitz inner product
    T = _toeplitz(c[: depth + 1])
    V = np.eye(depth + 1)
    for k in range(depth + 1):
        for _ in range(2):
            for j in range(k):
                V[k] -= (V[k] @ T @ V[j]) * V[j]
        nrm = V[k] @ T @ V[k]
        if not nrm > 0:
            raise OpucError("Gram matrix is numerically singular", k)
        V[k] /= math.sqrt(nrm)
    return V


def _scan_zeros(fn, count, n1, endpoints):
    # zeros of fn on (0, 1/2), expected `count` of them
    M = 16 * n1
    for _ in range(6):
        t = np.linspace(0.0, 0.5, M + 1)[1:-1]
        v = fn(t)
        idx = np.nonzero(np.signbit(v[:-1]) != np.signbit(v[1:]))[0]
        if len(idx) == count:
            def scalar(x):
                return float(fn(np.array([x]))[0])
            return np.array([optimize.brentq(scalar, t[i], t[i + 1], xtol=1e-16, rtol=1e-15) for i in idx])
        M *= 4
    raise OpucError(f"node scan found {len(idx)} zeros, expected {count}", None)


def build_basis(measure: CircleMeasure, n: int, residual_tol: float = 1e-9) -> OpucBasis:
    """Orthonormal phi_0..phi_{n+1}, the A/B node sets and K_n at the nodes."""
    n = int(n)
    if n < 0:
        raise ValueError("degree must be nonnegative")
    depth = n + 1
    c = measure.moments(depth + 1)
    if abs(c[0] - 1.0) > 1e-10:
        raise ValueError(f"measure must have mass 1, got {c[0]}")
    try:
        coeffs, alphas = _szego(c, depth)
    except OpucError as exc:
        raise OpucError(f"recursion breaks down at degree {exc.args[1]}; max safe n is {exc.args[1] - 1}") from None
    T = _toeplitz(c)
    resid = np.max(np.abs(coeffs @ T @ coeffs.T - np.eye(depth + 1)))
    if not resid < residual_tol:
        try:
            coeffs = _gram_schmidt(c, depth)
        except OpucError as exc:
            raise OpucError(f"Gram matrix ill-conditioned at degree {exc.args[1]}; "
                            f"max safe n is {exc.args[1] - 2}") from None
        resid = np.max(np.abs(coeffs @ T @ coeffs.T - np.eye(depth + 1)))
        if not resid < residual_tol:
            cond = np.linalg.cond(T)
            raise OpucError(f"orthonormality residual {resid:.2e} (Gram condition {cond:.2e}); "
                            f"reduce n below {n}")

    top = coeffs[depth]
    m = 2.0 * np.arange(depth + 1) - depth

    def re_psi(t):
        return np.cos(math.pi * np.outer(t, m)) @ top

    def im_psi(t):
        return np.sin(math.pi * np.outer(t, m)) @ top

    odd = depth % 2 == 1
    # A: even in theta, 1/2 is a zero iff n+1 is odd; B: odd, 0 always a zero
    za = _scan_zeros(re_psi, (depth - odd) // 2, depth, None)
    zb = _scan_zeros(im_psi, (depth - 1 - (not odd)) // 2, depth, None)
    a_nodes = np.concatenate([-za[::-1], za] + ([np.array([-0.5])] if odd else []))
    b_nodes = np.concatenate([-zb[::-1], [0.0], zb] + ([] if odd else [np.array([-0.5])]))
    a_nodes = np.sort(a_nodes)
    b_nodes = np.sort(b_nodes)
    basis = OpucBasis(measure, n, coeffs, alphas, a_nodes, b_nodes,
                      np.empty(0), np.empty(0))
    object.__setattr__(basis, "a_kernel", basis.kernel_diag(a_nodes))
    object.__setattr__(basis, "b_kernel", basis.kernel_diag(b_nodes))
    for arr in (basis.coeffs, basis.verblunsky, basis.a_nodes, basis.b_nodes, basis.a_kernel, basis.b_kernel):
        arr.setflags(write=False)
    return basis


def quadrature(basis: OpucBasis, W, node_set: str = "B") -> complex | float:
    """sum over nodes of W(zeta)/K_n(zeta, zeta); W gives Laurent coefficients for z^{-d}..z^{d}."""
    W = np.asarray(W)
    if W.ndim != 1 or len(W) % 2 != 1:
        raise ValueError("W must hold coefficients of z^-d .. z^d")
    d = len(W) // 2
    if d > basis.n:
        raise ValueError(f"W has degree {d} > n = {basis.n}")
    nodes, K = basis.nodes(node_set)
    k = np.arange(-d, d + 1)
    vals = np.exp(2j * math.pi * np.outer(nodes, k)) @ W
    out = np.sum(vals / K)
    return float(out.real) if np.isrealobj(W) and abs(out.imag) < 1e-12 * max(1.0, abs(out)) else complex(out)


# ---------------------------------------------------------------------------
# trigonometric polynomials and the periodized exponential
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TrigPoly:
    """a_0 + sum_k a_k cos(2 pi k theta) + b_k sin(2 pi k theta)."""

    cos: np.ndarray
    sin: np.ndarray

    def __post_init__(self):
        a = np.array(self.cos, dtype=np.float64)
        b = np.array(self.sin, dtype=np.float64)
        if a.ndim != 1 or b.shape != (max(len(a) - 1, 0),):
            raise ValueError("need cos[0..n] and sin[1..n]")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "cos", a)
        object.__setattr__(self, "sin", b)

    @property
    def degree(self) -> int:
        return len(self.cos) - 1

    def __call__(self, theta):
        t = np.asarray(theta, dtype=np.float64)
        k = np.arange(1, self.degree + 1)
        ph = 2.0 * math.pi * np.multiply.outer(t, k)
        out = self.cos[0] + np.cos(ph) @ self.cos[1:] + np.sin(ph) @ self.sin
        return float(out) if out.ndim == 0 else out

    def derivative(self, theta):
        t = np.asarray(theta, dtype=np.float64)
        k = np.arange(1, self.degree + 1)
        ph = 2.0 * math.pi * np.multiply.outer(t, k)
        out = np.cos(ph) @ (2.0 * math.pi * k * self.sin) - np.sin(ph) @ (2.0 * math.pi * k * self.cos[1:])
        return float(out) if out.ndim == 0 else out

    def integral(self, measure: CircleMeasure) -> float:
        """int p d theta-measure from the cosine moments (sine parts vanish for even measures)."""
        return float(np.dot(self.cos, measure.moments(self.degree + 1)))

    def shift(self, c: float) -> "TrigPoly":
        a = self.cos.copy()
        a[0] += c
        return TrigPoly(a, self.sin)

    def to_dict(self):
        return {"degree": self.degree, "cos": self.cos.tolist(), "sin": self.sin.tolist()}

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d):
        p = cls(d["cos"], d["sin"])
        if p.degree != d.get("degree", p.degree):
            raise ValueError("degree does not match coefficient count")
        return p


def _fold(theta):
    t = np.asarray(theta, dtype=np.float64)
    return t - np.floor(t) - 0.5


def f_lambda(lam: float, theta):
    """cosh(lam (theta - floor(theta) - 1/2)) / sinh(lam/2), evaluated without overflow."""
    if not lam > 0:
        raise ValueError("lambda must be positive")
    au = np.abs(_fold(theta))
    out = (np.exp(-lam * (0.5 - au)) + np.exp(-lam * (0.5 + au))) / -math.expm1(-lam)
    return float(out) if out.ndim == 0 else out


def f_lambda_prime(lam: float, theta):
    u = _fold(theta)
    au = np.abs(u)
    out = lam * np.sign(u) * np.exp(-lam * (0.5 - au)) * -np.expm1(-2.0 * lam * au) / -math.expm1(-lam)
    return float(out) if out.ndim == 0 else out


def h_lambda(lam: float, theta):
    """f_lam(theta) - f_lam(1/2)."""
    au = np.abs(_fold(theta))
    out = np.exp(-lam * (0.5 - au)) * np.expm1(-lam * au) ** 2 / -math.expm1(-lam)
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# extremal trigonometric polynomials
# ---------------------------------------------------------------------------

def _rows(nodes, n, deriv):
    k = np.arange(1, n + 1)
    ph = 2.0 * math.pi * np.outer(nodes, k)
    if deriv:
        return np.hstack([np.zeros((len(nodes), 1)), -2.0 * math.pi * k * np.sin(ph), 2.0 * math.pi * k * np.cos(ph)])
    return np.hstack([np.ones((len(nodes), 1)), np.cos(ph), np.sin(ph)])


@dataclass(frozen=True)
class _System:
    matrix: np.ndarray
    value_nodes: np.ndarray
    deriv_nodes: np.ndarray
    dropped: float | None


def _system(basis: OpucBasis, side: str) -> _System:
    n = basis.n
    if side == "minus":
        nodes = basis.a_nodes
        # the derivative equation at the node closest to 1/2 is dropped
        dist = 0.5 - np.abs(nodes)
        drop = int(np.argmin(dist))
        dnodes = np.delete(nodes, drop)
        dropped = float(nodes[drop])
    elif side == "plus":
        nodes = basis.b_nodes
        dnodes = nodes[nodes != 0.0]
        dropped = None
    else:
        raise ValueError(f"side must be 'minus' or 'plus', got {side!r}")
    M = np.vstack([_rows(nodes, n, False), _rows(dnodes, n, True)])
    return _System(M, nodes, dnodes, dropped)


def _solve(sys_, rhs):
    x = np.linalg.solve(sys_.matrix, rhs)
    n = (len(x) - 1) // 2
    return TrigPoly(x[: n + 1], x[n + 1 :])


def extremal_trig(basis: OpucBasis, lam: float, side: str, return_residual: bool = False):
    """Optimal minorant (minus) or majorant (plus) of f_lam of degree <= n."""
    if not lam > 0:
        raise ValueError("lambda must be positive")
    s = _system(basis, side)
    rhs = np.concatenate([h_lambda(lam, s.value_nodes), f_lambda_prime(lam, s.deriv_nodes)])
    p = _solve(s, rhs).shift(f_lambda(lam, 0.5))
    if not return_residual:
        return p
    res = 0.0 if s.dropped is None else abs(p.derivative(s.dropped) - f_lambda_prime(lam, s.dropped))
    return p, res


def node_value(basis: OpucBasis, lam: float, side: str) -> float:
    """sum over the A (minus) or B (plus) nodes of f_lam / K_n."""
    nodes, K = basis.nodes("A" if side == "minus" else "B")
    return math.fsum(f_lambda(lam, nodes) / K)


def check_sigma(s: MeasureSpec, side: str) -> bool:
    """int lam e^{-a lam} d sigma < inf for all a > 0 (minus); int lam/(1+lam) d sigma < inf (plus)."""
    if side == "minus":
        return True  # every MeasureSpec (power alpha > -2, log, atoms, finite tables) qualifies
    if side != "plus":
        raise ValueError(f"side must be 'minus' or 'plus', got {side!r}")
    if s.kind in ("power", "log"):
        return -2.0 < s.alpha < -1.0
    if s.kind == "atoms":
        return True
    return s.tail_exponent < -1.0


def _sigma_integral(s: MeasureSpec, fn, rtol=1e-12):
    # int fn(lam) d sigma(lam) for vector-valued fn
    if s.kind == "atoms":
        return sum(w * np.asarray(fn(lam)) for lam, w in s.points)
    if s.kind == "table":
        nodes, weights = _table_rule(s)
        return sum(w * np.asarray(fn(lam)) for lam, w in zip(nodes, weights) if lam > 0 and w > 0)
    a = s.alpha
    zero = 0.0 * np.asarray(fn(1.0))

    def g(u):
        # lam = e^u turns the endpoint singularity of lam^alpha into exponential decay
        if abs(u) > 700.0 or (a + 1.0) * u > 700.0:
            return zero
        lam = math.exp(u)
        return np.asarray(fn(lam)) * math.exp((a + 1.0) * u)

    total = 0.0
    for lo, hi in ((-math.inf, 0.0), (0.0, math.inf)):
        val, err = integrate.quad_vec(g, lo, hi, epsabs=1e-15, epsrel=rtol, limit=400)
        total = total + val
    return s.weight * total


def h_sigma(s: MeasureSpec, theta):
    """int (f_lam(theta) - f_lam(1/2)) d sigma(lam); +inf at integers unless sigma is plus-admissible."""
    t = np.atleast_1d(np.asarray(theta, dtype=np.float64))
    at_int = np.abs(_fold(t)) == 0.5
    out = np.empty_like(t)
    if np.any(at_int) and not check_sigma(s, "plus"):
        out[at_int] = np.inf
        keep = ~at_int
    else:
        keep = np.ones_like(at_int)
    if np.any(keep):
        out[keep] = _sigma_integral(s, lambda lam: h_lambda(lam, t[keep]))
    return float(out[0]) if np.ndim(theta) == 0 else out


def extremal_trig_sigma(basis: OpucBasis, s: MeasureSpec, side: str, return_residual: bool = False):
    """Optimal one-sided approximation of h_sigma, integrating the interpolation data over sigma."""
    if not check_sigma(s, side):
        raise ValueError(f"measure {s.to_dict()} is not admissible for the {side} side")
    sy = _system(basis, side)
    extra = [] if sy.dropped is None else [sy.dropped]
    nv = len(sy.value_nodes)

    def data(lam):
        return np.concatenate([h_lambda(lam, sy.value_nodes),
                               f_lambda_prime(lam, np.concatenate([sy.deriv_nodes, extra]))])

    rhs = _sigma_integral(s, data)
    nd = len(sy.deriv_nodes)
    p = _solve(sy, rhs[: nv + nd])
    if not return_residual:
        return p
    res = 0.0 if sy.dropped is None else abs(p.derivative(sy.dropped) - rhs[-1])
    return p, res


def sigma_node_value(basis: OpucBasis, s: MeasureSpec, side: str) -> float:
    """u^-+ : sum over the A (minus) or B (plus) nodes of h_sigma / K_n."""
    if not check_sigma(s, side):
        raise ValueError(f"measure {s.to_dict()} is not admissible for the {side} side")
    nodes, K = basis.nodes("A" if side == "minus" else "B")
    return math.fsum(np.asarray(h_sigma(s, nodes)) / K)


# ---------------------------------------------------------------------------
# sphere lift
# ---------------------------------------------------------------------------

def sphere_basis(N: int, n: int, w: Callable | None = None) -> OpucBasis:
    return build_basis(sphere_measure(N, w), n)


def sphere_value(N: int, w: Callable | None, n: int, s: MeasureSpec, side: str) -> float:
    """Optimal weighted L1 error constant u^-+ for polynomials of degree <= n in x.v."""
    return sigma_node_value(sphere_basis(N, n, w), s, side)


def sphere_eval(N: int, w: Callable | None, n: int, s: MeasureSpec, side: str, t):
    """The extremal polynomial as a function of t = x.v in [-1, 1]."""
    t = np.asarray(t, dtype=np.float64)
    if np.any(np.abs(t) > 1.0):
        raise ValueError("t = x.v must lie in [-1, 1]")
    p = extremal_trig_sigma(sphere_basis(N, n, w), s, side)
    return p(np.arccos(t) / (2.0 * math.pi))
