import json
import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate, special

from beurling import hilbert_forms as hf
from beurling import radial_measures as rm


def test_poisson_ft_examples():
    assert hf.poisson_ft(1, 3.0, [0.0]) == pytest.approx(2 / 3.0, rel=1e-15)
    assert hf.poisson_ft(1, 1.0, [1 / (2 * math.pi)]) == pytest.approx(1.0, rel=1e-15)
    for N in (1, 2, 3, 5):
        y = np.zeros(N)
        y[0] = 1e6
        assert hf.poisson_ft(N, 1.0, y) < 1e-12


@pytest.mark.parametrize("y", [0.0, 0.13, 0.9])
def test_poisson_ft_one_dim_numeric_transform(y):
    f = lambda x: math.exp(-1.5 * x) * math.cos(2 * math.pi * x * y)
    ref = 2 * integrate.quad(f, 0, 60, limit=400, epsrel=1e-13)[0]
    assert hf.poisson_ft(1, 1.5, [y]) == pytest.approx(ref, rel=1e-10)


@pytest.mark.parametrize("rho", [0.05, 0.4, 1.3])
def test_poisson_ft_two_dim_hankel(rho):
    # radial Fourier transform in the plane: 2 pi int e^{-lam r} J_0(2 pi rho r) r dr
    lam = 0.8
    f = lambda r: math.exp(-lam * r) * special.j0(2 * math.pi * rho * r) * r
    edges = np.arange(0.0, 80.5, 0.5)
    ref = 2 * math.pi * math.fsum(integrate.quad(f, a, b, epsabs=1e-15, epsrel=1e-12)[0]
                                  for a, b in zip(edges[:-1], edges[1:]))
    assert hf.poisson_ft(2, lam, [rho, 0.0]) == pytest.approx(ref, rel=1e-9)


def test_poisson_ft_validation():
    with pytest.raises(ValueError):
        hf.poisson_ft(2, 0.0, [1.0, 0.0])
    with pytest.raises(ValueError):
        hf.poisson_ft(2, 1.0, [1.0])


def test_point_config_validation():
    with pytest.raises(ValueError):
        hf.PointConfig(1, [0.0, 0.5], 1.0)
    with pytest.raises(ValueError):
        hf.PointConfig(2, [[0.0, 0.0]], 0.0)
    with pytest.raises(ValueError):
        hf.PointConfig(2, [[0.0, 0.0, 1.0]], 1.0)
    with pytest.raises(ValueError):
        hf.PointConfig(1, [0.0, float("nan")], 1.0)
    c = hf.PointConfig(1, [0.0, 1.0, 2.5], 1.0)
    assert c.M == 3 and c.points.shape == (3, 1)


def test_form_spec_validation():
    with pytest.raises(ValueError):
        hf.FormSpec(0.0, 3, rm.power(0.0))
    with pytest.raises(ValueError):
        hf.FormSpec(0.0, -1, rm.power(0.0))
    spec = hf.FormSpec(0.5, 1, rm.atoms([(1.0, 1.0)]))
    assert spec.N == 1
    with pytest.raises(ValueError):
        spec.check_dimension(2)


def _symbolic_Q(N, r):
    lam, rho = sp.symbols("lam rho", positive=True)
    C = 2 ** N * sp.pi ** sp.Rational(N - 1, 2) * sp.gamma(sp.Rational(N + 1, 2))
    f = C * lam * (lam ** 2 + 4 * sp.pi ** 2 * rho ** 2) ** sp.Rational(-(N + 1), 2)
    for _ in range(r):
        f = -(sp.diff(f, rho, 2) + (N - 1) / rho * sp.diff(f, rho)) / (4 * sp.pi ** 2)
    return sp.lambdify((lam, rho), sp.simplify(f), "math")


@pytest.mark.parametrize("N", [1, 2, 3, 4])
@pytest.mark.parametrize("r", [0, 1, 2])
def test_laplacian_terms_vs_symbolic(N, r):
    ref = _symbolic_Q(N, r)
    terms = hf.laplacian_terms(N, r)
    for lam in (0.3, 2.0):
        for rho in (0.2, 1.1):
            assert hf._terms_at(terms, lam, rho) == pytest.approx(ref(lam, rho), rel=1e-12)


def test_r0_atom_equals_poisson():
    spec = hf.FormSpec(-0.5, 0, rm.atoms([(1.7, 1.0)]))
    rho = np.array([0.3, 1.0, 2.5])
    np.testing.assert_allclose(hf.Q_radial(spec, 1, rho), hf.poisson_ft(1, 1.7, rho[:, None]), rtol=1e-15)


def _fourth_difference(f, y, h):
    st5 = np.array([1.0, -4.0, 6.0, -4.0, 1.0])
    return np.dot(st5, f(y + h * np.arange(-2, 3))) / h ** 4


@pytest.mark.parametrize("r,h,tol", [(1, 1e-4, 1e-4), (2, 1e-2, 1e-4)])
def test_laplacian_finite_difference_one_dim(r, h, tol):
    # (-1/(4 pi^2)) d^2/dy^2 applied r times, by centred differences;
    # the fourth difference is Richardson-extrapolated from h and h/2
    nu = -0.5 + r
    spec = hf.FormSpec(nu, r, rm.atoms([(1.3, 1.0)]))
    f = lambda y: hf.poisson_ft(1, 1.3, np.atleast_1d(y)[:, None])
    for y in (0.4, 1.1):
        if r == 1:
            fd = -(f(y + h) - 2 * f(y) + f(y - h)) / (h * h) / (4 * math.pi ** 2)
        else:
            d1 = _fourth_difference(f, y, h)
            d2 = _fourth_difference(f, y, h / 2)
            fd = (d2 + (d2 - d1) / 3) / (4 * math.pi ** 2) ** 2
        assert hf.Q_radial(spec, 1, y) == pytest.approx(float(np.squeeze(fd)), rel=tol)


def C_alpha(alpha, N):
    if alpha == -1.0:
        # Gamma(alpha + 1) / Gamma((alpha + 1) / 2) -> 1/2
        return math.pi ** (-N / 2) * 0.5 * math.gamma(N / 2)
    return (math.pi ** (alpha + 1 - N / 2) * math.gamma(alpha + 1) * math.gamma((N - alpha - 1) / 2)
            / math.gamma((alpha + 1) / 2))


@pytest.mark.parametrize("N,alpha", [(1, -0.5), (1, -1.5), (2, 0.5), (2, -1.5), (3, 1.0), (3, -1.0)])
def test_r0_power_closed_form(N, alpha):
    nu = (N - 2) / 2
    m = rm.log_measure() if alpha == -1.0 else rm.power(alpha)
    spec = hf.FormSpec(nu, 0, m)
    rho = np.array([0.25, 1.0, 3.0])
    expect = C_alpha(alpha, N) * rho ** (alpha + 1 - N)
    np.testing.assert_allclose(hf.Q_radial(spec, N, rho), expect, rtol=1e-12)


@pytest.mark.parametrize("N,alpha", [(1, -0.5), (2, 0.5), (2, -1.5), (3, 1.0)])
def test_r0_power_vs_lambda_quadrature(N, alpha):
    nu = (N - 2) / 2
    spec = hf.FormSpec(nu, 0, rm.power(alpha))
    for rho in (0.3, 1.7):
        g = lambda u: hf.poisson_ft(N, math.exp(u), np.r_[rho, np.zeros(N - 1)]) * math.exp((alpha + 1) * u)
        ref = integrate.quad(g, -60, 60, limit=400, epsabs=0, epsrel=1e-12)[0]
        assert hf.Q_radial(spec, N, rho) == pytest.approx(ref, rel=1e-7)


def test_r1_power_vs_lambda_quadrature():
    spec = hf.FormSpec(1.0, 1, rm.power(-0.5))
    terms = hf.laplacian_terms(2, 1)
    for rho in (0.3, 1.7):
        g = lambda u: hf._terms_at(terms, math.exp(u), rho) * math.exp(0.5 * u)
        ref = integrate.quad(g, -60, 60, limit=400, epsabs=0, epsrel=1e-12)[0]
        assert hf.Q_radial(spec, 2, rho) == pytest.approx(ref, rel=1e-8)


def test_table_measure_vs_quadrature():
    t = rm.table([0.0, 1.0, 4.0], [1.0, 0.5, 0.0], -3.0)
    spec = hf.FormSpec(-0.5, 0, t)
    dens = lambda lam: np.interp(lam, t.lam_grid, t.density)
    for rho in (0.2, 1.0):
        ref = integrate.quad(lambda lam: hf.poisson_ft(1, lam, [rho]) * dens(lam), 1e-300, 4, points=[1.0],
                             epsrel=1e-12)[0]
        assert hf.Q_radial(spec, 1, rho) == pytest.approx(ref, rel=1e-8)


def test_Q_radial_rejects_origin():
    with pytest.raises(ValueError):
        hf.Q_radial(hf.FormSpec(-0.5, 0, rm.power(0.0)), 1, [0.0, 1.0])


def test_Q_matrix_structure(rng):
    pts = rng.uniform(-5, 5, (12, 2))
    cfg = hf.PointConfig(2, pts, 0.01)
    spec = hf.FormSpec(0.0, 0, rm.power(0.5))
    Q = hf.Q_matrix(spec, cfg)
    assert Q.dtype == np.float64
    np.testing.assert_array_equal(Q, Q.T)
    assert np.all(np.diag(Q) == 0)
    # radiality: rotate and permute the configuration
    th = 0.7
    R = np.array([[math.cos(th), -math.sin(th)], [math.sin(th), math.cos(th)]])
    perm = rng.permutation(12)
    Q2 = hf.Q_matrix(spec, hf.PointConfig(2, (pts @ R.T)[perm], 0.01))
    np.testing.assert_allclose(Q2, Q[np.ix_(perm, perm)], rtol=1e-12)


def test_Q_matrix_point_cap():
    cfg = hf.PointConfig(1, np.arange(65.0), 1.0)
    with pytest.raises(ValueError):
        hf.Q_matrix(hf.FormSpec(-0.5, 0, rm.power(0.0)), cfg)


def test_single_point_trivial():
    spec = hf.FormSpec(-0.5, 0, rm.atoms([(1.0, 1.0)]))
    rep = hf.verify_bounds(spec, hf.PointConfig(1, [0.0], 1.0))
    assert rep.passed and rep.max_eigenvalue == 0.0 and rep.min_eigenvalue == 0.0
    assert rep.U_minus >= 0 and rep.U_plus >= 0


def test_one_dim_atom_example():
    pts = np.array([0.0, 1.0, 2.3, 3.9, 5.0])
    spec = hf.FormSpec(-0.5, 0, rm.atoms([(1.0, 1.0)]))
    cfg = hf.PointConfig(1, pts, 1.0)
    rep = hf.verify_bounds(spec, cfg, trials=200)
    ev = np.linalg.eigvalsh(hf.Q_matrix(spec, cfg))
    assert rep.passed
    assert ev[0] >= -rep.U_minus - 1e-8 and ev[-1] <= rep.U_plus + 1e-8
    d = json.loads(rep.to_json())
    assert d["pass"] is True and set(d) >= {"min_quadform_ratio", "max_quadform_ratio", "U_minus", "U_plus"}


def test_two_dim_power_example():
    rng = np.random.default_rng(5)
    pts = []
    while len(pts) < 8:
        p = rng.uniform(0, 6, 2)
        if all(np.linalg.norm(p - q) >= 1.0 for q in pts):
            pts.append(p)
    spec = hf.FormSpec(0.0, 0, rm.power(0.5))
    rep = hf.verify_bounds(spec, hf.PointConfig(2, pts, 1.0))
    assert rep.passed
    assert rep.U_plus == math.inf
    assert rep.min_eigenvalue >= -rep.U_minus - 1e-8


def test_bounds_hold_as_points_spread():
    base = np.array([0.0, 1.0, 2.1, 3.0, 4.5, 5.5])
    spec = hf.FormSpec(-0.5, 0, rm.power(-1.5))
    for scale in (1.0, 2.0, 4.0):
        rep = hf.verify_bounds(spec, hf.PointConfig(1, scale * base, scale * 0.9))
        assert rep.passed
        assert -rep.U_minus <= rep.min_quadform_ratio <= rep.max_quadform_ratio <= rep.U_plus


def test_r1_bounds():
    pts = np.array([0.0, 1.0, 2.0, 3.2, 4.4])
    spec = hf.FormSpec(0.5, 1, rm.atoms([(0.8, 1.0), (2.0, 0.5)]))
    assert hf.verify_bounds(spec, hf.PointConfig(1, pts, 1.0)).passed


@given(st.lists(st.floats(-20, 20), min_size=2, max_size=10, unique=True), st.floats(0.2, 3.0))
def test_bounds_property_one_dim(xs, lam):
    xs = np.sort(np.array(xs))
    delta = float(np.min(np.diff(xs)))
    if delta < 0.05:
        return
    spec = hf.FormSpec(-0.5, 0, rm.atoms([(lam, 1.0)]))
    assert hf.verify_bounds(spec, hf.PointConfig(1, xs, delta), trials=20).passed
