import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from beurling import exp_extremal as ee
from beurling import freq_laplace as fl
from beurling.bessel_core import zeros


def closed_min(lam):
    return 2.0 / lam - math.pi / math.sinh(math.pi * lam / 2)


def closed_max(lam):
    return math.pi / math.tanh(math.pi * lam / 2) - 2.0 / lam


def test_geometric_oracle_by_direct_sum():
    # node sums at nu = -1/2: cosine zeros (n + 1/2) pi, sine zeros n pi, weights pi
    lam = 1.0
    smin = 2 * math.pi * math.fsum(math.exp(-lam * (n + 0.5) * math.pi) for n in range(200))
    smax = math.pi * (1 + 2 * math.fsum(math.exp(-lam * n * math.pi) for n in range(1, 200)))
    assert 2 / lam - smin == pytest.approx(closed_min(lam), rel=1e-14)
    assert smax - 2 / lam == pytest.approx(closed_max(lam), rel=1e-14)


def test_cosine_case_digits():
    # 2 - pi/sinh(pi/2) and pi coth(pi/2) - 2 to 20 digits (mpmath)
    assert ee.value_min_base(-0.5, 1.0) == pytest.approx(0.63486109933828445692, rel=1e-12)
    assert ee.value_max_base(-0.5, 1.0) == pytest.approx(1.4253771499192955112, rel=1e-12)


@pytest.mark.parametrize("lam", [0.1, 0.5, 1.0, 3.0, 10.0])
def test_cosine_case_closed_forms(lam):
    assert ee.value_min_base(-0.5, lam) == pytest.approx(closed_min(lam), rel=1e-10)
    assert ee.value_max_base(-0.5, lam) == pytest.approx(closed_max(lam), rel=1e-10)


def test_large_lambda_asymptotics():
    assert ee.value_min_base(-0.5, 50.0) == pytest.approx(2.0 / 50.0, rel=1e-6)
    for nu in (-0.5, 0.0, 1.0):
        limit = 2 * math.pi * (nu + 1) / ee.c_nu(nu)
        v = ee.value_max_base(nu, 40.0)
        assert 0 < v < limit


@pytest.mark.parametrize("nu", [-0.5, 0.0, 0.5, 1.0])
@pytest.mark.parametrize("lam", [0.3, 1.0, 4.0])
def test_zero_sum_and_integral_routes_agree(nu, lam):
    for side in ("minus", "plus"):
        a = ee.value_base(nu, lam, side, method="zeros")
        b = ee.value_base(nu, lam, side, method="integral")
        assert a == pytest.approx(b, rel=1e-9, abs=1e-12)


def _mp_value(nu, lam, side):
    # the node sum redone at 30 digits with mpmath zeros and J values
    with mpmath.workdps(30):
        mu = nu if side == "minus" else nu + 1
        c = mpmath.pi * mpmath.mpf(2) ** (-2 * nu - 1) / mpmath.gamma(nu + 1) ** 2
        lead = 2 * mpmath.gamma(2 * nu + 2) / mpmath.mpf(lam) ** (2 * nu + 2)
        total = 2 * mpmath.pi * (nu + 1) / c if side == "plus" else mpmath.mpf(0)
        k = 1
        while True:
            xi = mpmath.besseljzero(mu, k)
            other = mpmath.besselj(nu + 1 if side == "minus" else nu, xi)
            # at a zero of J_mu the kernel diagonal reduces to one Bessel square
            kd = mpmath.gamma(nu + 1) ** 2 * (xi / 2) ** (-2 * nu) * other ** 2 / mpmath.pi
            term = 2 * mpmath.exp(-lam * xi) / (c * kd)
            total += term
            if term < mpmath.mpf(10) ** -25 and xi > 10 * (2 * nu + 2) / lam:
                break
            k += 1
        return float(lead - total if side == "minus" else total - lead)


@pytest.mark.parametrize("nu,lam", [(0.0, 1.0), (0.5, 2.0), (1.0, 3.0)])
def test_against_high_precision_node_sum(nu, lam):
    for side in ("minus", "plus"):
        assert ee.value_base(nu, lam, side) == pytest.approx(_mp_value(nu, lam, side), rel=1e-10)


def test_value_nonnegative():
    for nu in (-0.9, -0.5, 0.0, 0.5, 1.0, 2.5):
        for lam in (0.01, 0.2, 1.0, 5.0, 30.0):
            assert ee.value_min_base(nu, lam) >= 0
            assert ee.value_max_base(nu, lam) >= 0


def test_value_rejects_bad_input():
    with pytest.raises(ValueError):
        ee.value_base(0.0, 0.0, "minus")
    with pytest.raises(ValueError):
        ee.value_base(0.0, 1.0, "middle")
    with pytest.raises(ValueError):
        ee.ExtremalValueQuery(0.0, 0, 2.0, 1.0, "minus")
    with pytest.raises(ValueError):
        ee.ExtremalValueQuery(0.0, 1, -2.0, 1.0, "minus")


def test_tiny_lambda_node_sum_refuses():
    with pytest.raises(ee.TruncationError):
        ee.value_base(0.0, 1e-5, "minus", method="zeros")


def test_query_examples():
    q = ee.ExtremalValueQuery(-0.5, 1, 2.0, 1.0, "minus")
    assert ee.value(q) == ee.value_min_base(-0.5, 1.0)
    q = ee.ExtremalValueQuery(-0.5, 1, 4.0, 1.0, "minus")
    assert ee.value(q) == pytest.approx(0.5 * ee.value_min_base(-0.5, 0.5), rel=1e-15)
    q = ee.ExtremalValueQuery(0.0, 2, 2.0, 1.0, "plus")
    assert ee.value(q) == pytest.approx(math.pi * ee.value_max_base(0.0, 1.0), rel=1e-15)


def test_rescaled_value_by_quadrature():
    # delta = 4 halves the type; integrate the rescaled minorant's error directly
    from scipy import integrate
    lam = 1.0
    f = lambda x: math.exp(-lam * x) - float(ee.eval_extremal_radial(-0.5, 1, 4.0, lam, [x], "minus"))
    val = 2 * sum(integrate.quad(f, a, a + 2 * math.pi, limit=200, epsabs=1e-13)[0]
                  for a in np.arange(0, 800 * math.pi, 2 * math.pi))
    q = ee.ExtremalValueQuery(-0.5, 1, 4.0, lam, "minus")
    assert val == pytest.approx(ee.value(q), abs=2e-3)


def test_half_omega():
    assert ee.half_omega(1) == 1.0
    assert ee.half_omega(2) == pytest.approx(math.pi, rel=1e-15)
    assert ee.half_omega(3) == pytest.approx(2 * math.pi, rel=1e-15)
    assert ee.half_omega(4) == pytest.approx(math.pi ** 2, rel=1e-15)


@pytest.mark.parametrize("nu", [-0.5, 0.0, 1.0])
@pytest.mark.parametrize("kappa", [0.5, 2.0, 3.0])
def test_scaling_law(nu, kappa):
    for side in ("minus", "plus"):
        for delta, lam in ((2.0, 1.0), (1.0, 0.7)):
            lhs = ee.value(ee.ExtremalValueQuery(nu, 1, delta, lam, side))
            rhs = kappa ** (2 * nu + 2) * ee.value(ee.ExtremalValueQuery(nu, 1, kappa * delta, kappa * lam, side))
            assert lhs == pytest.approx(rhs, rel=1e-10)


@pytest.mark.parametrize("N", [2, 3, 4])
def test_dimension_factor(N):
    for side in ("minus", "plus"):
        v1 = ee.value(ee.ExtremalValueQuery(0.5, 1, 1.5, 0.8, side))
        vN = ee.value(ee.ExtremalValueQuery(0.5, N, 1.5, 0.8, side))
        assert vN == pytest.approx(ee.half_omega(N) * v1, rel=1e-15)


@pytest.mark.parametrize("nu", [-0.5, 0.0, 1.0])
def test_small_lambda_linear(nu):
    r1 = ee.value_min_base(nu, 1e-2) / 1e-2
    r2 = ee.value_min_base(nu, 1e-3) / 1e-3
    assert 0.5 < r1 / r2 < 2.0


@pytest.mark.parametrize("nu", [-0.5, 0.0, 1.0])
@pytest.mark.parametrize("side", ["minus", "plus"])
def test_partial_sums_monotone(nu, side):
    terms = ee.zero_sum_terms(nu, 0.7, side)
    assert np.all(terms > 0)
    partial = np.cumsum(terms)
    assert np.all(np.diff(partial) >= 0)
    lead = ee._lead(nu, 0.7)
    total = lead - partial[-1] if side == "minus" else partial[-1] - lead
    assert total == pytest.approx(ee.value_base(nu, 0.7, side, method="zeros"), rel=1e-13)


@pytest.mark.parametrize("nu", [-0.5, 0.0, 0.5, 1.0])
@pytest.mark.parametrize("lam", [0.5, 1.0, 2.0])
def test_quadrature_matches_node_sum(nu, lam):
    for side in ("minus", "plus"):
        rep = ee.verify_value_by_quadrature(nu, lam, side)
        assert rep.abs_diff < 1e-6
        assert rep.to_dict()["zero_sum_value"] == rep.zero_sum_value


def test_quadrature_cosine_case_closed_form():
    rep = ee.verify_value_by_quadrature(-0.5, 1.0, "minus")
    assert abs(rep.computed_integral - closed_min(1.0)) < 1e-6


def test_quadrature_guard():
    with pytest.raises(ValueError):
        ee.verify_value_by_quadrature(0.0, 0.01, "minus")


def test_radial_lift_touches_first_zero():
    nu = 0.5
    xi = zeros(nu, "A", 1).zeros[0]
    p = np.array([xi, 0.0, 0.0])
    assert ee.eval_extremal_radial(nu, 3, 2.0, 1.3, p, "minus") == pytest.approx(math.exp(-1.3 * xi), abs=1e-9)


def test_radial_lift_rotation_invariant(rng):
    v = rng.standard_normal((20, 3))
    v *= 2.7 / np.linalg.norm(v, axis=1, keepdims=True)
    out = ee.eval_extremal_radial(0.5, 3, 1.3, 0.9, v, "plus")
    assert np.ptp(out) < 1e-14


def test_radial_lift_one_dimension():
    x = np.linspace(-9, 9, 31)
    np.testing.assert_array_equal(ee.eval_extremal_radial(0.0, 1, 2.0, 1.1, x[:, None], "minus"),
                                  fl.eval_minorant(0.0, 1.1, np.abs(x)))
    np.testing.assert_array_equal(ee.eval_extremal_radial(0.0, 1, 2.0, 1.1, x[:, None], "plus"),
                                  fl.eval_majorant(0.0, 1.1, np.abs(x)))


@given(st.floats(-0.9, 2.0), st.floats(0.05, 10.0), st.floats(0.3, 5.0))
def test_scaling_property(nu, lam, kappa):
    for side in ("minus", "plus"):
        lhs = ee.value(ee.ExtremalValueQuery(nu, 1, 2.0, lam, side))
        rhs = kappa ** (2 * nu + 2) * ee.value(ee.ExtremalValueQuery(nu, 1, 2.0 * kappa, lam * kappa, side))
        assert lhs == pytest.approx(rhs, rel=1e-10)


@given(st.floats(-0.9, 2.0), st.floats(0.02, 10.0))
def test_values_nonnegative_property(nu, lam):
    assert ee.value_min_base(nu, lam) >= 0
    assert ee.value_max_base(nu, lam) >= 0
