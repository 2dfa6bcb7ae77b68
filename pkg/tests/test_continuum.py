import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.polynomial.hermite import hermval
from scipy import integrate

from hexwalks.continuum import (BrownianSpec, ContourParams, InsufficientDecay, QuadratureError,
                                ext_hermite, ext_hermite_contour, ext_hermite_series,
                                hermite_h, hermite_integral_identity_check, hermite_p, kbm, kbm_at,
                                kernel_grid_rows, mehler, mehler_partial, tau_of_t, transformed_kbm)


def test_hermite_examples():
    assert hermite_p(0, 0.3) == pytest.approx(math.pi ** -0.25, abs=1e-15)
    assert hermite_p(1, 1.0) == pytest.approx(2 / math.sqrt(2 * math.sqrt(math.pi)), abs=1e-14)


@pytest.mark.parametrize("n", range(12))
def test_hermite_matches_numpy(n):
    xs = np.linspace(-3, 3, 13)
    coeffs = [0] * n + [1]
    np.testing.assert_allclose(hermite_h(n, xs), hermval(xs, coeffs), rtol=1e-12, atol=1e-9)


def test_hermite_orthonormal_by_quadrature():
    for n, m in itertools.product(range(11), repeat=2):
        val, _ = integrate.quad(lambda x: hermite_p(n, x) * hermite_p(m, x) * math.exp(-x * x),
                                -np.inf, np.inf, limit=200)
        assert val == pytest.approx(float(n == m), abs=1e-8)


def test_mehler_examples():
    assert mehler(1e-12, 0, 0) == pytest.approx(math.pi ** -0.5, rel=1e-10)
    assert mehler(0.5, 0, 0) == pytest.approx((0.75 * math.pi) ** -0.5, rel=1e-14)
    with pytest.raises(ValueError):
        mehler(1.0, 0, 0)


@given(st.floats(0.05, 0.95), st.floats(-3, 3), st.floats(-3, 3))
def test_mehler_pair_symmetry(q, x, y):
    assert mehler(q, -x, -y) == pytest.approx(mehler(q, x, y), rel=1e-14)


@pytest.mark.parametrize("q", [0.3, 0.5, 0.8])
def test_mehler_partial_sums_converge_geometrically(q):
    for x, y in [(0, 0), (1.5, -0.5), (-2, 2), (2, 1.7)]:
        full = mehler(q, x, y)
        envelope = 1.086435 ** 2 / math.sqrt(math.pi) * math.exp((x * x - y * y) / 2) / (1 - q)
        for terms in (5, 20, 60):
            assert abs(mehler_partial(q, x, y, terms) - full) <= envelope * q ** terms + 1e-13


def test_ext_hermite_examples():
    assert ext_hermite(1, 0.4, 0, 0.4, 0) == pytest.approx(math.pi ** -0.5, rel=1e-14)
    n, x, y = 4, 0.3, -1.1
    cd = sum(hermite_p(k, x) * hermite_p(k, y) for k in range(n)) * math.exp(-y * y)
    assert ext_hermite(n, 2.0, x, 2.0, y) == pytest.approx(cd, rel=1e-13)


@given(st.integers(1, 6), st.floats(-2, 2), st.floats(-2, 2))
def test_equal_time_gauge_symmetry(n, x, y):
    f = lambda u, v: math.exp((v * v - u * u) / 2) * ext_hermite(n, 0.0, u, 0.0, v)  # noqa: E731
    assert f(x, y) == pytest.approx(f(y, x), abs=1e-12)


def test_series_examples():
    assert ext_hermite_series(1, -1.0, 0, 0.0, 0, tol=1e-10) == pytest.approx(
        ext_hermite(1, -1.0, 0, 0.0, 0), abs=1e-9)
    assert ext_hermite_series(3, 0.5, 0.2, 0.0, 0.4) == ext_hermite(3, 0.5, 0.2, 0.0, 0.4)


def test_series_refuses_slow_decay():
    with pytest.raises(InsufficientDecay):
        ext_hermite_series(2, -1e-6, 0, 0, 0, max_terms=1000)


def test_contour_examples():
    assert ext_hermite_contour(2, 0, 0.3, 0, -0.2) == pytest.approx(ext_hermite(2, 0, 0.3, 0, -0.2), abs=1e-6)
    assert ext_hermite_contour(2, -0.5, 0, 0, 0) == pytest.approx(ext_hermite(2, -0.5, 0, 0, 0), abs=1e-6)


def test_contour_reports_failure():
    cp = ContourParams(step=0.5, circle_points=16, truncation=2.0, tol=1e-12)
    with pytest.raises(QuadratureError) as info:
        ext_hermite_contour(5, 0.0, 1.0, 0.0, 0.5, cp)
    assert info.value.error_estimate > 1e-12


def test_contour_params_validation():
    with pytest.raises(ValueError):
        ContourParams(line_abscissa=0.4, circle_radius=0.5)


def test_three_way_agreement_grid():
    for n, dt, x, y in itertools.product((1, 2, 5), (-1, -0.3, 0, 0.5), (-1, 0, 0.7), (-1, 0, 0.7)):
        v1 = ext_hermite(n, dt, x, 0.0, y)
        v2 = ext_hermite_series(n, dt, x, 0.0, y)
        v3 = ext_hermite_contour(n, dt, x, 0.0, y)
        assert abs(v1 - v2) < 1e-6 and abs(v1 - v3) < 1e-6 and abs(v2 - v3) < 1e-6


def test_transformation_identity():
    for n, tr, ts, x, y in itertools.product((1, 3), (-0.5, 0, 0.8), (-0.5, 0, 0.8),
                                              (-1, 0, 1.3), (-1, 0, 1.3)):
        assert abs(transformed_kbm(n, 1.0, tr, x, ts, y) - ext_hermite(n, tr, x, ts, y)) < 1e-10


def test_transformation_identity_other_horizon():
    for tr, ts in [(-0.2, 0.4), (0.4, -0.2)]:
        assert transformed_kbm(2, 3.5, tr, 0.3, ts, -0.6) == pytest.approx(
            ext_hermite(2, tr, 0.3, ts, -0.6), abs=1e-10)


def test_kbm_examples():
    T = 2.0
    want = math.sqrt(2 / T) / math.sqrt(math.pi)
    assert kbm_at(1, T, T / 2, 0.0, T / 2, 0.0) == pytest.approx(want, rel=1e-14)
    spec = BrownianSpec(1, T, (T / 2,))
    assert kbm(spec, 0, 0.0, 0, 0.0) == pytest.approx(want, rel=1e-14)


@pytest.mark.parametrize("n, tau", [(1, 0.3), (3, 0.5), (4, 0.8)])
def test_kbm_diagonal_integrates_to_n(n, tau):
    val, _ = integrate.quad(lambda x: kbm_at(n, 1.0, tau, x, tau, x), -np.inf, np.inf, limit=200)
    assert val == pytest.approx(n, abs=1e-6)


def test_brownian_spec_validation():
    with pytest.raises(ValueError):
        BrownianSpec(2, 1.0, (0.5, 0.3))
    with pytest.raises(ValueError):
        BrownianSpec(2, 1.0, (0.0,))
    assert BrownianSpec(2, 1.0, (0.5,)).d(0) == pytest.approx(math.sqrt(2))


def test_tau_of_t():
    assert tau_of_t(0.0, 2.0) == 1.0
    assert 0 < tau_of_t(-3.0, 1.0) < tau_of_t(3.0, 1.0) < 1


def test_integral_identity_examples():
    lhs, rhs = hermite_integral_identity_check(0.5, 0, 0.0)
    assert lhs == pytest.approx(math.sqrt(math.pi) * math.pi ** -0.25, abs=1e-12)
    assert rhs == pytest.approx(lhs, abs=1e-12)
    lhs, rhs = hermite_integral_identity_check(0.6, 2, 0.7)
    assert abs(lhs - rhs) < 1e-8
    lhs, rhs = hermite_integral_identity_check(0.4, 3, 0.0)
    assert abs(lhs) < 1e-10 and abs(rhs) < 1e-12


def test_grid_rows():
    rows = list(kernel_grid_rows(2, (0.0, 0.5), (-1.0, 1.0)))
    assert len(rows) == 16
    assert rows[0][4] == ext_hermite(2, 0.0, -1.0, 0.0, -1.0)
