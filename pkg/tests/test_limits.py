import json
import math
from fractions import Fraction

import pytest

from hexwalks.continuum import kbm_at
from hexwalks.kernel import KernelContext, hahn_kernel_walk
from hexwalks.limits import (DEFAULT_BM_POINTS, FLAG_THRESHOLD, bm_limit_report,
                             fit_hahn_argument_scale, hahn_hermite_report, hahn_to_bm_error,
                             scaled_hahn, scaled_hahn_point)
from hexwalks.model import HexagonSpec, line_geometry

SCALES = (200, 400, 800, 1600)


@pytest.mark.parametrize("big_n, t, z", [(10, 0.0, 0.3), (200, 0.5, -0.8), (37, 1.3, 0.0)])
def test_degree_zero_is_one(big_n, t, z):
    assert scaled_hahn(0, big_n, t, z) == 1.0


def test_centre_value_converges():
    errs = [abs(scaled_hahn(2, N, 0.0, 0.0) + 2) for N in SCALES]
    assert all(e2 < e1 for e1, e2 in zip(errs, errs[1:]))
    assert errs[-1] < 2e-3


@pytest.mark.parametrize("n", [1, 2, 3])
def test_parity_about_centre(n):
    for z in (0.25, 0.5, 0.9):
        v, ze, _ = scaled_hahn_point(n, 400, 0.5, z)
        w, we, _ = scaled_hahn_point(n, 400, 0.5, -z)
        if ze == -we:
            assert w == pytest.approx((-1) ** n * v, rel=1e-12)


def test_lattice_displacement_reported():
    _, z_eff, dz = scaled_hahn_point(2, 200, 0.0, 0.123)
    assert dz == pytest.approx(z_eff - 0.123) and abs(dz) < 0.05


def test_argument_outside_lattice_rejected():
    with pytest.raises(ValueError):
        scaled_hahn(1, 10, 0.0, 100.0)


@pytest.mark.parametrize("t", [0.0, 0.5])
def test_hahn_hermite_report(t):
    rep = hahn_hermite_report(t)
    # the nominal argument scaling misses by a factor 4, so the fit flags it
    assert rep.flagged and rep.fitted_rescale == pytest.approx(0.25, abs=2e-3)
    assert rep.monotone and rep.terminal_error < 0.05
    assert min(rep.raw_errors) > 1.0
    assert json.loads(rep.to_json())["flagged"] is True


def test_fit_recovers_a_known_scale():
    rho = fit_hahn_argument_scale([1, 2, 3], 1600, 0.0, [-0.5, 0.0, 0.5])
    assert abs(rho - 0.25) < 2e-3


def test_one_walker_diagonal_is_bridge_probability():
    k = 8
    s = HexagonSpec(1, k, k)
    ctx = KernelContext(s)
    for r in s.interior_lines():
        for z in line_geometry(s, r).sites():
            want = Fraction(math.comb(r, (r + z) // 2) * math.comb(2 * k - r, (2 * k - r - z) // 2),
                            math.comb(2 * k, k))
            assert hahn_kernel_walk(ctx, r, z, r, z).exact_part == want


def test_one_walker_binomial_approaches_brownian_diagonal():
    errs = []
    for k in (26, 50, 100, 200):
        # walker at the origin halfway through a bridge of 2k steps
        p = Fraction(math.comb(k, k // 2) * math.comb(k, k // 2), math.comb(2 * k, k))
        jac = math.sqrt(k / 2)
        errs.append(abs(float(p) * jac - kbm_at(1, 1.0, 0.5, 0.0, 0.5, 0.0)))
    assert all(e2 < e1 for e1, e2 in zip(errs, errs[1:]))


def test_bm_error_decreases_at_diagonal_points():
    pts = [(0.5, 0.0)]
    errs = [hahn_to_bm_error(k, 1.0, pts, a=2)[0] for k in (25, 50, 100, 200)]
    assert all(e2 <= e1 for e1, e2 in zip(errs, errs[1:]))


def test_densities_positive():
    ctx = KernelContext(HexagonSpec(2, 50, 50))
    assert hahn_kernel_walk(ctx, 50, 1, 50, 1).value > 0
    assert kbm_at(2, 1.0, 0.5, 0.1, 0.5, 0.1) > 0


@pytest.mark.parametrize("a", [1, 2])
def test_bm_limit_report(a):
    rep = bm_limit_report(a)
    assert rep.monotone and rep.terminal_error < 0.05
    assert not rep.flagged and abs(rep.fitted_rescale - 1) < FLAG_THRESHOLD
    assert len(rep.displacements) == len(rep.scales)
    assert len(DEFAULT_BM_POINTS) == 6
