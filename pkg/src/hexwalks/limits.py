"""Scaling-limit diagnostics between the discrete walk model and its continuum limits.

Two diagnostics:

* Hahn -> Hermite: symmetric Hahn polynomials near the centre of their
  lattice, rescaled, against H_n(z);
* walk kernel -> Brownian-bridge kernel for a fixed and b = c = k -> infinity.

Every continuum argument is mapped to the nearest admissible lattice point;
the comparison is made at the continuum value *of that lattice point*, and
the rounding displacement is reported separately. Each diagnostic also fits
one multiplicative rescale factor; a fit far from 1 is flagged, which is how
a wrong constant in a limit formula shows up.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .continuum import hermite_h, kbm_at
from .hahn import HahnParams, eval_unnorm
from .kernel import KernelContext, hahn_kernel_walk
from .model import HexagonSpec

FLAG_THRESHOLD = 0.02


@dataclass
class LimitReport:
    diagnostic: str
    scales: list[int]
    errors: list[float]
    monotone: bool
    fitted_rescale: float | None
    flagged: bool = False
    raw_errors: list[float] = field(default_factory=list)
    displacements: list[float] = field(default_factory=list)

    @property
    def terminal_error(self) -> float:
        return self.errors[-1]

    def to_json(self) -> str:
        return json.dumps(asdict(self))


def _round_half_up(v: float) -> int:
    return math.floor(v + 0.5)


def _non_increasing(errors: Sequence[float], slack: float = 1e-12) -> bool:
    return all(e2 <= e1 + slack for e1, e2 in zip(errors, errors[1:]))


def _hahn_scale(big_n: int, t_ratio: float) -> float:
    return 2.0 * math.sqrt((2 * t_ratio + 1) / (t_ratio + 1) * big_n)


def _hahn_prefactor(n: int, big_n: int, t_ratio: float) -> float:
    return math.factorial(n) * (-2.0 / (big_n ** 1.5 * math.sqrt((2 * t_ratio + 1) * (t_ratio + 1)))) ** n


def scaled_hahn_point(n: int, big_n: int, t_ratio: float, z: float,
                      arg_scale: float = 1.0) -> tuple[float, float, float]:
    """(scaled value, effective z of the lattice point, lattice displacement in z).

    ``arg_scale`` multiplies the nominal argument scaling
    2*sqrt((2t+1)/(t+1)*N); 1.0 uses it unchanged.
    """
    alpha = _round_half_up(t_ratio * big_n)
    if alpha < 0 or not 0 <= n <= big_n:
        raise ValueError("need alpha >= 0 and n <= N")
    width = arg_scale * _hahn_scale(big_n, t_ratio)
    x_lat = _round_half_up(big_n / 2 + z * width)
    if not 0 <= x_lat <= big_n:
        raise ValueError(f"lattice argument {x_lat} outside [0, {big_n}]")
    z_eff = (x_lat - big_n / 2) / width
    qt = eval_unnorm(HahnParams(alpha, alpha, big_n), n, x_lat)
    return float(qt) * _hahn_prefactor(n, big_n, t_ratio), z_eff, z_eff - z


def scaled_hahn(n: int, big_n: int, t_ratio: float, z: float, arg_scale: float = 1.0) -> float:
    return scaled_hahn_point(n, big_n, t_ratio, z, arg_scale)[0]


def _hahn_error(ns, big_n, t_ratio, zs, arg_scale):
    err, disp = 0.0, 0.0
    for n in ns:
        ref = max(abs(hermite_h(n, z)) for z in zs)
        for z in zs:
            v, z_eff, dz = scaled_hahn_point(n, big_n, t_ratio, z, arg_scale)
            err = max(err, abs(v - hermite_h(n, z_eff)) / ref)
            disp = max(disp, abs(dz))
    return err, disp


def fit_hahn_argument_scale(ns: Sequence[int], big_n: int, t_ratio: float,
                            zs: Sequence[float]) -> float:
    """Least-squares argument rescale, using the polynomial off the lattice."""
    alpha = _round_half_up(t_ratio * big_n)
    params = HahnParams(alpha, alpha, big_n)
    ns = [n for n in ns if n > 0]
    if not ns:
        return 1.0

    def loss(log_rho: float) -> float:
        width = math.exp(log_rho) * _hahn_scale(big_n, t_ratio)
        out = 0.0
        for n in ns:
            pref = _hahn_prefactor(n, big_n, t_ratio)
            for z in zs:
                x = Fraction(big_n / 2 + z * width)
                out += (float(eval_unnorm(params, n, x)) * pref - hermite_h(n, z)) ** 2
        return out

    grid = np.linspace(math.log(1 / 16), math.log(16), 81)
    best = min(grid, key=loss)
    step = grid[1] - grid[0]
    res = minimize_scalar(loss, bounds=(best - step, best + step), method="bounded",
                          options={"xatol": 1e-10})
    return math.exp(res.x)


def hahn_hermite_report(t_ratio: float, ns: Sequence[int] = (0, 1, 2, 3),
                        scales: Sequence[int] = (200, 400, 800, 1600),
                        zs: Sequence[float] | None = None) -> LimitReport:
    zs = list(np.linspace(-1, 1, 9)) if zs is None else list(zs)
    scales = sorted(scales)
    raw = [_hahn_error(ns, N, t_ratio, zs, 1.0)[0] for N in scales]
    rho = fit_hahn_argument_scale(ns, scales[-1], t_ratio, zs)
    flagged = abs(rho - 1) > FLAG_THRESHOLD
    use = rho if flagged else 1.0
    errs, disps = zip(*(_hahn_error(ns, N, t_ratio, zs, use) for N in scales))
    return LimitReport(
        diagnostic=f"hahn->hermite t={t_ratio:g} n<={max(ns)}",
        scales=list(scales), errors=list(errs), monotone=_non_increasing(errs),
        fitted_rescale=rho, flagged=flagged, raw_errors=raw, displacements=list(disps))


def _lattice_point(a: int, k: int, t_horizon: float, tau: float, xi: float):
    r = _round_half_up(2 * tau * k / t_horizon)
    if not 1 <= r <= 2 * k - 1:
        raise ValueError(f"time {tau} maps to line {r} outside the interior")
    width = math.sqrt(2 * k / t_horizon)
    z_real = (a - 1) + xi * width
    z = _round_half_up(z_real)
    if (z - r) % 2:
        z = z + 1 if z_real > z else z - 1
    return r, z, r * t_horizon / (2 * k), (z - (a - 1)) / width


def _bm_pairs(a: int, k: int, t_horizon: float, points: Sequence[tuple[float, float]]):
    """Yield ('diag' | 'pair', walk value, Brownian value) and track displacements."""
    ctx = KernelContext(HexagonSpec(a, k, k))
    lat = [_lattice_point(a, k, t_horizon, tau, xi) for tau, xi in points]
    jac = math.sqrt(k / (2 * t_horizon))
    disp = max(max(abs(te - tau), abs(xe - xi)) for (tau, xi), (_, _, te, xe) in zip(points, lat))
    rows = []
    for r, z, te, xe in lat:
        kh = hahn_kernel_walk(ctx, r, z, r, z).value * jac
        rows.append(("diag", kh, kbm_at(a, t_horizon, te, xe, te, xe)))
    for (r, z, te, xe), (s, w, se, ye) in itertools.combinations(lat, 2):
        if (r, z) == (s, w):
            continue
        kh = (2.0 ** (r - s) * hahn_kernel_walk(ctx, r, z, s, w).value * jac
              * 2.0 ** (s - r) * hahn_kernel_walk(ctx, s, w, r, z).value * jac)
        kb = kbm_at(a, t_horizon, te, xe, se, ye) * kbm_at(a, t_horizon, se, ye, te, xe)
        rows.append(("pair", kh, kb))
    return rows, disp


def _bm_error(rows, lam: float = 1.0) -> float:
    diag_ref = max(abs(kb) for kind, _, kb in rows if kind == "diag")
    pair_ref = max((abs(kb) for kind, _, kb in rows if kind == "pair"), default=1.0)
    err = 0.0
    for kind, kh, kb in rows:
        if kind == "diag":
            err = max(err, abs(lam * kh - kb) / diag_ref)
        else:
            err = max(err, abs(lam * lam * kh - kb) / pair_ref)
    return err


def hahn_to_bm_error(k: int, t_horizon: float, points: Sequence[tuple[float, float]],
                     a: int = 2) -> tuple[float, float]:
    """Relative gauge-invariant error between the rescaled walk kernel and the
    Brownian kernel at scale k, with the largest lattice displacement."""
    rows, disp = _bm_pairs(a, k, t_horizon, points)
    return _bm_error(rows), disp


DEFAULT_BM_POINTS = tuple((tau, xi) for tau in (0.3, 0.5) for xi in (-0.4, 0.0, 0.5))


def bm_limit_report(a: int, t_horizon: float = 1.0,
                    points: Sequence[tuple[float, float]] = DEFAULT_BM_POINTS,
                    scales: Sequence[int] = (25, 50, 100, 200)) -> LimitReport:
    scales = sorted(scales)
    per_scale = [_bm_pairs(a, k, t_horizon, points) for k in scales]
    raw = [_bm_error(rows) for rows, _ in per_scale]
    final_rows = per_scale[-1][0]
    res = minimize_scalar(lambda lam: sum(
        ((lam if kind == "diag" else lam * lam) * kh - kb) ** 2 for kind, kh, kb in final_rows),
        bounds=(0.1, 10.0), method="bounded", options={"xatol": 1e-10})
    lam = float(res.x)
    flagged = abs(lam - 1) > FLAG_THRESHOLD
    errs = [_bm_error(rows, lam) for rows, _ in per_scale] if flagged else raw
    return LimitReport(
        diagnostic=f"walk kernel->brownian kernel a={a} T={t_horizon:g}",
        scales=list(scales), errors=errs, monotone=_non_increasing(errs),
        fitted_rescale=lam, flagged=flagged, raw_errors=raw,
        displacements=[d for _, d in per_scale])
