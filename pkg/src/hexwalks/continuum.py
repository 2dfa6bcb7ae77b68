"""Continuum kernels: Hermite functions, the extended Hermite kernel and the
kernel of non-intersecting Brownian bridges started and ended at the origin.

All computations are in double precision.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy import integrate

# Cramer's bound: |H_n(x)| e^{-x^2/2} <= K sqrt(2^n n!)
_CRAMER = 1.086435


class QuadratureError(RuntimeError):
    def __init__(self, message: str, error_estimate: float):
        super().__init__(f"{message} (achieved error estimate {error_estimate:.3e})")
        self.error_estimate = error_estimate


class InsufficientDecay(RuntimeError):
    pass


@dataclass(frozen=True)
class BrownianSpec:
    n: int
    t_horizon: float
    times: tuple[float, ...]

    def __post_init__(self):
        if self.n < 1 or self.t_horizon <= 0:
            raise ValueError("need n >= 1 and T > 0")
        ts = tuple(float(t) for t in self.times)
        if not all(0 < t < self.t_horizon for t in ts):
            raise ValueError("times must lie strictly inside (0, T)")
        if any(t1 >= t2 for t1, t2 in zip(ts, ts[1:])):
            raise ValueError("times must be strictly increasing")
        object.__setattr__(self, "times", ts)

    def d(self, index: int) -> float:
        tau = self.times[index]
        return math.sqrt(self.t_horizon / (2 * tau * (self.t_horizon - tau)))


@dataclass(frozen=True)
class ContourParams:
    line_abscissa: float = 1.0
    circle_radius: float = 0.5
    truncation: float = 10.0
    step: float = 0.005
    circle_points: int = 1024
    tol: float = 1e-8

    def __post_init__(self):
        if not self.line_abscissa > self.circle_radius > 0:
            raise ValueError("need line abscissa > circle radius > 0")
        if self.truncation <= 0 or self.step <= 0 or self.circle_points < 8:
            raise ValueError("invalid discretization")


def hermite_table(n_max: int, x) -> np.ndarray:
    """Rows p_0(x) .. p_{n_max}(x) of orthonormal Hermite polynomials (weight e^{-x^2})."""
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = math.pi ** -0.25
    if n_max >= 1:
        out[1] = math.sqrt(2.0) * x * out[0]
    for k in range(1, n_max):
        out[k + 1] = math.sqrt(2.0 / (k + 1)) * x * out[k] - math.sqrt(k / (k + 1)) * out[k - 1]
    return out


def hermite_p(n: int, x):
    if n < 0:
        raise ValueError("degree must be nonnegative")
    val = hermite_table(n, x)[n]
    return float(val) if np.ndim(val) == 0 else val


def hermite_h(n: int, x):
    """Physicists' Hermite polynomial H_n."""
    norm = math.sqrt(math.sqrt(math.pi) * 2.0 ** n * math.factorial(n))
    return norm * hermite_p(n, x)


def mehler(q: float, x: float, y: float) -> float:
    if not 0 < q < 1:
        raise ValueError("Mehler kernel needs 0 < q < 1")
    return (math.pi * (1 - q * q)) ** -0.5 * math.exp(-(q * x - y) ** 2 / (1 - q * q))


def mehler_partial(q: float, x: float, y: float, terms: int) -> float:
    """sum_{k < terms} p_k(x) p_k(y) q^k e^{-y^2}."""
    if terms <= 0:
        return 0.0
    px, py = hermite_table(terms - 1, x), hermite_table(terms - 1, y)
    return float(np.sum(px * py * q ** np.arange(terms)) * math.exp(-y * y))


def _heat_term(t: float, x: float, s: float, y: float) -> float:
    if t >= s:
        return 0.0
    q = math.exp(t - s)
    return mehler(q, x, y)


def ext_hermite(n: int, t: float, x: float, s: float, y: float) -> float:
    if n < 1:
        raise ValueError("need at least one particle")
    px, py = hermite_table(n - 1, x), hermite_table(n - 1, y)
    finite = float(np.sum(np.exp(np.arange(n) * (t - s)) * px * py)) * math.exp(-y * y)
    return finite - _heat_term(t, x, s, y)


def ext_hermite_series(n: int, t: float, x: float, s: float, y: float,
                       tol: float = 1e-12, max_terms: int = 20_000) -> float:
    """Series form: finite sum for t >= s, minus the tail k >= n for t < s."""
    if n < 1:
        raise ValueError("need at least one particle")
    if t >= s:
        px, py = hermite_table(n - 1, x), hermite_table(n - 1, y)
        return float(np.sum(np.exp(np.arange(n) * (t - s)) * px * py)) * math.exp(-y * y)
    q = math.exp(t - s)
    # tail after M terms is bounded by K^2 pi^{-1/2} e^{(x^2 - y^2)/2} q^M / (1 - q)
    envelope = _CRAMER ** 2 / math.sqrt(math.pi) * math.exp((x * x - y * y) / 2) / (1 - q)
    needed = math.ceil(math.log(tol / envelope) / math.log(q)) if envelope > tol else n
    last = max(needed, n)
    if last > max_terms:
        raise InsufficientDecay(
            f"|t-s|={s - t:.3g} needs {last} terms for tol={tol:g}, cap is {max_terms}")
    px, py = hermite_table(last, x)[n:], hermite_table(last, y)[n:]
    k = np.arange(n, last + 1)
    return -float(np.sum(q ** k * px * py)) * math.exp(-y * y)


@lru_cache(maxsize=4)
def _contour_nodes(abscissa: float, radius: float, truncation: float, step: float, m: int):
    u = np.arange(-truncation, truncation + step / 2, step)
    w = abscissa + 1j * u
    z = radius * np.exp(2j * np.pi * np.arange(m) / m)
    cauchy = 1.0 / (w[:, None] - z[None, :])
    return w, z, cauchy


def ext_hermite_contour(n: int, t: float, x: float, s: float, y: float,
                        cp: ContourParams | None = None) -> float:
    """Double contour integral over the vertical line Gamma and the circle gamma.

    Trapezoid rules on both contours; a half-resolution pass gives the error
    estimate.
    """
    cp = ContourParams() if cp is None else cp
    q = math.exp(t - s)

    def integrate_once(step: float, m: int) -> complex:
        w, z, cauchy = _contour_nodes(cp.line_abscissa, cp.circle_radius, cp.truncation, step, m)
        # dz = i z dtheta, dw = i du
        gz = np.exp(-q * q * z * z + 2 * q * x * z) * z ** (1 - n) * (1j * 2 * np.pi / m)
        fw = np.exp(w * w - 2 * y * w) * w ** n * (1j * step)
        return complex(fw @ (cauchy @ gz)) * 2 / (2j * np.pi) ** 2

    fine = integrate_once(cp.step, cp.circle_points)
    coarse = integrate_once(2 * cp.step, cp.circle_points // 2)
    err = abs(fine - coarse)
    if err > cp.tol or abs(fine.imag) > max(cp.tol, 1e-10):
        raise QuadratureError("contour quadrature did not converge", max(err, abs(fine.imag)))
    return fine.real - _heat_term(t, x, s, y)


def _bm_heat(tau_r: float, x: float, tau_s: float, y: float) -> float:
    if tau_r >= tau_s:
        return 0.0
    dt = tau_s - tau_r
    return math.exp(-(x - y) ** 2 / (2 * dt)) / math.sqrt(2 * math.pi * dt)


def kbm_at(n: int, t_horizon: float, tau_r: float, x: float, tau_s: float, y: float) -> float:
    """Brownian-bridge kernel at arbitrary times 0 < tau < T."""
    T = t_horizon
    d_r = math.sqrt(T / (2 * tau_r * (T - tau_r)))
    d_s = math.sqrt(T / (2 * tau_s * (T - tau_s)))
    ratio = tau_r * (T - tau_s) / (tau_s * (T - tau_r))
    pref = math.sqrt(T / (2 * tau_s * (T - tau_r)))
    px, py = hermite_table(n - 1, x * d_r), hermite_table(n - 1, y * d_s)
    j = np.arange(n)
    total = float(np.sum(ratio ** (j / 2) * px * py)) * pref
    total *= math.exp(-x * x / (2 * (T - tau_r)) - y * y / (2 * tau_s))
    return total - _bm_heat(tau_r, x, tau_s, y)


def kbm(spec: BrownianSpec, r_index: int, x: float, s_index: int, y: float) -> float:
    return kbm_at(spec.n, spec.t_horizon, spec.times[r_index], x, spec.times[s_index], y)


def tau_of_t(t: float, t_horizon: float) -> float:
    """Time change tau = T / (1 + e^{-2t}) linking the two models."""
    return t_horizon / (1 + math.exp(-2 * t))


def transformed_kbm(n: int, t_horizon: float, t_r: float, x: float, t_s: float, y: float) -> float:
    """Brownian kernel pushed through the time change and rescaling; equals ext_hermite."""
    T = t_horizon
    tau_r, tau_s = tau_of_t(t_r, T), tau_of_t(t_s, T)
    d_r = math.sqrt(T / (2 * tau_r * (T - tau_r)))
    d_s = math.sqrt(T / (2 * tau_s * (T - tau_s)))
    k = kbm_at(n, T, tau_r, x / d_r, tau_s, y / d_s)
    gauge = math.exp(x * x * tau_r / T - y * y * tau_s / T)
    ratio = ((T / tau_r - 1) / (T / tau_s - 1)) ** 0.25
    return k * gauge * ratio / math.sqrt(d_r * d_s)


def hermite_integral_identity_check(alpha: float, n: int, y: float) -> tuple[float, float]:
    """(quadrature of e^{-(x-y)^2} p_n(alpha x), closed form)."""
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    f = lambda u: math.exp(-(u - y) ** 2) * hermite_p(n, alpha * u)  # noqa: E731
    lhs, err = integrate.quad(f, -np.inf, np.inf, epsabs=1e-13, epsrel=1e-12, limit=200)
    if not math.isfinite(lhs) or err > 1e-8:
        raise QuadratureError("Gaussian-Hermite integral", err)
    beta = math.sqrt(1 - alpha * alpha)
    rhs = math.sqrt(math.pi) * beta ** n * hermite_p(n, alpha * y / beta)
    return lhs, rhs


def kernel_grid_rows(n: int, times: Sequence[float], xs: Sequence[float]):
    """(t, x, s, y, value) rows of the extended Hermite kernel over a product grid."""
    for t in times:
        for x in xs:
            for s in times:
                for y in xs:
                    yield t, x, s, y, ext_hermite(n, t, x, s, y)
