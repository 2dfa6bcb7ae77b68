"""Extended Hahn kernel for non-intersecting walks on the abc-hexagon.

Two independent constructions live here:

* :func:`hahn_kernel` -- the closed form in terms of associated Hahn
  polynomials and the line weights omega / omega~;
* :func:`generic_kernel` -- the general determinantal formula with delta
  initial/final configurations, built only from binomial path counts and an
  exact matrix inverse.

They are only compared through gauge-invariant quantities (correlation
determinants, diagonals, products K(u;v)K(v;u)).
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from .exactnum import (binomial, det_exact, exact_sqrt, factorial, inv_factorial,
                       inverse_exact, pochhammer)
from .hahn import eval_unnorm, norm_sq
from .model import (HexagonSpec, LineGeometry, LinePoint, line_geometry, omega,
                    omega_tilde, to_walk, transition_count)


def walk_count(steps: int, x: int, y: int) -> Fraction:
    """phi^{*steps}(x, y); zero steps is the identity."""
    if steps < 0:
        return Fraction(0)
    if steps == 0:
        return Fraction(int(x == y))
    return transition_count(0, steps, x, y)


@dataclass(frozen=True)
class KernelValue:
    value: float
    exact_part: Fraction | None = None


@dataclass
class KernelContext:
    spec: HexagonSpec
    reference_line: int = 1
    c_coef: dict = field(init=False, repr=False)
    f_coef: dict = field(init=False, repr=False)
    f_star_coef: dict = field(init=False, repr=False)
    constants: list = field(init=False, repr=False)
    _lines: dict = field(init=False, default_factory=dict, repr=False)
    _kappa_root: dict = field(init=False, default_factory=dict, repr=False)

    def __post_init__(self):
        a, b, c = self.spec.a, self.spec.b, self.spec.c
        self.c_coef = {(j, k): Fraction(1, (a - k)) * inv_factorial(j - k) * inv_factorial(a - 1 - j)
                       for j in range(a) for k in range(j + 1)}
        top = lambda n: n - 2 * a - b - c + 1  # noqa: E731
        self.f_coef = {(n, k): binomial(n, k) * pochhammer(top(n), k)
                       / (pochhammer(-a - c + 1, k) * pochhammer(-a, k))
                       for n in range(a) for k in range(n + 1)}
        self.f_star_coef = {(n, k): binomial(n, k) * pochhammer(top(n), k)
                            / (pochhammer(-a - b + 1, k) * pochhammer(-a, k))
                            for n in range(a) for k in range(n + 1)}
        self.constants = [_c_n_formula(a, b, c, n) for n in range(a)]

    def geometry(self, r: int) -> LineGeometry:
        return line_geometry(self.spec, r)

    def line_data(self, r: int):
        """Cached (q~_n(x) table, d_n^2 list, omega, omega~) for line r."""
        data = self._lines.get(r)
        if data is None:
            g = self.geometry(r)
            p = g.hahn_params()
            qt = [[eval_unnorm(p, n, x) for x in range(g.gamma_r + 1)] for n in range(self.spec.a)]
            d2 = [norm_sq(p, n) for n in range(self.spec.a)]
            om = [omega(self.spec, r, x) for x in range(g.gamma_r + 1)]
            omt = [omega_tilde(self.spec, r, x) for x in range(g.gamma_r + 1)]
            data = (qt, d2, om, omt)
            self._lines[r] = data
        return data


def _check_n(ctx: KernelContext, n: int) -> None:
    if not 0 <= n < ctx.spec.a:
        raise ValueError(f"index n={n} outside [0, {ctx.spec.a})")


def _c_n_formula(a: int, b: int, c: int, n: int) -> Fraction:
    return (factorial(a + b - 1) * factorial(a + c - 1) * (2 * a + b + c - 2 * n - 1)
            * factorial(a) ** 2 / (factorial(n) * factorial(2 * a + b + c - n - 1)))


def c_n(ctx: KernelContext, n: int) -> Fraction:
    _check_n(ctx, n)
    return ctx.constants[n]


def _step(x: int, z: int) -> int:
    return int(abs(x - z) == 1)


def psi_definition(ctx: KernelContext, n: int, z: int) -> Fraction:
    """psi(n, z) from the row-operation double sum (no closed form used)."""
    _check_n(ctx, n)
    a = ctx.spec.a
    return sum((ctx.f_coef[n, m] * ctx.c_coef[j, m] * _step(2 * j, z)
                for m in range(n + 1) for j in range(m, a)), Fraction(0))


def psi_star_definition(ctx: KernelContext, n: int, z: int) -> Fraction:
    _check_n(ctx, n)
    a, shift = ctx.spec.a, ctx.spec.c - ctx.spec.b
    return sum((ctx.f_star_coef[n, m] * ctx.c_coef[j, m] * _step(shift + 2 * j, z)
                for m in range(n + 1) for j in range(m, a)), Fraction(0))


def _edge_sum(ctx: KernelContext, n: int, u: int, lower: int) -> Fraction:
    a, b, c = ctx.spec.a, ctx.spec.b, ctx.spec.c
    if u % 2 == 0:
        return Fraction(0)
    h = (u + 1) // 2
    top = n - 2 * a - b - c + 1
    total = Fraction(0)
    for j in range(n + 1):
        total += (binomial(n, j) * pochhammer(top, j)
                  / (pochhammer(lower, j) * pochhammer(-a, j))
                  * inv_factorial(h - j))
    return total * inv_factorial(a - h)


def psi(ctx: KernelContext, n: int, z: int) -> Fraction:
    """Closed form of the modified first-step function; zero at even z."""
    _check_n(ctx, n)
    return _edge_sum(ctx, n, z, -ctx.spec.a - ctx.spec.c + 1)


def psi_star(ctx: KernelContext, n: int, z: int) -> Fraction:
    """Closed form of the modified last-step function, evaluated at walk site z."""
    _check_n(ctx, n)
    return _edge_sum(ctx, n, z - (ctx.spec.c - ctx.spec.b), -ctx.spec.a - ctx.spec.b + 1)


def phi_left(ctx: KernelContext, n: int, r: int, y_walk: int) -> Fraction:
    """phi_{0,r}(n, y): transition weight from the modified start to (r, y)."""
    _check_n(ctx, n)
    a, b, c = ctx.spec.a, ctx.spec.b, ctx.spec.c
    if (y_walk + r) % 2:
        return Fraction(0)
    top = n - 2 * a - b - c + 1
    total = Fraction(0)
    for j in range(n + 1):
        total += (binomial(n, j) * pochhammer(top, j)
                  / (pochhammer(-a - c + 1, j) * pochhammer(-a - r + 1, j))
                  * inv_factorial((y_walk + r) // 2 - j))
    return pochhammer(a + 1, r - 1) * total * inv_factorial(a - 1 - (y_walk - r) // 2)


def phi_right(ctx: KernelContext, r: int, y_walk: int, n: int) -> Fraction:
    """phi_{r,b+c}(y, n): transition weight from (r, y) to the modified end."""
    _check_n(ctx, n)
    a, b, c = ctx.spec.a, ctx.spec.b, ctx.spec.c
    if (y_walk + r) % 2:
        return Fraction(0)
    top = n - 2 * a - b - c + 1
    total = Fraction(0)
    for j in range(n + 1):
        total += (binomial(n, j) * pochhammer(top, j)
                  / (pochhammer(-a - b + 1, j) * pochhammer(-a - b - c + r + 1, j))
                  * inv_factorial((y_walk - r) // 2 + b - j))
    return (pochhammer(a + 1, b + c - r - 1) * total
            * inv_factorial(a + c - 1 - (y_walk + r) // 2))


def phi_left_convolution(ctx: KernelContext, n: int, r: int, y_walk: int) -> Fraction:
    """phi_{0,r} as the explicit sum over first-line sites of psi * walk counts."""
    a = ctx.spec.a
    return sum((psi_definition(ctx, n, z) * walk_count(r - 1, z, y_walk)
                for z in range(-1, 2 * a)), Fraction(0))


def phi_right_convolution(ctx: KernelContext, r: int, y_walk: int, n: int) -> Fraction:
    a, b, c = ctx.spec.a, ctx.spec.b, ctx.spec.c
    steps = b + c - r - 1
    return sum((psi_star_definition(ctx, n, z) * walk_count(steps, z, y_walk)
                for z in range(c - b - 1, c - b + 2 * a)), Fraction(0))


def phi_left_hahn_form(ctx: KernelContext, n: int, r: int, x_hahn: int) -> Fraction:
    """phi_{0,r}(n, alpha_r + 2x) rewritten through q~_n on line r (three regimes)."""
    _check_n(ctx, n)
    a, b, c = ctx.spec.a, ctx.spec.b, ctx.spec.c
    g = ctx.geometry(r)
    qt = eval_unnorm(g.hahn_params(), n, x_hahn)
    pref = (pochhammer(a + 1, r - 1) * factorial(n) * qt
            / (pochhammer(-a - c + 1, n) * pochhammer(-a - r + 1, n)))
    if r <= b:
        return pref * inv_factorial(x_hahn) * inv_factorial(g.gamma_r - x_hahn)
    pref *= (pochhammer(a + b - n, n) * pochhammer(a + b + c - r - n, n)
             / (pochhammer(-a - b + 1, n) * pochhammer(-a - b - c + 1 + r, n)))
    if r <= c:
        return pref * inv_factorial(g.b_r + x_hahn) * inv_factorial(g.gamma_r - x_hahn)
    return pref * inv_factorial(g.b_r + x_hahn) * inv_factorial(g.gamma_r + g.a_r - x_hahn)


def phi_right_hahn_form(ctx: KernelContext, r: int, x_hahn: int, n: int) -> Fraction:
    """phi_{r,b+c}(alpha_r + 2x, n) through q~_n on line r.

    In the first regime the lower parameter is (-a-b+1)_n; the sign of b
    matters and is pinned by the exact convolution tests.
    """
    _check_n(ctx, n)
    a, b, c = ctx.spec.a, ctx.spec.b, ctx.spec.c
    g = ctx.geometry(r)
    qt = eval_unnorm(g.hahn_params(), n, x_hahn)
    pref = (pochhammer(a + 1, b + c - r - 1) * factorial(n) * qt
            / (pochhammer(-a - b + 1, n) * pochhammer(-a - b - c + r + 1, n)))
    if r <= b:
        pref *= (pochhammer(a + c - n, n) * pochhammer(a + r - n, n)
                 / (pochhammer(-a - c + 1, n) * pochhammer(-a - r + 1, n)))
        return pref * inv_factorial(g.b_r + x_hahn) * inv_factorial(g.gamma_r + g.a_r - x_hahn)
    if r <= c:
        return pref * inv_factorial(x_hahn) * inv_factorial(g.gamma_r + g.a_r - x_hahn)
    return pref * inv_factorial(x_hahn) * inv_factorial(g.gamma_r - x_hahn)


def gram_matrix(ctx: KernelContext, r: int | None = None) -> list[list[Fraction]]:
    """A_{nm} = sum_z phi_{0,r}(n, z) phi_{r,b+c}(z, m) over line r."""
    r = ctx.reference_line if r is None else r
    if not 1 <= r <= ctx.spec.last - 1:
        raise ValueError(f"reference line {r} must be interior")
    sites = ctx.geometry(r).sites()
    a = ctx.spec.a
    left = [[phi_left(ctx, n, r, z) for z in sites] for n in range(a)]
    right = [[phi_right(ctx, r, z, m) for z in sites] for m in range(a)]
    return [[sum((u * v for u, v in zip(left[n], right[m])), Fraction(0)) for m in range(a)]
            for n in range(a)]


def kappa_sq(spec: HexagonSpec, n: int, r: int, s: int) -> Fraction:
    """Square of the corrected coefficient kappa_n(r, s); equals 1 at r = s."""
    a, b, c = spec.a, spec.b, spec.c
    return (factorial(a + s - 1 - n) * factorial(a + b + c - r - 1 - n)
            / (factorial(a + r - 1 - n) * factorial(a + b + c - s - 1 - n)))


def uncorrected_kappa_sq(spec: HexagonSpec, n: int, r: int, s: int) -> Fraction:
    """Variant whose last factorial is (a+b+c-1-n)! instead of (a+b+c-s-1-n)!.

    It is not 1 at r = s, so it breaks the one-point check; kept as a regression case.
    """
    a, b, c = spec.a, spec.b, spec.c
    return (factorial(a + s - 1 - n) * factorial(a + b + c - r - 1 - n)
            / (factorial(a + r - 1 - n) * factorial(a + b + c - 1 - n)))


def _check_point(ctx: KernelContext, r: int, x: int) -> LineGeometry:
    if not 1 <= r <= ctx.spec.last - 1:
        raise ValueError(f"line {r} is not interior to [1, {ctx.spec.last - 1}]")
    g = ctx.geometry(r)
    if not 0 <= x <= g.gamma_r:
        raise ValueError(f"Hahn coordinate {x} outside [0, {g.gamma_r}] on line {r}")
    return g


def hahn_kernel(ctx: KernelContext, r: int, x_hahn: int, s: int, y_hahn: int,
                coefficient: Callable = kappa_sq) -> KernelValue:
    _check_point(ctx, r, x_hahn)
    _check_point(ctx, s, y_hahn)
    qt_r, d2_r, om_r, _ = ctx.line_data(r)
    qt_s, d2_s, _, omt_s = ctx.line_data(s)
    wts = om_r[x_hahn] * omt_s[y_hahn]
    exact = -transition_count(r, s, to_walk(ctx.spec, r, x_hahn), to_walk(ctx.spec, s, y_hahn))
    inexact = 0.0
    all_exact = True
    for n in range(ctx.spec.a):
        root, ratio = _kappa_over_norms(ctx, coefficient, n, r, s, d2_r[n] * d2_s[n])
        poly = qt_r[n][x_hahn] * qt_s[n][y_hahn] * wts
        if root is not None:
            exact += root * poly
        else:
            all_exact = False
            # square-root only the O(1) product so huge factorials never hit a float
            inexact += math.copysign(math.sqrt(ratio * poly * poly), poly)
    if all_exact:
        return KernelValue(float(exact), exact)
    return KernelValue(float(exact) + inexact, None)


def _kappa_over_norms(ctx, coefficient, n, r, s, norms):
    key = (coefficient.__name__, n, r, s)
    hit = ctx._kappa_root.get(key)
    if hit is None:
        ratio = coefficient(ctx.spec, n, r, s) / norms
        hit = (exact_sqrt(ratio), ratio)
        ctx._kappa_root[key] = hit
    return hit


def hahn_kernel_walk(ctx: KernelContext, r: int, z: int, s: int, w: int) -> KernelValue:
    g_r, g_s = ctx.geometry(r), ctx.geometry(s)
    return hahn_kernel(ctx, r, (z - g_r.alpha_r) // 2, s, (w - g_s.alpha_r) // 2)


class GenericKernel:
    """Exact kernel from binomial path counts with delta endpoint conditions."""

    def __init__(self, spec: HexagonSpec):
        self.spec = spec
        init, fin = spec.initial(), spec.final()
        m = spec.last
        a_mat = [[transition_count(0, m, init[i], fin[j]) for j in range(spec.a)]
                 for i in range(spec.a)]
        try:
            self.a_inv = inverse_exact(a_mat)
        except ZeroDivisionError as exc:
            raise ArithmeticError(f"LGV matrix is singular for {spec}") from exc

    def __call__(self, r: int, x_walk: int, s: int, y_walk: int) -> Fraction:
        spec = self.spec
        if not (1 <= r < spec.last and 1 <= s < spec.last):
            raise ValueError("generic kernel is defined on interior lines only")
        init, fin, m = spec.initial(), spec.final(), spec.last
        out = -transition_count(r, s, x_walk, y_walk)
        right = [transition_count(r, m, x_walk, fin[i]) for i in range(spec.a)]
        left = [transition_count(0, s, init[j], y_walk) for j in range(spec.a)]
        for i in range(spec.a):
            if right[i]:
                for j in range(spec.a):
                    if left[j]:
                        out += right[i] * self.a_inv[i][j] * left[j]
        return out


@lru_cache(maxsize=64)
def _generic(spec: HexagonSpec) -> GenericKernel:
    return GenericKernel(spec)


def generic_kernel(spec: HexagonSpec, r: int, x_walk: int, s: int, y_walk: int) -> Fraction:
    return _generic(spec)(r, x_walk, s, y_walk)


def corr_det(kernel: Callable, points: Sequence[LinePoint]):
    """det(K(p_i; p_j)); exact when the kernel returns exact scalars."""
    k = len(points)
    if k == 0:
        return Fraction(1)
    vals = [[kernel(p, q) for q in points] for p in points]
    if all(isinstance(v, (Fraction, int)) for row in vals for v in row):
        return det_exact(vals)
    arr = np.array([[float(v.value if isinstance(v, KernelValue) else v) for v in row]
                    for row in vals])
    return float(np.linalg.det(arr))


def hahn_point_kernel(ctx: KernelContext) -> Callable[[LinePoint, LinePoint], object]:
    """Adapter for :func:`corr_det`: exact when available, float otherwise."""
    def k(p: LinePoint, q: LinePoint):
        kv = hahn_kernel(ctx, p.r, p.x_hahn, q.r, q.x_hahn)
        return kv.exact_part if kv.exact_part is not None else kv.value
    return k


def generic_point_kernel(spec: HexagonSpec) -> Callable[[LinePoint, LinePoint], Fraction]:
    gk = _generic(spec)

    def k(p: LinePoint, q: LinePoint) -> Fraction:
        return gk(p.r, to_walk(spec, p.r, p.x_hahn), q.r, to_walk(spec, q.r, q.x_hahn))
    return k


def partition_via_kernel(ctx: KernelContext) -> Fraction:
    """Z = prod_n 1/(c_{nn}^2 f_{nn} f*_{nn}) * det A."""
    pref = Fraction(1)
    for n in range(ctx.spec.a):
        pref /= ctx.c_coef[n, n] ** 2 * ctx.f_coef[n, n] * ctx.f_star_coef[n, n]
    return pref * det_exact(gram_matrix(ctx))


def export_grid_csv(ctx: KernelContext, pairs: Iterable[tuple[int, int]], out=None) -> str:
    """Write r, x_hahn, s, y_hahn, value rows for every site pair on the given line pairs."""
    buf = io.StringIO() if out is None else out
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["r", "x_hahn", "s", "y_hahn", "value"])
    for r, s in pairs:
        for x in range(ctx.geometry(r).gamma_r + 1):
            for y in range(ctx.geometry(s).gamma_r + 1):
                w.writerow([r, x, s, y, format(hahn_kernel(ctx, r, x, s, y).value, ".17g")])
    return buf.getvalue() if out is None else ""
