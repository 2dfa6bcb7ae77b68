"""Exact rational scalars and the combinatorial helpers built on them.

Every discrete quantity in the package (weights, Pochhammer ratios, path
counts, determinants) is a :class:`fractions.Fraction`, so nothing in the
discrete pipeline is ever rounded.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

ExactScalar = Fraction

FACTORIAL_CACHE_CAP = 10_000

_factorials: list[int] = [1]


def _int_factorial(n: int) -> int:
    if n >= FACTORIAL_CACHE_CAP:
        return math.factorial(n)
    while len(_factorials) <= n:
        _factorials.append(_factorials[-1] * len(_factorials))
    return _factorials[n]


def factorial(n: int) -> Fraction:
    """n! as an exact scalar. Negative n is an error; see :func:`inv_factorial`."""
    if n < 0:
        raise ValueError(f"factorial of negative integer {n}")
    return Fraction(_int_factorial(n))


def inv_factorial(n: int) -> Fraction:
    """1/n!, with the convention 1/n! = 0 for n < 0."""
    if n < 0:
        return Fraction(0)
    return Fraction(1, _int_factorial(n))


def pochhammer(x, n: int) -> Fraction:
    """Rising factorial (x)_n = x(x+1)...(x+n-1)."""
    if n < 0:
        raise ValueError("pochhammer length must be nonnegative")
    x = Fraction(x)
    out = Fraction(1)
    for i in range(n):
        out *= x + i
        if out == 0:
            break
    return out


def binomial(n: int, k: int) -> Fraction:
    """C(n, k) for 0 <= k <= n, zero otherwise."""
    if n < 0 or k < 0 or k > n:
        return Fraction(0)
    return Fraction(math.comb(n, k))


def _lcm(values) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


def _bareiss_int(rows: list[list[int]]) -> int:
    m = [row[:] for row in rows]
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i = m[i]
            row_k = m[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - mik * row_k[j]) // prev
        prev = pivot
    return sign * m[n - 1][n - 1]


def det_exact(m: Sequence[Sequence]) -> Fraction:
    """Exact determinant by fraction-free (Bareiss) elimination.

    Rational rows are scaled to integers first, so all intermediate
    divisions are exact integer divisions.
    """
    n = len(m)
    if n == 0 or any(len(row) != n for row in m):
        raise ValueError("det_exact requires a non-empty square matrix")
    scale = Fraction(1)
    int_rows = []
    for row in m:
        fr = [Fraction(v) for v in row]
        den = _lcm(v.denominator for v in fr)
        scale /= den
        int_rows.append([v.numerator * (den // v.denominator) for v in fr])
    return _bareiss_int(int_rows) * scale


def solve_exact(m: Sequence[Sequence], rhs: Sequence[Sequence]) -> list[list[Fraction]]:
    """Solve m @ X = rhs exactly by Gauss-Jordan elimination over the rationals."""
    n = len(m)
    aug = [[Fraction(v) for v in m[i]] + [Fraction(v) for v in rhs[i]] for i in range(n)]
    width = len(aug[0])
    for col in range(n):
        piv = next((i for i in range(col, n) if aug[i][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix in solve_exact")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [v / p for v in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [vi - f * vc for vi, vc in zip(aug[i], aug[col])]
    return [row[n:width] for row in aug]


def inverse_exact(m: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(m)
    eye = [[int(i == j) for j in range(n)] for i in range(n)]
    return solve_exact(m, eye)


def exact_sqrt(q: Fraction) -> Fraction | None:
    """Return the rational square root of q if q is a perfect square, else None."""
    if q < 0:
        return None
    num, den = q.numerator, q.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None
