"""Associated Hahn polynomials on {0, ..., N}.

The primitive is the unnormalized polynomial ``q~_n = d_n * q_n``, evaluated
exactly from its terminating hypergeometric sum; the square root of the
squared norm only enters at the float boundary in :func:`eval`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exactnum import factorial, inv_factorial, pochhammer


@dataclass(frozen=True)
class HahnParams:
    alpha: int
    beta: int
    big_n: int

    def __post_init__(self):
        if min(self.alpha, self.beta, self.big_n) < 0:
            raise ValueError(f"Hahn parameters must be nonnegative, got {self}")


def _check_degree(p: HahnParams, n: int) -> None:
    if not 0 <= n <= p.big_n:
        raise ValueError(f"degree {n} outside [0, {p.big_n}]")


def weight(p: HahnParams, x: int) -> Fraction:
    """1 / (x! (x+alpha)! (N+beta-x)! (N-x)!), zero off {0..N}."""
    return (inv_factorial(x) * inv_factorial(x + p.alpha)
            * inv_factorial(p.big_n + p.beta - x) * inv_factorial(p.big_n - x))


def norm_sq(p: HahnParams, n: int) -> Fraction:
    """Squared norm d_n^2 of q~_n against :func:`weight`."""
    _check_degree(p, n)
    a, b, N = p.alpha, p.beta, p.big_n
    num = pochhammer(a + b + N + 1 - n, N + 1)
    den = ((a + b + 2 * N + 1 - 2 * n) * factorial(n) * factorial(b + N - n)
           * factorial(a + N - n) * factorial(N - n))
    return num / den


def eval_unnorm(p: HahnParams, n: int, x) -> Fraction:
    _check_degree(p, n)
    a, b, N = p.alpha, p.beta, p.big_n
    x = Fraction(x)
    if x.denominator == 1:
        x = x.numerator
    upper = n - 2 * N - a - b - 1
    # the prefactor (-N-b)_n (-N)_n is folded into each term so integer x stays integral
    tail = [1] * (n + 1)
    for j in range(n - 1, -1, -1):
        tail[j] = tail[j + 1] * (-N - b + j) * (-N + j)
    total, rising = 0, 1
    for j in range(n + 1):
        total += (-1) ** j * math.comb(n, j) * rising * tail[j]
        rising *= (-x + j) * (upper + j)
    return Fraction(total) / factorial(n)


def eval(p: HahnParams, n: int, x) -> float:
    """Orthonormal q_n(x) in floating point."""
    return float(eval_unnorm(p, n, x)) / math.sqrt(norm_sq(p, n))


def hyp3f2_terminating(n: int, a2, a3, b1, b2) -> Fraction:
    """3F2(-n, a2, a3; b1, b2; 1) as an exact finite sum."""
    if n < 0:
        raise ValueError("terminating series needs n >= 0")
    a2, a3, b1, b2 = (Fraction(v) for v in (a2, a3, b1, b2))
    total = Fraction(0)
    term = Fraction(1)
    for j in range(n + 1):
        total += term
        if j == n:
            break
        den = (b1 + j) * (b2 + j) * (j + 1)
        if den == 0:
            raise ZeroDivisionError("degenerate lower parameter in terminating 3F2")
        term = term * (-n + j) * (a2 + j) * (a3 + j) / den
    return total


def transformed_3f2(n: int, a, b, d, e) -> Fraction:
    """Right-hand side of the Sheppard-type transformation of 3F2(-n,a,b;d,e;1)."""
    a, b, d, e = (Fraction(v) for v in (a, b, d, e))
    pref = (pochhammer(d - a, n) * pochhammer(e - a, n)
            / (pochhammer(d, n) * pochhammer(e, n)))
    return pref * hyp3f2_terminating(n, a, a + b - n - d - e + 1, a - n - d + 1, a - n - e + 1)
