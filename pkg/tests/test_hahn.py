import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hexwalks.exactnum import binomial, pochhammer
from hexwalks.hahn import (HahnParams, eval as hahn_eval, eval_unnorm, hyp3f2_terminating, norm_sq,
                           transformed_3f2, weight)


def monic_orthogonal(p):
    """Monic orthogonal polynomials by Gram-Schmidt on monomials, as value tables on 0..N."""
    pts = range(p.big_n + 1)
    w = [weight(p, x) for x in pts]
    basis = []
    for n in range(p.big_n + 1):
        v = [Fraction(x) ** n for x in pts]
        for u in basis:
            coef = sum(a * b * wx for a, b, wx in zip(v, u, w)) / sum(b * b * wx for b, wx in zip(u, w))
            v = [a - coef * b for a, b in zip(v, u)]
        basis.append(v)
    return basis


def leading_coefficient(p, n):
    # from the hypergeometric sum: the x^n coefficient comes from (-x)_n at j = n
    a, b, N = p.alpha, p.beta, p.big_n
    upper = n - 2 * N - a - b - 1
    return (pochhammer(-N - b, n) * pochhammer(-N, n) / math.factorial(n)
            * pochhammer(upper, n) / (pochhammer(-N - b, n) * pochhammer(-N, n)))


def test_weight_examples():
    p = HahnParams(0, 0, 1)
    assert weight(p, 0) == 1 and weight(p, 1) == 1 and weight(p, 2) == 0


def test_norm_examples():
    assert norm_sq(HahnParams(0, 0, 1), 0) == 2
    assert norm_sq(HahnParams(0, 0, 0), 0) == 1
    with pytest.raises(ValueError):
        norm_sq(HahnParams(0, 0, 1), 2)


def test_negative_parameters_rejected():
    with pytest.raises(ValueError):
        HahnParams(-1, 0, 2)


@given(st.integers(0, 4), st.integers(0, 4), st.integers(0, 12), st.data())
def test_norm_positive(alpha, beta, big_n, data):
    n = data.draw(st.integers(0, big_n))
    assert norm_sq(HahnParams(alpha, beta, big_n), n) > 0


def test_degree_zero_is_one():
    for alpha, beta, big_n in itertools.product(range(3), range(3), range(5)):
        for x in range(big_n + 1):
            assert eval_unnorm(HahnParams(alpha, beta, big_n), 0, x) == 1


def test_degree_one_two_point_lattice():
    p = HahnParams(0, 0, 1)
    v0, v1 = eval_unnorm(p, 1, 0), eval_unnorm(p, 1, 1)
    assert v0 + v1 == 0
    assert v0 ** 2 + v1 ** 2 == norm_sq(p, 1)


def test_eval_examples():
    assert hahn_eval(HahnParams(0, 0, 1), 0, 0) == pytest.approx(1 / math.sqrt(2), abs=1e-15)
    assert hahn_eval(HahnParams(0, 0, 0), 0, 0) == 1.0


def test_out_of_range_degree():
    with pytest.raises(ValueError):
        eval_unnorm(HahnParams(1, 1, 3), 4, 0)


@pytest.mark.parametrize("alpha, beta, big_n", [(0, 0, 4), (2, 1, 5), (3, 4, 6), (1, 3, 7)])
def test_matches_gram_schmidt(alpha, beta, big_n):
    p = HahnParams(alpha, beta, big_n)
    for n, monic in enumerate(monic_orthogonal(p)):
        lc = leading_coefficient(p, n)
        assert [eval_unnorm(p, n, x) for x in range(big_n + 1)] == [lc * v for v in monic]


def test_exact_orthogonality():
    for alpha, beta in itertools.product(range(5), repeat=2):
        for big_n in range(16):
            p = HahnParams(alpha, beta, big_n)
            w = [weight(p, x) for x in range(big_n + 1)]
            q = [[eval_unnorm(p, n, x) for x in range(big_n + 1)] for n in range(big_n + 1)]
            for n in range(big_n + 1):
                for m in range(n, big_n + 1):
                    s = sum(q[n][x] * q[m][x] * w[x] for x in range(big_n + 1))
                    assert s == (norm_sq(p, n) if n == m else 0), (alpha, beta, big_n, n, m)


def test_float_orthonormality():
    for big_n in (5, 12, 20):
        p = HahnParams(2, 3, big_n)
        w = [float(weight(p, x)) for x in range(big_n + 1)]
        for n, m in itertools.product(range(big_n + 1), repeat=2):
            s = sum(hahn_eval(p, n, x) * hahn_eval(p, m, x) * w[x] for x in range(big_n + 1))
            assert s == pytest.approx(float(n == m), abs=1e-12)


@given(st.integers(0, 3), st.integers(0, 3), st.integers(1, 9), st.data())
def test_exact_degree(alpha, beta, big_n, data):
    n = data.draw(st.integers(0, big_n - 1))
    p = HahnParams(alpha, beta, big_n)
    vals = [eval_unnorm(p, n, x) for x in range(big_n + 1)]
    diffs = sum((-1) ** (n + 1 - k) * binomial(n + 1, k) * vals[k] for k in range(n + 2))
    assert diffs == 0
    lead = sum((-1) ** (n - k) * binomial(n, k) * vals[k] for k in range(n + 1))
    assert lead != 0


def test_accepts_non_integer_argument():
    p = HahnParams(1, 2, 4)
    x = Fraction(5, 2)
    # a quadratic has constant second difference 2 * leading coefficient, at half-integers too
    vals = [eval_unnorm(p, 2, x + k) for k in range(3)]
    assert vals[2] - 2 * vals[1] + vals[0] == 2 * leading_coefficient(p, 2)


def test_hyp3f2_examples():
    assert hyp3f2_terminating(0, 3, 4, 5, 6) == 1
    for n in range(1, 6):
        assert hyp3f2_terminating(n, Fraction(7, 2), 3, Fraction(7, 2), 3) == 0


def test_hyp3f2_degenerate_lower_parameter():
    with pytest.raises(ZeroDivisionError, match="degenerate lower parameter"):
        hyp3f2_terminating(3, 1, 1, -1, 5)


def test_hyp3f2_against_direct_sum():
    for n, a2, a3, b1, b2 in [(3, 2, Fraction(1, 2), 5, 7), (4, -1, 3, 2, Fraction(9, 4))]:
        direct = sum(pochhammer(-n, j) * pochhammer(a2, j) * pochhammer(a3, j)
                     / (pochhammer(b1, j) * pochhammer(b2, j) * math.factorial(j)) for j in range(n + 1))
        assert hyp3f2_terminating(n, a2, a3, b1, b2) == direct


def test_transformation_identity_random():
    rng = random.Random(11)
    done = 0
    while done < 20:
        n = rng.randint(0, 6)
        a, b, d, e = (rng.randint(-12, 12) for _ in range(4))
        try:
            lhs = hyp3f2_terminating(n, a, b, d, e)
            rhs = transformed_3f2(n, a, b, d, e)
        except ZeroDivisionError:
            continue
        assert lhs == rhs, (n, a, b, d, e)
        done += 1
