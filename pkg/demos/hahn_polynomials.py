"""Associated Hahn polynomials: exact values, orthogonality, and the 3F2 transformation."""
from fractions import Fraction

import numpy as np

from hexwalks.hahn import HahnParams, eval as hahn_eval, eval_unnorm, hyp3f2_terminating, norm_sq, \
    transformed_3f2, weight

p = HahnParams(alpha=2, beta=1, big_n=6)

# %% unnormalized values stay rational
print([eval_unnorm(p, 2, x) for x in range(7)])

# %% exact Gram matrix against the weight is diag(d_n^2)
w = [weight(p, x) for x in range(7)]
gram = [[sum(eval_unnorm(p, n, x) * eval_unnorm(p, m, x) * w[x] for x in range(7)) for m in range(7)]
        for n in range(7)]
print(all(gram[n][m] == (norm_sq(p, n) if n == m else 0) for n in range(7) for m in range(7)))

# %% floats only appear after normalizing
q = np.array([[hahn_eval(p, n, x) for x in range(7)] for n in range(7)])
print(np.round(q @ np.diag([float(v) for v in w]) @ q.T, 12))

# %% a terminating 3F2 and its transformed form agree exactly
args = (4, Fraction(1, 3), Fraction(-7, 2), Fraction(5, 2), 9)
print(hyp3f2_terminating(*args), transformed_3f2(*args))
