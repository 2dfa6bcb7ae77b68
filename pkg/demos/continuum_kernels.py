"""Extended Hermite kernel in three forms and its Brownian-bridge counterpart."""
import numpy as np

from hexwalks.continuum import ext_hermite, ext_hermite_contour, ext_hermite_series, kbm_at, transformed_kbm

# %% finite sum, series tail and double contour integral at a few points
for n, t, x, s, y in [(2, 0.0, 0.3, 0.0, -0.2), (3, -0.4, 0.5, 0.0, 0.1), (5, -1.0, -1.0, 0.0, 0.7)]:
    print(n, t - s, ext_hermite(n, t, x, s, y), ext_hermite_series(n, t, x, s, y),
          ext_hermite_contour(n, t, x, s, y))

# %% pushing the bridge kernel through the time change recovers the Hermite kernel
grid = [(tr, x, ts, y) for tr in (-0.5, 0.8) for ts in (-0.5, 0.8) for x in (-1, 1.3) for y in (0, 1.3)]
print(max(abs(transformed_kbm(3, 1.0, *g) - ext_hermite(3, *g)) for g in grid))

# %% one-point density of four bridges at mid-time
xs = np.linspace(-2.5, 2.5, 11)
print(np.round([kbm_at(4, 1.0, 0.5, x, 0.5, x) for x in xs], 4))
