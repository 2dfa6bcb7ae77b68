"""Scaling limits: Hahn polynomials towards Hermite, walks towards Brownian bridges."""
from hexwalks.limits import bm_limit_report, hahn_hermite_report

# %% symmetric Hahn polynomials near the centre of a long lattice
rep = hahn_hermite_report(0.5)
print("raw errors", [round(e, 1) for e in rep.raw_errors])
print("argument rescale", round(rep.fitted_rescale, 5), "flagged" if rep.flagged else "")
print("errors after rescale", [round(e, 4) for e in rep.errors], "monotone", rep.monotone)

# %% walk kernel near the middle of a tall hexagon with a fixed number of walkers
for a in (1, 2):
    rep = bm_limit_report(a)
    print(a, rep.scales, [round(e, 4) for e in rep.errors], "rescale", round(rep.fitted_rescale, 4))
