"""Correlation kernel of the walks, checked against brute-force enumeration."""
import itertools

from hexwalks.kernel import KernelContext, corr_det, generic_point_kernel, hahn_kernel, hahn_point_kernel
from hexwalks.model import HexagonSpec, line_geometry
from hexwalks.oracle import OccupationTable

spec = HexagonSpec(2, 2, 3)
ctx = KernelContext(spec)

# %% one-point densities: the kernel diagonal on each interior line
for r in spec.interior_lines():
    g = line_geometry(spec, r)
    print(r, [str(hahn_kernel(ctx, r, x, r, x).exact_part) for x in range(g.gamma_r + 1)])

# %% every site on a line is filled on average by exactly a particles
print([sum(hahn_kernel(ctx, r, x, r, x).value for x in range(line_geometry(spec, r).gamma_r + 1))
       for r in spec.interior_lines()])

# %% multi-point correlations as determinants, compared with counting tilings
table = OccupationTable(spec)
hk, gk = hahn_point_kernel(ctx), generic_point_kernel(spec)
for pts in itertools.islice(itertools.combinations(table.points, 3), 0, 60, 12):
    print([(p.r, p.x_hahn) for p in pts], table.correlation(pts), corr_det(gk, pts), corr_det(hk, pts))
