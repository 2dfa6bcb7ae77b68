"""Counting lozenge tilings of the abc-hexagon four different ways."""
from hexwalks.kernel import KernelContext, partition_via_kernel
from hexwalks.model import HexagonSpec, lgv_partition, macmahon
from hexwalks.oracle import enumerate_configurations

# %% a tiling of the (2,2,2) hexagon is the same thing as two non-crossing walks
spec = HexagonSpec(2, 2, 2)
print("initial line", spec.initial(), "final line", spec.final(), "lines", spec.n_lines)

# %% product formula, path-count determinant, orthogonal-polynomial route, brute force
for a, b, c in [(1, 1, 1), (2, 2, 2), (2, 2, 3), (3, 3, 4)]:
    spec = HexagonSpec(a, b, c)
    routes = (macmahon(a, b, c), lgv_partition(spec), partition_via_kernel(KernelContext(spec)),
              enumerate_configurations(spec))
    print((a, b, c), [int(v) for v in routes])

# %% without enumeration the exact routes go much further
spec = HexagonSpec(8, 9, 10)
print((8, 9, 10), macmahon(8, 9, 10) == lgv_partition(spec) == partition_via_kernel(KernelContext(spec)))
