"""Non-intersecting random walks on the abc-hexagon: exact correlation kernels,
continuum limits, partition functions and an exact tiling sampler."""
from .model import HexagonSpec, LinePoint, PathConfiguration, macmahon
from .kernel import KernelContext, corr_det, generic_kernel, hahn_kernel
from .sampler import SeededRng, sample, to_lozenges

__all__ = ["HexagonSpec", "LinePoint", "PathConfiguration", "macmahon", "KernelContext",
           "corr_det", "generic_kernel", "hahn_kernel", "SeededRng", "sample", "to_lozenges"]
__version__ = "0.1.0"
