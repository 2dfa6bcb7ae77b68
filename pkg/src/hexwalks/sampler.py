"""Exact uniform sampling of walk configurations / lozenge tilings.

Lines are generated one at a time. The transition from a line
configuration ``z`` to ``z'`` has probability

    det(phi(z, z')) * W(r+1, z') / W(r, z)

where ``W`` is the Karlin-McGregor determinant from the current line to the
fixed final configuration, so the product along any configuration
telescopes to exactly 1/Z.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .exactnum import det_exact
from .model import HexagonSpec, PathConfiguration, line_geometry, transition_count, validate

_TWO128 = 1 << 128


class DeadState(ValueError):
    pass


class SeededRng:
    """Reproducible, splittable stream of 128-bit uniforms (PCG64 underneath)."""

    def __init__(self, seed: int | np.random.SeedSequence = 0):
        self._seq = seed if isinstance(seed, np.random.SeedSequence) \
            else np.random.SeedSequence(int(seed) & 0xFFFFFFFFFFFFFFFF)
        self._bits = np.random.PCG64(self._seq)

    def split(self, n: int) -> list["SeededRng"]:
        return [SeededRng(child) for child in self._seq.spawn(n)]

    def u128(self) -> int:
        hi, lo = self._bits.random_raw(2)
        return (int(hi) << 64) | int(lo)

    def integers(self, high: int) -> int:
        """Uniform integer in [0, high) by rejection on 128-bit words."""
        limit = _TWO128 - _TWO128 % high
        while True:
            u = self.u128()
            if u < limit:
                return u % high


@lru_cache(maxsize=None)
def tail_weight(spec: HexagonSpec, r: int, z: tuple[int, ...]) -> Fraction:
    """Number of non-intersecting continuations from line r, configuration z."""
    fin = spec.final()
    m = [[transition_count(r, spec.last, zj, fk) if r < spec.last else Fraction(int(zj == fk))
          for fk in fin] for zj in z]
    return det_exact(m)


def _candidates(spec: HexagonSpec, r: int, z: tuple[int, ...]):
    remaining = spec.last - r - 1
    fin = spec.final()
    for signs in itertools.product((-1, 1), repeat=spec.a):
        nxt = tuple(zj + d for zj, d in zip(z, signs))
        if any(u >= v for u, v in zip(nxt, nxt[1:])):
            continue
        if any(abs(f - u) > remaining for u, f in zip(nxt, fin)):
            continue
        yield nxt


@dataclass(frozen=True)
class _Step:
    configs: tuple[tuple[int, ...], ...]
    probs: tuple[Fraction, ...]
    thresholds: tuple[int, ...]


@lru_cache(maxsize=None)
def _step_table(spec: HexagonSpec, r: int, z: tuple[int, ...]) -> _Step:
    here = tail_weight(spec, r, z)
    if here == 0:
        raise DeadState(f"configuration {z} on line {r} cannot reach the final line")
    configs, probs = [], []
    for nxt in _candidates(spec, r, z):
        link = det_exact([[int(abs(u - v) == 1) for v in nxt] for u in z])
        p = link * tail_weight(spec, r + 1, nxt) / here
        if p:
            configs.append(nxt)
            probs.append(p)
    if sum(probs) != 1:
        raise ArithmeticError(f"transition probabilities from {z} on line {r} do not sum to 1")
    cum, thresholds = Fraction(0), []
    for p in probs:
        cum += p
        thresholds.append(cum.numerator * _TWO128 // cum.denominator)
    thresholds[-1] = _TWO128
    return _Step(tuple(configs), tuple(probs), tuple(thresholds))


def next_line_distribution(spec: HexagonSpec, r: int,
                           z: Sequence[int]) -> list[tuple[tuple[int, ...], Fraction]]:
    step = _step_table(spec, r, tuple(z))
    return list(zip(step.configs, step.probs))


def sample(spec: HexagonSpec, rng: SeededRng) -> PathConfiguration:
    z = spec.initial()
    lines = [z]
    for r in range(spec.last):
        step = _step_table(spec, r, z)
        u = rng.u128()
        for cfg, th in zip(step.configs, step.thresholds):
            if u < th:
                z = cfg
                break
        lines.append(z)
    return PathConfiguration(spec, tuple(lines))


def sample_many(spec: HexagonSpec, count: int, seed: int = 0) -> list[PathConfiguration]:
    rng = SeededRng(seed)
    return [sample(spec, rng) for _ in range(count)]


def one_point_stats(spec: HexagonSpec, configs: Sequence[PathConfiguration]) -> list[dict]:
    """Empirical occupation frequency of every interior site against the kernel
    diagonal, with the binomial z-score of the difference."""
    from .kernel import KernelContext, hahn_kernel_walk

    if not configs:
        raise ValueError("need at least one sample")
    ctx = KernelContext(spec)
    hits: dict[tuple[int, int], int] = {}
    for cfg in configs:
        for rz in cfg.points():
            hits[rz] = hits.get(rz, 0) + 1
    m = len(configs)
    rows = []
    for r in spec.interior_lines():
        for z in line_geometry(spec, r).sites():
            rho = hahn_kernel_walk(ctx, r, z, r, z).value
            freq = hits.get((r, z), 0) / m
            se = math.sqrt(max(rho * (1 - rho), 0.0) / m)
            if se > 0:
                score = (freq - rho) / se
            else:
                score = 0.0 if abs(freq - rho) < 1e-12 else math.inf
            rows.append({"r": r, "z": z, "kernel": rho, "empirical": freq, "z_score": score})
    return rows


def sequential_probability(spec: HexagonSpec, config: PathConfiguration) -> Fraction:
    """Probability the sampler assigns to ``config``, as an exact product."""
    prob = Fraction(1)
    for r in range(spec.last):
        table = dict(next_line_distribution(spec, r, config.lines[r]))
        prob *= table.get(tuple(config.lines[r + 1]), Fraction(0))
        if prob == 0:
            break
    return prob


# -- lozenges ---------------------------------------------------------------

UP, DOWN, FLAT = "up-step", "down-step", "horizontal"


@dataclass(frozen=True, order=True)
class Lozenge:
    kind: str
    r: int
    z: int

    def vertices(self) -> tuple[tuple[int, int], ...]:
        """Corners in (line, walk position) coordinates, counterclockwise."""
        r, z = self.r, self.z
        if self.kind == UP:
            return ((r, z - 1), (r + 1, z), (r + 1, z + 2), (r, z + 1))
        if self.kind == DOWN:
            return ((r, z - 1), (r + 1, z - 2), (r + 1, z), (r, z + 1))
        return ((r - 1, z), (r, z - 1), (r + 1, z), (r, z + 1))


@dataclass(frozen=True)
class LozengeTiling:
    spec: HexagonSpec
    lozenges: tuple[Lozenge, ...]

    def counts(self) -> tuple[int, int, int]:
        kinds = [lz.kind for lz in self.lozenges]
        return kinds.count(UP), kinds.count(DOWN), kinds.count(FLAT)


def to_lozenges(spec: HexagonSpec, config: PathConfiguration) -> LozengeTiling:
    if not validate(spec, config):
        raise ValueError("invalid path configuration")
    out = []
    for r in range(spec.last):
        for z, w in zip(config.lines[r], config.lines[r + 1]):
            out.append(Lozenge(UP if w > z else DOWN, r, z))
    for r in spec.interior_lines():
        occupied = set(config.lines[r])
        out.extend(Lozenge(FLAT, r, z) for z in line_geometry(spec, r).sites() if z not in occupied)
    return LozengeTiling(spec, tuple(sorted(out)))


def from_lozenges(spec: HexagonSpec, tiling: LozengeTiling) -> PathConfiguration:
    lines = [list(spec.initial())]
    steps = {(lz.r, lz.z): (1 if lz.kind == UP else -1) for lz in tiling.lozenges if lz.kind != FLAT}
    for r in range(spec.last):
        lines.append([z + steps[r, z] for z in lines[-1]])
    return PathConfiguration.from_lines(spec, lines)


_SVG_CLASS = {UP: "loz-up", DOWN: "loz-down", FLAT: "loz-flat"}


def tiling_svg(tiling: LozengeTiling, scale: float = 20.0) -> str:
    """Isometric SVG: unit rhombi, line index horizontal, walk position vertical."""
    spec = tiling.spec
    hx = math.sqrt(3) / 2 * scale

    def xy(r: int, z: int) -> tuple[float, float]:
        return r * hx, -z * scale / 2

    zs = [z for lz in tiling.lozenges for _, z in lz.vertices()]
    zmin, zmax = min(zs), max(zs)
    pad = scale / 2
    width = spec.last * hx + 2 * pad
    height = (zmax - zmin) * scale / 2 + 2 * pad
    oy = zmax * scale / 2 + pad
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.3f}" height="{height:.3f}" '
        f'viewBox="0 0 {width:.3f} {height:.3f}">',
        "<style>.loz-up{fill:#e5a13a}.loz-down{fill:#4a7fb5}.loz-flat{fill:#d9d9d9}"
        "polygon{stroke:#222;stroke-width:0.6}</style>",
    ]
    for lz in tiling.lozenges:
        pts = " ".join(f"{x + pad:.3f},{y + oy:.3f}" for x, y in (xy(*v) for v in lz.vertices()))
        parts.append(f'<polygon class="{_SVG_CLASS[lz.kind]}" points="{pts}"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
