"""Brute-force ground truth for small hexagons.

Configurations are enumerated depth-first, line by line, with no reference
to the kernel machinery: each walker moves +-1, lines stay strictly
increasing, and a branch is pruned as soon as some walker can no longer
reach its final position.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .kernel import KernelContext, corr_det, generic_point_kernel, hahn_kernel
from .model import HexagonSpec, LinePoint, PathConfiguration, line_geometry, to_walk
from .sampler import SeededRng


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class EnumerationBudget:
    max_configs: int = 10**6

    def __post_init__(self):
        if self.max_configs <= 0:
            raise ValueError("budget must be positive")


def enumerate_configurations(spec: HexagonSpec, budget: EnumerationBudget | None = None,
                             visitor: Callable[[PathConfiguration], None] | None = None) -> int:
    budget = budget or EnumerationBudget()
    last, fin = spec.last, spec.final()
    moves = list(itertools.product((-1, 1), repeat=spec.a))
    successors: dict[tuple[int, tuple[int, ...]], list[tuple[int, ...]]] = {}

    def children(r: int, z: tuple[int, ...]) -> list[tuple[int, ...]]:
        # pruning only looks at (r, z), so the list is reused by every path through it
        key = (r, z)
        out = successors.get(key)
        if out is None:
            remaining = last - r - 1
            out = []
            for mv in moves:
                nxt = tuple(u + d for u, d in zip(z, mv))
                if any(u >= v for u, v in zip(nxt, nxt[1:])):
                    continue
                if any(abs(f - u) > remaining for u, f in zip(nxt, fin)):
                    continue
                out.append(nxt)
            successors[key] = out
        return out

    lines: list[tuple[int, ...]] = [spec.initial()]
    count = 0

    def extend(r: int) -> None:
        nonlocal count
        if r == last - 1:
            # the last step is forced by reachability; only the endpoint needs checking
            for nxt in children(r, lines[-1]):
                if nxt != fin:
                    continue
                count += 1
                if count > budget.max_configs:
                    raise BudgetExceeded(f"more than {budget.max_configs} configurations for {spec}")
                if visitor is not None:
                    visitor(PathConfiguration(spec, tuple(lines) + (nxt,)))
            return
        for nxt in children(r, lines[-1]):
            lines.append(nxt)
            extend(r + 1)
            lines.pop()

    extend(0)
    return count


def all_points(spec: HexagonSpec) -> list[LinePoint]:
    return [LinePoint(r, x) for r in spec.interior_lines()
            for x in range(line_geometry(spec, r).gamma_r + 1)]


class OccupationTable:
    """Every configuration of a spec as a boolean occupation matrix over interior points."""

    def __init__(self, spec: HexagonSpec, budget: EnumerationBudget | None = None):
        self.spec = spec
        self.points = all_points(spec)
        index = {(p.r, to_walk(spec, p.r, p.x_hahn)): i for i, p in enumerate(self.points)}
        rows: list[list[int]] = []

        def visit(cfg: PathConfiguration) -> None:
            rows.append([index[rz] for rz in cfg.points()])

        self.total = enumerate_configurations(spec, budget, visit)
        self.occupied = np.zeros((self.total, len(self.points)), dtype=bool)
        for i, cols in enumerate(rows):
            self.occupied[i, cols] = True
        self._index = {p: i for i, p in enumerate(self.points)}

    def count(self, points: Sequence[LinePoint]) -> int:
        cols = [self._index[p] for p in points]
        if not cols:
            return self.total
        return int(self.occupied[:, cols].all(axis=1).sum())

    def correlation(self, points: Sequence[LinePoint]) -> Fraction:
        if len(set(points)) != len(points):
            raise ValueError("points must be distinct")
        return Fraction(self.count(points), self.total)


def exact_correlation(spec: HexagonSpec, points: Sequence[LinePoint],
                      budget: EnumerationBudget | None = None) -> Fraction:
    """Probability that every given point is occupied, by full enumeration."""
    return OccupationTable(spec, budget).correlation(points)


def _subsets(points, max_points, cap, rng):
    total = sum(math.comb(len(points), k) for k in range(1, max_points + 1))
    if total <= cap:
        for k in range(1, max_points + 1):
            yield from itertools.combinations(points, k)
        return
    for _ in range(cap):
        k = 1 + rng.integers(max_points)
        chosen: list[int] = []
        while len(chosen) < k:
            i = rng.integers(len(points))
            if i not in chosen:
                chosen.append(i)
        yield tuple(points[i] for i in sorted(chosen))


def kernel_report(spec: HexagonSpec, max_points: int, budget: EnumerationBudget | None = None,
                  max_subsets: int = 10**4, seed: int = 0) -> dict:
    """Compare both kernels' correlation determinants with enumerated correlations."""
    table = OccupationTable(spec, budget)
    ctx = KernelContext(spec)
    pts = table.points
    idx = {p: i for i, p in enumerate(pts)}
    hahn = np.array([[hahn_kernel(ctx, p.r, p.x_hahn, q.r, q.x_hahn).value for q in pts] for p in pts])
    gk = generic_point_kernel(spec)
    generic = [[gk(p, q) for q in pts] for p in pts]

    checked, worst_h, worst_g, worst_set = 0, 0.0, Fraction(0), []
    for subset in _subsets(pts, max_points, max_subsets, SeededRng(seed)):
        cols = [idx[p] for p in subset]
        exact = table.correlation(subset)
        dh = abs(float(np.linalg.det(hahn[np.ix_(cols, cols)])) - float(exact))
        dg = abs(corr_det(lambda p, q: generic[idx[p]][idx[q]], subset) - exact)
        if dh > worst_h:
            worst_h, worst_set = dh, [[p.r, p.x_hahn] for p in subset]
        worst_g = max(worst_g, dg)
        checked += 1
    return {
        "spec": [spec.a, spec.b, spec.c],
        "subsets_checked": checked,
        "max_abs_error_hahn": worst_h,
        "max_abs_error_generic": float(worst_g),
        "generic_exact": worst_g == 0,
        "worst_point_set": worst_set,
    }


def report_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True)
