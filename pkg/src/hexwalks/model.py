"""Geometry of the abc-hexagon walk model.

Walk coordinates ``z`` are canonical. Line ``r`` (time ``r``) carries the
sites ``z = alpha_r + 2x`` for Hahn coordinates ``x = 0..gamma_r``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .exactnum import binomial, det_exact, inv_factorial
from .hahn import HahnParams


@dataclass(frozen=True)
class HexagonSpec:
    a: int
    b: int
    c: int

    def __post_init__(self):
        if min(self.a, self.b, self.c) < 1:
            raise ValueError(f"a, b, c must be positive, got {(self.a, self.b, self.c)}")
        if self.c < self.b:
            raise ValueError(f"model requires c >= b, got b={self.b}, c={self.c}")

    @property
    def n_lines(self) -> int:
        return self.b + self.c + 1

    @property
    def last(self) -> int:
        return self.b + self.c

    def initial(self) -> tuple[int, ...]:
        return tuple(2 * j for j in range(self.a))

    def final(self) -> tuple[int, ...]:
        return tuple(self.c - self.b + 2 * j for j in range(self.a))

    def interior_lines(self) -> range:
        return range(1, self.last)


@dataclass(frozen=True)
class LineGeometry:
    r: int
    alpha_r: int
    gamma_r: int
    a_r: int
    b_r: int

    def hahn_params(self) -> HahnParams:
        return HahnParams(alpha=self.b_r, beta=self.a_r, big_n=self.gamma_r)

    def sites(self) -> list[int]:
        return [self.alpha_r + 2 * x for x in range(self.gamma_r + 1)]


@dataclass(frozen=True, order=True)
class LinePoint:
    r: int
    x_hahn: int


@lru_cache(maxsize=None)
def line_geometry(spec: HexagonSpec, r: int) -> LineGeometry:
    a, b, c = spec.a, spec.b, spec.c
    if not 0 <= r <= b + c:
        raise ValueError(f"line index {r} outside [0, {b + c}]")
    alpha = -r if r <= b else r - 2 * b
    if r <= b:
        gamma = r + a - 1
    elif r <= c:
        gamma = b + a - 1
    else:
        gamma = a + b + c - 1 - r
    return LineGeometry(r=r, alpha_r=alpha, gamma_r=gamma, a_r=abs(c - r), b_r=abs(b - r))


def omega(spec: HexagonSpec, r: int, x: int) -> Fraction:
    g = line_geometry(spec, r)
    if r <= spec.b:
        return inv_factorial(g.b_r + x) * inv_factorial(g.gamma_r + g.a_r - x)
    if r <= spec.c:
        return inv_factorial(x) * inv_factorial(g.gamma_r + g.a_r - x)
    return inv_factorial(x) * inv_factorial(g.gamma_r - x)


def omega_tilde(spec: HexagonSpec, s: int, y: int) -> Fraction:
    g = line_geometry(spec, s)
    if s <= spec.b:
        return inv_factorial(y) * inv_factorial(g.gamma_r - y)
    if s <= spec.c:
        return inv_factorial(g.b_r + y) * inv_factorial(g.gamma_r - y)
    return inv_factorial(g.b_r + y) * inv_factorial(g.gamma_r + g.a_r - y)


def to_walk(spec: HexagonSpec, r: int, x_hahn: int) -> int:
    return line_geometry(spec, r).alpha_r + 2 * x_hahn


def from_walk(spec: HexagonSpec, r: int, z: int) -> int:
    diff = z - line_geometry(spec, r).alpha_r
    if diff % 2:
        raise ValueError(f"parity mismatch: site z={z} is unreachable on line {r}")
    return diff // 2


def transition_count(r: int, s: int, x_walk: int, y_walk: int) -> Fraction:
    """Number of +-1 walks from x at time r to y at time s (zero if r >= s)."""
    if r >= s:
        return Fraction(0)
    steps = s - r
    ups2 = y_walk - x_walk + steps
    if ups2 % 2:
        return Fraction(0)
    return binomial(steps, ups2 // 2)


def macmahon(a: int, b: int, c: int) -> Fraction:
    """Boxed plane partitions in an a x b x c box (triple product formula)."""
    if min(a, b, c) < 1:
        raise ValueError("macmahon needs a, b, c >= 1")
    num = den = 1
    for i in range(1, a + 1):
        for j in range(1, b + 1):
            for k in range(1, c + 1):
                num *= i + j + k - 1
                den *= i + j + k - 2
    out = Fraction(num, den)
    assert out.denominator == 1
    return out


def lgv_partition(spec: HexagonSpec) -> Fraction:
    n = spec.b + spec.c
    m = [[binomial(n, spec.c + j - i) for j in range(spec.a)] for i in range(spec.a)]
    return det_exact(m)


@dataclass(frozen=True)
class PathConfiguration:
    spec: HexagonSpec
    lines: tuple[tuple[int, ...], ...]

    @classmethod
    def from_lines(cls, spec: HexagonSpec, lines: Sequence[Sequence[int]]) -> "PathConfiguration":
        return cls(spec, tuple(tuple(int(z) for z in row) for row in lines))

    def to_json(self) -> str:
        payload = {"a": self.spec.a, "b": self.spec.b, "c": self.spec.c,
                   "lines": [list(row) for row in self.lines]}
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text: str) -> "PathConfiguration":
        d = json.loads(text)
        spec = HexagonSpec(d["a"], d["b"], d["c"])
        if len(d["lines"]) != spec.n_lines or any(len(row) != spec.a for row in d["lines"]):
            raise ValueError("lines must have b+c+1 rows of a integers")
        return cls.from_lines(spec, d["lines"])

    def points(self) -> list[tuple[int, int]]:
        """Occupied interior (r, z) pairs."""
        return [(r, z) for r in self.spec.interior_lines() for z in self.lines[r]]


def validate(spec: HexagonSpec, config: PathConfiguration) -> bool:
    lines = config.lines
    if len(lines) != spec.n_lines or any(len(row) != spec.a for row in lines):
        return False
    if tuple(lines[0]) != spec.initial() or tuple(lines[-1]) != spec.final():
        return False
    for r, row in enumerate(lines):
        if any(z1 >= z2 for z1, z2 in zip(row, row[1:])):
            return False
        if any((z - r) % 2 for z in row):
            return False
        if r + 1 < len(lines):
            if any(abs(z2 - z1) != 1 for z1, z2 in zip(row, lines[r + 1])):
                return False
    return True
