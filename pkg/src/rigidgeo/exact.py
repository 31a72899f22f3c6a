"""Exact rational matrices, rank/kernel, and random "generic" sampling.

Rank decisions throughout the package ride on exact arithmetic; floats
are confined to the numerical realization solver.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

DEFAULT_COORD_BOUND = 10**6


@dataclass(frozen=True)
class RationalMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entry shape does not match declared dimensions")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RationalMatrix":
        ent = tuple(tuple(Fraction(x) for x in r) for r in rows)
        return cls(len(ent), len(ent[0]) if ent else 0, ent)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        z = Fraction(0)
        return cls(rows, cols, tuple(tuple(z for _ in range(cols)) for _ in range(rows)))

    def transpose(self) -> "RationalMatrix":
        ent = tuple(tuple(self.entries[r][c] for r in range(self.rows))
                    for c in range(self.cols))
        return RationalMatrix(self.cols, self.rows, ent)

    def matvec(self, v: Sequence[Fraction]) -> tuple[Fraction, ...]:
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum(self.entries[r][c] * v[c] for c in range(self.cols))
                     for r in range(self.rows))

    def stack(self, other: "RationalMatrix") -> "RationalMatrix":
        if other.cols != self.cols:
            raise ValueError("column count mismatch")
        return RationalMatrix(self.rows + other.rows, self.cols,
                              self.entries + other.entries)


def _integer_rows(m: RationalMatrix) -> list[list[int]]:
    """Scale each row to integers (row scaling preserves rank)."""
    out = []
    for row in m.entries:
        denom = 1
        for x in row:
            denom = denom * x.denominator // math.gcd(denom, x.denominator)
        out.append([int(x * denom) for x in row])
    return out


def rank(m: RationalMatrix) -> int:
    """Exact rank over the rationals via fraction-free (Bareiss) elimination."""
    a = _integer_rows(m)
    rows, cols = m.rows, m.cols
    r = 0
    prev = 1
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, rows):
            for j in range(c + 1, cols):
                a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) // prev
            a[i][c] = 0
        prev = a[r][c]
        r += 1
        if r == rows:
            break
    return r


def kernel_basis(m: RationalMatrix) -> list[tuple[Fraction, ...]]:
    """Basis of the right null space; len = cols - rank, each exactly in the kernel."""
    a = [list(row) for row in m.entries]
    rows, cols = m.rows, m.cols
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * cols
        v[fc] = Fraction(1)
        for pr, pc in enumerate(pivots):
            v[pc] = -a[pr][fc]
        basis.append(tuple(v))
    return basis


def left_kernel_basis(m: RationalMatrix) -> list[tuple[Fraction, ...]]:
    return kernel_basis(m.transpose())


@dataclass(frozen=True)
class Configuration:
    """n points in d-dimensional space; exact (Fraction) or numeric (float)."""

    n: int
    d: int
    coords: tuple[tuple, ...]
    exact: bool = True

    def __post_init__(self):
        if len(self.coords) != self.n or any(len(p) != self.d for p in self.coords):
            raise ValueError("coordinate shape mismatch")

    def point(self, v: int):
        """Coordinates of vertex v (1-based)."""
        return self.coords[v - 1]

    def to_float(self) -> "Configuration":
        return Configuration(self.n, self.d,
                             tuple(tuple(float(x) for x in p) for p in self.coords),
                             exact=False)

    def affine_rank(self) -> int:
        """Dimension of the affine span of the points."""
        if self.n <= 1:
            return 0
        if self.exact:
            diffs = [[Fraction(x) - Fraction(y) for x, y in zip(p, self.coords[0])]
                     for p in self.coords[1:]]
            return rank(RationalMatrix.from_rows(diffs))
        import numpy as np
        diffs = np.array([[x - y for x, y in zip(p, self.coords[0])]
                          for p in self.coords[1:]], dtype=float)
        return int(np.linalg.matrix_rank(diffs, tol=1e-9 * (1 + abs(diffs).max())))


def random_generic_configuration(n: int, d: int, seed: int,
                                 bound: int = DEFAULT_COORD_BOUND) -> Configuration:
    """Random integer coordinates in [-bound, bound] as exact rationals.

    Genericity is Monte-Carlo: each polynomial condition fails with
    probability O(deg / bound).  Deterministic for a given seed; redraws
    (deterministically) until the affine span is full.
    """
    rng = random.Random(f"rigidgeo-config:{seed}")
    while True:
        coords = tuple(tuple(Fraction(rng.randint(-bound, bound)) for _ in range(d))
                       for _ in range(n))
        config = Configuration(n, d, coords, exact=True)
        if config.affine_rank() == min(d, n - 1):
            return config


def fraction_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"
