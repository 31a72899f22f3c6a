"""Frameworks, rigidity matrices, stress machinery, and generic rigidity tests.

Generic decisions use random integer configurations with a small number of
Monte-Carlo trials; a property is accepted at the maximum observed rank.
All rank decisions are exact.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, asdict
from fractions import Fraction
from typing import Optional, Sequence

from .errors import DeficientSpan, DimensionTooSmall, NotLocallyRigid
from .exact import (Configuration, RationalMatrix, kernel_basis,
                    left_kernel_basis, random_generic_configuration, rank)
from .graphs import OrderedGraph, vertex_connectivity

TRIALS = 3
STRESS_COEFF_BOUND = 10**3


@dataclass(frozen=True)
class Framework:
    graph: OrderedGraph
    config: Configuration

    def __post_init__(self):
        if self.graph.n != self.config.n:
            raise ValueError("graph and configuration vertex counts differ")


@dataclass(frozen=True)
class MeasurementVector:
    """Squared edge lengths in graph edge order."""

    values: tuple


@dataclass(frozen=True)
class StressVector:
    """Per-edge scalars, in graph edge order."""

    values: tuple


@dataclass(frozen=True)
class StressMatrix:
    n: int
    entries: tuple[tuple[Fraction, ...], ...]

    def as_rational_matrix(self) -> RationalMatrix:
        return RationalMatrix(self.n, self.n, self.entries)


@dataclass
class RigidityReport:
    n: int
    m: int
    d: int
    seed: int
    connectivity: int
    inf_rigid: bool
    gen_loc_rigid: bool
    gen_glob_rigid: Optional[bool]
    redundant: bool
    stress_rank: Optional[int]
    shared_kernel_dim: Optional[int]
    mvar_dim: int
    gauss_fiber_dim: Optional[int]
    hendrickson_violation: bool = False

    def to_dict(self, graph: Optional[OrderedGraph] = None) -> dict:
        out = asdict(self)
        if graph is not None:
            out["graph"] = {"n": graph.n, "edges": [list(e) for e in graph.edges]}
        return out


def dof_rank(n: int, d: int) -> int:
    """Rank of the rigidity matrix of an infinitesimally rigid framework."""
    return n * d - d * (d + 1) // 2


def measure(f: Framework) -> MeasurementVector:
    """Squared length of every edge; exact when the configuration is exact."""
    p = f.config.coords
    vals = []
    for i, j in f.graph.edges:
        vals.append(sum((a - b) ** 2 for a, b in zip(p[i - 1], p[j - 1])))
    return MeasurementVector(tuple(vals))


def rigidity_matrix(f: Framework) -> RationalMatrix:
    """m x (n*d) matrix: row for edge (i,j) carries p_i - p_j in block i and
    its negation in block j; equals half the differential of `measure`."""
    n, d = f.config.n, f.config.d
    p = f.config.coords
    rows = []
    for i, j in f.graph.edges:
        row = [Fraction(0)] * (n * d)
        for k in range(d):
            diff = Fraction(p[i - 1][k]) - Fraction(p[j - 1][k])
            row[(i - 1) * d + k] = diff
            row[(j - 1) * d + k] = -diff
        rows.append(tuple(row))
    return RationalMatrix(len(rows), n * d, tuple(rows))


def is_infinitesimally_rigid(f: Framework) -> bool:
    n, d = f.config.n, f.config.d
    if n < d + 1:
        raise DimensionTooSmall(f"need n >= d+1, got n={n}, d={d}")
    return rank(rigidity_matrix(f)) == dof_rank(n, d)


def _trial_config(g: OrderedGraph, d: int, seed: int, trial: int) -> Configuration:
    return random_generic_configuration(g.n, d, seed + trial)


def is_generically_locally_rigid(g: OrderedGraph, d: int, seed: int = 0) -> bool:
    if g.n < d + 1:
        raise DimensionTooSmall(f"need n >= d+1, got n={g.n}, d={d}")
    target = dof_rank(g.n, d)
    for t in range(TRIALS):
        f = Framework(g, _trial_config(g, d, seed, t))
        if rank(rigidity_matrix(f)) == target:
            return True
    return False


def stress_basis(f: Framework) -> list[StressVector]:
    """Basis of equilibrium stresses: the left kernel of the rigidity matrix."""
    return [StressVector(v) for v in left_kernel_basis(rigidity_matrix(f))]


def stress_matrix(g: OrderedGraph, w: StressVector) -> StressMatrix:
    if len(w.values) != g.m:
        raise ValueError("stress vector length must equal edge count")
    n = g.n
    ent = [[Fraction(0)] * n for _ in range(n)]
    for k, (i, j) in enumerate(g.edges):
        om = Fraction(w.values[k])
        ent[i - 1][j - 1] = -om
        ent[j - 1][i - 1] = -om
        ent[i - 1][i - 1] += om
        ent[j - 1][j - 1] += om
    return StressMatrix(n, tuple(tuple(r) for r in ent))


def _random_stress_combination(basis: list[StressVector], rng: random.Random) -> StressVector:
    m = len(basis[0].values)
    while True:
        coeffs = [rng.randint(-STRESS_COEFF_BOUND, STRESS_COEFF_BOUND) for _ in basis]
        if any(coeffs):
            break
    vals = tuple(sum(c * w.values[k] for c, w in zip(coeffs, basis)) for k in range(m))
    return StressVector(vals)


def shared_stress_kernel_dim(f: Framework) -> int:
    """Dimension of the intersection of the kernels of all basis stress
    matrices (kernel of the stacked matrix); n when there are no stresses."""
    basis = stress_basis(f)
    n = f.graph.n
    if not basis:
        return n
    stacked = stress_matrix(f.graph, basis[0]).as_rational_matrix()
    for w in basis[1:]:
        stacked = stacked.stack(stress_matrix(f.graph, w).as_rational_matrix())
    return n - rank(stacked)


def max_stress_rank(g: OrderedGraph, d: int, seed: int = 0) -> int:
    """Max observed rank of a random stress-matrix combination over trials."""
    best = 0
    for t in range(TRIALS):
        f = Framework(g, _trial_config(g, d, seed, t))
        basis = stress_basis(f)
        if not basis:
            continue
        rng = random.Random(f"rigidgeo-stress:{seed}:{t}")
        omega = stress_matrix(g, _random_stress_combination(basis, rng))
        best = max(best, rank(omega.as_rational_matrix()))
    return best


def is_generically_globally_rigid(g: OrderedGraph, d: int, seed: int = 0) -> bool:
    """Randomized stress-rank test: true iff some trial produces a stress
    matrix of exact rank n - d - 1 (so the shared stress kernel is d+1)."""
    n = g.n
    if n < d + 2:
        raise DimensionTooSmall(f"need n >= d+2, got n={n}, d={d}")
    target = n - d - 1
    for t in range(TRIALS):
        f = Framework(g, _trial_config(g, d, seed, t))
        basis = stress_basis(f)
        if not basis:
            continue
        rng = random.Random(f"rigidgeo-stress:{seed}:{t}")
        omega = stress_matrix(g, _random_stress_combination(basis, rng))
        if rank(omega.as_rational_matrix()) == target:
            # cross-check: the shared kernel collapses to the congruence dirs
            if shared_stress_kernel_dim(f) != d + 1:
                raise AssertionError(
                    "stress rank reached n-d-1 but shared kernel is not d+1")
            return True
    return False


def is_redundantly_rigid(g: OrderedGraph, d: int, seed: int = 0) -> bool:
    if g.n < d + 1:
        raise DimensionTooSmall(f"need n >= d+1, got n={g.n}, d={d}")
    if not is_generically_locally_rigid(g, d, seed):
        return False
    return all(is_generically_locally_rigid(g.without_edge(k), d, seed)
               for k in range(g.m))


def measurement_variety_dim(g: OrderedGraph, d: int, seed: int = 0) -> int:
    """Dimension of the measurement variety: generic rigidity-matrix rank
    (max over trials)."""
    best = 0
    for t in range(TRIALS):
        f = Framework(g, _trial_config(g, d, seed, t))
        best = max(best, rank(rigidity_matrix(f)))
    return best


def _stress_kernel_config_space(f: Framework) -> Optional[RationalMatrix]:
    """Restriction matrix S (nd x kd) whose columns span the configurations
    satisfying every equilibrium stress of f; None when stresses are absent."""
    basis = stress_basis(f)
    n, d = f.graph.n, f.config.d
    if not basis:
        return None
    stacked = stress_matrix(f.graph, basis[0]).as_rational_matrix()
    for w in basis[1:]:
        stacked = stacked.stack(stress_matrix(f.graph, w).as_rational_matrix())
    kern = kernel_basis(stacked)  # k vectors in R^n
    cols = []
    for vec in kern:
        for axis in range(d):
            col = [Fraction(0)] * (n * d)
            for i in range(n):
                col[i * d + axis] = vec[i]
            cols.append(col)
    ent = tuple(tuple(cols[c][r] for c in range(len(cols))) for r in range(n * d))
    return RationalMatrix(n * d, len(cols), ent)


def _matmul(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    if a.cols != b.rows:
        raise ValueError("shape mismatch")
    bt = b.transpose().entries
    ent = tuple(tuple(sum(ra[k] * cb[k] for k in range(a.cols)) for cb in bt)
                for ra in a.entries)
    return RationalMatrix(a.rows, b.cols, ent)


def gauss_fiber_dim(g: OrderedGraph, d: int, seed: int = 0) -> int:
    """dk - d(d+1)/2 with k the shared stress kernel dimension at a generic
    configuration; cross-validated against the rank of the measurement
    differential restricted to the stress-compatible configuration space."""
    if g.n < d + 2:
        raise DimensionTooSmall(f"need n >= d+2, got n={g.n}, d={d}")
    if not is_generically_locally_rigid(g, d, seed):
        raise NotLocallyRigid("gauss_fiber_dim requires a generically locally rigid graph")
    f = Framework(g, _trial_config(g, d, seed, 0))
    k = shared_stress_kernel_dim(f)
    value = d * k - d * (d + 1) // 2
    restriction = _stress_kernel_config_space(f)
    if restriction is not None:
        restricted_rank = rank(_matmul(rigidity_matrix(f), restriction))
        if restricted_rank != value:
            raise AssertionError(
                f"restricted-differential rank {restricted_rank} != {value}")
    return value


def affine_measurement_map_rank(f: Framework) -> int:
    """Rank of Q -> (tr(Q e e^T))_edges from symmetric d x d matrices to edge
    space; the dimension of the measured image of the affine class of p."""
    d = f.config.d
    if f.config.affine_rank() < d:
        raise DeficientSpan("configuration must have full affine span")
    p = f.config.coords
    rows = []
    for i, j in f.graph.edges:
        e = [Fraction(p[i - 1][k]) - Fraction(p[j - 1][k]) for k in range(d)]
        row = []
        for a in range(d):
            for b in range(a, d):
                row.append(e[a] * e[b] if a == b else 2 * e[a] * e[b])
        rows.append(tuple(row))
    return rank(RationalMatrix(len(rows), d * (d + 1) // 2, tuple(rows)))


def hendrickson_check(g: OrderedGraph, d: int, seed: int = 0) -> RigidityReport:
    """GGR verdict together with Hendrickson's two necessary conditions."""
    if g.n < d + 2:
        raise DimensionTooSmall(f"need n >= d+2, got n={g.n}, d={d}")
    return analyze(g, d, seed)


def analyze(g: OrderedGraph, d: int, seed: int = 0) -> RigidityReport:
    """Full rigidity report for one graph in one dimension."""
    if g.n < d + 1:
        raise DimensionTooSmall(f"need n >= d+1, got n={g.n}, d={d}")
    conn = vertex_connectivity(g) if g.n >= 2 else 0
    f = Framework(g, _trial_config(g, d, seed, 0))
    inf_rigid = is_infinitesimally_rigid(f)
    glr = is_generically_locally_rigid(g, d, seed)
    mvar = measurement_variety_dim(g, d, seed)
    ggr = None
    stress_rank_val = None
    shared_dim = None
    gauss = None
    redundant = is_redundantly_rigid(g, d, seed)
    if g.n >= d + 2:
        ggr = is_generically_globally_rigid(g, d, seed)
        stress_rank_val = max_stress_rank(g, d, seed)
        shared_dim = shared_stress_kernel_dim(f)
        if glr:
            gauss = gauss_fiber_dim(g, d, seed)
    violation = bool(ggr) and (conn < d + 1 or not redundant)
    return RigidityReport(
        n=g.n, m=g.m, d=d, seed=seed,
        connectivity=conn,
        inf_rigid=inf_rigid,
        gen_loc_rigid=glr,
        gen_glob_rigid=ggr,
        redundant=redundant,
        stress_rank=stress_rank_val,
        shared_kernel_dim=shared_dim,
        mvar_dim=mvar,
        gauss_fiber_dim=gauss,
        hendrickson_violation=violation,
    )
