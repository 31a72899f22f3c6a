"""Numerical realization, Euclidean membership, and the desk-scale unlabeled
reconstruction search.

Membership tests are one-sided Monte Carlo: a convergent realization proves
membership, a failure after all restarts does not disprove it.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import least_squares

from .errors import (NonGenericInput, PreconditionFailed, ScaleExceeded,
                     ShapeMismatch)
from .exact import Configuration, random_generic_configuration
from .graphs import EdgeBijection, OrderedGraph, automorphisms, enumerate_graphs
from .rigidity import (Framework, MeasurementVector, dof_rank, measure,
                       measurement_variety_dim)

MEMBERSHIP_MAX_FACTORIAL_EDGES = 9
RECONSTRUCT_MAX_N = 7
RECONSTRUCT_MAX_M = 12
GENERICITY_SEPARATION = 1e-6


@dataclass(frozen=True)
class DistanceMultiset:
    """Unordered nonnegative squared distances, stored sorted ascending."""

    values: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(sorted(float(x) for x in self.values))
        if any(x < 0 for x in vals):
            raise ValueError("squared distances must be nonnegative")
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return len(self.values)

    def to_text(self, n: int, d: int) -> str:
        head = f"{n} {len(self.values)} {d}"
        body = " ".join(repr(x) for x in self.values)
        return head + "\n" + body + "\n"

    @classmethod
    def from_text(cls, text: str) -> tuple["DistanceMultiset", int, int]:
        """Returns (multiset, n, d)."""
        lines = text.split("\n")
        head = lines[0].split()
        if len(head) != 3:
            raise ValueError("first line must be 'n m d'")
        n, m, d = (int(x) for x in head)
        vals = [float(x) for x in " ".join(lines[1:]).split()]
        if len(vals) != m:
            raise ValueError(f"expected {m} values, got {len(vals)}")
        return cls(tuple(vals)), n, d


@dataclass
class RealizationResult:
    config: Configuration
    residual: float
    converged: bool


@dataclass
class ReconstructionResult:
    """Solution classes up to vertex relabeling and congruence."""

    solutions: list[tuple[OrderedGraph, Configuration]]
    stats: dict = field(default_factory=dict)


# -- gauge-reduced parameterization for the damped least-squares solver ------


def _free_layout(n: int, d: int) -> list[tuple[int, int]]:
    """(vertex, coord) pairs that remain free after pinning vertex 1 at the
    origin and successive vertices to successive coordinate subspaces."""
    layout = []
    for v in range(n):
        for c in range(min(v, d)):
            layout.append((v, c))
    return layout


def _unpack(x: np.ndarray, layout, n: int, d: int) -> np.ndarray:
    pts = np.zeros((n, d))
    for val, (v, c) in zip(x, layout):
        pts[v, c] = val
    return pts


def realize(g: OrderedGraph, target: MeasurementVector | Sequence[float], d: int,
            restarts: int = 32, seed: int = 0) -> RealizationResult:
    """Damped least-squares inversion of the squared-length map from random
    starts.  Convergence means residual < 1e-16 * (1 + max target)^2."""
    targets = np.asarray(
        target.values if isinstance(target, MeasurementVector) else target,
        dtype=float)
    if len(targets) != g.m:
        raise ShapeMismatch("target length must equal edge count")
    if np.any(targets < 0):
        raise ValueError("squared-distance targets must be nonnegative")
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    n = g.n
    layout = _free_layout(n, d)
    nparams = len(layout)
    ei = np.array([i - 1 for i, _ in g.edges], dtype=int)
    ej = np.array([j - 1 for _, j in g.edges], dtype=int)
    conv_tol = 1e-16 * (1.0 + (targets.max() if g.m else 0.0)) ** 2
    coord_scale = math.sqrt(max(targets.max(), 1e-12)) if g.m else 1.0

    def residuals(x):
        pts = _unpack(x, layout, n, d)
        diff = pts[ei] - pts[ej]
        return (diff * diff).sum(axis=1) - targets

    def jacobian(x):
        pts = _unpack(x, layout, n, d)
        diff = pts[ei] - pts[ej]
        J = np.zeros((g.m, nparams))
        for col, (v, c) in enumerate(layout):
            sel_i = ei == v
            sel_j = ej == v
            J[sel_i, col] = 2 * diff[sel_i, c]
            J[sel_j, col] = -2 * diff[sel_j, c]
        return J

    rng = np.random.default_rng([seed & 0x7FFFFFFF, 0x5EED])
    best_x = np.zeros(nparams)
    best_res = float(np.sum(residuals(best_x) ** 2)) if g.m else 0.0
    if nparams and g.m:
        method = "lm" if g.m >= nparams else "trf"
        for _ in range(restarts):
            x0 = rng.normal(0.0, coord_scale, nparams)
            try:
                sol = least_squares(residuals, x0, jac=jacobian, method=method,
                                    xtol=1e-15, ftol=1e-15, gtol=1e-15,
                                    max_nfev=400)
            except Exception:
                continue
            res = float(np.sum(residuals(sol.x) ** 2))
            if res < best_res:
                best_res = res
                best_x = sol.x
            if best_res < conv_tol:
                break
    pts = _unpack(best_x, layout, n, d)
    config = Configuration(n, d, tuple(tuple(float(v) for v in p) for p in pts),
                           exact=False)
    return RealizationResult(config, best_res, best_res < conv_tol)


def is_member(g: OrderedGraph, target: MeasurementVector | Sequence[float], d: int,
              restarts: int = 32, seed: int = 0) -> bool:
    """One-sided Euclidean measurement-set membership (false negatives
    possible; forests accept any nonnegative targets)."""
    return realize(g, target, d, restarts, seed).converged


def congruent(p: Configuration, q: Configuration, tol: float = 1e-8) -> bool:
    """True iff all pairwise squared distances agree within relative tol."""
    if p.n != q.n or p.d != q.d:
        raise ShapeMismatch("configurations must share n and d")
    a = np.array([[float(x) for x in pt] for pt in p.coords])
    b = np.array([[float(x) for x in pt] for pt in q.coords])

    def pdists(pts):
        diff = pts[:, None, :] - pts[None, :, :]
        return (diff * diff).sum(axis=2)

    da, db = pdists(a), pdists(b)
    scale = max(da.max(initial=0.0), db.max(initial=0.0), 1e-300)
    return bool(np.all(np.abs(da - db) <= tol * scale))


# -- sampled measurement-variety comparison ----------------------------------


def same_measurement_variety_sampled(g: OrderedGraph, h: OrderedGraph, d: int,
                                     trials: int = 3, seed: int = 0,
                                     bijection: Optional[EdgeBijection] = None,
                                     restarts: int = 32) -> bool:
    """Sampled mutual membership of generic measurements.

    With a candidate edge bijection, each sampled measurement of one graph is
    tested for Euclidean membership in the other under that bijection.
    Without one, all m! orderings are tried (m <= 9 only).
    """
    if g.m != h.m:
        raise ShapeMismatch("edge counts must be equal")
    if bijection is None and g.m > MEMBERSHIP_MAX_FACTORIAL_EDGES:
        raise ScaleExceeded(
            f"m > {MEMBERSHIP_MAX_FACTORIAL_EDGES} needs a candidate bijection")
    if measurement_variety_dim(g, d, seed) != measurement_variety_dim(h, d, seed):
        return False

    def cross(src, dst, mapping, salt):
        for t in range(trials):
            config = random_generic_configuration(src.n, d, seed + salt + t).to_float()
            v = measure(Framework(src, config)).values
            if mapping is not None:
                targets = [0.0] * len(v)
                for k, val in enumerate(v):
                    targets[mapping[k]] = val
                if not is_member(dst, targets, d, restarts, seed + salt + t):
                    return False
            else:
                if not any(is_member(dst, perm, d, restarts, seed + salt + t)
                           for perm in itertools.permutations(v)):
                    return False
        return True

    fwd = bijection.map if bijection is not None else None
    rev = bijection.inverse().map if bijection is not None else None
    return cross(g, h, fwd, 101) and cross(h, g, rev, 307)


def not_rr_pair(g: OrderedGraph, e: int, eprime: tuple[int, int], d: int,
                seed: int = 0) -> tuple[OrderedGraph, OrderedGraph]:
    """(g, g'') where g'' replaces edge index e with the non-edge eprime.

    Requires g - e generically flexible and eprime's length to vary along the
    flex (checked by exact generic ranks); then both graphs have the same
    measurement variety.
    """
    if not (0 <= e < g.m):
        raise ValueError("edge index out of range")
    ep = (min(eprime), max(eprime))
    if ep in set(g.edges):
        raise ValueError("replacement pair is already an edge")
    g_minus = g.without_edge(e)
    r_minus = measurement_variety_dim(g_minus, d, seed)
    if r_minus >= dof_rank(g.n, d):
        raise PreconditionFailed("g minus the chosen edge is not generically flexible")
    r_plus = measurement_variety_dim(g_minus.with_edge(ep), d, seed)
    if r_plus <= r_minus:
        raise PreconditionFailed("the flex does not change the replacement pair's length")
    edges = list(g.edges)
    edges[e] = ep
    return g, OrderedGraph(g.n, tuple(edges))


# -- incremental-placement reconstruction ------------------------------------


@dataclass
class ReconstructOptions:
    restarts: int = 32
    seed: int = 0
    tol: float = 1e-8
    flex_samples: int = 3
    dedup_tol: float = 1e-6
    max_solutions: int = 64
    max_time: Optional[float] = None
    jobs: int = 1


def _placement_order(g: OrderedGraph) -> tuple[list[int], list[list[tuple[int, int]]]]:
    """Greedy order maximizing back-degree; returns (order, back edges per
    level as (edge index, earlier endpoint) lists)."""
    adj = g.adjacency()
    degs = {v: len(adj[v]) for v in range(1, g.n + 1)}
    order = []
    placed = set()
    while len(order) < g.n:
        best = max((v for v in range(1, g.n + 1) if v not in placed),
                   key=lambda v: (len(adj[v] & placed), degs[v], -v))
        order.append(best)
        placed.add(best)
    idx = g.edge_index()
    pos_in_order = {v: i for i, v in enumerate(order)}
    backs: list[list[tuple[int, int]]] = []
    for i, v in enumerate(order):
        lst = [(idx[(min(v, w), max(v, w))], w)
               for w in sorted(adj[v]) if pos_in_order[w] < i]
        backs.append(lst)
    return order, backs


def _solve_linear(A: list[list[float]], b: list[float], eps: float):
    """Solve A x = b for tiny systems; returns (particular, orthonormal null
    basis) or None when inconsistent."""
    rows = [row[:] + [rhs] for row, rhs in zip(A, b)]
    ncols = len(A[0]) if A else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv, pval = None, eps
        for i in range(r, len(rows)):
            if abs(rows[i][c]) > pval:
                piv, pval = i, abs(rows[i][c])
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        f = rows[r][c]
        rows[r] = [x / f for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0.0:
                f2 = rows[i][c]
                rows[i] = [x - f2 * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    for i in range(r, len(rows)):
        if abs(rows[i][ncols]) > eps:
            return None
    x = [0.0] * ncols
    for pr, pc in enumerate(pivots):
        x[pc] = rows[pr][ncols]
    null = []
    for fc in range(ncols):
        if fc in pivots:
            continue
        v = [0.0] * ncols
        v[fc] = 1.0
        for pr, pc in enumerate(pivots):
            v[pc] = -rows[pr][fc]
        null.append(v)
    # orthonormalize
    ortho = []
    for v in null:
        for u in ortho:
            dp = sum(a * b2 for a, b2 in zip(v, u))
            v = [a - dp * b2 for a, b2 in zip(v, u)]
        nrm = math.sqrt(sum(a * a for a in v))
        if nrm > 1e-12:
            ortho.append([a / nrm for a in v])
    return x, ortho


def _refine(x: list[float], pts: list[list[float]], ts: list[float],
            a: int, steps: int = 3):
    """A few Gauss-Newton steps on |x - q_j|^2 = t_j within R^a."""
    for _ in range(steps):
        res = []
        J = []
        for q, t in zip(pts, ts):
            diff = [x[c] - q[c] for c in range(a)]
            res.append(sum(v * v for v in diff) - t)
            J.append([2 * v for v in diff])
        if max(abs(r) for r in res) < 1e-15:
            break
        sol = _solve_linear(J, [-r for r in res], 1e-12)
        if sol is None:
            break
        dx, _ = sol
        x = [x[c] + dx[c] for c in range(a)]
    return x


def _candidate_positions(nbr_pts: list[list[float]], ts: list[float], u: int,
                         d: int, rng: random.Random, flex_samples: int,
                         tol: float, scale: float) -> list[list[float]]:
    """Positions in R^d (zeros beyond the active subspace) matching the given
    squared distances to the placed neighbors, within tol*scale."""
    a = min(u + 1, d)
    tau = tol * (1.0 + scale)
    k = len(ts)
    coord_scale = math.sqrt(max(scale, 1e-12))
    if k == 0:
        out = []
        for _ in range(max(1, flex_samples)):
            x = [rng.gauss(0.0, coord_scale) for _ in range(a)]
            out.append(x + [0.0] * (d - a))
        return out

    # pairwise range prefilter (valid in any dimension >= 1 as a necessary
    # condition in the active subspace's closure)
    roots = [math.sqrt(max(t, 0.0)) for t in ts]
    for i in range(k):
        for j in range(i + 1, k):
            D = sum((nbr_pts[i][c] - nbr_pts[j][c]) ** 2 for c in range(a))
            lo = (roots[i] - roots[j]) ** 2
            hi = (roots[i] + roots[j]) ** 2
            if D < lo - tau or D > hi + tau:
                return []

    q0 = nbr_pts[0][:a]
    t0 = ts[0]
    A, b = [], []
    n0 = sum(v * v for v in q0)
    for j in range(1, k):
        qj = nbr_pts[j][:a]
        A.append([2 * (qj[c] - q0[c]) for c in range(a)])
        b.append(sum(v * v for v in qj) - n0 - (ts[j] - t0))
    if A:
        sol = _solve_linear(A, b, 1e-9 * (1.0 + coord_scale))
        if sol is None:
            return []
        xp, null = sol
    else:
        xp, null = [0.0] * a, [[1.0 if c == i else 0.0 for c in range(a)]
                               for i in range(a)]

    w = [xp[c] - q0[c] for c in range(a)]
    cs = [sum(nv[c] * w[c] for c in range(a)) for nv in null]
    wperp2 = sum(v * v for v in w) - sum(cv * cv for cv in cs)
    rho2 = t0 - wperp2
    r = len(null)
    raw: list[list[float]] = []
    if r == 0:
        if abs(sum(v * v for v in w) - t0) <= tau:
            raw.append(xp[:])
    elif rho2 < -tau:
        return []
    else:
        rho = math.sqrt(max(rho2, 0.0))
        if r == 1:
            zs = [-cs[0] + rho] if rho < 1e-12 else [-cs[0] + rho, -cs[0] - rho]
            for z in zs:
                raw.append([xp[c] + z * null[0][c] for c in range(a)])
        else:
            for _ in range(max(1, flex_samples)):
                dirv = [rng.gauss(0.0, 1.0) for _ in range(r)]
                nrm = math.sqrt(sum(v * v for v in dirv)) or 1.0
                zs = [-cs[i] + rho * dirv[i] / nrm for i in range(r)]
                raw.append([xp[c] + sum(zs[i] * null[i][c] for i in range(r))
                            for c in range(a)])

    out = []
    for x in raw:
        x = _refine(x, [q[:a] for q in nbr_pts], ts, a)
        ok = all(abs(sum((x[c] - q[c]) ** 2 for c in range(a)) - t) <= tau
                 for q, t in zip(nbr_pts, ts))
        if not ok:
            continue
        if a == u + 1 and a <= d and x[a - 1] < 0:
            x[a - 1] = -x[a - 1]  # mirror gauge through the current span
        full = x + [0.0] * (d - a)
        if not any(max(abs(fx - fy) for fx, fy in zip(full, y)) < 1e-12 * (1 + coord_scale)
                   for y in out):
            out.append(full)
    return out


def _search_graph(h: OrderedGraph, values: list[float], d: int,
                  opts: ReconstructOptions, deadline: Optional[float],
                  stats: dict) -> list[Configuration]:
    """Realizable value-to-edge assignments of `values` on h, deduplicated on
    the fly up to automorphism + congruence; flex freedoms are sampled."""
    order, backs = _placement_order(h)
    m = len(values)
    n = h.n
    autos = automorphisms(h)
    rng = random.Random(f"rigidgeo-reconstruct:{opts.seed}:{h.edges}")
    used = [False] * m
    positions: dict[int, list[float]] = {}
    assignment: dict[int, int] = {}  # edge index -> value index
    found: list[Configuration] = []
    span_used = [0]

    def record(config: Configuration):
        for other in found:
            for sigma in autos:
                permuted = [None] * n
                for v in range(1, n + 1):
                    permuted[sigma(v) - 1] = config.coords[v - 1]
                relabeled = Configuration(n, d, tuple(permuted), exact=False)
                if congruent(relabeled, other, opts.dedup_tol):
                    return
        found.append(config)

    def recurse(level: int):
        if deadline is not None and time.monotonic() > deadline:
            stats["timed_out"] = True
            return
        if len(found) >= opts.max_solutions:
            stats["truncated"] = True
            return
        if level == n:
            coords = tuple(tuple(positions[v]) for v in range(1, n + 1))
            record(Configuration(n, d, coords, exact=False))
            return
        v = order[level]
        back = backs[level]
        k = len(back)
        avail = [i for i in range(m) if not used[i]]
        u = span_used[0]
        if level == 0:
            _descend(level, v, back, (), [0.0] * d)  # translation gauge
            return
        if k == 0:
            # new connected component: relative placement is a flex
            for pos in _candidate_positions([], [], u, d, rng,
                                            opts.flex_samples, opts.tol, 1.0):
                _descend(level, v, back, (), pos)
            return
        nbr_pts = [positions[w] for _, w in back]
        for combo in itertools.permutations(avail, k):
            ts = [values[i] for i in combo]
            stats["placements"] += 1
            cands = _candidate_positions(nbr_pts, ts, u, d, rng,
                                         opts.flex_samples, opts.tol, 1.0)
            if not cands:
                stats["pruned"] += 1
                continue
            for pos in cands:
                _descend(level, v, back, combo, pos)

    def _descend(level, v, back, combo, pos):
        prev_u = span_used[0]
        positions[v] = pos
        new_axis = min(prev_u + 1, d) - 1
        if prev_u < d and abs(pos[new_axis]) > 1e-9:
            span_used[0] = prev_u + 1
        for (eidx, _), vi in zip(back, combo):
            assignment[eidx] = vi
            used[vi] = True
        recurse(level + 1)
        for (eidx, _), vi in zip(back, combo):
            del assignment[eidx]
            used[vi] = False
        del positions[v]
        span_used[0] = prev_u

    recurse(0)
    return found


def reconstruct(v: DistanceMultiset, n: int, d: int,
                opts: Optional[ReconstructOptions] = None) -> ReconstructionResult:
    """Brute-force unlabeled reconstruction: enumerate graph isomorphism
    classes and backtrack over value-to-edge assignments with incremental
    vertex placement.  Returns all solution classes up to relabeling and
    congruence."""
    opts = opts or ReconstructOptions()
    m = len(v)
    if n > RECONSTRUCT_MAX_N or m > RECONSTRUCT_MAX_M:
        raise ScaleExceeded(
            f"reconstruct supports n <= {RECONSTRUCT_MAX_N}, m <= {RECONSTRUCT_MAX_M}")
    vals = list(v.values)
    scale = max(vals) if vals else 1.0
    if scale <= 0:
        raise NonGenericInput("all distances are zero")
    for a, b in zip(vals, vals[1:]):
        if b - a <= GENERICITY_SEPARATION * scale:
            raise NonGenericInput("distance values collide (genericity proxy fails)")
    norm = [x / scale for x in vals]
    root = math.sqrt(scale)

    stats = {"graphs_tried": 0, "placements": 0, "pruned": 0,
             "solutions_found": 0, "truncated": False, "timed_out": False}
    solutions: list[tuple[OrderedGraph, Configuration]] = []
    graphs = enumerate_graphs(n, m, no_isolated=True)
    if opts.jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=opts.jobs) as pool:
            results = list(pool.map(_search_one,
                                    [(h, norm, d, opts) for h in graphs]))
    else:
        deadline = (time.monotonic() + opts.max_time) if opts.max_time else None
        results = [_search_one((h, norm, d, opts), deadline) for h in graphs]
    for h, configs, sub in results:
        stats["graphs_tried"] += 1
        for key in ("placements", "pruned"):
            stats[key] += sub[key]
        for key in ("truncated", "timed_out"):
            stats[key] = stats[key] or sub[key]
        for config in configs:
            rescaled = Configuration(
                n, d, tuple(tuple(root * x for x in p) for p in config.coords),
                exact=False)
            solutions.append((h, rescaled))
    stats["solutions_found"] = len(solutions)
    return ReconstructionResult(solutions, stats)


def _search_one(args, deadline=None):
    """Per-graph search worker (usable from a process pool)."""
    h, norm, d, opts = args
    if deadline is None and opts.max_time:
        deadline = time.monotonic() + opts.max_time
    sub = {"placements": 0, "pruned": 0, "truncated": False, "timed_out": False}
    return h, _search_graph(h, norm, d, opts, deadline, sub), sub


def certify(v: DistanceMultiset, n: int, d: int, h: OrderedGraph,
            q: Configuration, seed: int = 0, tol: float = 1e-6) -> bool:
    """Certificate of well-posedness: h is generically globally rigid and the
    multiset of squared lengths of (h, q) matches v within relative tol."""
    from .rigidity import is_generically_globally_rigid

    if h.n != n or q.n != n or q.d != d:
        raise ShapeMismatch("graph/configuration shape does not match the instance")
    if h.m != len(v):
        raise ShapeMismatch("edge count does not match the multiset size")
    if not is_generically_globally_rigid(h, d, seed):
        return False
    measured = sorted(float(x) for x in measure(Framework(h, q)).values)
    scale = max(max(v.values, default=0.0), max(measured, default=0.0), 1e-300)
    return all(abs(a - b) <= tol * scale for a, b in zip(measured, v.values))
