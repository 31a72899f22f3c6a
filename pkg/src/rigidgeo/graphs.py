"""Ordered graphs, connectivity, circuits, and matroid-level isomorphism tools.

Vertices are labeled 1..n.  Edge order is significant only as an index
labeling; every isomorphism notion here ignores it.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import CapExceeded, NotA2Separation, ScaleExceeded

DEFAULT_CIRCUIT_CAP = 10**5
ENUMERATION_MAX_N = 8


@dataclass(frozen=True)
class OrderedGraph:
    """A graph with labeled vertices 1..n and an ordered edge list."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        norm = []
        seen = set()
        for e in self.edges:
            i, j = e
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise ValueError(f"edge {e} out of range 1..{self.n}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
            norm.append(key)
        object.__setattr__(self, "edges", tuple(norm))

    @property
    def m(self) -> int:
        return len(self.edges)

    def adjacency(self) -> list[set[int]]:
        adj = [set() for _ in range(self.n + 1)]
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def has_isolated_vertices(self) -> bool:
        touched = {v for e in self.edges for v in e}
        return len(touched) < self.n

    def edge_index(self) -> dict[tuple[int, int], int]:
        return {e: k for k, e in enumerate(self.edges)}

    def without_edge(self, k: int) -> "OrderedGraph":
        return OrderedGraph(self.n, self.edges[:k] + self.edges[k + 1:])

    def with_edge(self, e: tuple[int, int]) -> "OrderedGraph":
        return OrderedGraph(self.n, self.edges + ((min(e), max(e)),))

    # -- text / JSON formats -------------------------------------------------

    def to_text(self) -> str:
        lines = [f"{self.n} {self.m}"]
        lines += [f"{i} {j}" for i, j in self.edges]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "OrderedGraph":
        tokens = text.split()
        if len(tokens) < 2:
            raise ValueError("graph text must start with 'n m'")
        n, m = int(tokens[0]), int(tokens[1])
        body = tokens[2:]
        if len(body) != 2 * m:
            raise ValueError(f"expected {2 * m} endpoint tokens, got {len(body)}")
        edges = tuple((int(body[2 * k]), int(body[2 * k + 1])) for k in range(m))
        return cls(n, edges)

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "edges": [list(e) for e in self.edges]})

    @classmethod
    def from_json(cls, text: str) -> "OrderedGraph":
        obj = json.loads(text)
        return cls(int(obj["n"]), tuple((int(i), int(j)) for i, j in obj["edges"]))


@dataclass(frozen=True)
class VertexMap:
    """A permutation of 1..n, stored as a tuple with perm[i-1] = image of i."""

    perm: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.perm) != list(range(1, len(self.perm) + 1)):
            raise ValueError("not a permutation of 1..n")

    def __call__(self, v: int) -> int:
        return self.perm[v - 1]

    def apply(self, g: OrderedGraph) -> OrderedGraph:
        return OrderedGraph(g.n, tuple((self(i), self(j)) for i, j in g.edges))


@dataclass(frozen=True)
class EdgeBijection:
    """Maps edge index k of `source` to edge index map[k] of `target`."""

    source: OrderedGraph
    target: OrderedGraph
    map: tuple[int, ...]

    def __post_init__(self):
        if self.source.m != self.target.m:
            raise ValueError("edge counts differ")
        if sorted(self.map) != list(range(self.source.m)):
            raise ValueError("map is not a bijection on edge indices")

    def inverse(self) -> "EdgeBijection":
        inv = [0] * len(self.map)
        for k, v in enumerate(self.map):
            inv[v] = k
        return EdgeBijection(self.target, self.source, tuple(inv))

    @classmethod
    def identity(cls, source: OrderedGraph, target: OrderedGraph) -> "EdgeBijection":
        return cls(source, target, tuple(range(source.m)))

    @classmethod
    def from_vertex_map(cls, g: OrderedGraph, vm: VertexMap,
                        target: OrderedGraph) -> "EdgeBijection":
        """Edge bijection induced by a vertex map from g onto target."""
        idx = target.edge_index()
        mapping = []
        for i, j in g.edges:
            key = (min(vm(i), vm(j)), max(vm(i), vm(j)))
            if key not in idx:
                raise ValueError(f"image edge {key} missing from target")
            mapping.append(idx[key])
        return cls(g, target, tuple(mapping))


# -- connectivity ------------------------------------------------------------


def _connected(n: int, adj: list[set[int]], removed: frozenset[int] = frozenset()) -> bool:
    alive = [v for v in range(1, n + 1) if v not in removed]
    if not alive:
        return True
    stack = [alive[0]]
    seen = {alive[0]}
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in removed and w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(alive)


def is_connected(g: OrderedGraph) -> bool:
    return _connected(g.n, g.adjacency())


def _max_vertex_disjoint_paths(g: OrderedGraph, s: int, t: int) -> int:
    """Menger: max internally vertex-disjoint s-t paths, via unit max-flow.

    Vertex splitting: node v becomes v_in -> v_out with capacity 1
    (capacity inf for s and t).  Edges get capacity 1 each way.
    """
    n = g.n
    INF = n + 10
    # node ids: v_in = 2v, v_out = 2v+1
    cap: dict[tuple[int, int], int] = {}

    def add(u, v, c):
        cap[(u, v)] = cap.get((u, v), 0) + c
        cap.setdefault((v, u), 0)

    for v in range(1, n + 1):
        add(2 * v, 2 * v + 1, INF if v in (s, t) else 1)
    for i, j in g.edges:
        add(2 * i + 1, 2 * j, 1)
        add(2 * j + 1, 2 * i, 1)

    adj: dict[int, list[int]] = {}
    for (u, v) in cap:
        adj.setdefault(u, []).append(v)

    source, sink = 2 * s + 1, 2 * t
    flow = 0
    while True:
        # BFS augmenting path on residual capacities
        prev = {source: None}
        queue = [source]
        while queue and sink not in prev:
            u = queue.pop(0)
            for v in adj.get(u, ()):
                if v not in prev and cap[(u, v)] > 0:
                    prev[v] = u
                    queue.append(v)
        if sink not in prev:
            return flow
        v = sink
        while prev[v] is not None:
            u = prev[v]
            cap[(u, v)] -= 1
            cap[(v, u)] += 1
            v = u
        flow += 1


def vertex_connectivity(g: OrderedGraph) -> int:
    """Minimum number of vertex deletions that disconnect g (or reduce it
    to a single vertex).  Complete graphs return n - 1."""
    if g.n < 2:
        raise ValueError("need at least 2 vertices")
    if not is_connected(g):
        return 0
    adj = g.adjacency()
    nonadj_pairs = [(s, t) for s in range(1, g.n + 1) for t in range(s + 1, g.n + 1)
                    if t not in adj[s]]
    if not nonadj_pairs:
        return g.n - 1
    return min(_max_vertex_disjoint_paths(g, s, t) for s, t in nonadj_pairs)


# -- simple constructions ----------------------------------------------------


def cone(g: OrderedGraph) -> OrderedGraph:
    """Add vertex n+1 joined to every original vertex."""
    apex = g.n + 1
    new_edges = tuple((v, apex) for v in range(1, g.n + 1))
    return OrderedGraph(apex, g.edges + new_edges)


# -- forests and circuits ----------------------------------------------------


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n + 1))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


def is_forest(g: OrderedGraph, subset: Iterable[int]) -> bool:
    """True iff the edge subset (by index) is acyclic."""
    uf = _UnionFind(g.n)
    for k in subset:
        i, j = g.edges[k]
        if not uf.union(i, j):
            return False
    return True


def enumerate_circuits(g: OrderedGraph, cap: int = DEFAULT_CIRCUIT_CAP) -> list[frozenset[int]]:
    """All edge-index sets supporting a simple cycle, up to `cap` many.

    Each cycle is found once by requiring its smallest vertex to start the
    DFS path and its two neighbors on the cycle to be traversed in a fixed
    orientation.
    """
    adj = g.adjacency()
    idx = g.edge_index()
    circuits: list[frozenset[int]] = []

    def key(i, j):
        return idx[(min(i, j), max(i, j))]

    for s in range(1, g.n + 1):
        # path stack of vertices, all > s except the start
        def dfs(path, on_path):
            v = path[-1]
            for w in sorted(adj[v]):
                if w == s and len(path) >= 3:
                    if path[1] < path[-1]:  # fix orientation
                        cyc = frozenset(
                            [key(s, path[1]), key(path[-1], s)]
                            + [key(path[t], path[t + 1]) for t in range(1, len(path) - 1)]
                        )
                        circuits.append(cyc)
                        if len(circuits) > cap:
                            raise CapExceeded(f"more than {cap} circuits")
                elif w > s and w not in on_path:
                    on_path.add(w)
                    path.append(w)
                    dfs(path, on_path)
                    path.pop()
                    on_path.remove(w)

        dfs([s], {s})
    return circuits


def is_cycle_isomorphism(b: EdgeBijection, cap: int = DEFAULT_CIRCUIT_CAP) -> bool:
    """True iff b maps circuits onto circuits in both directions."""
    src = {frozenset(b.map[k] for k in c) for c in enumerate_circuits(b.source, cap)}
    tgt = {frozenset(c) for c in enumerate_circuits(b.target, cap)}
    return src == tgt


def vertex_map_from_edge_bijection(b: EdgeBijection) -> Optional[VertexMap]:
    """Recover the vertex relabeling inducing b, if one exists.

    Vertex identities are reconstructed from shared-endpoint patterns of
    edge stars, then every edge is checked for consistency.  When several
    maps would do (graph automorphisms), the lexicographically least
    resolution of any free choice is returned.
    """
    g, h = b.source, b.target
    if g.has_isolated_vertices() or h.has_isolated_vertices():
        raise ValueError("graphs must have no isolated vertices")
    if g.n != h.n:
        return None

    stars: dict[int, list[int]] = {}
    for k, (i, j) in enumerate(g.edges):
        stars.setdefault(i, []).append(k)
        stars.setdefault(j, []).append(k)

    phi: dict[int, int] = {}
    deferred = []
    for v, star in stars.items():
        if len(star) == 1:
            deferred.append(v)
            continue
        common = set(h.edges[b.map[star[0]]])
        for k in star[1:]:
            common &= set(h.edges[b.map[k]])
        if len(common) != 1:
            return None
        phi[v] = common.pop()

    for v in deferred:
        if v in phi:
            continue
        k = stars[v][0]
        i, j = g.edges[k]
        u = j if v == i else i
        a, bb = h.edges[b.map[k]]
        if u in phi:
            if phi[u] == a:
                phi[v] = bb
            elif phi[u] == bb:
                phi[v] = a
            else:
                return None
        else:
            # isolated-edge component: both endpoints free; pick least
            phi[min(u, v)] = min(a, bb)
            phi[max(u, v)] = max(a, bb)

    if len(phi) != g.n or sorted(phi.values()) != list(range(1, g.n + 1)):
        return None
    for k, (i, j) in enumerate(g.edges):
        if {phi[i], phi[j]} != set(h.edges[b.map[k]]):
            return None
    return VertexMap(tuple(phi[v] for v in range(1, g.n + 1)))


# -- Whitney reversal --------------------------------------------------------


def whitney_reversal(g: OrderedGraph, separator: tuple[int, int],
                     side: frozenset[int] | set[int]) -> OrderedGraph:
    """Reattach `side` with the two separator vertices swapped.

    Produces a 2-isomorphic (matroid-identical) graph; edge order is kept,
    so the identity edge bijection is a cycle isomorphism between input and
    output.
    """
    a, b = separator
    side = frozenset(side)
    if a == b or not (1 <= a <= g.n and 1 <= b <= g.n):
        raise NotA2Separation("separator must be two distinct vertices")
    if a in side or b in side:
        raise NotA2Separation("side must not contain the separator")
    adj = g.adjacency()
    removed = frozenset({a, b})
    if _connected(g.n, adj, removed):
        raise NotA2Separation("separator is not a cut pair")
    # components of g - {a, b}
    comp_of = {}
    for v in range(1, g.n + 1):
        if v in removed or v in comp_of:
            continue
        stack, comp = [v], {v}
        while stack:
            x = stack.pop()
            for w in adj[x]:
                if w not in removed and w not in comp:
                    comp.add(w)
                    stack.append(w)
        for w in comp:
            comp_of[w] = v
    side_comps = {comp_of[v] for v in side}
    full_side = {v for v in comp_of if comp_of[v] in side_comps}
    if full_side != set(side) or not side:
        raise NotA2Separation("side is not a union of components")
    if full_side == set(comp_of):
        raise NotA2Separation("side must leave the other side nonempty")

    swap = {a: b, b: a}
    new_edges = []
    for i, j in g.edges:
        if i in side or j in side:
            i = swap.get(i, i)
            j = swap.get(j, j)
        new_edges.append((min(i, j), max(i, j)))
    return OrderedGraph(g.n, tuple(new_edges))


# -- canonical forms and enumeration ----------------------------------------


def _adjacency_masks(g: OrderedGraph) -> list[int]:
    masks = [0] * (g.n + 1)
    for i, j in g.edges:
        masks[i] |= 1 << j
        masks[j] |= 1 << i
    return masks


def canonical_form(g: OrderedGraph) -> tuple[tuple[int, int], ...]:
    """Canonically relabeled, sorted edge tuple: equal iff isomorphic.

    Minimum adjacency encoding over all vertex permutations, found with a
    branch-and-bound search (fine for n <= 8).
    """
    n = g.n
    masks = _adjacency_masks(g)
    best: list[Optional[tuple]] = [None]

    def encode_row(v, placed):
        # bits: adjacency of v against already-placed vertices, in order
        return tuple(1 if (masks[v] >> u) & 1 else 0 for u in placed)

    def search(placed, rows):
        level = len(placed)
        if best[0] is not None and rows > best[0][:len(rows)]:
            return
        if level == n:
            if best[0] is None or rows < best[0]:
                best[0] = rows
            return
        for v in range(1, n + 1):
            if v in placed:
                continue
            search(placed + [v], rows + encode_row(v, placed))

    search([], ())
    rows = best[0]
    # decode rows back into an edge set on canonical labels
    edges = []
    pos = 0
    for level in range(n):
        for u in range(level):
            if rows[pos]:
                edges.append((u + 1, level + 1))
            pos += 1
    return tuple(sorted(edges))


def canonical_graph(g: OrderedGraph) -> OrderedGraph:
    return OrderedGraph(g.n, canonical_form(g))


def are_isomorphic(g: OrderedGraph, h: OrderedGraph) -> bool:
    return g.n == h.n and canonical_form(g) == canonical_form(h)


def automorphisms(g: OrderedGraph) -> list[VertexMap]:
    """All vertex permutations preserving the edge set (n <= 8)."""
    if g.n > ENUMERATION_MAX_N:
        raise ScaleExceeded(f"automorphism enumeration capped at n={ENUMERATION_MAX_N}")
    eset = {frozenset(e) for e in g.edges}
    degs = [g.degree(v) for v in range(1, g.n + 1)]
    out = []
    for perm in itertools.permutations(range(1, g.n + 1)):
        if any(degs[perm[v - 1] - 1] != degs[v - 1] for v in range(1, g.n + 1)):
            continue
        if {frozenset((perm[i - 1], perm[j - 1])) for i, j in g.edges} == eset:
            out.append(VertexMap(perm))
    return out


def enumerate_graphs(n: int, m: int, no_isolated: bool = False) -> list[OrderedGraph]:
    """One representative per isomorphism class of (n, m)-graphs."""
    if n > ENUMERATION_MAX_N:
        raise ScaleExceeded(f"graph enumeration capped at n={ENUMERATION_MAX_N}")
    if m > n * (n - 1) // 2:
        raise ValueError("more edges than vertex pairs")
    all_pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    seen = set()
    reps = []
    for combo in itertools.combinations(all_pairs, m):
        g = OrderedGraph(n, combo)
        if no_isolated and g.has_isolated_vertices():
            continue
        form = canonical_form(g)
        if form not in seen:
            seen.add(form)
            reps.append(OrderedGraph(n, form))
    return reps


def random_graph(n: int, m: int, seed: int, no_isolated: bool = False) -> OrderedGraph:
    """Uniform random m-edge graph on n labeled vertices (seeded)."""
    rng = random.Random(seed)
    all_pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    while True:
        g = OrderedGraph(n, tuple(rng.sample(all_pairs, m)))
        if not no_isolated or not g.has_isolated_vertices():
            return g
