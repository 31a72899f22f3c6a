"""Built-in named graphs used by the CLI and the verification experiments."""

from __future__ import annotations

from .graphs import OrderedGraph


def complete(n: int) -> OrderedGraph:
    return OrderedGraph(n, tuple((i, j) for i in range(1, n + 1)
                                 for j in range(i + 1, n + 1)))


def cycle(n: int) -> OrderedGraph:
    edges = [(i, i + 1) for i in range(1, n)] + [(1, n)]
    return OrderedGraph(n, tuple(edges))


def path(n: int) -> OrderedGraph:
    return OrderedGraph(n, tuple((i, i + 1) for i in range(1, n)))


def star(leaves: int) -> OrderedGraph:
    return OrderedGraph(leaves + 1, tuple((1, k + 1) for k in range(1, leaves + 1)))


def complete_bipartite(a: int, b: int) -> OrderedGraph:
    return OrderedGraph(a + b, tuple((i, a + j) for i in range(1, a + 1)
                                     for j in range(1, b + 1)))


def wheel(rim: int) -> OrderedGraph:
    """W_rim: a rim-cycle on vertices 1..rim plus a hub joined to all of them."""
    hub = rim + 1
    edges = [(i, i + 1) for i in range(1, rim)] + [(1, rim)]
    edges += [(i, hub) for i in range(1, rim + 1)]
    return OrderedGraph(rim + 1, tuple(edges))


def reversal_pair() -> tuple[OrderedGraph, OrderedGraph, tuple[int, int], frozenset[int]]:
    """A 2-isomorphic but non-isomorphic pair, with the 2-cut and the side
    whose reattachment (separator vertices swapped) turns one into the other.

    Two asymmetric lobes hang off the cut pair {1, 2}; reversing one lobe
    preserves every circuit but changes the degree sequence.
    """
    g1 = OrderedGraph(6, (
        (1, 3), (3, 4), (2, 4), (1, 4),   # lobe {3, 4}
        (1, 5), (5, 6), (2, 6), (1, 6),   # lobe {5, 6}
    ))
    g2 = OrderedGraph(6, (
        (2, 3), (3, 4), (1, 4), (2, 4),
        (1, 5), (5, 6), (2, 6), (1, 6),
    ))
    return g1, g2, (1, 2), frozenset({3, 4})


def variety_pair_base() -> tuple[OrderedGraph, int, tuple[int, int]]:
    """Two rigid blocks (K4 and the wheel W4) hinged at a shared vertex, with
    one extra edge tying the blocks together.

    Returns (graph, index of the tying edge, replacement vertex pair).
    Removing the tying edge leaves the hinge free, and the replacement pair's
    distance varies along that flex, so swapping the edges yields two
    non-isomorphic graphs with the same measurement variety.
    """
    edges = (
        (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4),   # K4 block
        (4, 6), (6, 7), (7, 8), (4, 8),                   # wheel rim
        (4, 5), (5, 6), (5, 7), (5, 8),                   # wheel spokes
        (1, 5),                                           # tying edge
    )
    return OrderedGraph(8, edges), 14, (1, 7)


CATALOG: dict[str, OrderedGraph] = {
    "K3": complete(3),
    "K4": complete(4),
    "K5": complete(5),
    "K6": complete(6),
    "C4": cycle(4),
    "C5": cycle(5),
    "C6": cycle(6),
    "K43": complete_bipartite(4, 3),
    "W4": wheel(4),
    "W5": wheel(5),
    "P4": path(4),
    "REV_A": reversal_pair()[0],
    "VP_A": variety_pair_base()[0],
}
