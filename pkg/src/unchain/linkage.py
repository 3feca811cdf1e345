"""Standard linkage-based hierarchical clustering (multi-merge recursion).

At every round the smallest linkage value ``R`` between current blocks is
found, every pair of blocks whose linkage is ``<= R`` is joined by an edge,
and the connected components of that graph become the next partition. All
ties therefore merge simultaneously and the result does not depend on the
order of the points.
"""

from __future__ import annotations

import enum
from fractions import Fraction

from ._unionfind import UnionFind
from .exceptions import OverlappingBlocksError
from .metric import Dendrogram, FiniteMetricSpace, Partition, Ultrametric

__all__ = [
    "LinkageKind",
    "linkage_value",
    "standard_linkage_dendrogram",
    "sl_mst_oracle",
]


class LinkageKind(enum.Enum):
    SINGLE = "single"
    COMPLETE = "complete"
    AVERAGE = "average"

    @classmethod
    def parse(cls, value) -> "LinkageKind":
        if isinstance(value, cls):
            return value
        aliases = {"sl": "single", "cl": "complete", "al": "average"}
        return cls(aliases.get(str(value).lower(), str(value).lower()))


def _exact_mean(values) -> Fraction:
    # Fraction(float) is exact, so the mean does not depend on summation order.
    total = sum((Fraction(v) for v in values), Fraction(0))
    return total / len(values)


def _tidy(value, space_has_floats: bool):
    if isinstance(value, Fraction):
        if space_has_floats:
            return float(value)
        if value.denominator == 1:
            return int(value)
    return value


def _linkage_key(kind: LinkageKind, dist, B, Bp):
    if kind is LinkageKind.SINGLE:
        return min(dist[x][y] for x in B for y in Bp)
    if kind is LinkageKind.COMPLETE:
        return max(dist[x][y] for x in B for y in Bp)
    return _exact_mean([dist[x][y] for x in B for y in Bp])


def linkage_value(kind, B, Bp, space: FiniteMetricSpace):
    """Linkage between two disjoint blocks.

    Single linkage is the minimum cross distance, complete linkage the
    maximum, average linkage the arithmetic mean. Average linkage is computed
    exactly and rounded once when the space holds floats.
    """
    kind = LinkageKind.parse(kind)
    B, Bp = list(B), list(Bp)
    if set(B) & set(Bp):
        raise OverlappingBlocksError("linkage is defined for disjoint blocks")
    if not B or not Bp:
        raise ValueError("blocks must be nonempty")
    return _tidy(_linkage_key(kind, space.dist, B, Bp), not space.is_exact)


def standard_linkage_dendrogram(space: FiniteMetricSpace, kind) -> Dendrogram:
    """Run the multi-merge recursion for the given linkage.

    Linkage values are recomputed from point pairs every round (no
    Lance-Williams update), so CL and AL follow their defining formulas
    literally.
    """
    kind = LinkageKind.parse(kind)
    n = space.n
    floats = not space.is_exact
    dist = space.dist
    current = Partition.singletons(n)
    heights = [0]
    levels = [current]
    while len(current) > 1:
        blocks = current.blocks
        m = len(blocks)
        values = {}
        for a in range(m):
            for b in range(a + 1, m):
                values[a, b] = _linkage_key(kind, dist, blocks[a], blocks[b])
        r = min(values.values())
        uf = UnionFind(m)
        for (a, b), v in values.items():
            if v <= r:
                uf.union(a, b)
        current = current.merge(uf.groups())
        heights.append(_tidy(r, floats))
        levels.append(current)
    return Dendrogram(tuple(heights), tuple(levels), space.labels)


def sl_mst_oracle(space: FiniteMetricSpace) -> Ultrametric:
    """Single-linkage ultrametric via a minimum spanning tree.

    ``u(x, y)`` is the largest edge on the tree path from ``x`` to ``y``
    (the least ``t`` for which a ``t``-chain joins them). Independent of the
    recursive construction and used to cross-check it.
    """
    n = space.n
    d = space.dist
    if n == 0:
        return Ultrametric((), ())
    # Prim on the complete graph.
    in_tree = [False] * n
    best = [None] * n
    parent = [-1] * n
    best[0] = 0
    tree = [[] for _ in range(n)]
    for _ in range(n):
        v = min((i for i in range(n) if not in_tree[i] and best[i] is not None), key=lambda i: best[i])
        in_tree[v] = True
        if parent[v] >= 0:
            tree[v].append((parent[v], d[v][parent[v]]))
            tree[parent[v]].append((v, d[v][parent[v]]))
        for w in range(n):
            if not in_tree[w] and (best[w] is None or d[v][w] < best[w]):
                best[w] = d[v][w]
                parent[w] = v
    u = [[0] * n for _ in range(n)]
    for s in range(n):
        stack = [(s, -1, None)]
        while stack:
            v, prev, mx = stack.pop()
            if v != s:
                u[s][v] = mx
            for w, wt in tree[v]:
                if w != prev:
                    stack.append((w, v, wt if mx is None or wt > mx else mx))
    return Ultrametric(space.labels, tuple(tuple(r) for r in u))
