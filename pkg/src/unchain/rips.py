"""Threshold graphs and Vietoris-Rips dimensions.

The simplices of the Rips complex at scale ``t`` are exactly the cliques of
the threshold graph ``{(i, j) : d(i, j) <= t}``, so every dimension query
reduces to a maximum-clique search. Vertex sets are Python ints used as
bitmasks; at the sizes this library targets (n up to a few dozen) that beats
any set-based representation by a wide margin.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exceptions import EmptySubsetError, OverlappingBlocksError
from .metric import FiniteMetricSpace

__all__ = [
    "ThresholdGraph",
    "threshold_graph",
    "RipsEngine",
    "rips_dimension",
    "max_crossing_clique_dim",
    "condition_ii",
    "min_crossing_dim",
    "max_clique_size",
]


def to_mask(indices) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def from_mask(mask: int) -> list:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class ThresholdGraph:
    """Closed threshold graph on ``vertices``: edge iff ``d <= t``."""

    vertices: tuple
    t: object
    adjacency: dict

    def edges(self):
        return sorted((a, b) for a in self.adjacency for b in self.adjacency[a] if a < b)


def threshold_graph(space: FiniteMetricSpace, subset, t) -> ThresholdGraph:
    verts = tuple(sorted(set(subset)))
    adj = {v: frozenset(w for w in verts if w != v and space.dist[v][w] <= t) for v in verts}
    return ThresholdGraph(verts, t, adj)


def max_clique_size(adj, cand: int, floor: int = 0, stop_at: int | None = None) -> int:
    """Size of a maximum clique inside ``cand``.

    Branch and bound with Tomita-style pivoting. ``adj[v]`` is the neighbour
    mask of ``v``. Returns ``floor`` if no clique beats it. When ``stop_at``
    is given the search returns as soon as a clique of that size is found.
    """
    best = floor
    if stop_at is not None and best >= stop_at:
        return best

    def expand(size, p):
        nonlocal best
        if not p:
            if size > best:
                best = size
            return stop_at is not None and best >= stop_at
        if size + p.bit_count() <= best:
            return False
        pivot, pivot_deg = -1, -1
        for u in _bits(p):
            deg = (p & adj[u]).bit_count()
            if deg > pivot_deg:
                pivot, pivot_deg = u, deg
        for v in _bits(p & ~adj[pivot]):
            if expand(size + 1, p & adj[v]):
                return True
            p &= ~(1 << v)
            if size + p.bit_count() <= best:
                return False
        return False

    expand(0, cand)
    return best


class RipsEngine:
    """Clique queries on one metric space, memoized by ``(mask, t)``.

    Blocks survive across many levels of a dendrogram run, so the engine is
    meant to live for the whole run. Not thread-safe.
    """

    def __init__(self, space: FiniteMetricSpace):
        self.space = space
        self._adj = {}
        self._dim = {}

    def adjacency(self, t) -> list:
        adj = self._adj.get(t)
        if adj is None:
            n = self.space.n
            d = self.space.dist
            adj = []
            for i in range(n):
                row = d[i]
                m = 0
                for j in range(n):
                    if j != i and row[j] <= t:
                        m |= 1 << j
                adj.append(m)
            self._adj[t] = adj
        return adj

    def dimension(self, mask: int, t) -> int:
        if not mask:
            raise EmptySubsetError("Rips dimension of an empty set")
        key = (mask, t)
        dim = self._dim.get(key)
        if dim is None:
            dim = max_clique_size(self.adjacency(t), mask, floor=1) - 1
            self._dim[key] = dim
        return dim

    def crossing_dim(self, mj: int, mk: int, t, stop_at: int | None = None):
        """Largest dimension of a clique meeting both ``mj`` and ``mk``.

        ``None`` when no crossing edge exists. With ``stop_at`` the search
        may return early once a crossing clique of that dimension is seen.
        """
        if mj & mk:
            raise OverlappingBlocksError("blocks must be disjoint")
        if not mj or not mk:
            raise EmptySubsetError("crossing query on an empty block")
        adj = self.adjacency(t)
        union = mj | mk
        best = 0
        target = None if stop_at is None else stop_at + 1
        for u in _bits(mj):
            nu = adj[u]
            cross = nu & mk
            for v in _bits(cross):
                common = nu & adj[v] & union
                if 2 + common.bit_count() <= best:
                    best = max(best, 2)
                    continue
                size = 2 + max_clique_size(
                    adj, common, floor=max(best - 2, 0),
                    stop_at=None if target is None else target - 2,
                )
                if size > best:
                    best = size
                if target is not None and best >= target:
                    return best - 1
        return best - 1 if best else None

    def condition_ii(self, mj: int, mk: int, t, alpha) -> bool:
        need = min(self.dimension(mj, t), self.dimension(mk, t))
        k = min_crossing_dim(need, alpha)
        got = self.crossing_dim(mj, mk, t, stop_at=k)
        return got is not None and alpha * got >= need


def min_crossing_dim(need: int, alpha) -> int:
    """Smallest integer ``k >= 1`` with ``alpha * k >= need``."""
    if need <= 0:
        return 1
    k = max(1, int(need / alpha))
    while k > 1 and alpha * (k - 1) >= need:
        k -= 1
    while alpha * k < need:
        k += 1
    return k


def _check_alpha(alpha):
    if not alpha >= 1:
        raise ValueError(f"alpha must be >= 1, got {alpha}")


def rips_dimension(space: FiniteMetricSpace, subset, t) -> int:
    """Dimension of the Rips complex of ``subset`` at scale ``t``.

    Equals the size of a maximum clique of the closed threshold graph,
    minus one.

    >>> from unchain.metric import validate_metric
    >>> sq = validate_metric(None, [[0, 1, 1], [1, 0, 1], [1, 1, 0]])
    >>> rips_dimension(sq, [0, 1, 2], 1)
    2
    """
    mask = to_mask(subset)
    if not mask:
        raise EmptySubsetError("subset must be nonempty")
    return RipsEngine(space).dimension(mask, t)


def max_crossing_clique_dim(space: FiniteMetricSpace, Bj, Bk, t):
    mj, mk = to_mask(Bj), to_mask(Bk)
    if mj & mk:
        raise OverlappingBlocksError("blocks must be disjoint")
    return RipsEngine(space).crossing_dim(mj, mk, t)


def condition_ii(space: FiniteMetricSpace, Bj, Bk, t, alpha) -> bool:
    """Crossing-simplex test between two blocks at scale ``t``.

    True iff some simplex of the Rips complex of ``Bj | Bk`` meets both
    blocks and ``alpha * dim >= min(dim F_t(Bj), dim F_t(Bk))``.
    """
    _check_alpha(alpha)
    mj, mk = to_mask(Bj), to_mask(Bk)
    if mj & mk:
        raise OverlappingBlocksError("blocks must be disjoint")
    return RipsEngine(space).condition_ii(mj, mk, t, alpha)
