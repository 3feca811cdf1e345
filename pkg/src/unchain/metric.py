"""Finite metric spaces, partitions, dendrograms and ultrametrics.

Distances are kept as plain Python numbers: ``int``, ``fractions.Fraction``
or ``float``. Nothing is compared with a tolerance; the clustering
algorithms branch on equality of distances, so a space built from exact
rationals gives exact dendrograms.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .exceptions import (
    AsymmetryError,
    DisconnectedGraphError,
    IndexSetMismatch,
    InvalidDendrogramError,
    InvalidPartitionError,
    NegativeDistanceError,
    NonFiniteDistanceError,
    NonzeroDiagonalError,
    NotUltrametricError,
    ShapeError,
    TriangleViolation,
    ZeroOffDiagonalError,
)

__all__ = [
    "FiniteMetricSpace",
    "Ultrametric",
    "Partition",
    "Dendrogram",
    "validate_metric",
    "shortest_path_metric",
    "is_ultrametric",
    "as_ultrametric",
    "dendrogram_to_ultrametric",
    "ultrametric_to_dendrogram",
    "refines",
]


def coerce_distance(value):
    """Normalize a scalar to ``int``, ``Fraction`` or ``float``."""
    if isinstance(value, bool):
        raise TypeError("booleans are not distances")
    if isinstance(value, (int, Fraction, float)):
        return value
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, Decimal):
        return Fraction(value)
    if isinstance(value, numbers.Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, numbers.Real):
        return float(value)
    raise TypeError(f"unsupported distance value {value!r}")


def half(value):
    """``value / 2`` without leaving exact arithmetic."""
    if isinstance(value, float):
        return value / 2
    return Fraction(value) / 2


@dataclass(frozen=True)
class FiniteMetricSpace:
    """A labeled finite metric space.

    Build instances through :func:`validate_metric`; the constructor itself
    does not check the metric axioms.
    """

    labels: tuple
    dist: tuple

    @property
    def n(self) -> int:
        return len(self.labels)

    def __len__(self):
        return len(self.labels)

    def d(self, i, j):
        return self.dist[i][j]

    @property
    def sep(self):
        """Smallest distance between distinct points (``None`` if n < 2)."""
        vals = self.distance_values()
        return vals[0] if vals else None

    @property
    def diameter(self):
        vals = self.distance_values()
        return vals[-1] if vals else 0

    @property
    def is_exact(self) -> bool:
        return not any(isinstance(v, float) for row in self.dist for v in row)

    def distance_values(self) -> list:
        """Sorted distinct off-diagonal distances."""
        vals = {self.dist[i][j] for i in range(self.n) for j in range(i + 1, self.n)}
        return sorted(vals)

    def index(self, label) -> int:
        return self.labels.index(label)

    def subspace(self, indices: Sequence[int]) -> "FiniteMetricSpace":
        idx = list(indices)
        return type(self)(
            tuple(self.labels[i] for i in idx),
            tuple(tuple(self.dist[i][j] for j in idx) for i in idx),
        )

    def permuted(self, perm: Sequence[int]) -> "FiniteMetricSpace":
        """Reorder points so that new point ``i`` is old point ``perm[i]``."""
        return self.subspace(perm)

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.dist], dtype=float)

    def to_lists(self) -> list:
        return [list(row) for row in self.dist]


class Ultrametric(FiniteMetricSpace):
    """A finite metric space satisfying the strong triangle inequality."""


def _default_labels(n):
    return tuple(str(i) for i in range(n))


def validate_metric(labels, raw_matrix, check_triangle: bool = True) -> FiniteMetricSpace:
    """Check the metric axioms and build a :class:`FiniteMetricSpace`.

    Parameters
    ----------
    labels : sequence or None
        Point identifiers; defaults to ``"0", "1", ...``.
    raw_matrix : array_like
        Square matrix of distances.
    check_triangle : bool
        Run the O(n^3) triangle scan. Only disable for matrices that are
        metrics by construction (e.g. Euclidean distances) where float
        rounding could trip the exact check.

    Raises
    ------
    ShapeError, NegativeDistanceError, NonFiniteDistanceError,
    NonzeroDiagonalError, AsymmetryError, ZeroOffDiagonalError,
    TriangleViolation
    """
    rows = [list(r) for r in raw_matrix]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ShapeError(f"distance matrix must be square, got row lengths {[len(r) for r in rows]}")
    if labels is None:
        labels = _default_labels(n)
    labels = tuple(labels)
    if len(labels) != n:
        raise ShapeError(f"{len(labels)} labels for a {n}x{n} matrix")
    if len(set(labels)) != n:
        raise ShapeError("labels must be unique")

    d = [[coerce_distance(v) for v in r] for r in rows]
    for i in range(n):
        for j in range(n):
            v = d[i][j]
            if isinstance(v, float) and not math.isfinite(v):
                raise NonFiniteDistanceError(f"d[{i}][{j}] = {v}")
            if v < 0:
                raise NegativeDistanceError(f"d[{i}][{j}] = {v} < 0")
    for i in range(n):
        if d[i][i] != 0:
            raise NonzeroDiagonalError(i, d[i][i])
    for i in range(n):
        for j in range(i + 1, n):
            if d[i][j] != d[j][i]:
                raise AsymmetryError(i, j, d[i][j], d[j][i])
            if d[i][j] == 0:
                raise ZeroOffDiagonalError(i, j)
    if check_triangle:
        for j in range(n):
            dj = d[j]
            for i in range(n):
                dij = d[i][j]
                di = d[i]
                for k in range(n):
                    if di[k] > dij + dj[k]:
                        raise TriangleViolation(i, j, k, di[k], dij + dj[k])
    # Diagonal stored as int 0 so the grid never holds both 0 and 0.0.
    for i in range(n):
        d[i][i] = 0
    return FiniteMetricSpace(labels, tuple(tuple(r) for r in d))


def shortest_path_metric(weighted_edge_list, n: int, labels=None) -> FiniteMetricSpace:
    """Path metric of a connected, positively weighted graph.

    ``weighted_edge_list`` holds ``(a, b, w)`` triples. Endpoints are vertex
    indices, or labels when ``labels`` is given.
    """
    if labels is None:
        labels = _default_labels(n)
    labels = tuple(labels)
    pos = {lab: i for i, lab in enumerate(labels)}
    INF = None
    d = [[INF] * n for _ in range(n)]
    for i in range(n):
        d[i][i] = 0
    for a, b, w in weighted_edge_list:
        i = pos.get(a, a)
        j = pos.get(b, b)
        if not (isinstance(i, int) and isinstance(j, int) and 0 <= i < n and 0 <= j < n):
            raise ShapeError(f"edge endpoint out of range: {a!r}-{b!r}")
        w = coerce_distance(w)
        if w <= 0:
            raise NegativeDistanceError(f"edge weight {w} must be positive")
        if i == j:
            continue
        if d[i][j] is None or w < d[i][j]:
            d[i][j] = d[j][i] = w
    for k in range(n):
        dk = d[k]
        for i in range(n):
            dik = d[i][k]
            if dik is None:
                continue
            di = d[i]
            for j in range(n):
                if dk[j] is None:
                    continue
                s = dik + dk[j]
                if di[j] is None or s < di[j]:
                    di[j] = s
    for i in range(n):
        for j in range(n):
            if d[i][j] is None:
                raise DisconnectedGraphError(f"no path between {labels[i]!r} and {labels[j]!r}")
    return validate_metric(labels, d)


def is_ultrametric(space: FiniteMetricSpace) -> bool:
    d = space.dist
    n = space.n
    for i in range(n):
        di = d[i]
        for j in range(i + 1, n):
            dij = di[j]
            dj = d[j]
            for k in range(n):
                if dij > max(di[k], dj[k]):
                    return False
    return True


def as_ultrametric(space: FiniteMetricSpace) -> Ultrametric:
    if not is_ultrametric(space):
        raise NotUltrametricError("strong triangle inequality fails")
    return Ultrametric(space.labels, space.dist)


class Partition:
    """Canonical partition of ``{0, ..., n-1}``.

    Blocks are sorted tuples, ordered by their smallest element, so two
    partitions are equal iff they are structurally equal.
    """

    __slots__ = ("blocks", "n")

    def __init__(self, blocks: Iterable[Iterable[int]], n: int | None = None):
        canon = []
        seen = set()
        for b in blocks:
            b = tuple(sorted(b))
            if not b:
                raise InvalidPartitionError("empty block")
            for x in b:
                if x in seen:
                    raise InvalidPartitionError(f"element {x} appears in two blocks")
                seen.add(x)
            canon.append(b)
        canon.sort()
        size = len(seen)
        if n is None:
            n = size
        if seen != set(range(n)):
            raise InvalidPartitionError(f"blocks do not cover 0..{n - 1}")
        object.__setattr__(self, "blocks", tuple(canon))
        object.__setattr__(self, "n", n)

    def __setattr__(self, name, value):
        raise AttributeError("Partition is immutable")

    @classmethod
    def singletons(cls, n: int) -> "Partition":
        return cls(((i,) for i in range(n)), n)

    @classmethod
    def one_block(cls, n: int) -> "Partition":
        return cls([range(n)] if n else [], n)

    def __eq__(self, other):
        return isinstance(other, Partition) and self.blocks == other.blocks and self.n == other.n

    def __hash__(self):
        return hash((self.blocks, self.n))

    def __len__(self):
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def __repr__(self):
        return f"Partition({[list(b) for b in self.blocks]})"

    def block_index(self) -> list:
        """``out[x]`` is the position of the block holding ``x``."""
        out = [0] * self.n
        for k, b in enumerate(self.blocks):
            for x in b:
                out[x] = k
        return out

    def labels(self) -> np.ndarray:
        return np.asarray(self.block_index(), dtype=int)

    def merge(self, groups: Iterable[Iterable[int]]) -> "Partition":
        """Quotient by grouping blocks; ``groups`` partitions block positions."""
        return Partition(((x for k in g for x in self.blocks[k]) for g in groups), self.n)


def refines(p: Partition, q: Partition) -> bool:
    """True iff every block of ``p`` lies inside a block of ``q``."""
    if p.n != q.n:
        raise IndexSetMismatch(f"partitions of {p.n} and {q.n} elements")
    where = q.block_index()
    return all(len({where[x] for x in b}) == 1 for b in p.blocks)


@dataclass(frozen=True)
class Dendrogram:
    """Right-continuous step function from heights to partitions.

    ``levels[i]`` is the partition on ``[heights[i], heights[i+1])``.
    """

    heights: tuple
    levels: tuple
    labels: tuple = field(default=None, compare=True)

    def __post_init__(self):
        heights = tuple(self.heights)
        levels = tuple(self.levels)
        object.__setattr__(self, "heights", heights)
        object.__setattr__(self, "levels", levels)
        if not levels or len(heights) != len(levels):
            raise InvalidDendrogramError("need one partition per height")
        n = levels[0].n
        if self.labels is None:
            object.__setattr__(self, "labels", _default_labels(n))
        elif len(self.labels) != n:
            raise InvalidDendrogramError("label count does not match partitions")
        else:
            object.__setattr__(self, "labels", tuple(self.labels))
        if heights[0] != 0:
            raise InvalidDendrogramError("first height must be 0")
        for a, b in zip(heights, heights[1:]):
            if not a < b:
                raise InvalidDendrogramError(f"heights not strictly increasing at {a}, {b}")
        if levels[0] != Partition.singletons(n):
            raise InvalidDendrogramError("level 0 must be all singletons")
        if n and len(levels[-1]) != 1:
            raise InvalidDendrogramError("last level must be a single block")
        for p, q in zip(levels, levels[1:]):
            if q.n != n:
                raise InvalidDendrogramError("levels over different index sets")
            if p == q:
                raise InvalidDendrogramError("consecutive levels are equal")
            if not refines(p, q):
                raise InvalidDendrogramError("levels are not nested")

    @property
    def n(self) -> int:
        return self.levels[0].n

    def __call__(self, t) -> Partition:
        return self.at(t)

    def at(self, t) -> Partition:
        if t < 0:
            raise ValueError("dendrograms are defined on [0, inf)")
        i = 0
        for k, h in enumerate(self.heights):
            if h <= t:
                i = k
            else:
                break
        return self.levels[i]


def dendrogram_to_ultrametric(dend: Dendrogram) -> Ultrametric:
    n = dend.n
    u = [[None] * n for _ in range(n)]
    for i in range(n):
        u[i][i] = 0
    for h, level in zip(dend.heights, dend.levels):
        for block in level.blocks:
            for a in block:
                ua = u[a]
                for b in block:
                    if ua[b] is None:
                        ua[b] = h
    return Ultrametric(dend.labels, tuple(tuple(r) for r in u))


def ultrametric_to_dendrogram(u: FiniteMetricSpace) -> Dendrogram:
    if not is_ultrametric(u):
        raise NotUltrametricError("cannot build a dendrogram from a non-ultrametric")
    n = u.n
    heights = [0] + u.distance_values()
    levels = []
    for h in heights:
        # Closed balls of an ultrametric partition the space.
        assigned = [False] * n
        blocks = []
        for i in range(n):
            if assigned[i]:
                continue
            ball = [j for j in range(n) if u.dist[i][j] <= h]
            for j in ball:
                assigned[j] = True
            blocks.append(ball)
        levels.append(Partition(blocks, n))
    return Dendrogram(tuple(heights), tuple(levels), u.labels)
