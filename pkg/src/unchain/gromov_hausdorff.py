"""Exact Gromov-Hausdorff distance between small finite metric spaces.

``d_GH(X, Y)`` is half the smallest distortion of a correspondence between
``X`` and ``Y``. The distortion of any correspondence is one of the finitely
many values ``|d_X(a, b) - d_Y(c, e)|``, so the exact distance is found by a
binary search over those values, each step asking whether a correspondence of
distortion ``<= delta`` exists. That question is a covering problem on the
compatibility graph of ``X x Y`` pairs and is settled by backtracking.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exceptions import BudgetExceeded, CoverageError, LabelMismatch
from .metric import FiniteMetricSpace, half

__all__ = ["Correspondence", "distortion", "gh_exact", "gh_upper_identity", "gh_lower_diameter"]


@dataclass(frozen=True)
class Correspondence:
    """Relation between point indices of two spaces covering both sides."""

    pairs: frozenset

    def __init__(self, pairs):
        object.__setattr__(self, "pairs", frozenset((int(a), int(b)) for a, b in pairs))

    def check(self, nx: int, ny: int):
        xs = {a for a, _ in self.pairs}
        ys = {b for _, b in self.pairs}
        if any(not 0 <= a < nx for a in xs) or any(not 0 <= b < ny for b in ys):
            raise CoverageError("pair index out of range")
        if len(xs) != nx:
            raise CoverageError(f"points of X not covered: {sorted(set(range(nx)) - xs)}")
        if len(ys) != ny:
            raise CoverageError(f"points of Y not covered: {sorted(set(range(ny)) - ys)}")

    @classmethod
    def identity(cls, n: int) -> "Correspondence":
        return cls((i, i) for i in range(n))


def _dis(pairs, dx, dy):
    worst = 0
    for a, b in pairs:
        for c, e in pairs:
            v = abs(dx[a][c] - dy[b][e])
            if v > worst:
                worst = v
    return worst


def distortion(R, X: FiniteMetricSpace, Y: FiniteMetricSpace):
    """Largest ``|d_X(x, x') - d_Y(y, y')|`` over pairs of related pairs."""
    if not isinstance(R, Correspondence):
        R = Correspondence(R)
    R.check(X.n, Y.n)
    return _dis(sorted(R.pairs), X.dist, Y.dist)


def _identity_map(X, Y):
    if set(X.labels) != set(Y.labels) or X.n != Y.n:
        raise LabelMismatch("spaces do not share a label set")
    pos = {lab: j for j, lab in enumerate(Y.labels)}
    return [(i, pos[lab]) for i, lab in enumerate(X.labels)]


def gh_upper_identity(X: FiniteMetricSpace, Y: FiniteMetricSpace):
    """Half the largest entrywise gap when both spaces share their labels.

    This is the distortion of the label-matching correspondence, hence an
    upper bound for :func:`gh_exact`.
    """
    return _half(_dis(_identity_map(X, Y), X.dist, Y.dist), X, Y)


def gh_lower_diameter(X: FiniteMetricSpace, Y: FiniteMetricSpace):
    return _half(abs(X.diameter - Y.diameter), X, Y)


def _half(v, X, Y):
    h = half(v)
    if not (X.is_exact and Y.is_exact):
        return float(h)
    return h


def _eccentricity(space):
    return [max(row) if row else 0 for row in space.dist]


def _greedy_pairs(X, Y):
    ex, ey = _eccentricity(X), _eccentricity(Y)
    pairs = set()
    for i in range(X.n):
        pairs.add((i, min(range(Y.n), key=lambda j: (abs(ex[i] - ey[j]), j))))
    for j in range(Y.n):
        pairs.add((min(range(X.n), key=lambda i: (abs(ex[i] - ey[j]), i)), j))
    return sorted(pairs)


class _CoverSearch:
    def __init__(self, X, Y, node_budget):
        self.nx, self.ny = X.n, Y.n
        self.dx, self.dy = X.dist, Y.dist
        self.budget = node_budget
        self.nodes = 0
        ex, ey = _eccentricity(X), _eccentricity(Y)
        ny = self.ny
        self.row = [sum(1 << (a * ny + b) for b in range(ny)) for a in range(self.nx)]
        self.col = [sum(1 << (a * ny + b) for a in range(self.nx)) for b in range(ny)]
        self.pair_order = sorted(
            range(self.nx * ny),
            key=lambda p: (abs(ex[p // ny] - ey[p % ny]), p),
        )
        # Elements are visited by fewest options, ties by descending eccentricity.
        self.x_rank = sorted(range(self.nx), key=lambda a: (-ex[a], a))
        self.y_rank = sorted(range(ny), key=lambda b: (-ey[b], b))

    def feasible(self, delta) -> bool:
        nx, ny, dx, dy = self.nx, self.ny, self.dx, self.dy
        npairs = nx * ny
        compat = []
        for p in range(npairs):
            a, b = divmod(p, ny)
            m = 0
            for q in range(npairs):
                c, e = divmod(q, ny)
                if abs(dx[a][c] - dy[b][e]) <= delta:
                    m |= 1 << q
            compat.append(m)
        full_x, full_y = (1 << nx) - 1, (1 << ny) - 1
        order = self.pair_order
        row, col = self.row, self.col

        def search(allowed, cov_x, cov_y):
            self.nodes += 1
            if self.nodes > self.budget:
                raise _OutOfBudget
            if cov_x == full_x and cov_y == full_y:
                return True
            best_opts, best_count = 0, None
            for a in self.x_rank:
                if not cov_x >> a & 1:
                    opts = allowed & row[a]
                    c = opts.bit_count()
                    if c == 0:
                        return False
                    if best_count is None or c < best_count:
                        best_opts, best_count = opts, c
            for b in self.y_rank:
                if not cov_y >> b & 1:
                    opts = allowed & col[b]
                    c = opts.bit_count()
                    if c == 0:
                        return False
                    if best_count is None or c < best_count:
                        best_opts, best_count = opts, c
            for p in order:
                if not best_opts >> p & 1:
                    continue
                a, b = divmod(p, ny)
                if search(allowed & compat[p], cov_x | 1 << a, cov_y | 1 << b):
                    return True
                # Any cover using p extending the current choice was just ruled out.
                allowed &= ~(1 << p)
            return False

        return search((1 << npairs) - 1, 0, 0)


class _OutOfBudget(Exception):
    pass


def gh_exact(X: FiniteMetricSpace, Y: FiniteMetricSpace, node_budget: int = 2_000_000):
    """Exact Gromov-Hausdorff distance.

    Parameters
    ----------
    X, Y : FiniteMetricSpace
        Nonempty spaces; intended for about ten points each.
    node_budget : int
        Maximum number of search nodes over the whole computation.

    Returns
    -------
    Half the minimum distortion, in the arithmetic of the inputs.

    Raises
    ------
    BudgetExceeded
        With certified ``lower`` and ``upper`` bounds when the search is cut
        short.
    """
    if X.n == 0 or Y.n == 0:
        raise ValueError("Gromov-Hausdorff distance needs nonempty spaces")
    dx, dy = X.dist, Y.dist
    values = {abs(dx[a][c] - dy[b][e]) for a in range(X.n) for c in range(X.n) for b in range(Y.n) for e in range(Y.n)}
    candidates = sorted(values)
    lower = abs(X.diameter - Y.diameter)
    try:
        upper = _dis(_identity_map(X, Y), dx, dy)
    except LabelMismatch:
        upper = _dis(_greedy_pairs(X, Y), dx, dy)
    lo = next(i for i, v in enumerate(candidates) if v >= lower)
    hi = candidates.index(upper)
    search = _CoverSearch(X, Y, node_budget)
    while lo < hi:
        mid = (lo + hi) // 2
        try:
            ok = search.feasible(candidates[mid])
        except _OutOfBudget:
            raise BudgetExceeded(_half(candidates[lo], X, Y), _half(candidates[hi], X, Y), search.nodes) from None
        if ok:
            hi = mid
        else:
            lo = mid + 1
    return _half(candidates[hi], X, Y)
