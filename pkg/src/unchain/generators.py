"""Instance generators: the barbell and bridge instances, plus seeded random
metrics, ultrametrics and dendrograms.

Random metrics are integer valued so that every downstream comparison is
exact and ties (which exercise the multi-merge rules) are common.
"""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

from .metric import (
    Dendrogram,
    FiniteMetricSpace,
    Partition,
    dendrogram_to_ultrametric,
    shortest_path_metric,
    validate_metric,
)

__all__ = [
    "barbell_edges",
    "barbell_k4",
    "bridged_k4_edges",
    "bridged_k4",
    "random_metric",
    "random_ultrametric",
    "random_dendrogram",
    "all_metrics",
    "all_ultrametrics",
    "generate",
]

BARBELL_LABELS = ("x0", "x1", "x2", "x3", "y0", "y1", "y2", "y3")
BRIDGED_LABELS = ("x0", "x1", "x2", "x3", "m", "y0", "y1", "y2", "y3")


def _k4(prefix):
    return [(f"{prefix}{i}", f"{prefix}{j}", 1) for i, j in itertools.combinations(range(4), 2)]


def _as_number(eps):
    if isinstance(eps, str):
        return Fraction(eps)
    return eps


def barbell_edges(eps=0):
    """Two unit 4-cliques joined by the edge ``x0-y0`` of length ``1 + eps``."""
    eps = _as_number(eps)
    return _k4("x") + _k4("y") + [("x0", "y0", 1 + eps)]


def barbell_k4(eps=Fraction(1, 10)):
    """Return ``(base, perturbed)`` barbell spaces.

    ``base`` has every edge of length 1; ``perturbed`` stretches the bridge
    ``x0-y0`` to ``1 + eps``. Distances are shortest-path lengths, so the
    perturbed cross distances are ``1 + eps``, ``2 + eps`` and ``3 + eps``.
    """
    base = shortest_path_metric(barbell_edges(0), 8, BARBELL_LABELS)
    perturbed = shortest_path_metric(barbell_edges(eps), 8, BARBELL_LABELS)
    return base, perturbed


def bridged_k4_edges():
    return _k4("x") + _k4("y") + [("x0", "m", 2), ("m", "y0", 2)]


def bridged_k4() -> FiniteMetricSpace:
    """Two unit 4-cliques whose hubs ``x0`` and ``y0`` sit at distance 2 from a
    midpoint ``m``."""
    return shortest_path_metric(bridged_k4_edges(), 9, BRIDGED_LABELS)


def _closure(d):
    n = len(d)
    for k in range(n):
        for i in range(n):
            for j in range(n):
                s = d[i][k] + d[k][j]
                if s < d[i][j]:
                    d[i][j] = s
    return d


def _euclidean_metric(n, rng, dim, scale):
    while True:
        pts = [[rng.random() for _ in range(dim)] for _ in range(n)]
        d = [[0] * n for _ in range(n)]
        ok = True
        for i in range(n):
            for j in range(i + 1, n):
                v = math.ceil(scale * math.dist(pts[i], pts[j]))
                if v == 0:
                    ok = False
                d[i][j] = d[j][i] = v
        if ok:
            # ceil is subadditive, so this is a metric; the closure only guards
            # against sqrt rounding.
            return _closure(d)


def _graph_metric(n, rng, max_weight, density):
    d = [[None] * n for _ in range(n)]
    order = list(range(n))
    rng.shuffle(order)
    edges = []
    for k in range(1, n):
        edges.append((order[k], order[rng.randrange(k)]))
    for i, j in itertools.combinations(range(n), 2):
        if rng.random() < density:
            edges.append((i, j))
    big = max_weight * n
    for i in range(n):
        for j in range(n):
            d[i][j] = 0 if i == j else big
    for i, j in edges:
        w = rng.randint(1, max_weight)
        if w < d[i][j]:
            d[i][j] = d[j][i] = w
    return _closure(d)


def _split(items, rng, lo, hi):
    out = []
    k = 0
    while k < len(items):
        s = rng.randint(lo, hi)
        out.append(items[k:k + s])
        k += s
    return out


def _clustered_metric(n, rng):
    # Two-level planted hierarchy: unit groups, pairs of groups joined by one
    # edge of length 2 and a layer of length-3 edges, and pairs joined to
    # each other by a point fanned out to a few points at length 3 to 5.
    # Blocks then form at 1, 2 and 3 with ties, which is where the alpha
    # dependent merge decisions diverge.
    glo, ghi = rng.choice([(3, 3), (3, 4), (2, 4)])
    groups = _split(list(range(n)), rng, glo, ghi)
    supers = _split(groups, rng, *rng.choice([(2, 2), (1, 3)]))
    big = 100 * n
    d = [[0 if i == j else big for j in range(n)] for i in range(n)]

    def link(i, j, w):
        if w < d[i][j]:
            d[i][j] = d[j][i] = w

    for grp in groups:
        for i, j in itertools.combinations(grp, 2):
            link(i, j, 1)
    p_mid = rng.choice([0.5, 0.8, 1.0])
    for sup in supers:
        for g, h in itertools.combinations(sup, 2):
            for i in g:
                for j in h:
                    if rng.random() < p_mid:
                        link(i, j, 3)
            link(rng.choice(g), rng.choice(h), 2)
    flat = [[x for g in sup for x in g] for sup in supers]
    order = list(range(len(flat)))
    rng.shuffle(order)
    fan = rng.choice([2, 3])
    for k in range(1, len(order)):
        g, h = flat[order[k]], flat[order[rng.randrange(k)]]
        x, w = rng.choice(g), rng.randint(3, 5)
        for y in rng.sample(h, rng.randint(1, min(fan, len(h)))):
            link(x, y, w)
    perm = list(range(n))
    rng.shuffle(perm)
    d = _closure(d)
    return [[d[perm[i]][perm[j]] for j in range(n)] for i in range(n)]


def random_metric(n: int, seed, kind: str = "mixed", labels=None) -> FiniteMetricSpace:
    """Seeded random metric with positive integer distances.

    ``kind`` is ``"euclidean"`` (rounded-up distances between random points
    in the unit square or cube), ``"graph"`` (path metric of a random
    connected weighted graph), ``"clustered"`` (path metric of a graph with
    planted dense groups) or ``"mixed"`` (euclidean or graph, chosen by the
    seed).
    """
    if n < 1:
        raise ValueError("n must be positive")
    rng = random.Random(seed)
    if kind == "mixed":
        kind = rng.choice(["euclidean", "graph"])
    if kind == "euclidean":
        d = _euclidean_metric(n, rng, rng.choice([2, 3]), rng.choice([4, 6, 10]))
    elif kind == "graph":
        d = _graph_metric(n, rng, rng.choice([2, 3, 5]), rng.choice([0.2, 0.4, 0.7]))
    elif kind == "clustered":
        d = _clustered_metric(n, rng)
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return validate_metric(labels, d)


def random_dendrogram(n: int, rng: random.Random, labels=None) -> Dendrogram:
    """Random dendrogram with integer heights and frequent multi-way merges."""
    current = Partition.singletons(n)
    heights, levels = [0], [current]
    h = 0
    while len(current) > 1:
        m = len(current)
        g = rng.randint(1, m - 1)
        assign = [rng.randrange(g) for _ in range(m)]
        groups = {}
        for k, a in enumerate(assign):
            groups.setdefault(a, []).append(k)
        h += rng.randint(1, 3)
        current = current.merge(groups.values())
        heights.append(h)
        levels.append(current)
    return Dendrogram(tuple(heights), tuple(levels), labels)


def random_ultrametric(n: int, seed, labels=None):
    return dendrogram_to_ultrametric(random_dendrogram(n, random.Random(seed), labels))


def all_metrics(n: int, values=(1, 2, 3)):
    """Every metric on ``n`` points with off-diagonal entries in ``values``."""
    pairs = list(itertools.combinations(range(n), 2))
    for combo in itertools.product(values, repeat=len(pairs)):
        d = [[0] * n for _ in range(n)]
        for (i, j), v in zip(pairs, combo):
            d[i][j] = d[j][i] = v
        if all(d[i][k] <= d[i][j] + d[j][k] for i in range(n) for j in range(n) for k in range(n)):
            yield validate_metric(None, d, check_triangle=False)


def all_ultrametrics(n: int, values=(1, 2, 3)):
    from .metric import is_ultrametric

    for space in all_metrics(n, values):
        if is_ultrametric(space):
            yield space


def generate(name: str, eps=Fraction(1, 10), n: int = 8, seed=0, variant: str = "perturbed"):
    """Named instance lookup used by the CLI."""
    key = name.lower().replace("-", "_")
    if key in ("barbell", "barbell_k4"):
        base, perturbed = barbell_k4(eps)
        return perturbed if variant == "perturbed" else base
    if key == "bridged_k4":
        return bridged_k4()
    if key == "random_metric":
        return random_metric(n, seed)
    if key == "random_ultrametric":
        return random_ultrametric(n, seed)
    raise ValueError(f"unknown instance {name!r}")
