"""Alpha-unchaining single linkage, plain and starred.

Both methods sweep the distinct distance values ``t_1 < t_2 < ...`` of the
input. At each ``t_i`` the blocks of the previous level become vertices of a
graph; two blocks are joined when

  (i)  some cross distance is ``<= t_i``, and
  (ii) some Rips simplex at scale ``t_i`` meets both blocks with
       ``alpha * dim >= min(dim F(B_j), dim F(B_k))``.

The plain method merges connected components. The starred method further
splits each component into big blocks (``alpha * #B >= largest #B``) and
small ones, and only merges big blocks that are connected among themselves,
plus small groups that hang off exactly one such big group.

One quotient pass is made per ``t_i``; blocks formed at ``t_i`` are first
compared at ``t_{i+1}``.
"""

from __future__ import annotations

from dataclasses import dataclass

from ._unionfind import UnionFind
from .metric import Dendrogram, FiniteMetricSpace, Partition
from .rips import RipsEngine, _check_alpha, to_mask

__all__ = [
    "BlockGraph",
    "ComponentSplit",
    "block_graph",
    "big_small_split",
    "star_merge_relation",
    "sl_alpha_dendrogram",
    "sl_star_alpha_dendrogram",
]


def _components(vertices, edges):
    """Connected components of the subgraph induced on ``vertices``."""
    vertices = list(vertices)
    pos = {v: k for k, v in enumerate(vertices)}
    uf = UnionFind(len(vertices))
    for a, b in edges:
        if a in pos and b in pos:
            uf.union(pos[a], pos[b])
    return [tuple(vertices[k] for k in g) for g in uf.groups()]


@dataclass(frozen=True)
class BlockGraph:
    """Graph on the blocks of one level at scale ``t``.

    ``annotations[(a, b)]`` holds ``(condition_i, condition_ii)`` for every
    block pair (by position, ``a < b``) that satisfies condition i; pairs
    failing condition i cannot satisfy condition ii either, since a crossing
    simplex contains a crossing edge.
    """

    blocks: Partition
    t: object
    alpha: object
    annotations: dict
    edges: frozenset

    def annotation(self, a, b):
        if a > b:
            a, b = b, a
        return self.annotations.get((a, b), (False, False))

    def components(self):
        return _components(range(len(self.blocks)), self.edges)


def block_graph(space: FiniteMetricSpace, current: Partition, t, alpha, engine: RipsEngine | None = None) -> BlockGraph:
    _check_alpha(alpha)
    if engine is None:
        engine = RipsEngine(space)
    blocks = current.blocks
    masks = [to_mask(b) for b in blocks]
    adj = engine.adjacency(t)
    reach = []
    for b in blocks:
        r = 0
        for x in b:
            r |= adj[x]
        reach.append(r)
    annotations = {}
    edges = set()
    for a in range(len(blocks)):
        for b in range(a + 1, len(blocks)):
            if not reach[a] & masks[b]:
                continue
            ok = engine.condition_ii(masks[a], masks[b], t, alpha)
            annotations[a, b] = (True, ok)
            if ok:
                edges.add((a, b))
    return BlockGraph(current, t, alpha, annotations, frozenset(edges))


@dataclass(frozen=True)
class ComponentSplit:
    """Big/small classification of one connected component.

    Block references (``big``, ``small`` and the component tuples) are
    positions into ``blocks``; ``adjacency`` uses the same positions.
    """

    blocks: tuple
    adjacency: frozenset
    alpha: object
    big: tuple
    small: tuple
    h_components: tuple
    s_components: tuple


def big_small_split(component_blocks, adjacency, alpha) -> ComponentSplit:
    """Split a component into big and small blocks.

    A block ``B`` is big when ``alpha * #B`` reaches the size of the largest
    block of the component. ``adjacency`` is an iterable of position pairs.
    """
    _check_alpha(alpha)
    blocks = tuple(tuple(b) for b in component_blocks)
    adjacency = frozenset((min(a, b), max(a, b)) for a, b in adjacency)
    largest = max(len(b) for b in blocks)
    big = tuple(k for k, b in enumerate(blocks) if alpha * len(b) >= largest)
    small = tuple(k for k, b in enumerate(blocks) if not alpha * len(b) >= largest)
    return ComponentSplit(
        blocks=blocks,
        adjacency=adjacency,
        alpha=alpha,
        big=big,
        small=small,
        h_components=tuple(_components(big, adjacency)),
        s_components=tuple(_components(small, adjacency)),
    )


def star_merge_relation(split: ComponentSplit) -> list:
    """Equivalence classes of the starred merge rule, as position tuples.

    Blocks in one connected group of big blocks are related. A connected
    group of small blocks is related to a big group ``C`` when no big block
    outside ``C`` touches it. The classes are the transitive closure.
    """
    m = len(split.blocks)
    uf = UnionFind(m)
    for comp in split.h_components:
        for k in comp[1:]:
            uf.union(comp[0], k)
    nbrs = {k: set() for k in range(m)}
    for a, b in split.adjacency:
        nbrs[a].add(b)
        nbrs[b].add(a)
    big = set(split.big)
    for small_comp in split.s_components:
        touched = set()
        for k in small_comp:
            touched |= nbrs[k] & big
        for comp in split.h_components:
            if touched - set(comp):
                continue
            for k in small_comp:
                uf.union(comp[0], k)
    return uf.groups()


def _sweep(space: FiniteMetricSpace, alpha, step) -> Dendrogram:
    _check_alpha(alpha)
    engine = RipsEngine(space)
    current = Partition.singletons(space.n)
    heights = [0]
    levels = [current]
    for t in space.distance_values():
        if len(current) <= 1:
            break
        graph = block_graph(space, current, t, alpha, engine)
        groups = step(graph)
        if len(groups) < len(current):
            current = current.merge(groups)
            heights.append(t)
            levels.append(current)
    # At t = diameter every pair of blocks spans a full simplex, so condition
    # ii holds for any alpha >= 1 and the graph is complete.
    if len(current) > 1:
        raise RuntimeError("sweep ended at the diameter with several blocks")
    return Dendrogram(tuple(heights), tuple(levels), space.labels)


def sl_alpha_dendrogram(space: FiniteMetricSpace, alpha) -> Dendrogram:
    """Dendrogram of alpha-unchaining single linkage."""
    return _sweep(space, alpha, BlockGraph.components)


def _star_groups(graph: BlockGraph):
    blocks = graph.blocks.blocks
    groups = []
    for comp in graph.components():
        if len(comp) == 1:
            groups.append(comp)
            continue
        local = {g: k for k, g in enumerate(comp)}
        adjacency = [(local[a], local[b]) for a, b in graph.edges if a in local and b in local]
        split = big_small_split([blocks[g] for g in comp], adjacency, graph.alpha)
        for cls in star_merge_relation(split):
            groups.append(tuple(comp[k] for k in cls))
    return groups


def sl_star_alpha_dendrogram(space: FiniteMetricSpace, alpha) -> Dendrogram:
    """Dendrogram of the starred variant (big/small block rule)."""
    return _sweep(space, alpha, _star_groups)
