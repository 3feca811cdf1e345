import math
from fractions import Fraction

import pytest
from conftest import metric_spaces, ultrametrics
from hypothesis import given
from hypothesis import strategies as st
from oracles import brute_unchaining, levels_of

from unchain import (
    LinkageKind,
    Partition,
    big_small_split,
    block_graph,
    dendrogram_to_ultrametric,
    refines,
    sl_alpha_dendrogram,
    sl_mst_oracle,
    sl_star_alpha_dendrogram,
    standard_linkage_dendrogram,
)
from unchain.unchaining import star_merge_relation

ALPHAS = [1, Fraction(3, 2), 2, 3]
TWO_CLIQUES = Partition([[0, 1, 2, 3], [4, 5, 6, 7]])


def _cross_values(u):
    return {u.d(i, j) for i in range(4) for j in range(4, 8)}


def _within_values(u):
    return {u.d(i, j) for blk in (range(4), range(4, 8)) for i in blk for j in blk if i != j}


# -- block graph ---------------------------------------------------------------

def test_singleton_block_graph_has_threshold_edges(abc):
    g = block_graph(abc, Partition.singletons(3), 2, 1)
    assert g.edges == {(0, 1), (1, 2)}
    assert g.annotation(0, 2) == (False, False)
    assert g.annotation(1, 0) == (True, True)


def test_two_cliques_pass_condition_i_but_not_ii_at_alpha_one(barbell):
    g = block_graph(barbell[1], TWO_CLIQUES, Fraction(11, 10), 1)
    assert g.annotation(0, 1) == (True, False)
    assert not g.edges


def test_two_cliques_connect_at_alpha_three(barbell):
    g = block_graph(barbell[1], TWO_CLIQUES, Fraction(11, 10), 3)
    assert g.edges == {(0, 1)}
    assert g.components() == [(0, 1)]


# -- big / small ---------------------------------------------------------------

def _blocks(*sizes):
    out, start = [], 0
    for s in sizes:
        out.append(list(range(start, start + s)))
        start += s
    return out


def test_equal_blocks_are_big():
    split = big_small_split(_blocks(4, 4), [(0, 1)], 1)
    assert split.big == (0, 1) and split.small == ()


def test_size_ratio_decides_bigness():
    split = big_small_split(_blocks(5, 2, 1), [(0, 1), (1, 2)], 2)
    assert split.big == (0,)
    assert split.small == (1, 2)
    assert split.s_components == ((1, 2),)


def test_lone_block_is_big():
    split = big_small_split(_blocks(3), [], 1)
    assert split.big == (0,)


def test_connected_big_blocks_form_one_class():
    split = big_small_split(_blocks(4, 4, 1), [(0, 1), (1, 2)], 1)
    assert star_merge_relation(split) == [[0, 1, 2]]


def test_small_block_between_two_big_groups_stays_apart():
    split = big_small_split(_blocks(4, 1, 4), [(0, 1), (1, 2)], 1)
    assert split.h_components == ((0,), (2,))
    assert star_merge_relation(split) == [[0], [1], [2]]


def test_pendant_small_block_joins_its_big_group():
    split = big_small_split(_blocks(4, 1), [(0, 1)], 1)
    assert star_merge_relation(split) == [[0, 1]]


def test_alpha_below_one_rejected():
    with pytest.raises(ValueError):
        big_small_split(_blocks(2, 2), [(0, 1)], Fraction(1, 2))


# -- worked instances --------------------------------------------------------------

def test_barbell_alpha_one_merges_late(barbell):
    _, pert = barbell
    d = sl_alpha_dendrogram(pert, 1)
    assert d.heights == (0, 1, Fraction(21, 10))
    assert d.at(1) == TWO_CLIQUES
    assert d.at(Fraction(2)) == TWO_CLIQUES
    u = dendrogram_to_ultrametric(d)
    assert _within_values(u) == {1}
    assert _cross_values(u) == {Fraction(21, 10)}


def test_barbell_alpha_two_still_waits(barbell):
    assert sl_alpha_dendrogram(barbell[1], 2).heights == (0, 1, Fraction(21, 10))


def test_barbell_alpha_three_merges_at_the_bridge(barbell):
    u = dendrogram_to_ultrametric(sl_alpha_dendrogram(barbell[1], 3))
    assert _cross_values(u) == {Fraction(11, 10)}


def test_unperturbed_barbell_collapses_at_one(barbell):
    base, _ = barbell
    for alpha in (1, 3):
        assert sl_alpha_dendrogram(base, alpha).heights == (0, 1)
        assert sl_star_alpha_dendrogram(base, alpha).heights == (0, 1)


def test_bridge_plain_methods_chain_through_the_midpoint(bridge):
    for d in (standard_linkage_dendrogram(bridge, LinkageKind.SINGLE), sl_alpha_dendrogram(bridge, 1)):
        assert d.heights == (0, 1, 2)


def test_bridge_starred_method_keeps_three_classes(bridge):
    d = sl_star_alpha_dendrogram(bridge, 1)
    assert d.heights == (0, 1, 5)
    m = bridge.index("m")
    three = Partition([[0, 1, 2, 3], [m], [5, 6, 7, 8]])
    for t in (2, 3, 4, Fraction(49, 10)):
        assert d.at(t) == three
    assert len(d.at(5)) == 1


@pytest.mark.parametrize("star", [False, True])
def test_bridge_matches_independent_recursion(bridge, star):
    fn = sl_star_alpha_dendrogram if star else sl_alpha_dendrogram
    assert levels_of(fn(bridge, 1)) == brute_unchaining(bridge.to_lists(), 1, star)


# -- properties ------------------------------------------------------------------

@given(metric_spaces(min_n=1, max_n=7), st.sampled_from(ALPHAS), st.booleans())
def test_matches_independent_recursion(space, alpha, star):
    fn = sl_star_alpha_dendrogram if star else sl_alpha_dendrogram
    assert levels_of(fn(space, alpha)) == brute_unchaining(space.to_lists(), alpha, star)


@given(metric_spaces(min_n=2, max_n=9), st.sampled_from(ALPHAS), st.booleans())
def test_output_dominates_single_linkage(space, alpha, star):
    fn = sl_star_alpha_dendrogram if star else sl_alpha_dendrogram
    u = dendrogram_to_ultrametric(fn(space, alpha))
    u_sl = sl_mst_oracle(space)
    assert all(u.d(i, j) >= u_sl.d(i, j) for i in range(space.n) for j in range(space.n))


@given(metric_spaces(min_n=2, max_n=9), st.sampled_from(ALPHAS), st.booleans())
def test_every_level_refines_the_single_linkage_level(space, alpha, star):
    fn = sl_star_alpha_dendrogram if star else sl_alpha_dendrogram
    d = fn(space, alpha)
    sl = standard_linkage_dendrogram(space, LinkageKind.SINGLE)
    for h in d.heights:
        assert refines(d.at(h), sl.at(h))


@given(ultrametrics(max_n=9), st.sampled_from(ALPHAS))
def test_ultrametrics_are_fixed_points(u, alpha):
    sl = standard_linkage_dendrogram(u, LinkageKind.SINGLE)
    assert sl_alpha_dendrogram(u, alpha) == sl
    assert sl_star_alpha_dendrogram(u, alpha) == sl


@given(metric_spaces(min_n=3, max_n=9))
def test_large_alpha_collapses_to_single_linkage(space):
    n = space.n
    sl = standard_linkage_dendrogram(space, LinkageKind.SINGLE)
    assert sl_alpha_dendrogram(space, max(1, math.ceil((n - 2) / 2))) == sl
    assert sl_star_alpha_dendrogram(space, n - 1) == sl


@given(metric_spaces(min_n=2, max_n=8), st.sampled_from(ALPHAS))
def test_star_classes_sit_inside_plain_components(space, alpha):
    # At each scale the starred step merges within components of the same
    # block graph that the plain step would quotient by.
    d = sl_star_alpha_dendrogram(space, alpha)
    for t, prev, nxt in zip(d.heights[1:], d.levels, d.levels[1:]):
        g = block_graph(space, prev, t, alpha)
        comp_of = {}
        for c, comp in enumerate(g.components()):
            for k in comp:
                for x in prev.blocks[k]:
                    comp_of[x] = c
        for block in nxt.blocks:
            assert len({comp_of[x] for x in block}) == 1


@given(metric_spaces(min_n=2, max_n=8), st.sampled_from(ALPHAS))
def test_every_small_group_touches_a_big_block(space, alpha):
    d = sl_star_alpha_dendrogram(space, alpha)
    for t, prev in zip(d.heights[1:], d.levels):
        g = block_graph(space, prev, t, alpha)
        for comp in g.components():
            local = {b: k for k, b in enumerate(comp)}
            adj = [(local[a], local[b]) for a, b in g.edges if a in local and b in local]
            split = big_small_split([prev.blocks[b] for b in comp], adj, alpha)
            big = set(split.big)
            for sc in split.s_components:
                assert any((a in sc and b in big) or (b in sc and a in big) for a, b in split.adjacency)


def test_two_points_merge_at_their_distance():
    from unchain import validate_metric

    s = validate_metric(None, [[0, 3], [3, 0]])
    for fn in (sl_alpha_dendrogram, sl_star_alpha_dendrogram):
        assert fn(s, 1).heights == (0, 3)
