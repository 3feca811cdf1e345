import itertools
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from unchain import barbell_k4, bridged_k4, validate_metric
from unchain.metric import Dendrogram, Partition, dendrogram_to_ultrametric

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def _closure(d):
    n = len(d)
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    return d


@st.composite
def metric_matrices(draw, min_n=1, max_n=7, max_w=5, rational=False):
    """Square matrices of path-metric distances with small integer or
    rational weights (closure of a complete weighted graph)."""
    n = draw(st.integers(min_n, max_n))
    if rational:
        weight = st.fractions(min_value=Fraction(1, 4), max_value=max_w, max_denominator=4)
    else:
        weight = st.integers(1, max_w)
    d = [[0] * n for _ in range(n)]
    for i, j in itertools.combinations(range(n), 2):
        d[i][j] = d[j][i] = draw(weight)
    return _closure(d)


@st.composite
def metric_spaces(draw, **kw):
    return validate_metric(None, draw(metric_matrices(**kw)))


@st.composite
def dendrograms(draw, min_n=1, max_n=8):
    n = draw(st.integers(min_n, max_n))
    current = Partition.singletons(n)
    heights, levels = [0], [current]
    h = 0
    while len(current) > 1:
        m = len(current)
        g = draw(st.integers(1, m - 1))
        assign = draw(st.lists(st.integers(0, g - 1), min_size=m, max_size=m))
        groups = {}
        for k, a in enumerate(assign):
            groups.setdefault(a, []).append(k)
        h += draw(st.integers(1, 3))
        current = current.merge(groups.values())
        heights.append(h)
        levels.append(current)
    return Dendrogram(tuple(heights), tuple(levels))


@st.composite
def ultrametrics(draw, **kw):
    return dendrogram_to_ultrametric(draw(dendrograms(**kw)))


@pytest.fixture
def barbell():
    return barbell_k4(Fraction(1, 10))


@pytest.fixture
def bridge():
    return bridged_k4()


@pytest.fixture
def abc():
    return validate_metric(["a", "b", "c"], [[0, 1, 3], [1, 0, 2], [3, 2, 0]])
