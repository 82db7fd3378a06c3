import itertools

import hypothesis.strategies as st
import pytest
from hypothesis import HealthCheck, settings

from linkgame.graph import Graph, load_edge_list

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")


@pytest.fixture
def path3():
    return load_edge_list("a b\nb c")


@pytest.fixture
def star3():
    return load_edge_list("c l1\nc l2\nc l3")


@pytest.fixture
def triangle():
    return load_edge_list("a b\nb c\na c")


@st.composite
def graphs(draw, min_nodes=2, max_nodes=8, weighted=False, connected=False, edge_prob=None):
    """Random simple graphs on ``0..n-1``. With ``weighted``, weights come from
    a small set of dyadic values so that sums stay exact and ties occur."""
    n = draw(st.integers(min_nodes, max_nodes))
    possible = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.booleans(), min_size=len(possible), max_size=len(possible)))
    edges = {e for e, keep in zip(possible, chosen) if keep}
    if connected:
        order = draw(st.permutations(range(n)))
        for i in range(1, n):
            parent = order[draw(st.integers(0, i - 1))]
            edges.add(tuple(sorted((parent, order[i]))))
    out = []
    for u, v in sorted(edges):
        w = draw(st.sampled_from([0.5, 1.0, 1.5, 2.0, 2.5])) if weighted else 1.0
        out.append((u, v, w))
    return Graph.from_edges([str(i) for i in range(n)], out)
