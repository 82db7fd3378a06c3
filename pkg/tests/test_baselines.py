import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linkgame.baselines import (
    common_neighbors_scores,
    lrw_scores,
    shapley_k_degree_scores,
    srw_scores,
    walk_matrices,
    walk_profile,
)
from linkgame.enumeration import connected_graphs
from linkgame.functions import DistanceFunction
from linkgame.games import KDegreeGame, all_pairs_distances, brute_force_shapley_interaction
from linkgame.graph import Graph, load_edge_list
from linkgame.kernels import shapley_closeness_all_pairs
from linkgame.neighborhood import build_neighborhood_table

from conftest import graphs


def test_k_degree_examples(star3, path3):
    s = shapley_k_degree_scores(build_neighborhood_table(star3, 1))
    assert s.get(1, 2) == pytest.approx(1 / 3, abs=1e-15)
    p = shapley_k_degree_scores(build_neighborhood_table(path3, 1))
    assert p.get(0, 2) == pytest.approx(0.5, abs=1e-15)
    far = load_edge_list("a b\nb c\nc d\nd e")
    assert shapley_k_degree_scores(build_neighborhood_table(far, 1)).get(0, 4) == 0.0


def test_k_degree_is_the_indicator_kernel():
    g = load_edge_list("a b\nb c\nc d\nd a\nd e\ne f\nb f")
    for k in (1, 2, 3):
        t = build_neighborhood_table(g, k)
        a = shapley_k_degree_scores(t).to_dense()
        b = shapley_closeness_all_pairs(t, DistanceFunction("indicator", k)).to_dense()
        assert np.array_equal(a, b)


@settings(max_examples=25)
@given(graphs(min_nodes=2, max_nodes=6), st.sampled_from([1, 2, 3]))
def test_k_degree_against_its_own_game(g, k):
    nu = KDegreeGame(g, k)
    s = shapley_k_degree_scores(build_neighborhood_table(g, k))
    for a, b in itertools.combinations(range(g.n), 2):
        assert s.get(a, b) == pytest.approx(-brute_force_shapley_interaction(g, nu, a, b), abs=1e-9)


def test_cn_examples(star3, path3):
    assert common_neighbors_scores(build_neighborhood_table(star3, 2), 2, mode="strict").get(1, 2) == 1
    assert common_neighbors_scores(build_neighborhood_table(star3, 2), 2).get(1, 2) == 2
    for mode in ("strict", "inclusive"):
        assert common_neighbors_scores(build_neighborhood_table(path3, 2), 2, mode=mode).get(0, 2) == 1
    k4 = load_edge_list("\n".join(f"{a} {b}" for a, b in itertools.combinations("wxyz", 2)))
    cn = common_neighbors_scores(build_neighborhood_table(k4, 2), 2, mode="strict")
    assert len(cn) == 6 and all(x == 2 for _, _, x in cn.items())


def test_strict_cn_at_one_is_empty(path3):
    assert len(common_neighbors_scores(build_neighborhood_table(path3, 1), 1, mode="strict")) == 0
    assert common_neighbors_scores(build_neighborhood_table(path3, 1), 1).get(0, 2) == 1


def test_cn_errors(path3):
    t = build_neighborhood_table(path3, 1)
    with pytest.raises(ValueError):
        common_neighbors_scores(t, 2)
    with pytest.raises(ValueError):
        common_neighbors_scores(t, 1, mode="loose")


def brute_cn(g: Graph, k: int, strict: bool) -> np.ndarray:
    dist = all_pairs_distances(g)
    near = (dist < k) if strict else (dist <= k)
    np.fill_diagonal(near, False)
    out = np.zeros((g.n, g.n))
    for a, b in itertools.combinations(range(g.n), 2):
        ea = set(np.flatnonzero(near[a]).tolist())
        eb = set(np.flatnonzero(near[b]).tolist())
        out[a, b] = out[b, a] = len(ea & eb)
    return out


def brute_walk(g: Graph, t: int) -> np.ndarray:
    A = np.zeros((g.n, g.n))
    for u, v in g.edge_pairs():
        A[u, v] = A[v, u] = 1
    deg = A.sum(axis=1)
    P = np.divide(A, deg[:, None], out=np.zeros_like(A), where=deg[:, None] > 0)
    start = np.diag((deg > 0).astype(float))
    return start @ np.linalg.matrix_power(P, t)


def brute_lrw(g: Graph, t: int) -> np.ndarray:
    deg = np.array([g.degree(u) for u in range(g.n)], dtype=float)
    Pt = brute_walk(g, t)
    m = g.edge_count
    return np.array([[deg[u] / (2 * m) * Pt[u, v] + deg[v] / (2 * m) * Pt[v, u] for v in range(g.n)] for u in range(g.n)])


def nonadjacent_upper(g: Graph) -> np.ndarray:
    mask = np.triu(np.ones((g.n, g.n), dtype=bool), 1)
    for u, v in g.edge_pairs():
        mask[u, v] = False
    return mask


def all_small_graphs(max_n: int):
    for n in range(2, max_n + 1):
        for nxg in connected_graphs(n):
            yield Graph.from_networkx(nxg)


def test_cn_matches_set_intersection_on_all_small_graphs():
    for g in all_small_graphs(8):
        for k in (1, 2, 3):
            t = build_neighborhood_table(g, k)
            for mode in ("inclusive", "strict"):
                got = common_neighbors_scores(t, k, mode=mode).to_dense()
                assert np.array_equal(got, brute_cn(g, k, mode == "strict"))


def test_walks_match_matrix_powers_on_all_small_graphs():
    for g in all_small_graphs(8):
        mask = nonadjacent_upper(g)
        srw = np.zeros((g.n, g.n))
        for k in range(0, 4):
            want = brute_lrw(g, k)
            srw += want
            assert np.allclose(lrw_scores(g, k).to_dense()[mask], want[mask], rtol=0, atol=1e-12)
            assert np.allclose(srw_scores(g, k).to_dense()[mask], srw[mask], rtol=0, atol=1e-12)


@settings(max_examples=60)
@given(graphs(min_nodes=2, max_nodes=8), st.integers(0, 4))
def test_walks_match_matrix_powers_on_random_graphs(g, k):
    # includes disconnected graphs and isolated nodes
    if g.edge_count == 0:
        return
    mask = nonadjacent_upper(g)
    assert np.allclose(lrw_scores(g, k).to_dense()[mask], brute_lrw(g, k)[mask], rtol=0, atol=1e-12)
    stored = lrw_scores(g, k)
    assert all(not g.has_edge(u, v) and x != 0 for u, v, x in stored.items())


def test_walk_examples(path3):
    assert lrw_scores(path3, 2).get(0, 2) == pytest.approx(0.25, abs=1e-15)
    assert srw_scores(path3, 2).get(0, 2) == pytest.approx(0.25, abs=1e-15)
    assert lrw_scores(path3, 1).get(0, 2) == 0.0
    assert len(srw_scores(path3, 0)) == 0


def test_walk_symmetric_under_automorphism():
    cycle = load_edge_list("a b\nb c\nc d\nd e\ne f\nf a")
    s = lrw_scores(cycle, 2)
    assert s.get(0, 2) == pytest.approx(s.get(1, 3), abs=1e-15)
    assert s.get(0, 2) == s.get(2, 0)


@settings(max_examples=60)
@given(graphs(min_nodes=1, max_nodes=9), st.integers(0, 6))
def test_walk_rows_sum_to_one(g, t):
    for P in [walk_matrices(g, t)[-1]]:
        for u in range(g.n):
            total = P[u].sum()
            if g.degree(u) > 0:
                assert total == pytest.approx(1.0, abs=1e-12)
                assert np.all(P[u] >= 0)
            else:
                assert total == 0.0
    for u in range(g.n):
        prof = walk_profile(g, u, t)
        assert np.allclose(prof.probabilities, walk_matrices(g, t)[-1][u], atol=1e-15)


@settings(max_examples=40)
@given(graphs(min_nodes=2, max_nodes=8), st.integers(1, 5))
def test_srw_telescopes(g, k):
    if g.edge_count == 0:
        return
    diff = srw_scores(g, k).to_dense() - srw_scores(g, k - 1).to_dense()
    assert np.allclose(diff, lrw_scores(g, k).to_dense(), rtol=0, atol=1e-12)


def test_walk_step_errors(path3):
    for bad in (-1, 1.5):
        with pytest.raises(ValueError):
            lrw_scores(path3, bad)
        with pytest.raises(ValueError):
            walk_profile(path3, 0, bad)
