import itertools

import numpy as np
import pytest
from hypothesis import given, note, settings
from hypothesis import strategies as st

from linkgame.functions import KINDS, DistanceFunction, SemivalueWeights, banzhaf_weights, shapley_weights
from linkgame.games import (
    all_pairs_distances,
    closeness_table,
    coalition_interaction_matrix,
    permutation_interaction_matrix,
)
from linkgame.generators import generate_pa
from linkgame.graph import RandomSeed, load_edge_list
from linkgame.kernels import (
    coalition_probability_table,
    semivalue_closeness_all_pairs,
    shapley_closeness_all_pairs,
)
from linkgame.neighborhood import build_neighborhood_table
from linkgame.verify import oracle_sweep

from conftest import graphs

KS = (1, 2, 3)


def shapley(g, kind, k, **kw):
    return shapley_closeness_all_pairs(build_neighborhood_table(g, k), DistanceFunction(kind, k), **kw)


def test_path_example(path3):
    s = shapley(path3, "inverse_square", 2)
    assert s.get(0, 2) == pytest.approx(0.75, abs=1e-15)
    assert s.get(2, 0) == s.get(0, 2)


def test_star_example(star3):
    s = shapley(star3, "indicator", 1)
    for a, b in itertools.combinations((1, 2, 3), 2):
        assert s.get(a, b) == pytest.approx(1 / 3, abs=1e-15)


def test_semivalue_path_example(path3):
    t = build_neighborhood_table(path3, 2)
    s = semivalue_closeness_all_pairs(t, DistanceFunction("inverse_square", 2), shapley_weights(3))
    assert s.get(0, 2) == pytest.approx(0.75, abs=1e-15)


def test_path_per_node_decomposition(path3):
    # contributions of u = b, a, c to the index of (a, c): -0.5, -0.125, -0.125
    from linkgame.kernels import _shapley_terms, level_values

    t = build_neighborhood_table(path3, 2)
    g = level_values(t.flat, DistanceFunction("inverse_square", 2), _shapley_terms())
    flat = t.flat
    contrib = {}
    for u in range(3):
        lo, size = flat.entry_start[u], flat.entry_size[u]
        nodes = flat.entry_node[lo:lo + size].tolist()
        lv = flat.entry_level[lo:lo + size]
        contrib[u] = g[max(lv[nodes.index(0)], lv[nodes.index(2)])]
    assert contrib == pytest.approx({1: -0.5, 0: -0.125, 2: -0.125}, abs=1e-15)


def test_sweep_small_graphs():
    report = oracle_sweep(max_n=6)
    assert report.passed, report.failures[:3]
    assert report.max_error < 1e-12


@settings(max_examples=60)
@given(graphs(min_nodes=2, max_nodes=7, weighted=True), st.sampled_from(KINDS), st.sampled_from([0.5, 1.5, 2.0, 3.0]))
def test_weighted_and_disconnected_graphs_match_oracles(g, kind, k):
    note(repr(list(g.edges())))
    f = DistanceFunction(kind, k)
    table = build_neighborhood_table(g, k)
    values = closeness_table(all_pairs_distances(g), f)
    iu = np.triu_indices(g.n, 1)
    want = -permutation_interaction_matrix(values, g.n)[iu]
    got = shapley_closeness_all_pairs(table, f).to_dense()[iu]
    assert np.allclose(got, want, rtol=0, atol=1e-9)
    for w in (shapley_weights(g.n), banzhaf_weights(g.n)):
        want = -coalition_interaction_matrix(values, g.n, w)[iu]
        got = semivalue_closeness_all_pairs(table, f, w).to_dense()[iu]
        assert np.allclose(got, want, rtol=0, atol=1e-9)


@settings(max_examples=40)
@given(graphs(min_nodes=2, max_nodes=7), st.lists(st.floats(0.0, 1.0), min_size=8, max_size=8))
def test_arbitrary_semivalue_weights_match_oracle(g, raw):
    beta = np.array(raw[: g.n - 1]) + 1e-3
    w = SemivalueWeights(g.n, beta / beta.sum())
    f = DistanceFunction("inverse", 2)
    values = closeness_table(all_pairs_distances(g), f)
    got = semivalue_closeness_all_pairs(build_neighborhood_table(g, 2), f, w).to_dense()
    want = -coalition_interaction_matrix(values, g.n, w)
    iu = np.triu_indices(g.n, 1)
    assert np.allclose(got[iu], want[iu], rtol=0, atol=1e-9)


@settings(max_examples=80)
@given(graphs(min_nodes=2, max_nodes=12, weighted=True), st.sampled_from(KINDS), st.sampled_from(KS))
def test_scores_nonnegative_and_symmetric(g, kind, k):
    s = shapley(g, kind, k)
    for u, v, x in s.items():
        assert x >= 0
        assert u < v
        assert s.get(v, u) == x
    w = semivalue_closeness_all_pairs(build_neighborhood_table(g, k), DistanceFunction(kind, k), banzhaf_weights(g.n))
    assert all(x >= 0 for _, _, x in w.items())


@settings(max_examples=80)
@given(graphs(min_nodes=2, max_nodes=12), st.sampled_from(KS))
def test_locality(g, k):
    dist = all_pairs_distances(g)
    s = shapley(g, "inverse", k)
    for a, b in itertools.combinations(range(g.n), 2):
        shared = np.any((dist[a] <= k) & (dist[b] <= k))
        if not shared:
            assert (a, b) not in s
            assert s.get(a, b) == 0.0


@settings(max_examples=40)
@given(graphs(min_nodes=2, max_nodes=12), st.sampled_from(KINDS), st.floats(0.01, 100.0))
def test_positive_scaling_of_f(g, kind, c):
    from linkgame.metrics import rank_candidates
    from linkgame.graph import nonadjacent_pair_array

    t = build_neighborhood_table(g, 2)
    base = shapley_closeness_all_pairs(t, DistanceFunction(kind, 2))
    scaled = shapley_closeness_all_pairs(t, DistanceFunction(kind, 2, scale=c))
    assert np.allclose(scaled.to_dense(), c * base.to_dense(), rtol=1e-12, atol=1e-15)
    cand = nonadjacent_pair_array(g)
    if len(cand):
        a, b = rank_candidates(base, cand), rank_candidates(scaled, cand)
        assert np.array_equal(a.pairs, b.pairs)
        assert np.array_equal(a.group, b.group)


def test_shapley_semivalue_coincidence_on_pa():
    for i in range(10):
        g = generate_pa(120, 3, 2, RandomSeed(3, i))
        for k in KS:
            t = build_neighborhood_table(g, k)
            f = DistanceFunction("inverse_square", k)
            a = shapley_closeness_all_pairs(t, f).to_dense()
            b = semivalue_closeness_all_pairs(t, f, shapley_weights(g.n)).to_dense()
            assert np.max(np.abs(a - b)) <= 1e-9


@pytest.mark.parametrize("n", [2, 3, 5, 10, 50, 400, 1000])
def test_shapley_coalition_probability(n):
    # under uniform size weights, P[no coalition member among N others] = 1 / (n - 1 - N)
    W = coalition_probability_table(shapley_weights(n))
    N = np.arange(n - 1)
    assert np.allclose(W, 1.0 / (n - 1 - N), rtol=1e-9, atol=0)


@pytest.mark.parametrize("n", [2, 3, 7, 30, 200])
def test_banzhaf_coalition_probability(n):
    # each other player joins independently with probability 1/2
    W = coalition_probability_table(banzhaf_weights(n))
    assert np.allclose(W, 0.5 ** (n - 2 - np.arange(n - 1)), rtol=1e-9, atol=1e-300)


def test_dense_and_sparse_paths_agree():
    g = generate_pa(300, 3, 2, RandomSeed(8))
    t = build_neighborhood_table(g, 2)
    f = DistanceFunction("inverse", 2)
    dense = shapley_closeness_all_pairs(t, f)
    sparse = shapley_closeness_all_pairs(t, f, dense_limit=0)
    assert np.array_equal(dense.to_dense(), sparse.to_dense())
    assert len(dense) == len(sparse)


@pytest.mark.parametrize("threads", [2, 3, 8])
def test_threads_agree(threads):
    g = generate_pa(250, 3, 2, RandomSeed(6))
    t = build_neighborhood_table(g, 2)
    f = DistanceFunction("inverse_square", 2)
    one = shapley_closeness_all_pairs(t, f).to_dense()
    many = shapley_closeness_all_pairs(t, f, threads=threads).to_dense()
    assert np.max(np.abs(one - many)) <= 1e-12
    again = shapley_closeness_all_pairs(t, f, threads=threads).to_dense()
    assert np.array_equal(many, again)


def test_single_thread_is_bit_stable():
    g = generate_pa(200, 3, 2, RandomSeed(6))
    t = build_neighborhood_table(g, 3)
    f = DistanceFunction("inverse", 3)
    runs = [shapley_closeness_all_pairs(t, f).to_dense() for _ in range(3)]
    assert all(np.array_equal(runs[0], r) for r in runs)


def test_errors(path3):
    t = build_neighborhood_table(path3, 2)
    with pytest.raises(ValueError):
        shapley_closeness_all_pairs(t, DistanceFunction("inverse", 3))
    with pytest.raises(ValueError):
        semivalue_closeness_all_pairs(t, DistanceFunction("inverse", 2), shapley_weights(4))
    with pytest.raises(ValueError):
        shapley_closeness_all_pairs(t, DistanceFunction("inverse", 2), threads=0)


def test_adjacent_pairs_are_scored(triangle):
    s = shapley(triangle, "indicator", 1)
    assert len(s) == 3
    assert all(x > 0 for _, _, x in s.items())


def test_isolated_and_empty_graphs():
    g = load_edge_list("a b\nc d")
    s = shapley(g, "inverse", 2)
    assert set((u, v) for u, v, _ in s.items()) == {(0, 1), (2, 3)}
