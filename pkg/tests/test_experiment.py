import json

import numpy as np
import pytest

from linkgame.datasets import load_dataset
from linkgame.experiment import (
    ExperimentConfig,
    MethodSpec,
    benchmark_csv,
    normalize_method,
    run_experiment,
    run_trial,
    runtime_benchmark,
    score_graph,
)
from linkgame.scores import PairScores


@pytest.fixture(scope="module")
def karate():
    return load_dataset("karate")


def config(**kw):
    base = dict(dataset="karate", methods=(MethodSpec("shapley-closeness", 1), MethodSpec("shapley-closeness", 2)), trials=4, seed=3)
    base.update(kw)
    return ExperimentConfig(**base)


def oracle_scorer(observed, missing, k):
    return PairScores.from_pairs(observed.n, {p: 1.0 for p in missing})


def constant_scorer(observed, missing, k):
    n = observed.n
    return PairScores.from_dense(np.full((n, n), 2.5) - np.diag(np.full(n, 2.5)))


def test_trial_is_deterministic(karate):
    a = run_trial(karate, config(), 2)
    b = run_trial(karate, config(), 2)
    assert a == b
    c = run_trial(karate, config(), 3)
    assert a.auc != c.auc


def test_oracle_and_constant_scorers(karate):
    out = run_trial(karate, config(), 0, extra={"oracle": (1, oracle_scorer), "constant": (1, constant_scorer)})
    assert out.auc[("oracle", 1)] == 1.0
    assert out.precision[("oracle", 1)] == 1.0
    assert out.auc[("constant", 1)] == 0.5
    assert out.precision[("constant", 1)] == pytest.approx(out.missing / out.candidates, abs=1e-15)
    assert out.missing == 23
    assert out.candidates == 34 * 33 // 2 - (78 - 23)


def test_report_is_deterministic_and_well_formed(karate):
    a = run_experiment(config(), karate)
    b = run_experiment(config(), karate)
    assert a.to_csv() == b.to_csv() and a.to_json() == b.to_json()
    lines = a.to_csv().splitlines()
    assert lines[0] == "method,k,metric,mean,stddev,trials"
    assert len(lines) == 1 + 2 * 2
    for r in a.rows:
        assert 0 <= r.mean <= 100 and r.trials == 4
    doc = json.loads(a.to_json())
    assert doc["metadata"]["seed"] == 3
    assert doc["metadata"]["dataset_checksum"] == karate.checksum()
    assert doc["config"]["trials"] == 4
    assert set(doc["mean_ball_size"]) == {"1", "2"}
    assert a.value("shapley-closeness(inverse_square)", 1) == a.rows[0].mean


def test_stddev_is_sample_stddev(karate):
    r = run_experiment(config(), karate)
    vals = [100 * o.auc[("shapley-closeness(inverse_square)", 1)] for o in r.outcomes]
    assert r.rows[0].stddev == pytest.approx(np.std(vals, ddof=1), abs=1e-12)


def test_workers_match_serial(karate):
    serial = run_experiment(config(), karate)
    parallel = run_experiment(config(workers=2), karate)
    for a, b in zip(serial.rows, parallel.rows):
        assert abs(a.mean - b.mean) <= 1e-12 and abs(a.stddev - b.stddev) <= 1e-12


def test_all_methods_run(karate):
    methods = [
        MethodSpec("shapley-closeness", 2, f="inverse"),
        MethodSpec("semivalue-closeness", 2, weights="banzhaf"),
        MethodSpec("shapley-degree", 2),
        MethodSpec("cn", 1),
        MethodSpec("cn", 1, cn_mode="strict"),
        MethodSpec("lrw", 3),
        MethodSpec("srw", 3),
    ]
    r = run_experiment(config(methods=methods, trials=2), karate)
    assert r.value("cn(strict)", 1) == 50.0
    assert {row.method for row in r.rows} == {m.name for m in methods}


def test_score_graph_uses_given_table(karate):
    from linkgame.neighborhood import build_neighborhood_table

    with pytest.raises(ValueError):
        score_graph(karate, MethodSpec("shapley-closeness", 2), build_neighborhood_table(karate, 1))


def test_config_validation():
    with pytest.raises(ValueError):
        config(fraction=1.5)
    with pytest.raises(ValueError):
        config(trials=0)
    with pytest.raises(ValueError):
        config(methods=())
    with pytest.raises(ValueError):
        MethodSpec("adamic-adar", 1)
    with pytest.raises(ValueError):
        MethodSpec("shapley-closeness", 0)
    assert MethodSpec("lrw", 0).k == 0
    assert normalize_method("Shp_Cls") == "shapley-closeness"


def test_benchmark_rows():
    rows = runtime_benchmark([40, 60], 3, 2, [1, 2], ["shapley-closeness", "cn"], repeats=2)
    assert len(rows) == 2 * 2 * 2
    csv = benchmark_csv(rows)
    assert csv.splitlines()[0] == "n,k,method,mean_ms,mean_ball_size,repeats"
    assert len(csv.splitlines()) == 9
    v1 = [r.mean_ball_size for r in rows if r.k == 1 and r.n == 60]
    assert v1[0] == pytest.approx(1 + 2 * (3 + 57 * 2) / 60)
