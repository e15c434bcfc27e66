import numpy as np
import pytest

from comma.baseline import (CandidateLayer, build_dag, candidate_locations, run_baseline,
                            shortest_matching_path)
from comma.core import Status, make_instance, match
from comma.path import build_path
from comma.spatial import build_index
from comma.verification import validate_sequence

from conftest import small_instance

FIG2 = build_path([(0, 0), (100, 0)], [50])
IDX = build_index(FIG2)


def _layer(i, taus):
    taus = np.asarray(taus, dtype=float)
    z = np.zeros(taus.size)
    return CandidateLayer(i, z.astype(np.int64), z, taus, np.zeros((taus.size, 2)))


def test_endpoint_candidates():
    layer = candidate_locations(FIG2, IDX, (95, 0), 10)
    assert layer.tau.tolist() == [50.0]
    assert layer.xy.tolist() == [[100.0, 0.0]]


def test_blind_spot_has_no_candidates():
    assert len(candidate_locations(FIG2, IDX, (50, 0), 10)) == 0
    assert len(candidate_locations(FIG2, IDX, (0, 0), 10)) == 1  # only the start node


def test_sampled_candidates():
    layer = candidate_locations(FIG2, IDX, (95, 0), 10, sampling_distance=1.0)
    # the closed disk reaches back to x = 85 exactly
    assert layer.xy[:, 0].tolist() == [float(x) for x in range(85, 101)]
    assert np.allclose(layer.tau, layer.xy[:, 0] / 2)


def test_sampling_distance_must_be_positive():
    with pytest.raises(ValueError):
        candidate_locations(FIG2, IDX, (95, 0), 10, sampling_distance=0.0)


def test_dag_examples():
    assert build_dag([_layer(0, [0]), _layer(1, [50])], [0, 40]).edge_count == 0
    dag = build_dag([_layer(0, [0]), _layer(1, [30])], [0, 40])
    assert dag.edge_count == 1 and dag.edges[0][2].tolist() == [30.0]


def test_dag_edge_count_matches_pairwise_predicate():
    rng = np.random.default_rng(41)
    for _ in range(50):
        a = np.sort(rng.uniform(0, 20, rng.integers(1, 30)))
        b = np.sort(rng.uniform(0, 20, rng.integers(1, 30)))
        dt = float(rng.uniform(0, 10))
        dag = build_dag([_layer(0, a), _layer(1, b)], [0, dt])
        want = sum(1 for x in a for y in b if 0 <= y - x <= dt)
        assert dag.edge_count == want <= a.size * b.size


def test_shortest_path_prefers_least_travel_time():
    dag = build_dag([_layer(0, [0, 4]), _layer(1, [5, 9]), _layer(2, [9, 10])], [0, 10, 20])
    locs, failed = shortest_matching_path(dag)
    assert failed is None
    assert [l.tau for l in locs] == [4, 5, 9]


def test_crossing_false_negative(crossing):
    res = run_baseline(crossing, None)
    assert res.status is Status.INFEASIBLE and res.failed_index == 1 and res.edges == 0
    assert match(crossing).feasible


def test_crossing_with_sampling(crossing):
    res = run_baseline(crossing, 1.0)
    assert res.feasible
    assert validate_sequence(crossing, res.locations).ok


def test_single_layer(crossing):
    inst = make_instance(crossing.path, crossing.positions[1:], [0.0], 10)
    res = run_baseline(inst, None)
    assert res.feasible and res.locations[0].tau == 50.0


def test_baseline_outputs_are_valid_and_never_beat_comma():
    for seed in range(100):
        inst = small_instance(seed)
        ok = match(inst).feasible
        for d in (None, 0.1, 0.05):
            res = run_baseline(inst, d)
            if res.feasible:
                assert ok
                assert validate_sequence(inst, res.locations).ok


def test_halving_d_never_loses_candidates():
    inst = small_instance(3)
    idx = build_index(inst.path)
    for p in inst.positions:
        coarse = candidate_locations(inst.path, idx, p, inst.radius, 0.1)
        fine = candidate_locations(inst.path, idx, p, inst.radius, 0.05)
        assert set(coarse.tau.tolist()) <= set(fine.tau.tolist())
