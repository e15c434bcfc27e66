import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from comma.core import (ExtractionError, Status, backward_step, backward_sweep, compute_intervals,
                        disk_intervals, extract_sequence, forward_step, forward_sweep,
                        make_instance, match)
from comma.path import ValidationError, build_path
from comma.spatial import build_index
from comma.verification import greedy_earliest_feasibility, validate_sequence

from conftest import small_instance

FIG2 = build_path([(0, 0), (100, 0)], [50])


def test_crossing_intervals():
    idx = build_index(FIG2)
    assert disk_intervals(FIG2, idx, (95, 0), 10) == [(42.5, 50.0)]
    assert disk_intervals(FIG2, idx, (0, 0), 10) == [(0.0, 5.0)]
    assert disk_intervals(FIG2, idx, (50, 50), 10) == []


def test_intervals_across_nodes_merge():
    p = build_path([(0, 0), (1, 0), (2, 0), (3, 0)], [1, 1, 1])
    assert disk_intervals(p, build_index(p), (1.5, 0), 1.0) == [(0.5, 2.5)]


def test_intervals_of_returning_path():
    # the path leaves the disk and comes back
    p = build_path([(0, 0), (10, 0), (10, 1), (0, 1)], [10, 1, 10])
    got = disk_intervals(p, build_index(p), (0, 0.5), 2.0)
    assert len(got) == 2
    assert got[0][0] == 0.0 and got[1][1] == 21.0


def test_indexed_intervals_equal_naive():
    for seed in range(30):
        inst = small_instance(seed)
        a, _ = compute_intervals(inst.path, inst.positions, inst.radius)
        b, _ = compute_intervals(inst.path, inst.positions, inst.radius, naive=True)
        assert a == b


def test_forward_step_examples():
    assert forward_step([(0, 5)], [(12, 20)], 10) == [(12, 15)]
    assert forward_step([(0, 5)], [(16, 20)], 10) == []
    assert forward_step([(0, 4), (6, 9)], [(3, 10)], 1) == [(3, 5), (6, 10)]


def test_forward_step_cannot_go_back():
    assert forward_step([(10, 12)], [(0, 5)], 100) == []
    assert forward_step([(10, 12)], [(0, 11)], 100) == [(10, 11)]


def test_backward_step_examples():
    assert backward_step([(0, 5)], [(12, 15)], 10) == [(2, 5)]
    assert backward_step([(0, 1)], [(12, 15)], 10) == []


def test_sweep_reports_first_empty():
    sets, failed = forward_sweep([[(0, 5)], [(12, 15)], [(100, 101)]], [0, 10, 20])
    assert failed == 2
    sets, failed = backward_sweep([[(0, 1)], [(12, 15)], [(20, 25)]], [0, 10, 20])
    assert failed == 0


def test_extraction_examples():
    assert extract_sequence([[(2, 5)], [(12, 15)]], [0, 10]) == [5, 15]
    assert extract_sequence([[(0, 5)]], [0]) == [5]
    assert extract_sequence([[(2, 5)], [(12, 15)]], [0, 10], "earliest") == [2, 12]
    with pytest.raises(ExtractionError):
        extract_sequence([[(0, 5)], []], [0, 1])
    with pytest.raises(ValueError):
        extract_sequence([[(0, 5)]], [0], "middle")


def test_crossing_match(crossing):
    res = match(crossing)
    assert res.status is Status.FEASIBLE
    assert [l.tau for l in res.locations] == [5.0, 45.0]
    assert [tuple(l.point) for l in res.locations] == [(10.0, 0.0), (90.0, 0.0)]
    assert res.intervals == [[(2.5, 5.0)], [(42.5, 45.0)]]
    assert set(res.timings) == {"index", "intervals", "sweeps", "extraction"}


def test_crossing_earliest(crossing):
    res = match(crossing, "earliest")
    assert [l.tau for l in res.locations] == [2.5, 42.5]


def test_crossing_too_little_time(crossing):
    inst = make_instance(crossing.path, crossing.positions, [0, 30], 10)
    res = match(inst)
    assert res.status is Status.INFEASIBLE and res.failed_index == 1 and res.locations is None


def test_disk_missing_path(crossing):
    inst = make_instance(crossing.path, [(0, 0), (50, 40), (95, 0)], [0, 20, 40], 10)
    res = match(inst)
    assert res.status is Status.INFEASIBLE and res.failed_index == 1


def test_rejects_decreasing_timestamps(crossing):
    with pytest.raises(ValidationError):
        make_instance(crossing.path, crossing.positions, [40, 0], 10)
    with pytest.raises(ValidationError):
        make_instance(crossing.path, crossing.positions, [0, 40], 0)


def test_naive_flag_gives_same_answer():
    for seed in range(20):
        inst = small_instance(seed)
        a, b = match(inst), match(inst, naive=True)
        assert a.status == b.status and a.intervals == b.intervals


def _grid_reach(sets, ts, h):
    """Reachable grid points of the last set (brute force over a fine grid)."""
    reach = None
    for i, s in enumerate(sets):
        g = np.unique(np.concatenate([np.arange(a, b + h / 2, h) for a, b in s] +
                                     [np.array([x for iv in s for x in iv])]))
        if i:
            dt = ts[i] - ts[i - 1]
            g = np.array([x for x in g if np.any((reach <= x + 1e-12) & (x - reach <= dt + 1e-12))])
        reach = g
    return reach


def test_overlap_example_against_grid():
    prev, cur = [(0, 4), (6, 9)], [(3, 10)]
    got = forward_step(prev, cur, 1)
    pts = _grid_reach([prev, cur], [0, 1], 1 / 64)
    inside = [any(a - 1e-12 <= x <= b + 1e-12 for a, b in got) for x in pts]
    assert all(inside)
    # and no grid point of ``cur`` outside the result is reachable
    outside = [x for x in np.arange(3, 10, 1 / 64) if not any(a <= x <= b for a, b in got)]
    assert not set(np.round(outside, 9)) & set(np.round(pts, 9))


interval_sets = st.lists(
    st.tuples(st.integers(0, 60), st.integers(0, 8)), min_size=0, max_size=5
).map(lambda xs: _normalise([(a, a + w) for a, w in xs]))


def _normalise(ivs):
    out = []
    for a, b in sorted(ivs):
        if out and a <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], b))
        else:
            out.append((float(a), float(b)))
    return out


@settings(max_examples=300, deadline=None)
@given(interval_sets, interval_sets, st.integers(0, 20))
def test_forward_step_is_exact_on_grid(prev, cur, dt):
    got = forward_step(prev, cur, float(dt))
    # half-integer grid is exact for integer inputs
    for x2 in range(0, 2 * 70):
        x = x2 / 2
        in_cur = any(a <= x <= b for a, b in cur)
        reachable = in_cur and any(a <= x and x - min(b, x) <= dt for a, b in prev)
        assert reachable == any(a <= x <= b for a, b in got), (x, prev, cur, dt, got)


@settings(max_examples=300, deadline=None)
@given(interval_sets, interval_sets, st.integers(0, 20))
def test_backward_step_is_exact_on_grid(cur, nxt, dt):
    got = backward_step(cur, nxt, float(dt))
    for x2 in range(0, 2 * 70):
        x = x2 / 2
        in_cur = any(a <= x <= b for a, b in cur)
        reachable = in_cur and any(b >= x and max(a, x) - x <= dt for a, b in nxt)
        assert reachable == any(a <= x <= b for a, b in got), (x, cur, nxt, dt, got)


@settings(max_examples=200, deadline=None)
@given(st.lists(interval_sets, min_size=1, max_size=5), st.lists(st.integers(0, 15), min_size=4, max_size=4))
def test_sweeps_shrink_and_are_idempotent(sets, gaps):
    ts = np.concatenate([[0], np.cumsum(gaps)])[:len(sets)]
    fwd, failed = forward_sweep(sets, ts)
    if failed is None:
        both, failed = backward_sweep(fwd, ts)
    if failed is not None:
        return
    for old, new in zip(sets, both):
        for a, b in new:
            assert any(x <= a and b <= y for x, y in old)
    again, f2 = forward_sweep(both, ts)
    again, f3 = backward_sweep(again, ts)
    assert f2 is None and f3 is None and again == both
    taus = extract_sequence(both, ts)
    assert greedy_earliest_feasibility(sets, ts).feasible
    for i in range(1, len(taus)):
        assert 0 <= taus[i] - taus[i - 1] <= ts[i] - ts[i - 1]


def test_random_matches_are_valid():
    feasible = 0
    for seed in range(200):
        inst = small_instance(seed)
        for strategy in ("latest", "earliest"):
            res = match(inst, strategy)
            if res.feasible:
                feasible += 1
                assert validate_sequence(inst, res.locations).ok
    assert feasible > 50


@settings(max_examples=300, deadline=None)
@given(st.lists(interval_sets, min_size=1, max_size=5), st.lists(st.integers(0, 15), min_size=4, max_size=4))
def test_sweeps_decide_like_reachability(sets, gaps):
    ts = np.concatenate([[0], np.cumsum(gaps)])[:len(sets)]
    fwd, failed = forward_sweep(sets, ts)
    if failed is None:
        _, failed = backward_sweep(fwd, ts)
    assert (failed is None) == greedy_earliest_feasibility(sets, ts).feasible
