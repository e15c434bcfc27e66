"""Continuous map matching on a path.

Every measurement gets the set of path-time intervals inside its disk.  A
forward sweep then keeps only the points reachable from the previous set and
a backward sweep only the points that can still reach the next one.  After
both sweeps every remaining point lies on some feasible sequence, so a
sequence is read off greedily.
"""

from __future__ import annotations

import enum
import time
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from . import kernels
from .geometry import DEFAULT_EPS, Point2
from .path import EmbeddedPath, PathLocation, ValidationError, locate
from .spatial import SegmentIndex, build_index

Interval = tuple[float, float]
IntervalSet = list[Interval]

REL_TOL = 1e-9


class Measurement(NamedTuple):
    position: Point2
    timestamp: float


@dataclass(frozen=True, eq=False)
class Instance:
    path: EmbeddedPath
    positions: np.ndarray
    timestamps: np.ndarray
    radius: float

    @property
    def k(self) -> int:
        return self.timestamps.shape[0]

    @property
    def measurements(self) -> list[Measurement]:
        return [Measurement(Point2(float(x), float(y)), float(t))
                for (x, y), t in zip(self.positions, self.timestamps)]

    def with_radius(self, radius: float) -> "Instance":
        return make_instance(self.path, self.positions, self.timestamps, radius)

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return (self.path == other.path and self.radius == other.radius
                and np.array_equal(self.positions, other.positions)
                and np.array_equal(self.timestamps, other.timestamps))


def make_instance(path: EmbeddedPath, positions, timestamps, radius: float) -> Instance:
    pos = np.ascontiguousarray(positions, dtype=np.float64)
    ts = np.ascontiguousarray(timestamps, dtype=np.float64).reshape(-1)
    if pos.ndim != 2 or pos.shape[1] != 2:
        raise ValidationError(f"positions must have shape (k, 2), got {pos.shape}")
    if pos.shape[0] != ts.shape[0]:
        raise ValidationError(f"{pos.shape[0]} positions but {ts.shape[0]} timestamps")
    if ts.shape[0] < 1:
        raise ValidationError("need at least one measurement")
    if not (np.isfinite(pos).all() and np.isfinite(ts).all()):
        raise ValidationError("measurements must be finite")
    dec = np.flatnonzero(np.diff(ts) < 0)
    if dec.size:
        i = int(dec[0]) + 1
        raise ValidationError(f"timestamp of measurement {i} ({ts[i]}) precedes the previous one")
    radius = float(radius)
    if not (np.isfinite(radius) and radius > 0):
        raise ValidationError(f"radius must be positive and finite, got {radius}")
    pos.setflags(write=False)
    ts.setflags(write=False)
    return Instance(path, pos, ts, radius)


class Status(str, enum.Enum):
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"


@dataclass
class MatchResult:
    status: Status
    locations: list[PathLocation] | None
    failed_index: int | None
    intervals: list[IntervalSet]
    timings: dict[str, float] = field(default_factory=dict)
    stats: dict[str, int] = field(default_factory=dict)

    @property
    def feasible(self) -> bool:
        return self.status is Status.FEASIBLE


class IntervalParityError(RuntimeError):
    """A disk produced an odd number of boundary stamps (tolerance failure)."""


def _pair(stamps: np.ndarray) -> IntervalSet:
    out: IntervalSet = []
    for a, b in stamps.reshape(-1, 2).tolist():
        if out and a <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], b))
        else:
            out.append((a, b))
    return out


def compute_intervals(path: EmbeddedPath, centers, r: float, index: SegmentIndex | None = None,
                      *, naive: bool = False, eps: float = DEFAULT_EPS) -> tuple[list[IntervalSet], int]:
    """Interval sets of the path inside each disk; returns ``(sets, visited_nodes)``.

    With ``naive`` every segment is tested for every disk instead of walking
    the index.
    """
    centers = np.ascontiguousarray(centers, dtype=np.float64).reshape(-1, 2)
    if naive:
        boxes, size = np.zeros((2, 4)), 1
    else:
        index = index if index is not None else build_index(path)
        boxes, size = index.boxes, index.size
    stamps, offsets, visited, bad = kernels.disk_stamps(
        boxes, size, path.nodes, path.prefix_time, path.edge_time, centers,
        float(r), float(eps), not naive)
    if bad >= 0:
        raise IntervalParityError(f"odd number of boundary crossings for disk {bad}")
    sets = [_pair(stamps[offsets[i]:offsets[i + 1]]) for i in range(centers.shape[0])]
    return sets, int(visited)


def disk_intervals(path: EmbeddedPath, index: SegmentIndex | None, measurement, r: float,
                   eps: float = DEFAULT_EPS) -> IntervalSet:
    """Path-time intervals of ``path`` inside the closed disk around one measurement."""
    pos = measurement.position if isinstance(measurement, Measurement) else measurement
    sets, _ = compute_intervals(path, [pos], r, index, eps=eps)
    return sets[0]


def _merge(pieces: list[Interval]) -> IntervalSet:
    out: IntervalSet = []
    for a, b in pieces:
        if out and a <= out[-1][1]:
            if b > out[-1][1]:
                out[-1] = (out[-1][0], b)
        else:
            out.append((a, b))
    return out


def forward_step(prev: IntervalSet, cur: IntervalSet, dt: float, tol: float = 0.0) -> IntervalSet:
    """Points of ``cur`` reachable within ``dt`` from some point of ``prev``.

    Each interval of ``cur`` is cut at the start points of the ``prev``
    intervals overlapping it; a piece starting in ``prev[j]`` ends no later
    than ``prev[j].b + dt``.
    """
    starts = [a for a, _ in prev]
    pieces = []
    for a, b in cur:
        j = max(bisect_right(starts, a) - 1, 0)
        while j < len(prev) and prev[j][0] <= b:
            pa, pb = prev[j]
            lo = a if a > pa else pa
            hi = min(b, pb + dt)
            if hi >= lo - tol:
                pieces.append((lo, hi if hi > lo else lo))
            j += 1
    return _merge(pieces)


def backward_step(cur: IntervalSet, nxt: IntervalSet, dt: float, tol: float = 0.0) -> IntervalSet:
    """Points of ``cur`` from which some point of ``nxt`` is reachable within ``dt``."""
    ends = [b for _, b in nxt]
    pieces = []
    for a, b in cur:
        j = bisect_left(ends, a)
        while j < len(nxt) and nxt[j][0] - dt <= b + tol:
            na, nb = nxt[j]
            lo = max(a, na - dt)
            hi = b if b < nb else nb
            if hi >= lo - tol:
                pieces.append((lo if lo < hi else hi, hi))
            j += 1
    return _merge(pieces)


def forward_sweep(sets: Sequence[IntervalSet], timestamps, tol: float = 0.0) -> tuple[list[IntervalSet], int | None]:
    """Apply :func:`forward_step` for ``i = 1 .. k-1``.

    Returns the new sets and the first index whose set is or became empty
    (the sweep stops there), or ``None``.
    """
    out = [list(s) for s in sets]
    if out and not out[0]:
        return out, 0
    for i in range(1, len(out)):
        out[i] = forward_step(out[i - 1], out[i], float(timestamps[i] - timestamps[i - 1]), tol)
        if not out[i]:
            return out, i
    return out, None


def backward_sweep(sets: Sequence[IntervalSet], timestamps, tol: float = 0.0) -> tuple[list[IntervalSet], int | None]:
    out = [list(s) for s in sets]
    if out and not out[-1]:
        return out, len(out) - 1
    for i in range(len(out) - 2, -1, -1):
        out[i] = backward_step(out[i], out[i + 1], float(timestamps[i + 1] - timestamps[i]), tol)
        if not out[i]:
            return out, i
    return out, None


class ExtractionError(RuntimeError):
    pass


def extract_sequence(sets: Sequence[IntervalSet], timestamps, strategy: str = "latest",
                     tol: float = 0.0) -> list[float]:
    """Greedy path times ``l_1 .. l_k`` from swept interval sets.

    ``latest`` starts at the right end of ``I_1`` and always moves as far as
    the time budget allows; ``earliest`` starts at the left end and waits as
    long as possible.  Raises :class:`ExtractionError` if a set is empty or
    the sets were not swept.
    """
    for i, s in enumerate(sets):
        if not s:
            raise ExtractionError(f"interval set {i} is empty")
    if strategy == "latest":
        taus = [sets[0][-1][1]]
        for i in range(1, len(sets)):
            prev = taus[-1]
            reach = prev + float(timestamps[i] - timestamps[i - 1])
            s = sets[i]
            j = bisect_right(s, (reach + tol, np.inf)) - 1
            if j < 0 or s[j][1] < prev - tol:
                raise ExtractionError(f"no reachable location for measurement {i}")
            a, b = s[j]
            taus.append(max(min(reach, b), a, prev))
    elif strategy == "earliest":
        taus = [sets[0][0][0]]
        for i in range(1, len(sets)):
            prev = taus[-1]
            reach = prev + float(timestamps[i] - timestamps[i - 1])
            s = sets[i]
            j = bisect_left([b for _, b in s], prev - tol)
            if j == len(s) or s[j][0] > reach + tol:
                raise ExtractionError(f"no reachable location for measurement {i}")
            a, b = s[j]
            taus.append(min(max(prev, a), b))
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return taus


def to_locations(path: EmbeddedPath, taus) -> list[PathLocation]:
    seg, lam, tau, xy = locate(path, np.asarray(taus, dtype=np.float64))
    return [PathLocation(int(s), float(l), float(t), Point2(float(x), float(y)))
            for s, l, t, (x, y) in zip(seg, lam, tau, xy)]


def match(instance: Instance, strategy: str = "latest", *, index: SegmentIndex | None = None,
          naive: bool = False, eps: float = DEFAULT_EPS) -> MatchResult:
    """Decide feasibility and, if feasible, return one matching sequence."""
    path = instance.path
    ts = instance.timestamps
    tol = REL_TOL * path.total_time
    timings: dict[str, float] = {}

    t0 = time.perf_counter()
    if index is None and not naive:
        index = build_index(path)
    timings["index"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    sets, visited = compute_intervals(path, instance.positions, instance.radius, index,
                                      naive=naive, eps=eps)
    timings["intervals"] = time.perf_counter() - t0
    stats = {"raw_intervals": sum(len(s) for s in sets), "visited": visited}

    empty = next((i for i, s in enumerate(sets) if not s), None)
    if empty is not None:
        timings["sweeps"] = timings["extraction"] = 0.0
        return MatchResult(Status.INFEASIBLE, None, empty, sets, timings, stats)

    t0 = time.perf_counter()
    sets, failed = forward_sweep(sets, ts, tol)
    if failed is None:
        sets, failed = backward_sweep(sets, ts, tol)
    timings["sweeps"] = time.perf_counter() - t0
    stats["final_intervals"] = sum(len(s) for s in sets)
    if failed is not None:
        timings["extraction"] = 0.0
        return MatchResult(Status.INFEASIBLE, None, failed, sets, timings, stats)

    t0 = time.perf_counter()
    taus = extract_sequence(sets, ts, strategy, tol)
    locations = to_locations(path, taus)
    timings["extraction"] = time.perf_counter() - t0
    return MatchResult(Status.FEASIBLE, locations, None, sets, timings, stats)
