"""Classical layered-DAG matching over finite candidate sets.

Candidates for a measurement are the path nodes inside its disk and,
optionally, points every ``d`` units of arc length along each segment that
meets the disk, counted from the segment's start node.  Halving ``d`` only
adds candidates, so results can only improve as the grid is refined.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from . import kernels
from .core import Instance, Status
from .geometry import DEFAULT_EPS, Circle, Point2
from .path import EmbeddedPath, PathLocation
from .spatial import SegmentIndex, build_index, query_endpoints_in_disk, query_touching


class CandidateLayer(NamedTuple):
    measurement: int
    segment: np.ndarray
    lam: np.ndarray
    tau: np.ndarray
    xy: np.ndarray

    def __len__(self):
        return self.tau.shape[0]

    def location(self, j: int) -> PathLocation:
        return PathLocation(int(self.segment[j]), float(self.lam[j]), float(self.tau[j]),
                            Point2(float(self.xy[j, 0]), float(self.xy[j, 1])))


@dataclass
class LayeredDag:
    layers: list[CandidateLayer]
    # edges[i] connects layers[i] -> layers[i + 1]: (source idx, target idx, weight)
    edges: list[tuple[np.ndarray, np.ndarray, np.ndarray]]

    @property
    def edge_count(self) -> int:
        return sum(e[0].shape[0] for e in self.edges)

    @property
    def node_count(self) -> int:
        return sum(len(layer) for layer in self.layers)


@dataclass
class BaselineResult:
    status: Status
    locations: list[PathLocation] | None
    failed_index: int | None
    candidates: int
    edges: int
    layers: list[CandidateLayer] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def feasible(self) -> bool:
        return self.status is Status.FEASIBLE


def _inside_range(kind: int, l1: float, l2: float, a_inside: bool) -> tuple[float, float] | None:
    if kind == kernels.CONTAINED:
        return 0.0, 1.0
    if kind == kernels.TYPE_ONE:
        return (0.0, l1) if a_inside else (l1, 1.0)
    if kind == kernels.TYPE_TWO:
        return l1, l2
    return None


def candidate_locations(path: EmbeddedPath, index: SegmentIndex, position, r: float,
                        sampling_distance: float | None = None, measurement: int = 0,
                        eps: float = DEFAULT_EPS) -> CandidateLayer:
    if sampling_distance is not None and not sampling_distance > 0:
        raise ValueError(f"sampling distance must be positive, got {sampling_distance}")
    cx, cy = float(position[0]), float(position[1])
    circle = Circle(Point2(cx, cy), float(r))
    r2 = float(r) * float(r)
    n = path.n

    v = query_endpoints_in_disk(index, circle)
    segs = [np.minimum(v, n - 1)]
    lams = [np.where(v < n, 0.0, 1.0)]

    if sampling_distance is not None:
        d = float(sampling_distance)
        for j in query_touching(index, circle, eps):
            length = float(path.edge_length[j])
            if length == 0.0:
                continue
            (ax, ay), (bx, by) = path.nodes[j], path.nodes[j + 1]
            kind, l1, l2 = kernels.seg_circle(ax, ay, bx, by, cx, cy, float(r), float(eps))
            a_in = (ax - cx) ** 2 + (ay - cy) ** 2 <= r2
            span = _inside_range(int(kind), float(l1), float(l2), a_in)
            if span is None:
                continue
            # widen by one step; the exact disk test below decides membership
            m_lo = max(0, math.floor(span[0] * length / d) - 1)
            m_hi = min(math.floor(length / d), math.ceil(span[1] * length / d) + 1)
            m = np.arange(m_lo, m_hi + 1, dtype=np.float64)
            lam = (m * d) / length
            px = ax + lam * (bx - ax)
            py = ay + lam * (by - ay)
            ex = px - cx
            ey = py - cy
            keep = (ex * ex + ey * ey <= r2) & (lam <= 1.0)
            segs.append(np.full(int(keep.sum()), j, dtype=np.int64))
            lams.append(lam[keep])

    seg = np.concatenate(segs).astype(np.int64)
    lam = np.concatenate(lams)
    tau = path.prefix_time[seg] + lam * path.edge_time[seg]
    tau, first = np.unique(tau, return_index=True)
    seg, lam = seg[first], lam[first]
    a = path.nodes[seg]
    xy = a + lam[:, None] * (path.nodes[seg + 1] - a)
    return CandidateLayer(measurement, seg, lam, tau, xy)


def build_dag(layers: Sequence[CandidateLayer], timestamps) -> LayeredDag:
    """All-pairs edges between consecutive layers, pruned to ``0 <= dtau <= dt``."""
    edges = []
    for i in range(len(layers) - 1):
        dt = float(timestamps[i + 1] - timestamps[i])
        diff = layers[i + 1].tau[None, :] - layers[i].tau[:, None]
        u, v = np.nonzero((diff >= 0.0) & (diff <= dt))
        edges.append((u.astype(np.int32), v.astype(np.int32), diff[u, v]))
    return LayeredDag(list(layers), edges)


def shortest_matching_path(dag: LayeredDag) -> tuple[list[PathLocation] | None, int | None]:
    """Minimum total travel time from layer 1 to layer k.

    Ties go to the candidate with the smallest path time.  Returns
    ``(locations, None)`` or ``(None, first_unreachable_layer)``.
    """
    layers = dag.layers
    if len(layers[0]) == 0:
        return None, 0
    cost = np.zeros(len(layers[0]))
    preds = []
    for i, (u, v, w) in enumerate(dag.edges):
        m = len(layers[i + 1])
        cand = cost[u] + w
        new_cost = np.full(m, np.inf)
        pred = np.full(m, -1, dtype=np.int64)
        ok = np.isfinite(cand)
        u, v, cand = u[ok], v[ok], cand[ok]
        if cand.size:
            order = np.lexsort((u, cand, v))
            v_sorted = v[order]
            head = np.ones(order.size, dtype=bool)
            head[1:] = v_sorted[1:] != v_sorted[:-1]
            best = order[head]
            new_cost[v[best]] = cand[best]
            pred[v[best]] = u[best]
        if not np.isfinite(new_cost).any():
            return None, i + 1
        cost = new_cost
        preds.append(pred)
    j = int(np.argmin(cost))
    picks = [j]
    for pred in reversed(preds):
        j = int(pred[j])
        picks.append(j)
    picks.reverse()
    return [layer.location(p) for layer, p in zip(layers, picks)], None


def run_baseline(instance: Instance, sampling_distance: float | None = None, *,
                 index: SegmentIndex | None = None) -> BaselineResult:
    timings = {}
    t0 = time.perf_counter()
    index = index if index is not None else build_index(instance.path)
    layers = [candidate_locations(instance.path, index, p, instance.radius, sampling_distance, i)
              for i, p in enumerate(instance.positions)]
    timings["candidates"] = time.perf_counter() - t0
    n_cand = sum(len(layer) for layer in layers)
    empty = next((i for i, layer in enumerate(layers) if len(layer) == 0), None)
    if empty is not None:
        timings["dag"] = timings["search"] = 0.0
        return BaselineResult(Status.INFEASIBLE, None, empty, n_cand, 0, layers, timings)

    t0 = time.perf_counter()
    dag = build_dag(layers, instance.timestamps)
    timings["dag"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    locs, failed = shortest_matching_path(dag)
    timings["search"] = time.perf_counter() - t0
    status = Status.FEASIBLE if locs is not None else Status.INFEASIBLE
    return BaselineResult(status, locs, failed, n_cand, dag.edge_count, layers, timings)
