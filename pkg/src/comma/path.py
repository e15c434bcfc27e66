"""Embedded directed path with travel-time costs.

Locations on the path are addressed by their path time ``tau``: the travel
time from the first node.  ``prefix_time[j]`` is the path time of node ``j``
and inside segment ``j`` the time is interpolated linearly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .geometry import Point2

TAU_TOL = 1e-9


class ValidationError(ValueError):
    """Input that does not describe a valid path or instance."""


class PathLocation(NamedTuple):
    segment: int
    lam: float
    tau: float
    point: Point2


@dataclass(frozen=True, eq=False)
class EmbeddedPath:
    nodes: np.ndarray
    edge_time: np.ndarray
    prefix_time: np.ndarray
    edge_length: np.ndarray

    @property
    def n(self) -> int:
        return self.edge_time.shape[0]

    @property
    def total_time(self) -> float:
        return float(self.prefix_time[-1])

    def __eq__(self, other):
        if not isinstance(other, EmbeddedPath):
            return NotImplemented
        return (np.array_equal(self.nodes, other.nodes)
                and np.array_equal(self.edge_time, other.edge_time))

    def __repr__(self):
        return f"EmbeddedPath(n={self.n}, T={self.total_time:g})"


def _frozen(a):
    a = np.ascontiguousarray(a, dtype=np.float64)
    a.setflags(write=False)
    return a


def build_path(nodes, edge_times, *, collapse_tol: float = 1e-12) -> EmbeddedPath:
    """Validate a polyline with per-edge travel times and precompute prefix sums.

    Zero-cost edges of (near) zero length are dropped.  Any other edge without
    positive travel time is rejected, since path time must identify a unique
    point.
    """
    nodes = np.asarray(nodes, dtype=np.float64)
    times = np.asarray(edge_times, dtype=np.float64).reshape(-1)
    if nodes.ndim != 2 or nodes.shape[1] != 2:
        raise ValidationError(f"nodes must have shape (m, 2), got {nodes.shape}")
    if times.shape[0] != nodes.shape[0] - 1:
        raise ValidationError(
            f"expected {nodes.shape[0] - 1} edge times for {nodes.shape[0]} nodes, "
            f"got {times.shape[0]}")
    if not (np.isfinite(nodes).all() and np.isfinite(times).all()):
        raise ValidationError("nodes and edge times must be finite")

    lengths = np.hypot(*np.diff(nodes, axis=0).T) if len(nodes) > 1 else np.empty(0)
    scale = max(1.0, float(np.abs(nodes).max(initial=0.0)))
    drop = (times == 0.0) & (lengths <= collapse_tol * scale)
    if drop.any():
        keep = np.ones(len(nodes), dtype=bool)
        keep[1:][drop] = False
        nodes = nodes[keep]
        times = times[~drop]
        lengths = lengths[~drop]

    if times.shape[0] < 1 or not (lengths > 0).any():
        raise ValidationError("path needs at least two distinct nodes")
    bad = np.flatnonzero(~(times > 0))
    if bad.size:
        j = int(bad[0])
        raise ValidationError(f"edge {j} has non-positive travel time {times[j]!r}")

    prefix = np.concatenate([[0.0], np.cumsum(times)])
    return EmbeddedPath(_frozen(nodes), _frozen(times), _frozen(prefix), _frozen(lengths))


def _clamp_tau(path: EmbeddedPath, tau):
    total = path.total_time
    tol = TAU_TOL * total
    tau = np.asarray(tau, dtype=np.float64)
    if np.any(tau < -tol) or np.any(tau > total + tol) or not np.isfinite(tau).all():
        raise ValueError(f"path time outside [0, {total}]")
    return np.clip(tau, 0.0, total)


def locate(path: EmbeddedPath, taus):
    """Vectorised :func:`tau_to_location`; returns ``(segment, lam, tau, xy)``."""
    tau = _clamp_tau(path, taus)
    seg = np.searchsorted(path.prefix_time, tau, side="right") - 1
    seg = np.clip(seg, 0, path.n - 1)
    lam = (tau - path.prefix_time[seg]) / path.edge_time[seg]
    lam = np.clip(lam, 0.0, 1.0)
    a = path.nodes[seg]
    b = path.nodes[seg + 1]
    xy = a + lam[..., None] * (b - a)
    return seg, lam, tau, xy


def tau_to_location(path: EmbeddedPath, tau: float) -> PathLocation:
    """The location with path time ``tau``.

    On a node the later segment is returned with ``lam == 0``, except at the
    very end of the path, which is ``(n - 1, 1.0)``.
    """
    seg, lam, t, xy = locate(path, np.array([tau]))
    return PathLocation(int(seg[0]), float(lam[0]), float(t[0]),
                        Point2(float(xy[0, 0]), float(xy[0, 1])))


def location_to_tau(path: EmbeddedPath, segment: int, lam: float) -> float:
    if not 0 <= segment < path.n:
        raise IndexError(f"segment {segment} out of range for path with {path.n} segments")
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must be in [0, 1], got {lam}")
    return float(path.prefix_time[segment] + lam * path.edge_time[segment])


def location_at(path: EmbeddedPath, segment: int, lam: float) -> PathLocation:
    tau = location_to_tau(path, segment, lam)
    a = path.nodes[segment]
    b = path.nodes[segment + 1]
    return PathLocation(int(segment), float(lam), tau,
                        Point2(float(a[0] + lam * (b[0] - a[0])), float(a[1] + lam * (b[1] - a[1]))))


def polyline_between(path: EmbeddedPath, t0: float, t1: float) -> np.ndarray:
    """Planar polyline of the sub-path with path times in ``[t0, t1]``."""
    (s0, s1), _, _, (p0, p1) = locate(path, np.array([t0, t1]))
    inner = path.nodes[s0 + 1:s1 + 1]
    return np.vstack([p0, inner, p1])
