"""Bounding-box hierarchy over the segments of a path.

The tree splits the path into contiguous halves, so leaves appear in path
order and every query returns ascending segment indices without sorting.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .geometry import DEFAULT_EPS, Circle
from .path import EmbeddedPath


@dataclass(frozen=True, eq=False)
class SegmentIndex:
    """Implicit binary heap: node 1 is the root, leaf ``size + j`` is segment ``j``."""

    path: EmbeddedPath
    size: int
    boxes: np.ndarray

    @property
    def n(self) -> int:
        return self.path.n

    @property
    def height(self) -> int:
        return self.size.bit_length() - 1

    def node_range(self, node: int) -> tuple[int, int]:
        """Half-open range of segment indices below ``node`` (clipped to ``n``)."""
        depth = node.bit_length() - 1
        span = self.size >> depth
        lo = (node - (1 << depth)) * span
        return min(lo, self.n), min(lo + span, self.n)

    def is_leaf(self, node: int) -> bool:
        return node >= self.size

    def children(self, node: int) -> tuple[int, int]:
        return 2 * node, 2 * node + 1


@dataclass
class QueryStats:
    visited: int = 0
    queries: int = 0


def build_index(path: EmbeddedPath) -> SegmentIndex:
    n = path.n
    size = 1 << max(0, (n - 1).bit_length())
    boxes = np.empty((2 * size, 4), dtype=np.float64)
    boxes[:, 0:2] = np.inf
    boxes[:, 2:4] = -np.inf
    a = path.nodes[:-1]
    b = path.nodes[1:]
    boxes[size:size + n, 0:2] = np.minimum(a, b)
    boxes[size:size + n, 2:4] = np.maximum(a, b)
    lo = size
    while lo > 1:
        parents = np.arange(lo // 2, lo)
        left = boxes[2 * parents]
        right = boxes[2 * parents + 1]
        boxes[parents, 0:2] = np.minimum(left[:, 0:2], right[:, 0:2])
        boxes[parents, 2:4] = np.maximum(left[:, 2:4], right[:, 2:4])
        lo //= 2
    boxes.setflags(write=False)
    return SegmentIndex(path, size, boxes)


def query_circle(index: SegmentIndex, circle: Circle, eps: float = DEFAULT_EPS,
                 stats: QueryStats | None = None) -> np.ndarray:
    """Segments whose interior or endpoints cross the boundary of ``circle``."""
    (cx, cy), r = circle
    out, visited = kernels.query_circle(index.boxes, index.size, index.path.nodes,
                                        float(cx), float(cy), float(r), float(eps), False)
    if stats is not None:
        stats.visited += int(visited)
        stats.queries += 1
    return out


def query_touching(index: SegmentIndex, circle: Circle, eps: float = DEFAULT_EPS) -> np.ndarray:
    """Segments with at least one point in the closed disk (crossing or contained)."""
    (cx, cy), r = circle
    out, _ = kernels.query_circle(index.boxes, index.size, index.path.nodes,
                                  float(cx), float(cy), float(r), float(eps), True)
    return out


def query_endpoints_in_disk(index: SegmentIndex, circle: Circle,
                            stats: QueryStats | None = None) -> np.ndarray:
    (cx, cy), r = circle
    out, visited = kernels.query_endpoints(index.boxes, index.size, index.path.nodes,
                                           float(cx), float(cy), float(r))
    if stats is not None:
        stats.visited += int(visited)
        stats.queries += 1
    return out


def naive_query_circle(path: EmbeddedPath, circle: Circle, eps: float = DEFAULT_EPS) -> np.ndarray:
    (cx, cy), r = circle
    return kernels.naive_circle(path.nodes, float(cx), float(cy), float(r), float(eps), False)


def naive_endpoints_in_disk(path: EmbeddedPath, circle: Circle) -> np.ndarray:
    (cx, cy), r = circle
    d = path.nodes - np.array([cx, cy])
    return np.flatnonzero((d * d).sum(axis=1) <= r * r)
