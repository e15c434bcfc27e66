"""Planar primitives: segment/circle intersection, paraboloid lifting and the
triangle cover of a segment's truncated strip.

All functions are pure and work on small immutable tuples.  Tolerances are
relative: ``eps`` is scaled by ``r**2`` wherever a squared distance is
compared against the radius.
"""

from __future__ import annotations

import enum
import math
from typing import NamedTuple

from . import kernels

DEFAULT_EPS = 1e-9


class Point2(NamedTuple):
    x: float
    y: float


class Point3(NamedTuple):
    x: float
    y: float
    z: float


class Segment(NamedTuple):
    a: Point2
    b: Point2

    @property
    def length(self) -> float:
        return math.hypot(self.b[0] - self.a[0], self.b[1] - self.a[1])

    def at(self, lam: float) -> Point2:
        return Point2(self.a[0] + lam * (self.b[0] - self.a[0]),
                      self.a[1] + lam * (self.b[1] - self.a[1]))


class Circle(NamedTuple):
    center: Point2
    radius: float

    def contains(self, p, eps: float = 0.0) -> bool:
        """Closed-disk membership, optionally widened by ``eps * r**2``."""
        dx = p[0] - self.center[0]
        dy = p[1] - self.center[1]
        r2 = self.radius * self.radius
        return dx * dx + dy * dy <= r2 * (1.0 + eps)


class Plane3(NamedTuple):
    """The plane ``z = alpha*x + beta*y + gamma``."""

    alpha: float
    beta: float
    gamma: float

    def value(self, x: float, y: float) -> float:
        return self.alpha * x + self.beta * y + self.gamma

    def below(self, p: Point3) -> bool:
        """True if ``p`` lies on or below the plane."""
        return p.z <= self.value(p.x, p.y)


class Triangle2(NamedTuple):
    v0: Point2
    v1: Point2
    v2: Point2

    def signed_area(self) -> float:
        return 0.5 * _cross(self.v0, self.v1, self.v2)

    def contains(self, p) -> bool:
        """Closed containment test; works for either orientation."""
        d0 = _cross(self.v0, self.v1, p)
        d1 = _cross(self.v1, self.v2, p)
        d2 = _cross(self.v2, self.v0, p)
        has_neg = d0 < 0 or d1 < 0 or d2 < 0
        has_pos = d0 > 0 or d1 > 0 or d2 > 0
        return not (has_neg and has_pos)

    def edge_distance(self, p) -> float:
        """Distance from ``p`` to the nearest triangle edge."""
        return min(point_segment_distance(p, Segment(self.v0, self.v1)),
                   point_segment_distance(p, Segment(self.v1, self.v2)),
                   point_segment_distance(p, Segment(self.v2, self.v0)))


class IntersectionKind(enum.IntEnum):
    NONE = kernels.NONE
    TYPE_ONE = kernels.TYPE_ONE
    TYPE_TWO = kernels.TYPE_TWO
    CONTAINED = kernels.CONTAINED


class IntersectionResult(NamedTuple):
    kind: IntersectionKind
    params: tuple[float, ...]

    def points(self, seg: Segment) -> list[Point2]:
        return [seg.at(lam) for lam in self.params]


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def point_segment_distance(p, seg: Segment) -> float:
    ax, ay = seg.a
    dx = seg.b[0] - ax
    dy = seg.b[1] - ay
    a = dx * dx + dy * dy
    t = 0.0 if a == 0.0 else min(max(((p[0] - ax) * dx + (p[1] - ay) * dy) / a, 0.0), 1.0)
    return math.hypot(p[0] - (ax + t * dx), p[1] - (ay + t * dy))


def segment_circle_intersections(seg: Segment, c: Circle,
                                 eps: float = DEFAULT_EPS) -> IntersectionResult:
    """Classify how ``seg`` meets the boundary of ``c``.

    Endpoints on the boundary count as inside.  A double crossing whose chord
    is shorter than the tangency tolerance is reported as ``NONE`` so that the
    number of crossings along a chain keeps the right parity.
    """
    kind, l1, l2 = kernels.seg_circle(float(seg.a[0]), float(seg.a[1]),
                                      float(seg.b[0]), float(seg.b[1]),
                                      float(c.center[0]), float(c.center[1]),
                                      float(c.radius), float(eps))
    kind = IntersectionKind(kind)
    if kind is IntersectionKind.TYPE_ONE:
        return IntersectionResult(kind, (l1,))
    if kind is IntersectionKind.TYPE_TWO:
        return IntersectionResult(kind, (l1, l2))
    return IntersectionResult(kind, ())


def lift_point(p) -> Point3:
    x, y = float(p[0]), float(p[1])
    return Point3(x, y, x * x + y * y)


def circle_to_plane(c: Circle) -> Plane3:
    """Plane whose lower halfspace holds exactly the lifted points of the disk."""
    a, b = float(c.center[0]), float(c.center[1])
    r = float(c.radius)
    if not r > 0:
        raise ValueError(f"radius must be positive, got {r}")
    return Plane3(2.0 * a, 2.0 * b, r * r - a * a - b * b)


def lifted_inside(p, c: Circle) -> bool:
    return circle_to_plane(c).below(lift_point(p))


def type2_triangles(seg: Segment, r: float) -> tuple[Triangle2, Triangle2]:
    """Two counterclockwise triangles covering the centers of circles of radius
    ``r`` that cross ``seg`` twice.

    For ``|seg| >= 2r`` these are the halves of the ``|seg| x 2r`` rectangle
    centred on the segment.  For shorter segments each long side of the
    rectangle is joined to the intersection point of the two endpoint
    circles on the same side of the segment.  Joining it to the point on the
    other side instead would sweep the triangle across the lens where both
    endpoints are covered.
    """
    (ax, ay), (bx, by) = seg.a, seg.b
    length = math.hypot(bx - ax, by - ay)
    if length == 0.0:
        raise ValueError("degenerate segment has no strip direction")
    if not r > 0:
        raise ValueError(f"radius must be positive, got {r}")
    ux, uy = (bx - ax) / length, (by - ay) / length
    nx, ny = -uy * r, ux * r
    lo_a = Point2(ax - nx, ay - ny)
    lo_b = Point2(bx - nx, by - ny)
    hi_a = Point2(ax + nx, ay + ny)
    hi_b = Point2(bx + nx, by + ny)
    if length >= 2.0 * r:
        return Triangle2(lo_a, lo_b, hi_b), Triangle2(lo_a, hi_b, hi_a)
    h = math.sqrt(r * r - 0.25 * length * length)
    mx, my = 0.5 * (ax + bx), 0.5 * (ay + by)
    apex_lo = Point2(mx + h * uy, my - h * ux)
    apex_hi = Point2(mx - h * uy, my + h * ux)
    return Triangle2(hi_b, hi_a, apex_hi), Triangle2(lo_a, lo_b, apex_lo)
