"""Build a matching instance from one trip of a static GTFS feed.

Only ``trips.txt``, ``shapes.txt``, ``stops.txt`` and ``stop_times.txt`` are
read.  Coordinates are projected to local metres with an equirectangular
projection about the shape centroid (error around 0.1% for spans under
~50 km).  The path is the part of the shape between the first and the last
stop; its edge times come from linear interpolation of the stop times over
distance along the shape.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import Instance, make_instance
from .path import build_path

EARTH_RADIUS_M = 6_371_008.8
# metres per unit for the distance units feeds use in shape_dist_traveled
_UNITS = {"m": 1.0, "km": 1000.0, "mi": 1609.344, "ft": 0.3048}


class GtfsError(ValueError):
    """Missing or inconsistent feed data."""


@dataclass(frozen=True)
class GtfsTripRef:
    feed: Path
    trip_id: str
    shape_id: str


def _read(feed: Path, name: str) -> list[dict]:
    f = feed / name
    if not f.is_file():
        raise GtfsError(f"{name} not found in feed {feed}")
    with open(f, encoding="utf-8-sig", newline="") as fh:
        return [{k.strip(): (v or "").strip() for k, v in row.items() if k is not None}
                for row in csv.DictReader(fh)]


def _need(rows: list[dict], name: str, cols: list[str]):
    have = set(rows[0]) if rows else set()
    missing = [c for c in cols if c not in have]
    if missing:
        raise GtfsError(f"{name}: missing column(s) {', '.join(missing)}")


def parse_time(s: str) -> float:
    """``H:MM:SS`` to seconds after the start of the service day (hours may exceed 24)."""
    try:
        h, m, sec = s.split(":")
        return int(h) * 3600 + int(m) * 60 + float(sec)
    except ValueError:
        raise GtfsError(f"bad GTFS time {s!r}") from None


def trip_ref(feed, trip_id: str) -> GtfsTripRef:
    feed = Path(feed)
    trips = _read(feed, "trips.txt")
    _need(trips, "trips.txt", ["trip_id", "shape_id"])
    for row in trips:
        if row["trip_id"] == trip_id:
            if not row["shape_id"]:
                raise GtfsError(f"trip {trip_id!r} has no shape_id")
            return GtfsTripRef(feed, trip_id, row["shape_id"])
    raise GtfsError(f"trip {trip_id!r} not found in trips.txt")


def project(lat, lon, lat0: float, lon0: float) -> np.ndarray:
    lat = np.radians(np.asarray(lat, dtype=float))
    lon = np.radians(np.asarray(lon, dtype=float))
    x = EARTH_RADIUS_M * (lon - math.radians(lon0)) * math.cos(math.radians(lat0))
    y = EARTH_RADIUS_M * (lat - math.radians(lat0))
    return np.column_stack([x, y])


def _snap_unit(ratio: float) -> float:
    """Metres per feed unit, snapped to a known unit when close."""
    for per_unit in _UNITS.values():
        if abs(ratio * per_unit - 1.0) < 0.05:
            return per_unit
    return 1.0 / ratio


def _project_along(shape: np.ndarray, cum: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Distance along ``shape`` of each point, never moving backwards."""
    a = shape[:-1]
    d = shape[1:] - a
    dd = (d * d).sum(axis=1)
    out = []
    floor = 0.0
    for p in pts:
        with np.errstate(invalid="ignore", divide="ignore"):
            t = np.clip(((p - a) * d).sum(axis=1) / dd, 0.0, 1.0)
        t = np.nan_to_num(t)
        along = cum[:-1] + t * (cum[1:] - cum[:-1])
        q = a + t[:, None] * d
        dist = np.hypot(*(q - p).T)
        dist[along < floor] = np.inf
        j = int(np.argmin(dist))
        floor = float(along[j]) if np.isfinite(dist[j]) else floor
        out.append(floor)
    return np.array(out)


def gtfs_extract(ref: GtfsTripRef, radius: float, *, time_field: str = "departure_time",
                 min_edge_time: float | None = None) -> Instance:
    """Instance for the trip: path from the shape, measurements from its stops.

    ``time_field`` picks the stop time used as measurement timestamp (the
    other one is the fallback when empty).  Edge times below
    ``min_edge_time`` are raised to it; by default an edge that would get zero
    travel time is an error.
    """
    feed = ref.feed
    shapes = [r for r in _read(feed, "shapes.txt") if r.get("shape_id") == ref.shape_id]
    if not shapes:
        raise GtfsError(f"shape {ref.shape_id!r} not found in shapes.txt")
    _need(shapes, "shapes.txt", ["shape_pt_lat", "shape_pt_lon", "shape_pt_sequence"])
    shapes.sort(key=lambda r: int(r["shape_pt_sequence"]))

    stop_times = _read(feed, "stop_times.txt")
    _need(stop_times, "stop_times.txt", ["trip_id", "stop_id", "stop_sequence"])
    st = sorted((r for r in stop_times if r["trip_id"] == ref.trip_id),
                key=lambda r: int(r["stop_sequence"]))
    if len(st) < 1:
        raise GtfsError(f"trip {ref.trip_id!r} has no stop_times")
    stop_rows = _read(feed, "stops.txt")
    _need(stop_rows, "stops.txt", ["stop_id", "stop_lat", "stop_lon"])
    stops = {r["stop_id"]: r for r in stop_rows}

    other = "arrival_time" if time_field == "departure_time" else "departure_time"
    times, stop_lat, stop_lon = [], [], []
    for r in st:
        s = r.get(time_field) or r.get(other)
        if not s:
            raise GtfsError(f"stop_times.txt: no time for stop_sequence {r['stop_sequence']}")
        times.append(parse_time(s))
        stop = stops.get(r["stop_id"])
        if stop is None:
            raise GtfsError(f"stops.txt: stop {r['stop_id']!r} not found")
        stop_lat.append(float(stop["stop_lat"]))
        stop_lon.append(float(stop["stop_lon"]))
    times = np.array(times)
    if np.any(np.diff(times) < 0):
        raise GtfsError("stop times are not monotone along the trip")

    lat = np.array([float(r["shape_pt_lat"]) for r in shapes])
    lon = np.array([float(r["shape_pt_lon"]) for r in shapes])
    lat0, lon0 = float(lat.mean()), float(lon.mean())
    shape = project(lat, lon, lat0, lon0)
    stop_xy = project(stop_lat, stop_lon, lat0, lon0)
    geo = np.concatenate([[0.0], np.cumsum(np.hypot(*np.diff(shape, axis=0).T))])

    shape_col = all(r.get("shape_dist_traveled") for r in shapes)
    stop_col = all(r.get("shape_dist_traveled") for r in st)
    if shape_col:
        dist = np.array([float(r["shape_dist_traveled"]) for r in shapes])
        if np.any(np.diff(dist) < 0):
            raise GtfsError("shapes.txt: shape_dist_traveled is not monotone")
        per_unit = _snap_unit(dist[-1] / geo[-1]) if geo[-1] > 0 and dist[-1] > 0 else 1.0
        dist = dist * per_unit
    else:
        dist, per_unit = geo, None
    if stop_col:
        sd = np.array([float(r["shape_dist_traveled"]) for r in st])
        if np.any(np.diff(sd) < 0):
            raise GtfsError("stop_times.txt: shape_dist_traveled is not monotone")
        if per_unit is None:
            guess = _project_along(shape, geo, stop_xy)
            per_unit = _snap_unit(sd[-1] / guess[-1]) if guess[-1] > 0 and sd[-1] > 0 else 1.0
        stop_dist = sd * per_unit
    else:
        stop_dist = _project_along(shape, dist, stop_xy)

    d0, d1 = float(stop_dist[0]), float(stop_dist[-1])
    if d1 <= d0:
        raise GtfsError("trip stops do not span a positive distance along the shape")
    inner = (dist > d0) & (dist < d1)
    along = np.concatenate([[d0], dist[inner], [d1]])
    xy = np.column_stack([np.interp(along, dist, shape[:, 0]),
                          np.interp(along, dist, shape[:, 1])])
    t_along = np.interp(along, stop_dist, times)
    edge_times = np.diff(t_along)
    if min_edge_time is not None:
        edge_times = np.maximum(edge_times, min_edge_time)
    else:
        seg_len = np.hypot(*np.diff(xy, axis=0).T)
        bad = np.flatnonzero((edge_times <= 0) & (seg_len > 1e-9))
        if bad.size:
            raise GtfsError(
                f"shape edge {int(bad[0])} gets no travel time (consecutive stops share a "
                f"timestamp); pass min_edge_time to force a positive floor")
    path = build_path(xy, edge_times)
    return make_instance(path, stop_xy, times, radius)
