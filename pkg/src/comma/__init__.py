"""Continuous map matching (COMMA) of timestamped measurements onto a path."""

__version__ = "0.1.0"

from ._accel import BACKEND
from .baseline import candidate_locations, run_baseline
from .core import (Instance, MatchResult, Measurement, Status, compute_intervals,
                   disk_intervals, make_instance, match)
from .geometry import Circle, Point2, Segment, segment_circle_intersections
from .path import EmbeddedPath, PathLocation, ValidationError, build_path, tau_to_location
from .spatial import SegmentIndex, build_index

__all__ = [
    "BACKEND", "Circle", "EmbeddedPath", "Instance", "MatchResult", "Measurement",
    "PathLocation", "Point2", "Segment", "SegmentIndex", "Status", "ValidationError",
    "build_index", "build_path", "candidate_locations", "compute_intervals",
    "disk_intervals", "make_instance", "match", "run_baseline",
    "segment_circle_intersections", "tau_to_location",
]
