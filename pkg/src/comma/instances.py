"""Random instance generation and the JSON document formats.

Instance document::

    {"nodes": [[x, y], ...], "edge_times": [t0, ...],
     "measurements": [{"x": .., "y": .., "t": ..}, ...], "radius": r}

Result document::

    {"status": "feasible" | "infeasible", "failed_index": int | null,
     "locations": [{"segment", "lambda", "tau", "x", "y"}, ...],
     "intervals": [[{"a", "b"}, ...], ...]}
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import jsonschema
import numpy as np

from .core import Instance, MatchResult, make_instance
from .path import ValidationError, build_path, locate, polyline_between

_NUM = {"type": "number"}

INSTANCE_SCHEMA = {
    "type": "object",
    "required": ["nodes", "edge_times", "measurements"],
    "properties": {
        "nodes": {"type": "array", "minItems": 2,
                  "items": {"type": "array", "items": _NUM, "minItems": 2, "maxItems": 2}},
        "edge_times": {"type": "array", "items": _NUM},
        "measurements": {"type": "array", "minItems": 1, "items": {
            "type": "object", "required": ["x", "y", "t"],
            "properties": {"x": _NUM, "y": _NUM, "t": _NUM}}},
        "radius": {"type": "number", "exclusiveMinimum": 0},
    },
}

RESULT_SCHEMA = {
    "type": "object",
    "required": ["status", "failed_index", "locations", "intervals"],
    "properties": {
        "status": {"enum": ["feasible", "infeasible"]},
        "failed_index": {"type": ["integer", "null"]},
        "locations": {"type": "array", "items": {
            "type": "object", "required": ["segment", "lambda", "tau", "x", "y"],
            "properties": {"segment": {"type": "integer"}, "lambda": _NUM, "tau": _NUM,
                           "x": _NUM, "y": _NUM}}},
        "intervals": {"type": "array", "items": {"type": "array", "items": {
            "type": "object", "required": ["a", "b"], "properties": {"a": _NUM, "b": _NUM}}}},
    },
}


@dataclass(frozen=True)
class GeneratorConfig:
    n: int
    k: int
    r: float
    seed: int = 0
    rho: float | None = None  # perturbation radius, defaults to 0.9 * r
    step_max: float = 1.0  # coordinate increments drawn from (0, step_max]
    time_max: float = 1.0  # per-edge travel times drawn from (0, time_max]

    @property
    def perturbation(self) -> float:
        return 0.9 * self.r if self.rho is None else self.rho

    def validate(self):
        if self.n < 1 or self.k < 1:
            raise ValueError("n and k must be at least 1")
        if not self.r > 0:
            raise ValueError("r must be positive")
        if self.perturbation < 0 or self.step_max <= 0 or self.time_max <= 0:
            raise ValueError("perturbation must be >= 0 and increment bounds > 0")


def generate_with_truth(config: GeneratorConfig) -> tuple[Instance, np.ndarray]:
    """Generate an instance and the ground-truth path times of its measurements."""
    config.validate()
    rng = np.random.default_rng(config.seed)
    n, k = config.n, config.k
    steps = config.step_max * (1.0 - rng.random((n, 2)))
    nodes = np.vstack([np.zeros((1, 2)), np.cumsum(steps, axis=0)])
    times = config.time_max * (1.0 - rng.random(n))
    path = build_path(nodes, times)
    taus = np.sort(rng.random(k)) * path.total_time
    _, _, taus, truth = locate(path, taus)
    radius = config.perturbation * np.sqrt(rng.random(k))
    angle = 2.0 * np.pi * rng.random(k)
    pos = truth + np.column_stack([radius * np.cos(angle), radius * np.sin(angle)])
    return make_instance(path, pos, taus, config.r), taus


def generate_instance(config: GeneratorConfig) -> Instance:
    return generate_with_truth(config)[0]


def _schema_error(err: jsonschema.ValidationError) -> ValidationError:
    where = "/".join(str(p) for p in err.absolute_path) or "<root>"
    return ValidationError(f"{where}: {err.message}")


def load_instance(doc: dict, radius: float | None = None) -> Instance:
    """Validate an instance document; ``radius`` overrides the document's value."""
    try:
        jsonschema.validate(doc, INSTANCE_SCHEMA)
    except jsonschema.ValidationError as err:
        raise _schema_error(err) from None
    r = radius if radius is not None else doc.get("radius")
    if r is None:
        raise ValidationError("radius: missing (not in document and not given)")
    path = build_path(doc["nodes"], doc["edge_times"])
    ms = doc["measurements"]
    pos = [[m["x"], m["y"]] for m in ms]
    ts = [m["t"] for m in ms]
    return make_instance(path, pos, ts, r)


def save_instance(instance: Instance) -> dict:
    path = instance.path
    return {
        "nodes": path.nodes.tolist(),
        "edge_times": path.edge_time.tolist(),
        "measurements": [{"x": float(x), "y": float(y), "t": float(t)}
                         for (x, y), t in zip(instance.positions, instance.timestamps)],
        "radius": instance.radius,
    }


def result_document(result) -> dict:
    """Result document for a :class:`MatchResult` or a baseline result."""
    locs = result.locations or []
    intervals = getattr(result, "intervals", None) or []
    return {
        "status": result.status.value,
        "failed_index": result.failed_index,
        "locations": [{"segment": l.segment, "lambda": l.lam, "tau": l.tau,
                       "x": l.point[0], "y": l.point[1]} for l in locs],
        "intervals": [[{"a": a, "b": b} for a, b in s] for s in intervals],
    }


def validate_result_document(doc: dict) -> None:
    try:
        jsonschema.validate(doc, RESULT_SCHEMA)
    except jsonschema.ValidationError as err:
        raise _schema_error(err) from None


def read_json(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def write_json(doc: dict, path=None) -> str:
    text = json.dumps(doc, allow_nan=False, indent=1) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def _feature(geom_type: str, coords, **props) -> dict:
    return {"type": "Feature", "geometry": {"type": geom_type, "coordinates": coords},
            "properties": props}


def disk_polygon(center, r: float, sides: int = 64) -> list[list[float]]:
    ang = np.linspace(0.0, 2.0 * math.pi, sides, endpoint=False)
    ring = np.column_stack([center[0] + r * np.cos(ang), center[1] + r * np.sin(ang)])
    ring = np.vstack([ring, ring[:1]])
    return ring.tolist()


def export_result(instance: Instance, result: MatchResult | None = None,
                  candidates=None) -> dict:
    """GeoJSON feature collection (planar coordinates) of an instance and its match.

    Interval features are emitted for every measurement up to the failed one
    when the result is infeasible.  ``candidates`` takes baseline candidate
    layers.
    """
    feats = [_feature("LineString", instance.path.nodes.tolist(), role="path")]
    for i, ((x, y), t) in enumerate(zip(instance.positions, instance.timestamps)):
        feats.append(_feature("Point", [float(x), float(y)], role="measurement", index=i, t=float(t)))
        feats.append(_feature("Polygon", [disk_polygon((x, y), instance.radius)],
                              role="disk", index=i, radius=instance.radius))
    if result is not None:
        sets = result.intervals or []
        last = len(sets) if result.failed_index is None else min(len(sets), result.failed_index + 1)
        for i in range(last):
            for a, b in sets[i]:
                line = polyline_between(instance.path, a, b).tolist()
                if len(line) < 2:
                    line = line * 2
                feats.append(_feature("LineString", line, role="interval", index=i, a=a, b=b))
        for i, loc in enumerate(result.locations or []):
            feats.append(_feature("Point", [loc.point[0], loc.point[1]], role="location",
                                  index=i, segment=loc.segment, tau=loc.tau))
    for layer in candidates or []:
        for j in range(len(layer)):
            feats.append(_feature("Point", layer.xy[j].tolist(), role="candidate",
                                  index=layer.measurement, tau=float(layer.tau[j])))
    return {"type": "FeatureCollection", "features": feats}
