"""Independent checks for matching results.

Nothing here calls the sweep code.  The feasibility oracle propagates
reachable sets by dilating every interval by ``[0, dt]`` and intersecting with
the next raw set.  Tracking only the single earliest admissible point is not
enough: an earlier position also ends the next reach window earlier, so it can
miss solutions that need a later start.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .core import Instance, IntervalSet, compute_intervals
from .path import PathLocation

DIST_RTOL = 1e-9
TIME_RTOL = 1e-9


class OracleResult(NamedTuple):
    feasible: bool
    taus: list[float] | None  # a witness sequence when feasible
    failed_index: int | None
    earliest: list[float] | None = None  # earliest reachable point of each set


class Violation(NamedTuple):
    index: int
    kind: str
    magnitude: float


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checked": self.checked,
                "violations": [v._asdict() for v in self.violations]}


def _first_point_in(s: IntervalSet, lo: float, hi: float) -> float | None:
    for a, b in s:
        if b < lo:
            continue
        x = a if a > lo else lo
        return x if x <= hi else None
    return None


def _last_point_in(s: IntervalSet, lo: float, hi: float) -> float | None:
    for a, b in reversed(s):
        if a > hi:
            continue
        x = b if b < hi else hi
        return x if x >= lo else None
    return None


def _dilate(s: IntervalSet, lo: float, hi: float) -> IntervalSet:
    out: IntervalSet = []
    for a, b in s:
        a, b = a + lo, b + hi
        if out and a <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], b))
        else:
            out.append((a, b))
    return out


def _intersect(s: IntervalSet, t: IntervalSet) -> IntervalSet:
    out: IntervalSet = []
    i = j = 0
    while i < len(s) and j < len(t):
        lo = max(s[i][0], t[j][0])
        hi = min(s[i][1], t[j][1])
        if lo <= hi:
            out.append((lo, hi))
        if s[i][1] < t[j][1]:
            i += 1
        else:
            j += 1
    return out


def reachable_sets(raw_sets: Sequence[IntervalSet], timestamps, start: int = 0,
                   seed: IntervalSet | None = None, backward: bool = False,
                   tol: float = 0.0) -> tuple[list[IntervalSet], int | None]:
    """Propagate reachable sets from ``start`` (forward, or backward with ``backward``).

    ``seed`` replaces ``raw_sets[start]`` as the starting set.  Returns the
    sets for ``start, start +- 1, ...`` and the first index where the set
    became empty, or ``None``.
    """
    cur = list(raw_sets[start] if seed is None else seed)
    out = [cur]
    if not cur:
        return out, start
    order = range(start - 1, -1, -1) if backward else range(start + 1, len(raw_sets))
    for j in order:
        if backward:
            dt = float(timestamps[j + 1] - timestamps[j])
            cur = _intersect(_dilate(cur, -dt - tol, tol), raw_sets[j])
        else:
            dt = float(timestamps[j] - timestamps[j - 1])
            cur = _intersect(_dilate(cur, -tol, dt + tol), raw_sets[j])
        out.append(cur)
        if not cur:
            return out, j
    return out, None


def greedy_earliest_feasibility(raw_sets: Sequence[IntervalSet], timestamps) -> OracleResult:
    """Exact feasibility on raw (unswept) interval sets.

    ``earliest[i]`` is the smallest point of ``I_i`` reachable by a valid
    prefix; the witness is built backwards from the last reachable set.
    """
    sets, failed = reachable_sets(raw_sets, timestamps)
    if failed is not None:
        return OracleResult(False, None, failed)
    taus = [sets[-1][-1][1]]
    for i in range(len(sets) - 2, -1, -1):
        dt = float(timestamps[i + 1] - timestamps[i])
        # y + dt == x may round so that x - dt lands just above y
        slack = 4.0 * math.ulp(abs(taus[-1]) + dt)
        taus.append(_last_point_in(sets[i], taus[-1] - dt - slack, taus[-1]))
    return OracleResult(True, taus[::-1], None, [r[0][0] for r in sets])


def grid_step(raw_sets: Sequence[IntervalSet], timestamps, total_time: float,
              max_points: int = 200_000) -> float:
    """Step for :func:`fine_grid_feasibility`: 1/32 of the smallest positive
    time gap or interval length, coarsened so the grid stays under ``max_points``."""
    cands = [float(d) for d in np.diff(np.asarray(timestamps, dtype=float)) if d > 0]
    cands += [b - a for s in raw_sets for a, b in s if b > a]
    h = (min(cands) if cands else total_time) / 32.0
    covered = sum(b - a for s in raw_sets for a, b in s)
    if covered / h > max_points:
        h = covered / max_points
    return h


def fine_grid_feasibility(raw_sets: Sequence[IntervalSet], timestamps, h: float) -> bool:
    """Reachability DP over grid points ``m*h`` inside the sets plus all interval
    endpoints.  One-sided: ``True`` is always correct, ``False`` may be a miss.
    """
    reach = None
    for i, s in enumerate(raw_sets):
        pts = []
        for a, b in s:
            pts.append(np.arange(math.ceil(a / h), math.floor(b / h) + 1) * h)
            pts.append(np.array([a, b]))
        g = np.unique(np.concatenate(pts)) if pts else np.empty(0)
        if s:
            lo = np.array([a for a, _ in s])
            hi = np.array([b for _, b in s])
            j = np.searchsorted(lo, g, side="right") - 1
            g = g[(j >= 0) & (g <= hi[np.clip(j, 0, None)])]
        if i == 0:
            reach = g
        else:
            dt = float(timestamps[i] - timestamps[i - 1])
            j = np.searchsorted(reach, g, side="right") - 1
            ok = (j >= 0) & (g - reach[np.clip(j, 0, None)] <= dt)
            reach = g[ok]
        if reach.size == 0:
            return False
    return True


def validate_sequence(instance: Instance, locations: Sequence[PathLocation]) -> ValidationReport:
    """Check both matching constraints and the internal consistency of each location."""
    path = instance.path
    r = instance.radius
    ttol = TIME_RTOL * path.total_time
    rep = ValidationReport(checked=len(locations))
    if len(locations) != instance.k:
        rep.violations.append(Violation(-1, "length", float(abs(len(locations) - instance.k))))
        return rep
    for i, loc in enumerate(locations):
        s, lam = loc.segment, loc.lam
        if not (0 <= s < path.n and -1e-12 <= lam <= 1 + 1e-12):
            rep.violations.append(Violation(i, "consistency", math.inf))
            continue
        tau = path.prefix_time[s] + lam * path.edge_time[s]
        a, b = path.nodes[s], path.nodes[s + 1]
        px, py = a + lam * (b - a)
        drift = max(abs(tau - loc.tau) / max(ttol, 1e-300),
                    math.hypot(px - loc.point[0], py - loc.point[1]) / (DIST_RTOL * r))
        if drift > 1.0:
            rep.violations.append(Violation(i, "consistency", float(drift)))
        x, y = instance.positions[i]
        d = math.hypot(px - x, py - y)
        if d > r * (1 + DIST_RTOL):
            rep.violations.append(Violation(i, "distance", float(d - r)))
    for i in range(1, len(locations)):
        step = locations[i].tau - locations[i - 1].tau
        dt = float(instance.timestamps[i] - instance.timestamps[i - 1])
        if step < -ttol:
            rep.violations.append(Violation(i, "monotonicity", float(-step)))
        elif step > dt + ttol:
            rep.violations.append(Violation(i, "travel_time", float(step - dt)))
    return rep


def _extends(raw: Sequence[IntervalSet], ts, i: int, tau: float, tol: float) -> tuple[bool, bool]:
    seed = [(tau, tau)]
    _, fwd = reachable_sets(raw, ts, i, seed, tol=tol)
    _, bwd = reachable_sets(raw, ts, i, seed, backward=True, tol=tol)
    return fwd is None, bwd is None


def interval_coverage_check(instance: Instance, final_sets: Sequence[IntervalSet],
                            samples_per_interval: int = 16,
                            raw_sets: Sequence[IntervalSet] | None = None) -> ValidationReport:
    """Every sampled point of every final interval must extend to a complete
    feasible sequence, both forward and backward.

    Extendability is judged against the raw disk intervals (by default
    recomputed with the naive scan, not the index).
    """
    if raw_sets is None:
        raw_sets, _ = compute_intervals(instance.path, instance.positions, instance.radius,
                                        naive=True)
    ts = instance.timestamps
    tol = TIME_RTOL * instance.path.total_time
    rep = ValidationReport()
    for i, s in enumerate(final_sets):
        for a, b in s:
            for tau in np.linspace(a, b, samples_per_interval):
                rep.checked += 1
                if _first_point_in(raw_sets[i], tau - tol, tau + tol) is None:
                    rep.violations.append(Violation(i, "outside_disk", float(tau)))
                fwd, bwd = _extends(raw_sets, ts, i, float(tau), tol)
                if not fwd:
                    rep.violations.append(Violation(i, "forward_extension", float(tau)))
                if not bwd:
                    rep.violations.append(Violation(i, "backward_extension", float(tau)))
    return rep
