"""Parameter-grid benchmark producing one flat CSV row per (instance, algorithm)."""

from __future__ import annotations

import csv
import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from typing import Iterable, Iterator, Sequence

from .baseline import run_baseline
from .core import compute_intervals, match
from .instances import GeneratorConfig, generate_instance
from .spatial import build_index


@dataclass
class BenchRecord:
    n: int
    k: int
    r: float
    d: str  # sampling distance, "none" for endpoint-only baseline, "" for COMMA
    seed: int
    algo: str
    status: str
    failed_index: int | None = None
    intervals: int = 0
    candidates: int = 0
    edges: int = 0
    visited: int = 0
    t_index: float = 0.0
    t_intervals: float = 0.0
    t_sweeps: float = 0.0
    t_extraction: float = 0.0
    t_candidates: float = 0.0
    t_dag: float = 0.0
    t_search: float = 0.0
    t_naive_intervals: float | None = None
    wall: float = 0.0

    @property
    def failed(self) -> bool:
        return self.status != "feasible"


COLUMNS = [f.name for f in fields(BenchRecord)]


@dataclass(frozen=True)
class Grid:
    n: Sequence[int]
    k: Sequence[int]
    r: Sequence[float]
    seeds: Sequence[int]
    d: Sequence[float | None] = (None,)
    algos: Sequence[str] = ("comma", "baseline")
    with_naive: bool = False

    def cases(self):
        return list(itertools.product(self.n, self.k, self.r, self.seeds))


def _run_case(case, grid: Grid) -> list[BenchRecord]:
    n, k, r, seed = case
    inst = generate_instance(GeneratorConfig(n=n, k=k, r=r, seed=seed))
    t0 = time.perf_counter()
    index = build_index(inst.path)
    t_index = time.perf_counter() - t0
    out = []
    if "comma" in grid.algos:
        t0 = time.perf_counter()
        res = match(inst, index=index)
        wall = time.perf_counter() - t0
        tm = res.timings
        rec = BenchRecord(n, k, r, "", seed, "comma", res.status.value, res.failed_index,
                          intervals=res.stats.get("raw_intervals", 0),
                          visited=res.stats.get("visited", 0), t_index=t_index,
                          t_intervals=tm["intervals"], t_sweeps=tm["sweeps"],
                          t_extraction=tm["extraction"], wall=wall)
        if grid.with_naive:
            t0 = time.perf_counter()
            compute_intervals(inst.path, inst.positions, inst.radius, naive=True)
            rec.t_naive_intervals = time.perf_counter() - t0
        out.append(rec)
    if "baseline" in grid.algos:
        for d in grid.d:
            t0 = time.perf_counter()
            res = run_baseline(inst, d, index=index)
            wall = time.perf_counter() - t0
            tm = res.timings
            out.append(BenchRecord(n, k, r, "none" if d is None else repr(float(d)), seed,
                                   "baseline", res.status.value, res.failed_index,
                                   candidates=res.candidates, edges=res.edges, t_index=t_index,
                                   t_candidates=tm["candidates"], t_dag=tm["dag"],
                                   t_search=tm["search"], wall=wall))
    return out


def run_bench(grid: Grid, jobs: int = 1) -> Iterator[BenchRecord]:
    """Yield records case by case; with ``jobs > 1`` cases run in worker processes
    and records are still yielded from this (single) process in grid order."""
    cases = grid.cases()
    if jobs <= 1:
        for case in cases:
            yield from _run_case(case, grid)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for recs in pool.map(_run_case, cases, itertools.repeat(grid)):
            yield from recs


def write_csv(records: Iterable[BenchRecord], fh) -> int:
    w = csv.DictWriter(fh, fieldnames=COLUMNS, lineterminator="\n")
    w.writeheader()
    count = 0
    for rec in records:
        row = asdict(rec)
        w.writerow({k: ("" if v is None else v) for k, v in row.items()})
        fh.flush()
        count += 1
    return count
