"""Command line interface.

Exit status: 0 on success (an infeasible answer is a success), 1 when
``--require-feasible`` is given and the answer is infeasible or when
``verify`` finds violations, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from ._accel import BACKEND
from .baseline import run_baseline
from .bench import Grid, run_bench, write_csv
from .core import MatchResult, Status, match
from .gtfs import GtfsError, gtfs_extract, trip_ref
from .instances import (GeneratorConfig, export_result, generate_instance, load_instance,
                        read_json, result_document, save_instance, write_json)
from .path import PathLocation, ValidationError, location_at
from .verification import interval_coverage_check, validate_sequence

EXIT_OK, EXIT_INFEASIBLE, EXIT_INPUT = 0, 1, 2


def _emit(doc: dict, out):
    text = write_json(doc, out)
    if out is None:
        sys.stdout.write(text)


def _instance(args):
    return load_instance(read_json(args.instance), radius=args.radius)


def _status_code(feasible: bool, args) -> int:
    return EXIT_INFEASIBLE if (args.require_feasible and not feasible) else EXIT_OK


def cmd_match(args) -> int:
    inst = _instance(args)
    res = match(inst, args.strategy, naive=args.naive)
    _emit(result_document(res), args.out)
    return _status_code(res.feasible, args)


def cmd_baseline(args) -> int:
    inst = _instance(args)
    d = None if args.endpoints_only else args.sampling_distance
    res = run_baseline(inst, d)
    doc = result_document(res)
    doc.update(candidates=res.candidates, edges=res.edges)
    _emit(doc, args.out)
    return _status_code(res.feasible, args)


def cmd_gen(args) -> int:
    cfg = GeneratorConfig(n=args.n, k=args.k, r=args.r, seed=args.seed, rho=args.rho)
    _emit(save_instance(generate_instance(cfg)), args.out)
    return EXIT_OK


def cmd_gtfs(args) -> int:
    ref = trip_ref(args.feed, args.trip)
    inst = gtfs_extract(ref, args.radius, time_field=args.time_field,
                        min_edge_time=args.min_edge_time)
    _emit(save_instance(inst), args.out)
    return EXIT_OK


def _result_from_doc(doc: dict) -> MatchResult:
    locs = [PathLocation(l["segment"], l["lambda"], l["tau"], (l["x"], l["y"]))
            for l in doc.get("locations", [])]
    sets = [[(iv["a"], iv["b"]) for iv in s] for s in doc.get("intervals", [])]
    return MatchResult(Status(doc["status"]), locs or None, doc.get("failed_index"), sets)


def cmd_verify(args) -> int:
    inst = _instance(args)
    res = _result_from_doc(read_json(args.result))
    report = {"status": res.status.value}
    ok = True
    if res.feasible:
        locs = res.locations
        seq = validate_sequence(inst, locs)
        # re-derive each location from (segment, lambda) as an extra consistency check
        rebuilt = [location_at(inst.path, l.segment, min(max(l.lam, 0.0), 1.0)) for l in locs]
        seq2 = validate_sequence(inst, rebuilt)
        report["sequence"] = seq.to_dict()
        ok = seq.ok and seq2.ok
        if res.intervals:
            cov = interval_coverage_check(inst, res.intervals, args.samples)
            report["coverage"] = cov.to_dict()
            ok = ok and cov.ok
    report["ok"] = ok
    _emit(report, args.out)
    return EXIT_OK if ok else EXIT_INFEASIBLE


def _seeds(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


def _d_value(text: str):
    return None if text.lower() in ("none", "endpoints") else float(text)


def cmd_bench(args) -> int:
    grid = Grid(n=args.n, k=args.k, r=args.r, seeds=_seeds(args.seeds),
                d=args.d or [None], algos=args.algo or ["comma", "baseline"],
                with_naive=args.with_naive)
    records = run_bench(grid, jobs=args.jobs)
    if args.out:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            write_csv(records, fh)
    else:
        write_csv(records, sys.stdout)
    return EXIT_OK


def cmd_export(args) -> int:
    inst = _instance(args)
    res = _result_from_doc(read_json(args.result)) if args.result else match(inst)
    cands = None
    if args.with_candidates is not None:
        cands = run_baseline(inst, args.with_candidates or None).layers
    _emit(export_result(inst, res, cands), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="comma", description="Continuous map matching on paths.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({BACKEND})")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, instance=True):
        if instance:
            sp.add_argument("--instance", required=True, help="instance JSON document")
            sp.add_argument("--radius", type=float, help="override the document radius")
        sp.add_argument("--out", help="output file (default: stdout)")

    sp = sub.add_parser("match", help="run COMMA on an instance")
    common(sp)
    sp.add_argument("--strategy", choices=["latest", "earliest"], default="latest")
    sp.add_argument("--naive", action="store_true", help="scan all segments instead of the index")
    sp.add_argument("--require-feasible", action="store_true")
    sp.set_defaults(func=cmd_match)

    sp = sub.add_parser("baseline", help="run the layered-DAG baseline")
    common(sp)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--sampling-distance", type=float)
    g.add_argument("--endpoints-only", action="store_true")
    sp.add_argument("--require-feasible", action="store_true")
    sp.set_defaults(func=cmd_baseline)

    sp = sub.add_parser("gen", help="generate a random instance")
    common(sp, instance=False)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--r", "--radius", dest="r", type=float, required=True)
    sp.add_argument("--rho", type=float, help="perturbation radius (default 0.9 r)")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("gtfs", help="extract an instance from a GTFS trip")
    common(sp, instance=False)
    sp.add_argument("--feed", required=True)
    sp.add_argument("--trip", required=True)
    sp.add_argument("--radius", type=float, required=True, help="radius in metres")
    sp.add_argument("--time-field", choices=["departure_time", "arrival_time"],
                    default="departure_time")
    sp.add_argument("--min-edge-time", type=float)
    sp.set_defaults(func=cmd_gtfs)

    sp = sub.add_parser("verify", help="check a result document against its instance")
    common(sp)
    sp.add_argument("--result", required=True)
    sp.add_argument("--samples", type=int, default=16, help="samples per final interval")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("bench", help="benchmark grid, one CSV row per run")
    sp.add_argument("--out")
    sp.add_argument("--n", type=int, nargs="+", required=True)
    sp.add_argument("--k", type=int, nargs="+", required=True)
    sp.add_argument("--r", type=float, nargs="+", default=[1.0])
    sp.add_argument("--d", type=_d_value, nargs="+",
                    help="baseline sampling distances; 'none' for endpoints only")
    sp.add_argument("--seeds", default="0", help="e.g. 0..49 or 1,2,5")
    sp.add_argument("--seed", type=int, help="single seed (same as --seeds N)")
    sp.add_argument("--algo", choices=["comma", "baseline"], action="append")
    sp.add_argument("--with-naive", action="store_true")
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("export", help="GeoJSON rendering of an instance and result")
    common(sp)
    sp.add_argument("--result", help="result document (default: run match)")
    sp.add_argument("--format", choices=["geojson"], default="geojson")
    sp.add_argument("--with-candidates", type=float, nargs="?", const=0.0, default=None,
                    metavar="D", help="include baseline candidates (sampling distance D)")
    sp.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "seed", None) is not None and args.command == "bench":
        args.seeds = str(args.seed)
    try:
        return args.func(args)
    except (ValidationError, GtfsError, ValueError, OSError, json.JSONDecodeError) as err:
        print(f"comma {args.command}: error: {err}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
