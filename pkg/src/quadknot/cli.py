"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 bad input or degenerate
geometry.  ``$QUADKNOT_EPS`` overrides the absolute tolerance.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .approximation import build_approximation
from .errors import DegenerateError, QuadknotError
from .harness import DISTRIBUTIONS, SamplerConfig, run_batch, run_theorem_suite, sample_with_stats
from .invariants import classify_knot
from .knot import (
    classify_hexagon_pattern,
    disk_edge_intersections,
    dump_knot,
    is_disk_reducible,
    load_knot,
    match_hexagon_pattern,
    validate_general_position,
)
from .quadrisecants import find_quadrisecants

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

log = logging.getLogger("quadknot")


def _emit(obj, out=None):
    text = json.dumps(obj, indent=2, default=_json_default)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _json_default(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    raise TypeError(f"not JSON serializable: {type(x).__name__}")


def cmd_check(args) -> int:
    knot = load_knot(args.knotfile)
    gp = validate_general_position(knot)
    out = {"n": knot.n, "general_position": gp.to_json()}
    ok = gp.ok
    if knot.n == 6:
        try:
            pattern = disk_edge_intersections(knot)
            match = match_hexagon_pattern(pattern)
            out["pattern"] = pattern.to_json()
            out["pattern_shift"] = classify_hexagon_pattern(pattern)
            out["pattern_match"] = match._asdict() if match else None
            out["reducible_disks"] = [i for i in range(6) if is_disk_reducible(knot, i)]
        except DegenerateError as exc:
            out["pattern"] = f"{exc.code}: {exc}"
            ok = False
    _emit(out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_quadrisecants(args) -> int:
    knot = load_knot(args.knotfile)
    quads = find_quadrisecants(knot, allow_vertex_hits=args.allow_vertex_hits)
    if args.csv:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["id", "edges", "order_type", "adjacency_type", "dx", "dy", "dz", "mx", "my", "mz", "residual"])
        for q in quads:
            u = q.line.normalized()
            w.writerow([q.id, " ".join(map(str, q.edges)), q.order_type or "", "" if q.adjacency_type is None
                        else q.adjacency_type, *(f"{x:.17g}" for x in (*u.dir, *u.mom)), f"{q.residual(knot):.3e}"])
        sys.stdout.write(buf.getvalue())
    else:
        _emit({"count": len(quads), "quadrisecants": [q.to_json() for q in quads]})
    return EXIT_OK


def cmd_approx(args) -> int:
    knot = load_knot(args.knotfile)
    quads = find_quadrisecants(knot)
    approx = build_approximation(knot, quads)
    text = dump_knot(approx.points, labels=approx.label_names(), embedded=True)
    if args.output:
        Path(args.output).write_text(text + "\n")
        _emit({"n": approx.n, "embedded": True, "output": args.output})
    else:
        print(text)
    return EXIT_OK


def cmd_classify(args) -> int:
    knot = load_knot(args.knotfile)
    _emit(classify_knot(knot, seed=args.seed).to_json())
    return EXIT_OK


def cmd_verify(args) -> int:
    knot = load_knot(args.knotfile)
    report = run_theorem_suite(knot, seed=args.seed)
    _emit(report.to_json())
    if report.passed:
        return EXIT_OK
    if report.failed:
        return EXIT_FAIL
    return EXIT_INPUT  # some verdict is undecided because of degenerate geometry


def cmd_sample(args) -> int:
    cfg = SamplerConfig(seed=args.seed, distribution=args.dist, scale=args.scale, max_rejects=args.max_rejects)
    knot, stats = sample_with_stats(cfg)
    log.info("sampler: %s", stats)
    text = dump_knot(knot.vertices, seed=args.seed, distribution=args.dist, knot_class=stats["accepted"])
    if args.output:
        Path(args.output).write_text(text + "\n")
    else:
        print(text)
    return EXIT_OK


def cmd_batch(args) -> int:
    cfg = SamplerConfig(seed=args.seed, distribution=args.dist, scale=args.scale, max_rejects=args.max_rejects)
    result = run_batch(args.n, cfg, workers=args.workers)
    text = result.csv_text(timings=args.timings)
    if args.out:
        Path(args.out).write_text(text)
        summary_path = Path(args.summary) if args.summary else Path(args.out).with_suffix(".summary.json")
        _emit(result.summary, summary_path)
    else:
        sys.stdout.write(text)
        if args.summary:
            _emit(result.summary, args.summary)
    log.info("batch summary: %s", json.dumps(result.summary["fraction_passing"]))
    return EXIT_OK if result.summary["all_passed"] else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quadknot", description="Quadrisecants of polygonal knots.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="general position and disk/edge intersection pattern")
    c.add_argument("knotfile")
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("quadrisecants", help="all quadrisecants with hits and types")
    c.add_argument("knotfile")
    fmt = c.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON output (default)")
    fmt.add_argument("--csv", action="store_true", help="one CSV row per quadrisecant")
    c.add_argument("--allow-vertex-hits", action="store_true",
                   help="accept knots not in general position (lines through vertices)")
    c.set_defaults(func=cmd_quadrisecants)

    c = sub.add_parser("approx", help="quadrisecant approximation as a knot file")
    c.add_argument("knotfile")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_approx)

    c = sub.add_parser("classify", help="unknot / trefoil_left / trefoil_right / other")
    c.add_argument("knotfile")
    c.add_argument("--seed", type=int, default=0, help="seed for the projection direction")
    c.set_defaults(func=cmd_classify)

    c = sub.add_parser("verify", help="full theorem suite on a hexagonal trefoil")
    c.add_argument("knotfile")
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_verify)

    def sampler_args(c):
        c.add_argument("--seed", type=int, default=0)
        c.add_argument("--dist", choices=DISTRIBUTIONS, default="cube")
        c.add_argument("--scale", type=float, default=1.0)
        c.add_argument("--max-rejects", type=int, default=200_000)

    c = sub.add_parser("sample", help="random hexagonal trefoil")
    sampler_args(c)
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_sample)

    c = sub.add_parser("batch", help="run the theorem suite on N sampled trefoils")
    c.add_argument("--n", type=int, required=True)
    sampler_args(c)
    c.add_argument("--out", help="CSV path (default stdout); the summary goes next to it")
    c.add_argument("--summary", help="summary JSON path")
    c.add_argument("--workers", type=int, default=1)
    c.add_argument("--timings", action="store_true", help="fill ms_elapsed (makes the CSV non-reproducible)")
    c.set_defaults(func=cmd_batch)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (QuadknotError, ValueError, OSError, json.JSONDecodeError) as exc:
        code = getattr(exc, "code", type(exc).__name__)
        print(f"quadknot: {code}: {exc}", file=sys.stderr)
        if isinstance(exc, QuadknotError) and not isinstance(exc, DegenerateError) and exc.code in (
                "PROPERTY_VIOLATED", "INFINITE_FAMILY"):
            return EXIT_FAIL
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
