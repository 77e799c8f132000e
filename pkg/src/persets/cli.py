"""persets: campaigns, oracle checks, comparisons and plots from the shell.

Exit codes: 0 success, 1 validation failure, 2 usage error.  All
randomness flows from --seed; identical invocations write bit-identical
CSV/JSON.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import diagram_metrics, engine, graph_analysis, graphs, metric, regions, spaces
from .errors import PersetsError


def _add_campaign_args(p):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--space", help='model space, e.g. "s1", "sphere:m=2", "mk:kappa=-1:R=3.14159"')
    src.add_argument("--graph", help="metric graph JSON file")
    src.add_argument("--family", help='graph family, e.g. "glued:3.5,4.5:alpha=0.5"')
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--tuples", type=int, default=1_000_000, help="number of sampled n-tuples")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=engine.default_workers())
    p.add_argument("--oracle-fallback", action="store_true", help="allow n != 2k+2 via the brute-force oracle")


def _campaign_space(args):
    if args.space:
        return spaces.parse_space(args.space)
    if args.graph:
        return graphs.read_graph_json(args.graph)
    return graphs.parse_family(args.family)


def _angular(space) -> bool:
    return spaces.is_angular(space) if not isinstance(space, graphs.MetricGraph) else False


def cmd_sample(args) -> int:
    space = _campaign_space(args)
    sample = engine.sample_persistence_set(
        space, args.n, args.k, args.tuples, args.seed,
        workers=args.workers, oracle_fallback=args.oracle_fallback,
    )
    engine.write_sample(sample, args.out, args.out_json)
    if args.svg:
        engine.svg_scatter(sample.points, args.svg, angular=_angular(space),
                           title=f"{sample.space}  n={args.n} k={args.k}")
    if args.heatmap:
        hist = engine.histogram(sample, args.bins, args.bins)
        engine.svg_heatmap(hist, args.heatmap, angular=_angular(space),
                           title=f"{sample.space}  n={args.n} k={args.k}")
    print(json.dumps({
        "tuples": sample.tuples_drawn,
        "nontrivial": int(len(sample.points)),
        "nontrivial_fraction": sample.nontrivial_fraction,
        "out": str(args.out),
    }))
    return 0


def cmd_oracle_check(args) -> int:
    region = regions.parse_region(args.region)
    sample = engine.read_sample(args.check)
    ok = regions.contains(region, sample.points[:, 0], sample.points[:, 1], tol=args.tol)
    ok = np.atleast_1d(ok)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write("t_b,t_d,inside\n")
            for (b, d), flag in zip(sample.points, ok):
                fh.write(f"{float(b)!r},{float(d)!r},{int(flag)}\n")
    violations = int((~ok).sum())
    print(json.dumps({"points": int(len(ok)), "violations": violations, "region": args.region}))
    return 0 if violations == 0 else 1


def cmd_compare(args) -> int:
    if args.region_a and args.region_b:
        result = diagram_metrics.compare_regions(
            regions.parse_region(args.region_a),
            regions.parse_region(args.region_b),
            step=args.step,
            interior_step=max(args.step, args.interior_step),
        )
    elif args.a and args.b:
        sa = engine.read_sample(args.a)
        sb = engine.read_sample(args.b)
        d = diagram_metrics.hausdorff_bottleneck_points(
            sa.points, sb.points, empty_a=sa.trivial_count > 0, empty_b=sb.trivial_count > 0
        )
        result = {"hausdorff_bottleneck": d, "gh_lower_bound": d / 2.0, "resolution": 0.0}
    else:
        print("compare needs --a/--b sample files or --region-a/--region-b", file=sys.stderr)
        return 2
    print(json.dumps(result))
    return 0


def cmd_graph_betti(args) -> int:
    graph = graphs.read_graph_json(args.graph) if os.path.exists(args.graph) else graphs.parse_family(args.graph)
    sample = engine.sample_persistence_set(graph, 4, 1, args.tuples, args.seed, workers=args.workers)
    report = graph_analysis.detect_corners(sample, rel_tol=args.rel_tol, min_support=args.min_support)
    print(json.dumps({
        "betti": report.estimated_betti,
        "cycles": [
            {"lambda": c.lam, "length": 2.0 * c.lam, "support": c.support, "caveat": c.caveat}
            for c in report.corners
        ],
    }))
    return 0


def cmd_density_check(args) -> int:
    sample = engine.sample_persistence_set(
        spaces.CircleGeodesic(), 4, 1, args.tuples, args.seed, workers=args.workers
    )
    hist = engine.histogram(
        sample, args.bins, args.bins,
        range_b=(math.pi / 2.0, math.pi), range_d=(2.0 * math.pi / 3.0, math.pi),
    )
    err = engine.density_l1_error(hist, regions.circle_density)
    mass = regions.circle_density_mass()
    print(json.dumps({"l1_error": err, "analytic_mass": mass, "expected_mass": 1.0 / 9.0}))
    return 0 if err <= args.threshold else 1


def cmd_validate(args) -> int:
    try:
        if args.matrix.endswith(".json"):
            dm = metric.read_matrix_json(args.matrix)
        else:
            dm = metric.read_matrix_csv(args.matrix)
    except PersetsError as exc:
        detail = getattr(exc, "violations", None)
        print(json.dumps({"valid": False, "error": str(exc),
                          "violations": [[k, list(i), a] for k, i, a in detail] if detail else []}))
        return 1
    st = metric.stats(dm)
    sep = None if math.isinf(st.separation) else st.separation
    print(json.dumps({"valid": True, "n": dm.n, "diameter": st.diameter,
                      "radius": st.radius, "separation": sep}))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="persets", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="run a sampling campaign and write CSV/JSON/SVG")
    _add_campaign_args(p)
    p.add_argument("--out", default="sample.csv", help="CSV of nontrivial (t_b, t_d) points")
    p.add_argument("--out-json", default=None, help="JSON sidecar (default: <out>.json)")
    p.add_argument("--svg", default=None, help="scatter plot output")
    p.add_argument("--heatmap", default=None, help="heatmap plot output")
    p.add_argument("--bins", type=int, default=100)
    p.set_defaults(fn=cmd_sample)

    p = sub.add_parser("oracle-check", help="test sample points against an analytic region")
    p.add_argument("--region", required=True, help='region, e.g. "s1", "s2-geodesic", "mk:kappa=-1"')
    p.add_argument("--check", required=True, help="sample CSV to test")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--out", default=None, help="per-point boolean CSV")
    p.set_defaults(fn=cmd_oracle_check)

    p = sub.add_parser("compare", help="Hausdorff-bottleneck and GH lower bound")
    p.add_argument("--a", help="sample CSV A")
    p.add_argument("--b", help="sample CSV B")
    p.add_argument("--region-a", help="analytic region A")
    p.add_argument("--region-b", help="analytic region B")
    p.add_argument("--step", type=float, default=1e-3, help="boundary grid step")
    p.add_argument("--interior-step", type=float, default=5e-3)
    p.set_defaults(fn=cmd_compare)

    p = sub.add_parser("graph-betti", help="recover cycle count/lengths of a metric graph")
    p.add_argument("--graph", required=True, help="graph JSON file or family descriptor")
    p.add_argument("--tuples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=engine.default_workers())
    p.add_argument("--rel-tol", type=float, default=0.08)
    p.add_argument("--min-support", type=int, default=10)
    p.set_defaults(fn=cmd_graph_betti)

    p = sub.add_parser("density-check", help="L1 error of the circle campaign vs the exact density")
    p.add_argument("--tuples", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=engine.default_workers())
    p.add_argument("--bins", type=int, default=50)
    p.add_argument("--threshold", type=float, default=0.05)
    p.set_defaults(fn=cmd_density_check)

    p = sub.add_parser("validate", help="check a distance matrix file against the metric axioms")
    p.add_argument("matrix", help="CSV (rows of decimals) or JSON {n, d} file")
    p.set_defaults(fn=cmd_validate)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except PersetsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
