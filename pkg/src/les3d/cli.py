"""Command-line driver.

Subcommands: ``solve`` runs the search on a cloud file, ``gen`` writes a
synthetic cloud, ``oracle`` runs one of the reference solvers, ``bench``
times hull construction over doubling sizes. Exit codes: 0 success,
2 input/validation error, 3 degenerate geometry, 4 I/O error.

The environment variable ``LES3D_THREADS`` caps the worker count; results
do not depend on it.
"""

from __future__ import annotations

import argparse
import json
import statistics
import sys
import time

import numpy as np

from .errors import DegenerateGeometryError, Les3dError, ValidationError
from .fileio import (
    FORMATS,
    emit_geometry,
    read_cloud,
    result_document,
    write_cloud,
    write_result,
)
from .generators import ShellSpec, TwoSphereSpec, gen_ball, gen_shell, gen_two_spheres
from .hull import build_hull
from .oracle import exact_les, grid_les
from .scoring import PairSamplingPolicy
from .search import SearchParams, default_policy, run_les

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DEGENERATE = 3
EXIT_IO = 4


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DegenerateGeometryError as exc:
        print(f"error: degenerate geometry: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (ValidationError, Les3dError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="les3d",
        description="Largest empty sphere search in hollow 3D point clouds.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="run the sweep search on a cloud file")
    solve.add_argument("input", help="point cloud file")
    solve.add_argument("--format", choices=FORMATS, default=None,
                       help="input format (default: by extension)")
    _add_search_flags(solve)
    solve.add_argument("--out", default=None, help="result JSON path (default: stdout)")
    solve.add_argument("--emit-obj", default=None, metavar="PATH",
                       help="also write hull/les/cloud geometry as OBJ")
    solve.add_argument("--oracle", choices=("exact", "grid", "none"), default="none",
                       help="cross-check the result against a reference solver")
    solve.add_argument("--grid-res", type=int, default=64,
                       help="grid oracle resolution (nodes per axis)")
    solve.add_argument("--workers", type=int, default=1)
    solve.set_defaults(func=_cmd_solve)

    gen = sub.add_parser("gen", help="generate a synthetic cloud file")
    gen.add_argument("kind", choices=("shell", "two-spheres", "ball"))
    gen.add_argument("--n", type=int, default=2000,
                     help="total points (per sphere for two-spheres: n/2)")
    gen.add_argument("--radius", type=float, default=1.0)
    gen.add_argument("--noise", type=float, default=0.02)
    gen.add_argument("--offset", default="1,0,0", metavar="X,Y,Z",
                     help="center offset for two-spheres")
    gen.add_argument("--seed", type=int, default=None,
                     help="generator seed (default: the spec default)")
    gen.add_argument("--out", required=True)
    gen.add_argument("--format", choices=FORMATS, default=None)
    gen.set_defaults(func=_cmd_gen)

    oracle = sub.add_parser("oracle", help="run a reference solver on a cloud file")
    oracle.add_argument("input")
    oracle.add_argument("--format", choices=FORMATS, default=None)
    oracle.add_argument("--method", choices=("exact", "grid"), default="exact")
    oracle.add_argument("--grid-res", type=int, default=64)
    oracle.add_argument("--out", default=None, help="JSON output path (default: stdout)")
    oracle.set_defaults(func=_cmd_oracle)

    bench = sub.add_parser("bench", help="time hull construction over doubling sizes")
    bench.add_argument("--sizes", default="10000,20000,40000")
    bench.add_argument("--repeats", type=int, default=5)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--json", default=None, metavar="PATH")
    bench.set_defaults(func=_cmd_bench)
    return p


def _add_search_flags(sp) -> None:
    sp.add_argument("--steps", type=int, default=64,
                    help="sphere positions per swept segment (>= 3)")
    sp.add_argument("--best-segments", type=int, default=16,
                    help="top-scoring segments swept at order 1")
    sp.add_argument("--max-order", type=int, default=3)
    sp.add_argument("--mds-direction", choices=("min", "max"), default="min")
    sp.add_argument("--pairs", choices=("all", "sampled"), default=None,
                    help="pair enumeration (default: all while cheap, else sampled)")
    sp.add_argument("--sample-fraction", type=float, default=0.01)
    sp.add_argument("--seed", type=int, default=0)


def _cmd_solve(args) -> int:
    cloud = read_cloud(args.input, args.format)
    params = SearchParams(
        steps=args.steps,
        best_segment_count=args.best_segments,
        max_order=args.max_order,
        mds_direction=args.mds_direction,
        seed=args.seed,
    )
    policy = _policy_from_args(args, cloud)
    result = run_les(cloud, params, policy=policy, workers=args.workers)
    hull = build_hull(cloud)
    doc_policy = policy if policy is not None else default_policy(hull, args.seed)

    les = result.les.sphere
    print(
        f"les: center=({les.center[0]:.9g}, {les.center[1]:.9g}, {les.center[2]:.9g}) "
        f"radius={les.radius:.9g} order={result.les.order} "
        f"candidates={len(result.candidates)} orders_run={result.orders_run} "
        f"wall_ms={result.stats.wall_ms:.1f}",
        file=sys.stderr,
    )
    if args.oracle != "none":
        ref = exact_les(cloud) if args.oracle == "exact" else grid_les(cloud, args.grid_res)
        ratio = les.radius / ref.radius if ref.radius > 0 else float("inf")
        print(
            f"oracle[{args.oracle}]: radius={ref.radius:.9g} ratio={ratio:.6f}",
            file=sys.stderr,
        )

    if args.out:
        write_result(result, args.out, params, doc_policy)
    else:
        json.dump(result_document(result, params, doc_policy), sys.stdout, indent=2)
        print()
    if args.emit_obj:
        emit_geometry(result, cloud, hull, args.emit_obj)
    return EXIT_OK


def _cmd_gen(args) -> int:
    if args.kind == "shell":
        spec = ShellSpec(n=args.n, radius=args.radius, noise=args.noise,
                         **({} if args.seed is None else {"seed": args.seed}))
        cloud = gen_shell(spec)
    elif args.kind == "two-spheres":
        offset = tuple(float(x) for x in args.offset.split(","))
        spec = TwoSphereSpec(
            n_per_sphere=max(2, args.n // 2),
            radius=args.radius,
            offset=offset,
            noise=args.noise,
            **({} if args.seed is None else {"seed": args.seed}),
        )
        cloud = gen_two_spheres(spec)
    else:
        cloud = gen_ball(args.n, args.radius, args.seed if args.seed is not None else 0)
    write_cloud(cloud, args.out, args.format)
    print(f"wrote {len(cloud)} points to {args.out}", file=sys.stderr)
    return EXIT_OK


def _cmd_oracle(args) -> int:
    cloud = read_cloud(args.input, args.format)
    if args.method == "exact":
        sphere = exact_les(cloud)
    else:
        sphere = grid_les(cloud, args.grid_res)
    doc = {
        "method": args.method,
        "center": [float(v) for v in sphere.center],
        "radius": float(sphere.radius),
    }
    if args.method == "grid":
        doc["resolution"] = args.grid_res
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
    else:
        json.dump(doc, sys.stdout, indent=2)
        print()
    return EXIT_OK


def _cmd_bench(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",")]
    rows = []
    for n in sizes:
        cloud = gen_ball(n, seed=args.seed)
        times = []
        for _ in range(args.repeats):
            t0 = time.perf_counter()
            build_hull(cloud)
            times.append((time.perf_counter() - t0) * 1000.0)
        rows.append((n, statistics.median(times)))
        print(f"hull n={n:>8d}  median={rows[-1][1]:9.2f} ms", file=sys.stderr)
    for (n1, t1), (n2, t2) in zip(rows, rows[1:]):
        print(f"ratio t({n2})/t({n1}) = {t2 / t1:.3f}", file=sys.stderr)
    if args.json:
        doc = {
            "sizes": [r[0] for r in rows],
            "median_ms": [r[1] for r in rows],
            "ratios": [r2[1] / r1[1] for r1, r2 in zip(rows, rows[1:])],
        }
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
    return EXIT_OK


def _policy_from_args(args, cloud) -> PairSamplingPolicy | None:
    if args.pairs is None:
        return None  # run_les applies the default budget rule
    if args.pairs == "all":
        return PairSamplingPolicy(mode="all-pairs", seed=args.seed)
    return PairSamplingPolicy(
        mode="sampled", sample_fraction=args.sample_fraction, seed=args.seed
    )


if __name__ == "__main__":
    sys.exit(main())
