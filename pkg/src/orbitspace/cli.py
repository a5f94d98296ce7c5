"""Command line entry point: ``orbitspace <command> ...``.

Exit codes: 0 success, 1 a gating suite failed, 2 bad usage or unreadable input.
"""
from __future__ import annotations

import argparse
import sys
from typing import Sequence

import numpy as np

from . import harness, homology, model_spaces, orbit_maps

VERIFY_TARGETS = ("hp2", "s6", "cp2", "octonion", "quoric-fibers", "arnold", "matrix", "involutions", "all")


class UsageError(Exception):
    pass


def _suite_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--samples", type=int, default=10_000, help="samples per suite (separation uses a tenth as pairs)")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--tol", type=float, default=None, help="override every suite tolerance")
    p.add_argument("--timing", action="store_true", help="record wall time in the report (breaks byte-determinism)")
    p.add_argument("--workers", type=int, default=1, help="worker threads per suite")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orbitspace", description="Orbit-space quotient maps and their checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run the verification suites of a target")
    p.add_argument("target", choices=VERIFY_TARGETS)
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    _suite_flags(p)

    p = sub.add_parser("report", help="run every suite and write the JSON report")
    p.add_argument("--out", required=True)
    _suite_flags(p)

    p = sub.add_parser("enumerate", help="enumerate polygon colorings")
    p.add_argument("kind", choices=("quoric",))
    p.add_argument("--m", type=int, required=True, help="number of polygon sides (>= 3)")
    p.add_argument("--symmetry", choices=("raw", "swap12", "full"), default="raw")

    p = sub.add_parser("homology", help="integral homology of a cell complex")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="chain complex file")
    src.add_argument("--preset", choices=sorted(homology.PRESETS))

    p = sub.add_parser("weights", help="tangent weights of a standard T^3 chart")
    p.add_argument("--chart", choices=("A", "B"), required=True)

    p = sub.add_parser("census", help="skeleton census")
    p.add_argument("kind", choices=("hp2-skeleton",))

    p = sub.add_parser("stratify", help="T^3 stratum and stabilizer of a point of HP^2")
    p.add_argument("coords", nargs=12, type=float, help="three quaternions a b c d, row by row")
    p.add_argument("--zero-tol", type=float, default=1e-8, help="moduli at or below this count as zero")

    p = sub.add_parser("coverage", help="advisory nearest-neighbour spacing of image samples")
    p.add_argument("map", choices=sorted(harness.MAPS))
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=42)
    return parser


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _run_suites(target: str, args) -> int:
    if args.samples < 1:
        raise UsageError("--samples must be positive")
    reports = harness.run_target(target, args.samples, args.seed, args.tol, args.workers)
    _emit(harness.reports_to_json(reports, args.timing), args.out)
    failed = [r for r in reports if not r.passed]
    for r in failed:
        print(f"FAIL {r.suite} {r.map} {r.group}", file=sys.stderr)
    return 1 if failed else 0


def _cmd_enumerate(args) -> int:
    if args.m < 3:
        raise UsageError("--m must be at least 3")
    colorings = model_spaces.enumerate_quoric(args.m, args.symmetry)
    for qf in colorings:
        print(model_spaces.format_coloring(qf))
    print(f"# count {len(colorings)}")
    return 0


def _cmd_homology(args) -> int:
    if args.preset:
        c = homology.PRESETS[args.preset]()
    else:
        try:
            with open(args.input) as fh:
                c = homology.parse_complex(fh.read())
        except (OSError, ValueError) as exc:
            raise UsageError(str(exc)) from exc
    try:
        result = homology.homology(c)
    except homology.InvalidComplexError as exc:
        raise UsageError(str(exc)) from exc
    print(f"cells {' '.join(str(n) for n in c.cells)}")
    print(result.table())
    if args.preset in homology.FACE_PRESETS:
        ok, failing = homology.homology_polytope_check(homology.FACE_PRESETS[args.preset]())
        print(f"homology polytope: {'yes' if ok else 'no'}" + ("" if ok else f" (failing faces: {' '.join(failing)})"))
    return 0


def _cmd_weights(args) -> int:
    ws = model_spaces.chart_weights(args.chart)
    for w in ws.weights:
        print(" ".join(f"{x:d}" for x in w))
    print(f"# general position: {'yes' if model_spaces.general_position_check(ws) else 'no'}")
    return 0


def _cmd_census(args) -> int:
    census = homology.hp2_skeleton_census()
    print(" ".join(f"{kind}={n}" for kind, n in sorted(census.counts.items())))
    for name in sorted(census.incidences):
        if census.incidences[name]:
                print(f"{name}: {' '.join(sorted(census.incidences[name]))}")
    g = homology.build_hp2_gkm()
    degrees = sorted({d for _, d in g.degree()})
    print(f"# gkm vertices={g.number_of_nodes()} edges={g.number_of_edges()} degrees={degrees}")
    return 0


def _cmd_stratify(args) -> int:
    p = np.array(args.coords, dtype=float).reshape(3, 4)
    norm = np.linalg.norm(p)
    if norm == 0:
        raise UsageError("the zero vector is not a point of HP^2")
    s = orbit_maps.stratify_hp2(p / norm, args.zero_tol)
    print(f"stratum {s.label} ({s.kind})")
    print(f"stabilizer dim {s.stabilizer_dim}")
    chars = " ".join(",".join(str(x) for x in chi) for chi in s.characters)
    print(f"characters {chars or 'none'}")
    if s.ambiguous:
        print(f"# ambiguous: zeroed moduli of norm {s.distance:.3e}")
    return 0


def _cmd_coverage(args) -> int:
    stats = harness.coverage_report(args.map, args.samples, args.seed)
    for key, value in stats.items():
        print(f"{key}: {value}")
    return 0


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "verify":
            return _run_suites(args.target, args)
        if args.command == "report":
            return _run_suites("all", args)
        return {
            "enumerate": _cmd_enumerate,
            "homology": _cmd_homology,
            "weights": _cmd_weights,
            "census": _cmd_census,
            "stratify": _cmd_stratify,
            "coverage": _cmd_coverage,
        }[args.command](args)
    except UsageError as exc:
        print(f"orbitspace: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())
