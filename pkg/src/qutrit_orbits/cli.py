"""Command-line interface.

Subcommands: invariants, membership, slice, molien, gradcheck, verify.
Exit codes: 0 = pass, 1 = a check or membership failed, 2 = usage error.
The default seed comes from QUTRIT_ORBITS_SEED when set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import gradgeom, membership, molien, su3, verify
from .invariants import casimirs, invariants_json_dict, local_invariants, local_point


def _default_seed() -> int:
    env = os.environ.get("QUTRIT_ORBITS_SEED")
    return int(env) if env else verify.DEFAULT_SEED


def _parse_bloch(text: str) -> np.ndarray:
    parts = [p for p in text.replace(",", " ").split() if p]
    if len(parts) != 8:
        raise ValueError(f"expected 8 Bloch components, got {len(parts)}")
    return np.array([float(p) for p in parts])


def _load_density(path: str) -> np.ndarray:
    with open(path) as fh:
        return su3.density_from_json_dict(json.load(fh))


def _emit(obj: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(obj, indent=1, default=str))
    else:
        for k, v in obj.items():
            print(f"{k}: {v}")


def cmd_invariants(args) -> int:
    try:
        if args.bloch is not None:
            xi = _parse_bloch(args.bloch)
        else:
            xi = su3.density_to_bloch(_load_density(args.density))
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    rec = invariants_json_dict(xi)
    rec["xi"] = list(map(float, xi))
    rec["physical"] = membership.is_physical_bloch(xi, args.tol).to_json()
    g = casimirs(xi)
    rec["global_membership"] = membership.in_global_orbit_space(g.c2, g.c3, args.tol).to_json()
    rec["local_membership"] = membership.in_local_orbit_space(local_point(xi), args.tol).to_json()
    _emit(rec, args.format)
    return 0


def cmd_membership(args) -> int:
    try:
        if args.point is not None:
            vals = [float(p) for p in args.point.replace(",", " ").split() if p]
            if len(vals) != 4:
                raise ValueError(f"expected 4 values f1,f2,c2,c3, got {len(vals)}")
            verdicts = {
                "local": membership.in_local_orbit_space(tuple(vals), args.tol).to_json(),
                "global": membership.in_global_orbit_space(vals[2], vals[3], args.tol).to_json(),
            }
        else:
            xi = (
                _parse_bloch(args.bloch)
                if args.bloch is not None
                else su3.density_to_bloch(_load_density(args.density))
            )
            g = casimirs(xi)
            verdicts = {
                "physical": membership.is_physical_bloch(xi, args.tol).to_json(),
                "global": membership.in_global_orbit_space(g.c2, g.c3, args.tol).to_json(),
                "local": membership.in_local_orbit_space(local_point(xi), args.tol).to_json(),
            }
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(verdicts, args.format)
    return 0 if all(v["inside"] for v in verdicts.values()) else 1


def cmd_slice(args) -> int:
    mesh = membership.slice_mesh(args.f1, args.n, tol=args.tol)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    stem = f"slice_f1={args.f1:g}"
    written = []
    if args.format in ("csv", "both"):
        path = out / f"{stem}.csv"
        mesh.write_csv(path)
        written.append(str(path))
    if args.format in ("json", "both"):
        path = out / f"{stem}.json"
        mesh.write_json(path)
        written.append(str(path))
    summary = {
        "f1": args.f1,
        "n": args.n,
        "cells": len(mesh.cells),
        "dropped_cells": mesh.dropped_cells,
        "projection_area": mesh.projection_area(),
        "key_points": {k: list(v) for k, v in mesh.key_points.items()},
        "files": written,
    }
    print(json.dumps(summary, indent=1))
    return 0


def cmd_molien(args) -> int:
    group = {"su3": "su3", "u2": "su2xu1"}[args.group]
    try:
        table = molien.molien_table(group, args.space, args.max_degree, args.method)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.report:
        table["consistency_report"] = molien.residue_consistency_report(args.max_degree)
    print(json.dumps(table, indent=1))
    return 0 if table["agree"] else 1


def cmd_gradcheck(args) -> int:
    report = gradgeom.gradcheck_report(samples=args.samples, seed=args.seed, tol=args.tol)
    print(json.dumps(report, indent=1))
    return 0 if report["pass"] else 1


def cmd_verify(args) -> int:
    report = verify.run_verification(
        samples=args.samples,
        seed=args.seed,
        jobs=args.jobs,
        tol=args.tol,
        inject_fault=args.inject_fault,
        command="verify",
    )
    if args.format == "json":
        print(json.dumps(report.to_json(), indent=1))
    else:
        for c in report.checks:
            status = "pass" if c.passed else "FAIL"
            print(f"[{status}] {c.name:28s} worst={c.worst:.3e} thr={c.threshold:.0e} {c.detail}")
        print(f"-- {len(report.checks)} checks, {report.elapsed_seconds:.1f} s, seed {report.seed}")
    if not report.passed:
        offender = report.worst_offender()
        print(f"FAILED: worst offender is {offender.name} ({offender.worst:.3e})", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qutrit-orbits",
        description="Qutrit orbit spaces: invariants, Grad geometry, Molien counts, slices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    seed = _default_seed()

    p = sub.add_parser("invariants", help="invariants and verdicts for one state")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--bloch", help="8 comma-separated Bloch components")
    src.add_argument("--density", help="path to a density-matrix JSON file (re/im)")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("membership", help="membership verdicts for a state or a point")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--bloch")
    src.add_argument("--density")
    src.add_argument("--point", help="f1,f2,c2,c3 in the local integrity basis")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_membership)

    p = sub.add_parser("slice", help="export a fixed-f1 cross section of the local orbit space")
    p.add_argument("--f1", type=float, required=True)
    p.add_argument("--n", type=int, default=64, help="grid size per axis (>= 2)")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--format", choices=("csv", "json", "both"), default="both")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_slice)

    p = sub.add_parser("molien", help="Molien coefficients by one or all methods")
    p.add_argument("--group", choices=("su3", "u2"), required=True)
    p.add_argument("--space", choices=("bloch8", "matrix9"), default="bloch8")
    p.add_argument("--max-degree", type=int, default=4)
    p.add_argument(
        "--method", choices=("series", "quadrature", "kernel", "all"), default="all"
    )
    p.add_argument("--report", action="store_true", help="append the d=9 consistency report")
    p.set_defaults(func=cmd_molien)

    p = sub.add_parser("gradcheck", help="certify closed-form Grad entries against the oracle")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=seed)
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_gradcheck)

    p = sub.add_parser("verify", help="run the full property suite")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=seed)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument(
        "--inject-fault",
        choices=("flip-d",),
        default=None,
        help="test mode: corrupt a structure constant to exercise failure paths",
    )
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
