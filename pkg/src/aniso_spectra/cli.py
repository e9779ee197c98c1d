"""Command-line front end.

Subcommands expose every computation with JSON in/out and CSV for curves and
fields.  Exit codes: 0 success, 1 acceptance failure, 2 input error,
3 numerical non-convergence.  Angles are radians everywhere.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys

import numpy as np

from . import __version__, geometry, oned, solver2d, spectral
from .acceptance import SUITES, run_suites
from .anisotropy import (
    anisotropy_from_json,
    differentiability_scan,
    kernel_classify,
    norm_sup,
    rotation_normal_form,
)
from .errors import InputError, NonConvergence, NotDegenerateLine
from .geometry import polygon_from_json

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_NONCONVERGENCE = 3


def _load_json(path, loader, what):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {what} file {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(
            f"{what} file {path!r}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    return loader(data)


def _emit(payload, path=None):
    text = json.dumps(payload, indent=2, sort_keys=True)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text)


def _write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _write_manifest(path, command, inputs, seed, outputs):
    manifest = {
        "command": command,
        "inputs": inputs,
        "seed": seed,
        "versions": f"aniso-spectra {__version__}",
        "outputs": outputs,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def cmd_freq1d(args):
    if args.a == 0.0 and args.b == 0.0:
        raise InputError("a = b = 0 is the zero anisotropy")
    interval = oned.Interval(args.interval[0], args.interval[1])
    lam = oned.lambda_ab(args.p, interval, args.a, args.b)
    T = 0.5 * interval.length
    t0 = interval.midpoint + ((args.a - args.b) / (args.a + args.b)) * T
    result = {"lambda": lam, "t0": t0, "formula": "closed_form", "p": args.p,
              "interval": [interval.left, interval.right], "a": args.a, "b": args.b}
    outputs = []
    if args.oracle:
        res = oned.oracle_minimize_1d(
            args.p, interval, args.a, args.b, args.oracle, seed=args.seed
        )
        result["oracle_lambda"] = res.lambda_hat
        result["relative_gap"] = res.lambda_hat / lam - 1.0
        result["oracle_iterations"] = res.iterations
        if args.profile_csv:
            rows = np.column_stack([interval.grid(args.oracle), res.values])
            _write_csv(args.profile_csv, ["t", "u"], rows.tolist())
            outputs.append(args.profile_csv)
    _emit(result, args.out)
    if args.out:
        outputs.append(args.out)
    if args.manifest:
        _write_manifest(args.manifest, "freq1d", result, args.seed, outputs)
    return EXIT_OK


def cmd_freq2d(args):
    domain = _load_json(args.domain, polygon_from_json, "polygon")
    H = _load_json(args.anisotropy, anisotropy_from_json, "anisotropy")
    config = {}
    if args.config:
        config = _load_json(args.config, dict, "solver config")
    p = config.get("p", args.p)
    resolution = int(config.get("resolution", args.resolution))
    seed = int(config.get("seed", args.seed))
    continuation = tuple(config.get("continuation", solver2d.CONTINUATION))
    max_iters = int(config.get("max_iters", 50_000))

    outputs = []
    if args.closed_form:
        try:
            lam = spectral.lambda_degenerate(H, p, domain)
        except NotDegenerateLine as exc:
            raise InputError(
                "--closed-form needs a line or half-plane kernel anisotropy"
            ) from exc
        report = solver2d.SpectralReport(
            lambda_estimate=lam,
            method="closed_form",
            mesh_h=0.0,
            continuation_schedule=(),
            iterations=0,
            final_relative_decrease=0.0,
            coverage_ratio=1.0,
            converged=True,
            p=p,
            resolution=resolution,
            seed=seed,
        )
        payload = report.to_json()
        _emit(payload, args.out)
    else:
        report, fld = solver2d.minimize(
            H, p, domain, resolution, seed=seed,
            continuation=continuation, max_iters=max_iters,
        )
        payload = report.to_json()
        _emit(payload, args.out)
        if args.field_csv:
            _write_csv(args.field_csv, ["x", "y", "u"], fld.rows().tolist())
            outputs.append(args.field_csv)
        if not report.converged:
            return EXIT_NONCONVERGENCE
    if args.out:
        outputs.append(args.out)
    if args.manifest:
        _write_manifest(args.manifest, "freq2d", payload, seed, outputs)
    return EXIT_OK


def cmd_width(args):
    domain = _load_json(args.domain, polygon_from_json, "polygon")
    curve = geometry.width_curve(domain, samples=args.samples)
    summary = {
        "sup": curve.sup_value,
        "argmax_theta": curve.argmax_theta,
        "attained": curve.attained,
        "samples": args.samples,
    }
    outputs = []
    if args.csv:
        _write_csv(args.csv, ["theta", "L_theta"], curve.rows())
        outputs.append(args.csv)
    _emit(summary, args.out)
    if args.out:
        outputs.append(args.out)
    if args.manifest:
        _write_manifest(args.manifest, "width", summary, 0, outputs)
    return EXIT_OK


def cmd_bounds(args):
    domain = _load_json(args.domain, polygon_from_json, "polygon")
    report = spectral.bounds_report(
        args.p, domain, resolution=args.resolution, seed=args.seed,
        domain_id=os.path.basename(args.domain),
    )
    payload = report.to_json()
    _emit(payload, args.out)
    outputs = [args.out] if args.out else []
    if args.manifest:
        _write_manifest(args.manifest, "bounds", payload, args.seed, outputs)
    if report.lambda_max_report is not None and not report.lambda_max_report.converged:
        return EXIT_NONCONVERGENCE
    return EXIT_OK


def cmd_classify(args):
    H = _load_json(args.anisotropy, anisotropy_from_json, "anisotropy")
    kernel = kernel_classify(H)
    payload = {
        "kernel": kernel.category.value,
        "kernel_angles": list(kernel.angles),
        "norm": norm_sup(H),
        "non_c1_directions": differentiability_scan(H).tolist(),
    }
    try:
        A, a, b = rotation_normal_form(H)
        payload["normal_form"] = {
            "rotation_angle": math.atan2(A[1, 0], A[0, 0]),
            "a": a,
            "b": b,
        }
    except NotDegenerateLine:
        payload["normal_form"] = None
    _emit(payload, args.out)
    if args.manifest:
        _write_manifest(
            args.manifest, "classify", payload, 0, [args.out] if args.out else []
        )
    return EXIT_OK


def cmd_verify(args):
    names = list(SUITES) if args.suite == "all" else [args.suite]
    ok = run_suites(names, fast=args.fast)
    return EXIT_OK if ok else EXIT_FAIL


def build_parser():
    parser = argparse.ArgumentParser(
        prog="aniso-spectra",
        description=(
            "Fundamental frequencies of anisotropic p-Laplace operators "
            "generated by asymmetric seminorms (1D and 2D). Angles in radians."
        ),
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument(
        "--threads",
        type=int,
        default=int(os.environ.get("ANISO_SPECTRA_THREADS", "0")),
        help="cap worker threads (0 = library default)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    f1 = sub.add_parser("freq1d", help="1D closed-form constant and oracle")
    f1.add_argument("--p", type=float, required=True)
    f1.add_argument("--interval", type=float, nargs=2, metavar=("L", "R"), default=(-1.0, 1.0))
    f1.add_argument("--a", type=float, required=True)
    f1.add_argument("--b", type=float, required=True)
    f1.add_argument("--oracle", type=int, default=0, metavar="N",
                    help="run the FD oracle with N nodes")
    f1.add_argument("--seed", type=int, default=0)
    f1.add_argument("--profile-csv")
    f1.add_argument("--out")
    f1.add_argument("--manifest")
    f1.set_defaults(func=cmd_freq1d)

    f2 = sub.add_parser("freq2d", help="2D solver (or --closed-form fast path)")
    f2.add_argument("--p", type=float, required=True)
    f2.add_argument("--domain", required=True, help="polygon JSON file")
    f2.add_argument("--anisotropy", required=True, help="anisotropy JSON file")
    f2.add_argument("--resolution", type=int, default=64)
    f2.add_argument("--seed", type=int, default=0)
    f2.add_argument("--config", help="solver config JSON (overrides flags)")
    f2.add_argument("--closed-form", action="store_true",
                    help="use the degenerate-kernel closed form (never implicit)")
    f2.add_argument("--field-csv")
    f2.add_argument("--out")
    f2.add_argument("--manifest")
    f2.set_defaults(func=cmd_freq2d)

    w = sub.add_parser("width", help="directional width curve")
    w.add_argument("--domain", required=True)
    w.add_argument("--samples", type=int, default=256)
    w.add_argument("--csv")
    w.add_argument("--out")
    w.add_argument("--manifest")
    w.set_defaults(func=cmd_width)

    b = sub.add_parser("bounds", help="sharp lower/upper frequency bounds")
    b.add_argument("--p", type=float, required=True)
    b.add_argument("--domain", required=True)
    b.add_argument("--resolution", type=int, default=96)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--out")
    b.add_argument("--manifest")
    b.set_defaults(func=cmd_bounds)

    c = sub.add_parser("classify", help="kernel class, norm, normal form, kinks")
    c.add_argument("--anisotropy", required=True)
    c.add_argument("--out")
    c.add_argument("--manifest")
    c.set_defaults(func=cmd_classify)

    v = sub.add_parser("verify", help="run acceptance suites")
    v.add_argument("suite", choices=list(SUITES) + ["all"])
    v.add_argument("--fast", action="store_true",
                   help="reduced problem sizes (smoke run, not the acceptance gate)")
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads and args.threads > 0:
        os.environ.setdefault("OMP_NUM_THREADS", str(args.threads))
        os.environ.setdefault("OPENBLAS_NUM_THREADS", str(args.threads))
    try:
        return args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NonConvergence as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
