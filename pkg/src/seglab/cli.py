"""Command line interface: ``seglab segment | synth | eval``.

Exit codes: 0 success, 2 usage error, 3 I/O error, 4 numerical divergence.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import imageio, metrics, phantoms
from .penalty import ParameterError
from .solver import NumericalDivergenceError, SolverParams, run

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_DIVERGED = 0, 2, 3, 4
THREADS_ENV = "SEGLAB_THREADS"

log = logging.getLogger("seglab")


class UsageError(Exception):
    pass


def diagnostics_header(n_labels):
    return ["iter", "energy", "primal_residual"] + [f"mean_lambda_{i}" for i in range(n_labels)]


def write_diagnostics(path, result, n_labels):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(diagnostics_header(n_labels))
        for rec in result.diagnostics:
            w.writerow([rec.iteration, repr(rec.energy), repr(rec.primal_residual)]
                       + [repr(m) for m in rec.mean_lambda])


def _float_list(text):
    try:
        return [float(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _thread_limit():
    value = os.environ.get(THREADS_ENV)
    if value is None:
        return None
    try:
        n = int(value)
    except ValueError:
        raise UsageError(f"{THREADS_ENV} must be a positive integer, got {value!r}")
    if n < 1:
        raise UsageError(f"{THREADS_ENV} must be a positive integer, got {value!r}")
    return n


def build_parser():
    parser = argparse.ArgumentParser(prog="seglab", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    d = SolverParams()
    seg = sub.add_parser("segment", help="segment an image")
    seg.add_argument("--input", required=True, help="PGM, PPM or PNG image")
    seg.add_argument("--output-dir", default=".", help="directory for label maps (default: cwd)")
    seg.add_argument("--prefix", default="labels", help="output file stem (default: labels)")
    seg.add_argument("--labels", type=int, required=True, help="number of labels (>= 2)")
    seg.add_argument("--seed", type=int, default=d.seed)
    seg.add_argument("--eta", type=float, default=d.eta)
    seg.add_argument("--mu", type=float, default=d.mu)
    seg.add_argument("--alpha", type=float, default=d.alpha)
    seg.add_argument("--beta", type=float, default=d.beta)
    seg.add_argument("--tau", type=float, default=d.tau)
    seg.add_argument("--theta", type=float, default=d.theta)
    seg.add_argument("--intensity-scale", type=float, default=d.intensity_scale)
    seg.add_argument("--max-iters", type=int, default=d.max_iters)
    seg.add_argument("--tol", type=float, default=d.primal_tol, help="primal residual tolerance")
    seg.add_argument("--gs-sweeps", type=int, default=d.gs_sweeps)
    seg.add_argument("--tau-off", action="store_true", help="disable the exclusivity term")
    seg.add_argument("--global-lambda", type=float, default=None,
                     help="use this constant trade-off instead of the adaptive one")
    seg.add_argument("--lambda-cost", choices=("rho", "pointwise"), default=d.lambda_cost)
    seg.add_argument("--diagnostics", default=None, help="CSV path for per-iteration records")
    seg.add_argument("--soft-fields", action="store_true",
                     help="also write each label's partition function as PGM")

    syn = sub.add_parser("synth", help="generate a synthetic phantom")
    syn.add_argument("kind", choices=("junction", "rects", "piecewise"))
    syn.add_argument("--output-dir", default=".")
    syn.add_argument("--prefix", default=None, help="file stem (default: the phantom kind)")
    syn.add_argument("--size", type=int, default=None)
    syn.add_argument("--regions", type=int, default=None)
    syn.add_argument("--disc", type=float, default=0.35, help="junction disc radius fraction")
    syn.add_argument("--sigmas", type=_float_list, default=None,
                     help="rects noise sigmas: background,left,middle,right")
    syn.add_argument("--seed", type=int, default=0)

    ev = sub.add_parser("eval", help="compare a label map to ground truth")
    ev.add_argument("--pred", required=True)
    ev.add_argument("--truth", required=True)
    ev.add_argument("--csv", default=None, help="append the report as a CSV row")
    ev.add_argument("--json", default=None, help="append the report as a JSON line")
    return parser


def cmd_segment(args):
    if args.labels < 2:
        raise UsageError("--labels must be at least 2")
    threads = _thread_limit()
    try:
        params = SolverParams(
            n_labels=args.labels, eta=args.eta, mu=args.mu, alpha=args.alpha, beta=args.beta,
            tau=0.0 if args.tau_off else args.tau, theta=args.theta,
            intensity_scale=args.intensity_scale, max_iters=args.max_iters,
            primal_tol=args.tol, gs_sweeps=args.gs_sweeps, seed=args.seed,
            lambda_cost=args.lambda_cost, global_lambda=args.global_lambda,
        )
    except ParameterError as exc:
        raise UsageError(str(exc))
    image = imageio.load_image(args.input)
    if threads is not None:
        import numba

        numba.set_num_threads(min(threads, numba.config.NUMBA_NUM_THREADS))
    t0 = time.perf_counter()
    try:
        result = run(image, params)
    except ParameterError as exc:
        raise UsageError(str(exc))
    elapsed = time.perf_counter() - t0

    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    imageio.write_label_map(result.labels, out / f"{args.prefix}.pgm")
    imageio.write_label_map(result.labels, out / f"{args.prefix}.png")
    if args.soft_fields:
        for i, u in enumerate(result.soft_fields):
            imageio.write_image(np.clip(u, 0.0, 1.0), out / f"{args.prefix}_u{i}.pgm")
    if args.diagnostics:
        write_diagnostics(args.diagnostics, result, params.n_labels)
    status = "converged" if result.converged else "stopped at max-iters"
    print(f"iterations: {result.iterations} ({status})")
    print(f"wall time: {elapsed:.3f} s")
    return EXIT_OK


def cmd_synth(args):
    kind = args.kind
    try:
        if kind == "junction":
            ph = phantoms.junction_phantom(args.regions or 5, args.size or 256, args.disc)
        elif kind == "rects":
            kw = {"size": args.size or 128, "seed": args.seed}
            if args.sigmas is not None:
                kw["noise_sigmas"] = args.sigmas
            ph = phantoms.noisy_rectangles_phantom(**kw)
        else:
            ph = phantoms.piecewise_constant_phantom(args.regions or 4, args.size or 64, args.seed)
    except ParameterError as exc:
        raise UsageError(str(exc))
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = args.prefix or kind
    imageio.write_image(ph.image, out / f"{stem}.pgm")
    imageio.write_label_map(ph.ground_truth, out / f"{stem}_truth.pgm")
    imageio.write_label_map(ph.ground_truth, out / f"{stem}_truth.png")
    print(f"{ph.description}; {ph.n_classes} classes")
    return EXIT_OK


REPORT_FIELDS = ("precision", "recall", "f_measure", "pixel_accuracy")


def cmd_eval(args):
    pred = imageio.read_label_map(args.pred)
    truth = imageio.read_label_map(args.truth)
    if pred.shape != truth.shape:
        raise UsageError(f"size mismatch: {args.pred} is {pred.shape}, {args.truth} is {truth.shape}")
    report = metrics.evaluate(pred, truth)
    for name in REPORT_FIELDS:
        print(f"{name}: {getattr(report, name):.6f}")
    if args.csv:
        new = not os.path.exists(args.csv) or os.path.getsize(args.csv) == 0
        with open(args.csv, "a", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            if new:
                w.writerow(("pred", "truth") + REPORT_FIELDS)
            w.writerow([args.pred, args.truth] + [repr(getattr(report, k)) for k in REPORT_FIELDS])
    if args.json:
        with open(args.json, "a") as fh:
            row = {"pred": args.pred, "truth": args.truth, **report.as_dict()}
            fh.write(json.dumps(row, sort_keys=True) + "\n")
    return EXIT_OK


COMMANDS = {"segment": cmd_segment, "synth": cmd_synth, "eval": cmd_eval}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"seglab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalDivergenceError as exc:
        print(f"seglab: numerical divergence: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except (OSError, ValueError) as exc:
        print(f"seglab: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
