"""Batch command line: simulate, reconstruct, evaluate, compare.

Exit codes: 0 success, 1 usage error, 2 data or format error, 3 solver
divergence.
"""
import argparse
import re
import sys
import time
from pathlib import Path

import numpy as np

from . import io
from .baselines import FbpConfig, SirtConfig, fbp_solve, sirt_solve
from .errors import (
    DivergenceError,
    FormatError,
    InvalidArgumentError,
    UndefinedMetricError,
    UnsupportedConfigurationError,
)
from .metrics import fsc, rfactor
from .phantom import NoiseSpec, load_preset, make_vesicle_phantom, preset_names, simulate_stack, tilt_range
from .projector import ProjectorConfig
from .solver import SolverConfig, SolveTrace, resire_solve, sse

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_DIVERGED = 0, 1, 2, 3
ALGORITHMS = ("resire", "sirt", "fbp")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _floats(text, n=None):
    try:
        vals = [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if n is not None and len(vals) != n:
        raise argparse.ArgumentTypeError(f"expected {n} comma-separated values, got {text!r}")
    return vals


def _dims(text):
    vals = _floats(text, 3)
    if any(v != int(v) or v < 1 for v in vals):
        raise argparse.ArgumentTypeError(f"dims must be positive integers, got {text!r}")
    return tuple(int(v) for v in vals)


def build_parser():
    parser = _Parser(prog="resire", description="Tomographic reconstruction by gradient descent.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("simulate", help="phantom + tilt series -> truth.mrc, stack.mrc, angles.tlt")
    p.add_argument("--phantom", required=True, choices=preset_names())
    p.add_argument("--tilt", default="-70,70,3.5", type=lambda s: _floats(s, 3), help="start,end,step in degrees")
    p.add_argument("--noise", type=float, default=None, help="noise sigma as a fraction of mean positive intensity")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--oversample", type=float, default=2.0)
    p.add_argument("--out", required=True, type=Path)

    p = sub.add_parser("reconstruct", help="stack -> recon.mrc, trace.csv")
    p.add_argument("--algo", required=True, choices=ALGORITHMS)
    p.add_argument("--stack", required=True, type=Path)
    p.add_argument("--angles", required=True, type=Path)
    p.add_argument("--dims", required=True, type=_dims)
    p.add_argument("--iters", type=int, default=400)
    p.add_argument("--step", type=float, default=None, help="RESIRE normalized step t (default 2) or SIRT relaxation (default 1)")
    p.add_argument("--oversample", type=float, default=2.0)
    p.add_argument("--positivity", action="store_true")
    p.add_argument("--rfactor-target", type=float, default=None)
    p.add_argument("--filter", default="ram-lak", choices=("ram-lak", "hamming-windowed-ram-lak"))
    p.add_argument("--out", required=True, type=Path)

    p = sub.add_parser("evaluate", help="recon vs truth -> fsc.csv, rfactor.csv")
    p.add_argument("--recon", required=True, type=Path)
    p.add_argument("--truth", required=True, type=Path)
    p.add_argument("--stack", required=True, type=Path)
    p.add_argument("--angles", required=True, type=Path)
    p.add_argument("--oversample", type=float, default=2.0)
    p.add_argument("--out", required=True, type=Path)

    p = sub.add_parser("compare", help="run all algorithms on <dir>/stack.mrc and tabulate")
    p.add_argument("--dir", required=True, type=Path)
    p.add_argument("--iters", type=int, default=400)
    p.add_argument("--oversample", type=float, default=2.0)
    return parser


def _simulate(args):
    phantom_spec, noise_spec = load_preset(args.phantom)
    noise = NoiseSpec(
        sigma_fraction=noise_spec.sigma_fraction if args.noise is None else args.noise,
        seed=noise_spec.seed if args.seed is None else args.seed,
    )
    truth = make_vesicle_phantom(phantom_spec)
    angles = tilt_range(*args.tilt)
    stack = simulate_stack(truth, angles, noise, ProjectorConfig(args.oversample))
    args.out.mkdir(parents=True, exist_ok=True)
    io.write_mrc(args.out / "truth.mrc", truth)
    io.write_stack(args.out / "stack.mrc", stack)
    io.write_tilt(args.out / "angles.tlt", stack.angles)
    print(f"wrote {len(stack)} projections of {args.phantom} to {args.out}")
    return EXIT_OK


def run_algorithm(algo, stack, dims, iters=400, step=None, oversample=2.0,
                  positivity=False, rfactor_target=None, fbp_filter="ram-lak"):
    """Run one reconstruction; returns ``(volume, trace, solver_config_or_None)``."""
    if algo == "resire":
        cfg = SolverConfig(
            iterations=iters,
            step_t=2.0 if step is None else step,
            oversampling_ratio=oversample,
            nonnegativity=positivity,
            rfactor_target=rfactor_target,
        )
        volume, trace = resire_solve(stack, dims, cfg)
        return volume, trace, cfg
    if positivity or rfactor_target is not None:
        raise UsageError(f"--positivity and --rfactor-target apply to resire only, not {algo}")
    if algo == "sirt":
        volume, trace = sirt_solve(stack, dims, SirtConfig(iters, 1.0 if step is None else step))
        return volume, trace, None
    t0 = time.perf_counter()
    volume = fbp_solve(stack, dims, FbpConfig(fbp_filter))
    seconds = time.perf_counter() - t0
    trace = SolveTrace()
    pcfg = ProjectorConfig(oversample)
    trace.append(sse(stack, volume, pcfg), rfactor(stack, volume, pcfg).aggregate, seconds)
    return volume, trace, None


def _reconstruct(args):
    stack = io.read_stack(args.stack, args.angles)
    volume, trace, cfg = run_algorithm(
        args.algo, stack, args.dims, args.iters, args.step, args.oversample,
        args.positivity, args.rfactor_target, args.filter,
    )
    args.out.mkdir(parents=True, exist_ok=True)
    io.write_mrc(args.out / "recon.mrc", volume)
    io.write_trace_csv(args.out / "trace.csv", trace)
    if cfg is not None:
        io.atomic_write(args.out / "config.txt", io.solver_config_to_text(cfg).encode())
    print(f"{args.algo}: {len(trace)} iterations, final R_F {trace.rfactor_history[-1]:.4f}")
    return EXIT_OK


def _evaluate(args):
    recon = io.read_mrc(args.recon)
    truth = io.read_mrc(args.truth)
    stack = io.read_stack(args.stack, args.angles)
    report = rfactor(stack, recon, ProjectorConfig(args.oversample))
    curve = fsc(recon, truth)
    args.out.mkdir(parents=True, exist_ok=True)
    io.write_fsc_csv(args.out / "fsc.csv", curve)
    io.write_rfactor_csv(args.out / "rfactor.csv", stack.angles, report)
    print(f"R_F {report.aggregate:.4f}")
    return EXIT_OK


def _compare(args):
    stack = io.read_stack(args.dir / "stack.mrc", args.dir / "angles.tlt")
    truth_path = args.dir / "truth.mrc"
    truth = io.read_mrc(truth_path) if truth_path.exists() else None
    nx, ny = stack.image_shape
    dims = truth.shape if truth is not None else (nx, ny, nx)
    pcfg = ProjectorConfig(args.oversample)
    rows = []
    for algo in ALGORITHMS:
        t0 = time.perf_counter()
        volume, _, _ = run_algorithm(algo, stack, dims, iters=args.iters, oversample=args.oversample)
        seconds = time.perf_counter() - t0
        rf = rfactor(stack, volume, pcfg).aggregate
        rows.append((algo, rf, seconds))
        io.write_mrc(args.dir / f"recon_{algo}.mrc", volume)
    print(f"{'algorithm':<10} {'final_R_F':>10} {'runtime_s':>10}")
    for algo, rf, seconds in rows:
        print(f"{algo:<10} {rf:>10.4f} {seconds:>10.2f}")
    io.write_csv(
        args.dir / "summary.csv",
        ["algorithm", "rfactor", "seconds"],
        [(a, repr(r), repr(s)) for a, r, s in rows],
    )
    return EXIT_OK


_COMMANDS = {"simulate": _simulate, "reconstruct": _reconstruct, "evaluate": _evaluate, "compare": _compare}


_NEGATIVE_LIST = re.compile(r"^-\d[\d.,eE+-]*$")


def _attach_negative_values(argv):
    """Join ``--opt -70,70,3.5`` into ``--opt=-70,70,3.5`` so argparse keeps the value."""
    out = []
    for token in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and _NEGATIVE_LIST.match(token):
            out[-1] = f"{out[-1]}={token}"
        else:
            out.append(token)
    return out


def main(argv=None):
    parser = build_parser()
    argv = _attach_negative_values(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_help())
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except DivergenceError as exc:
        print(f"error: solver diverged: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except (FormatError, InvalidArgumentError, UndefinedMetricError,
            UnsupportedConfigurationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
