"""Command-line interface.

Exit codes: 0 success, 2 usage error, 3 data error, 4 numeric error.
"""

import argparse
import sys
import warnings

import numpy as np

from .errors import BoundaryMinimumWarning, DataError, DensDerivError
from .estimator import dkde, summarize
from .io import ingest, write_table
from .kernels import Kernel, kernel_convolution, kernel_derivative
from .mixture import bimodal_draws
from .selectors import METHODS, score_profile, select_bandwidth

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4

KERNELS = [k.value for k in Kernel]


class _UsageError(Exception):
    pass


def _positive_float(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _nonneg_int(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {text}")
    return value


def _count(minimum):
    def parse(text):
        value = int(text)
        if value < minimum:
            raise argparse.ArgumentTypeError(f"must be at least {minimum}, got {text}")
        return value

    return parse


def build_parser():
    parser = argparse.ArgumentParser(
        prog="densderiv",
        description="Kernel estimation of density derivatives and bandwidth selection.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--kernel", choices=KERNELS, default="gaussian")
    common.add_argument("--r", type=_nonneg_int, default=0, help="derivative order")
    common.add_argument("--format", choices=("csv", "json"), default="csv")

    data = argparse.ArgumentParser(add_help=False)
    data.add_argument("--input", default="-", help="single-column CSV file, '-' for stdin")

    search = argparse.ArgumentParser(add_help=False)
    search.add_argument("--lower", type=_positive_float)
    search.add_argument("--upper", type=_positive_float)
    search.add_argument("--tol", type=_positive_float)

    xgrid = argparse.ArgumentParser(add_help=False)
    xgrid.add_argument("--from", dest="start", type=float, default=-3.0)
    xgrid.add_argument("--to", dest="stop", type=float, default=3.0)
    xgrid.add_argument("--steps", type=_count(1), default=101)

    sub.add_parser("kernel-eval", parents=[common, xgrid], help="kernel derivative values")
    sub.add_parser("kernel-conv", parents=[common, xgrid], help="kernel self-convolution values")

    est = sub.add_parser("estimate", parents=[common, data, search], help="density derivative estimate")
    choice = est.add_mutually_exclusive_group()
    choice.add_argument("--h", type=_positive_float, help="bandwidth")
    choice.add_argument("--method", choices=METHODS, help="bandwidth selector (default ucv)")
    est.add_argument("--grid-points", type=_count(2), default=512)
    est.add_argument("--summary", action="store_true", help="print a five-number summary")

    bw = sub.add_parser("bandwidth", parents=[common, data, search], help="select a bandwidth")
    bw.add_argument("--method", choices=METHODS, default="ucv")

    prof = sub.add_parser("profile", parents=[common, data], help="selection criterion on a bandwidth grid")
    prof.add_argument("--method", choices=METHODS, default="ucv")
    prof.add_argument("--from", dest="start", type=_positive_float, default=0.1)
    prof.add_argument("--to", dest="stop", type=_positive_float, default=1.0)
    prof.add_argument("--steps", type=_count(1), default=50)

    sim = sub.add_parser("simulate", help="seeded sample from the bimodal mixture")
    sim.add_argument("--n", type=_count(2), default=200)
    sim.add_argument("--seed", type=int, default=1)
    sim.add_argument("--output", default="-", help="output file, '-' for stdout")
    return parser


def _search_kwargs(args):
    return {"lower": args.lower, "upper": args.upper, "tol": args.tol}


def _run_kernel(args, out):
    x = np.linspace(args.start, args.stop, args.steps)
    func = kernel_derivative if args.command == "kernel-eval" else kernel_convolution
    values = func(args.kernel, args.r, x)
    meta = {"kernel": args.kernel, "r": args.r}
    write_table(out, meta, ["x", "value"], zip(x.tolist(), values.tolist()), args.format)


def _run_estimate(args, out):
    sample = ingest(args.input)
    method = None
    h = args.h
    if h is None:
        method = args.method or "ucv"
        h = select_bandwidth(method, sample, args.r, args.kernel, **_search_kwargs(args)).h
    elif any(v is not None for v in _search_kwargs(args).values()):
        raise _UsageError("--lower/--upper/--tol only apply when the bandwidth is selected")
    est = dkde(sample, r=args.r, h=h, kernel=args.kernel, m=args.grid_points)
    meta = {"n": sample.n, "kernel": args.kernel, "r": args.r, "h": est.h}
    if method is not None:
        meta["method"] = method
    if args.summary:
        write_table(out, meta, ["stat", "eval_points", "est_fx"], summarize(est), args.format)
    else:
        rows = zip(est.eval_points.tolist(), est.est_fx.tolist())
        write_table(out, meta, ["eval_point", "est_fx"], rows, args.format)


def _run_bandwidth(args, out):
    sample = ingest(args.input)
    res = select_bandwidth(args.method, sample, args.r, args.kernel, **_search_kwargs(args))
    meta = {
        "n": sample.n,
        "lower": res.interval.lower,
        "upper": res.interval.upper,
        "tol": res.interval.tol,
        "at_boundary": res.at_boundary,
    }
    row = (res.method, res.r, str(res.kernel), res.h, res.objective)
    write_table(out, meta, ["method", "r", "kernel", "h", "objective"], [row], args.format)


def _run_profile(args, out):
    sample = ingest(args.input)
    if args.stop <= args.start and args.steps > 1:
        raise _UsageError("--to must exceed --from")
    bws = np.linspace(args.start, args.stop, args.steps)
    prof = score_profile(args.method, sample, args.r, args.kernel, bws)
    meta = {
        "n": sample.n,
        "method": prof.method,
        "kernel": args.kernel,
        "r": prof.r,
        "failures": prof.failures,
    }
    write_table(out, meta, ["h", "score"], zip(prof.bandwidths.tolist(), prof.scores.tolist()), args.format)


def _run_simulate(args, out):
    values = bimodal_draws(args.n, args.seed)
    if args.output == "-":
        write_table(out, {}, ["x"], ((v,) for v in values.tolist()))
    else:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            write_table(fh, {}, ["x"], ((v,) for v in values.tolist()))


_COMMANDS = {
    "kernel-eval": _run_kernel,
    "kernel-conv": _run_kernel,
    "estimate": _run_estimate,
    "bandwidth": _run_bandwidth,
    "profile": _run_profile,
    "simulate": _run_simulate,
}


def main(argv=None, stdout=None, stderr=None):
    out = stdout if stdout is not None else sys.stdout
    err = stderr if stderr is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", BoundaryMinimumWarning)
        try:
            _COMMANDS[args.command](args, out)
            code = EXIT_OK
        except _UsageError as exc:
            err.write(f"densderiv: error: {exc}\n")
            code = EXIT_USAGE
        except (DataError, OSError) as exc:
            err.write(f"densderiv: data error: {exc}\n")
            code = EXIT_DATA
        except DensDerivError as exc:
            err.write(f"densderiv: numeric error: {exc}\n")
            code = EXIT_NUMERIC
        except ValueError as exc:
            # invalid search intervals and similar argument combinations
            err.write(f"densderiv: error: {exc}\n")
            code = EXIT_USAGE
    for w in caught:
        if issubclass(w.category, BoundaryMinimumWarning):
            err.write(f"densderiv: warning: {w.message}\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
