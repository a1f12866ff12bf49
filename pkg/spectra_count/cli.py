import argparse
import logging
import sys

from . import __version__
from .counting import estimate_count, estimate_interval_count, exact_count, slice_spectrum, within
from .estimator import CountConfig, Method, RngKind
from .exceptions import (
    ContractViolation, EigenSolverError, KrylovError, MatrixMarketError, OracleRefusal, QuadratureBreakdown,
    UsageError,
)
from .helpers import canonical_json, parse_values
from .laplace import gen_laplace_2d, laplace_shift_at_fraction
from .loaders import load_matrix, write_matrix_market
from .logger import logger, set_logger_level
from .manifest import RunManifest
from .preconditioner import PRECONDITIONER_KINDS, PreconditionerSpec
from .preconditioners import make_preconditioner
from .settings import get_setting


EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_REFUSED = 4

EXIT_CODES = (
    (ContractViolation, EXIT_USAGE),
    (MatrixMarketError, EXIT_USAGE),
    (OracleRefusal, EXIT_REFUSED),
    (EigenSolverError, EXIT_NUMERICAL),
    (QuadratureBreakdown, EXIT_NUMERICAL),
    (KrylovError, EXIT_NUMERICAL),
)


class ArgumentParser(argparse.ArgumentParser):
    """Parser that raises :class:`UsageError` instead of exiting."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def add_global_flags(parser, suppress=False):
    # subcommands repeat the flags without overriding values given before them
    parser.add_argument(
        "--debug", dest="debug", action="store_true",
        default=argparse.SUPPRESS if suppress else False,
        help="set logging level to debug",
    )
    parser.add_argument(
        "--threads", dest="threads", type=int,
        default=argparse.SUPPRESS if suppress else None,
        help="sample loop workers (default: SPECTRA_COUNT_THREADS or all cores)",
    )


def add_matrix_flags(parser, required=True):
    source = parser.add_mutually_exclusive_group(required=required)
    source.add_argument("--matrix", dest="matrix", type=str, help="Matrix Market file")
    source.add_argument("--gen-laplace", dest="gen_laplace", type=int, help="generate 2D Laplacian with h = 2**-s")


def add_shift_flags(parser):
    parser.add_argument("--tau", dest="tau", type=float, help="count eigenvalues below tau")
    parser.add_argument("--xi", dest="xi", type=float, help="lower end of the interval")
    parser.add_argument("--eta", dest="eta", type=float, help="upper end of the interval")


def add_estimator_flags(parser):
    parser.add_argument(
        "--method", dest="method", default="lanczos",
        choices=[method.value for method in Method] + ["lanczos_ga"],
    )
    parser.add_argument("--precond", dest="precond", default="none", choices=PRECONDITIONER_KINDS)
    parser.add_argument("--drop-tol", dest="drop_tol", type=float, help="drop tolerance of 'ildl'")
    parser.add_argument("--k", dest="k", type=int, default=10, help="Krylov steps or polynomial degree (default: 10)")
    parser.add_argument("--m", dest="m", type=int, default=None, help="number of samples (default: 50)")
    parser.add_argument("--seed", dest="seed", type=int, default=0)
    parser.add_argument("--rng", dest="rng", default="gaussian", choices=[kind.value for kind in RngKind])


def make_parser():
    parser = ArgumentParser(
        "spectra-count", description="Estimate the number of eigenvalues of a sparse symmetric matrix.",
    )
    add_global_flags(parser)
    subparsers = parser.add_subparsers(help="action to perform", dest="action", required=True)

    parser_count = subparsers.add_parser("count", help="estimate eigenvalue count below tau or inside [xi, eta)")
    add_matrix_flags(parser_count)
    add_shift_flags(parser_count)
    add_estimator_flags(parser_count)
    add_global_flags(parser_count, suppress=True)

    parser_exact = subparsers.add_parser("exact", help="exact count from the available oracle")
    add_matrix_flags(parser_exact)
    add_shift_flags(parser_exact)
    add_global_flags(parser_exact, suppress=True)

    parser_sweep = subparsers.add_parser("sweep", help="run estimator for several k or meshes")
    add_matrix_flags(parser_sweep, required=False)
    add_shift_flags(parser_sweep)
    add_estimator_flags(parser_sweep)
    parser_sweep.add_argument("--over", dest="over", required=True, choices=("k", "mesh"))
    parser_sweep.add_argument("--values", dest="values", required=True, help="comma separated list, e.g. 2,4,8")
    parser_sweep.add_argument(
        "--fraction", dest="fraction", type=float, help="mesh sweeps: tau at this spectral fraction",
    )
    parser_sweep.add_argument(
        "--stop-within", dest="stop_within", type=float, help="stop at first point within this relative error",
    )
    add_global_flags(parser_sweep, suppress=True)

    parser_slice = subparsers.add_parser("slice", help="split interval into slices with balanced counts")
    add_matrix_flags(parser_slice)
    add_estimator_flags(parser_slice)
    parser_slice.add_argument("--lower", dest="lower", type=float, required=True)
    parser_slice.add_argument("--upper", dest="upper", type=float, required=True)
    parser_slice.add_argument("--parts", dest="parts", type=int, required=True)
    parser_slice.add_argument("--probes", dest="probes", type=int, default=None)
    add_global_flags(parser_slice, suppress=True)

    parser_generate = subparsers.add_parser("generate", help="write generated Laplacian as Matrix Market")
    parser_generate.add_argument("--gen-laplace", dest="gen_laplace", type=int, required=True)
    parser_generate.add_argument("--output", dest="output", type=str, required=True)
    add_global_flags(parser_generate, suppress=True)

    return parser


def make_config(args, tau=None, xi=None, eta=None, k=None):
    spec = PreconditionerSpec.new(args.precond, args.drop_tol)
    return CountConfig.new(
        tau=tau, xi=xi, eta=eta, k=args.k if k is None else k, m=args.m, seed=args.seed,
        method=args.method, rng=args.rng, preconditioner=spec, threads=args.threads,
    )


def check_shift_flags(args):
    if args.tau is not None and (args.xi is not None or args.eta is not None):
        raise UsageError("--tau cannot be combined with --xi/--eta")
    if args.tau is None and (args.xi is None or args.eta is None):
        raise UsageError("either --tau or both --xi and --eta are required")


def build_preconditioner(A, tau, cfg, manifest):
    if cfg.method is Method.CHEBYSHEV:
        return None
    with manifest.timed("factorize"):
        return make_preconditioner(A, tau, cfg.preconditioner)


def count_point(A, cfg, provenance):
    """Estimate for ``cfg`` as JSON-ready dict with its manifest."""

    manifest = RunManifest(cfg, provenance, __version__)

    with manifest.timed("total"):
        if cfg.xi is None:
            preconditioner = build_preconditioner(A, cfg.tau, cfg, manifest)
            with manifest.timed("sample_loop"):
                report = estimate_count(A, cfg, preconditioner, threads=cfg.threads)
            document = report.to_dict()
        else:
            preconditioners = (
                build_preconditioner(A, cfg.xi, cfg, manifest),
                build_preconditioner(A, cfg.eta, cfg, manifest),
            )
            with manifest.timed("sample_loop"):
                interval = estimate_interval_count(A, cfg, preconditioners, threads=cfg.threads)
            document = interval.to_dict()

    return {**document, "manifest": manifest.to_dict()}


def cmd_count(args):
    check_shift_flags(args)
    A, provenance = load_matrix(args.matrix, args.gen_laplace)
    cfg = make_config(args, tau=args.tau, xi=args.xi, eta=args.eta)
    return count_point(A, cfg, provenance)


def cmd_exact(args):
    check_shift_flags(args)
    A, provenance = load_matrix(args.matrix, args.gen_laplace)

    if args.tau is not None:
        return {"count": exact_count(A, args.tau), "tau": args.tau, "provenance": provenance}

    lower, upper = exact_count(A, args.xi), exact_count(A, args.eta)
    return {
        "count": upper - lower,
        "xi": args.xi,
        "eta": args.eta,
        "lower": lower,
        "upper": upper,
        "provenance": provenance,
    }


def describe_error(exc):
    error = {"type": type(exc).__name__, "message": str(exc)}
    if getattr(exc, "sample", None) is not None:
        error["sample"] = exc.sample
    return error


def sweep_points(args):
    try:
        values = parse_values(args.values)
    except ValueError:
        raise UsageError(f"--values expects comma separated integers, got '{args.values}'")
    if not values:
        raise UsageError("--values must list at least one value")

    if args.over == "k":
        if args.fraction is not None:
            raise UsageError("--fraction applies to mesh sweeps only")
        check_shift_flags(args)
        A, provenance = load_matrix(args.matrix, args.gen_laplace)
        for k in values:
            yield k, (lambda k=k: (A, make_config(args, args.tau, args.xi, args.eta, k=k), provenance))
        return

    if args.matrix is not None or args.gen_laplace is not None:
        raise UsageError("mesh sweeps generate their matrices, drop --matrix/--gen-laplace")
    if (args.tau is None) == (args.fraction is None):
        raise UsageError("mesh sweeps need exactly one of --tau and --fraction")

    for s in values:
        def point(s=s):
            A, provenance = load_matrix(laplace=s)
            tau = args.tau if args.fraction is None else laplace_shift_at_fraction(s, args.fraction)
            return A, make_config(args, tau=tau), provenance
        yield s, point


def cmd_sweep(args):
    results = []

    for value, make_point in sweep_points(args):
        entry = {"over": args.over, "value": value}
        results.append(entry)

        try:
            A, cfg, provenance = make_point()
            entry.update(count_point(A, cfg, provenance))
            if args.stop_within is not None and cfg.xi is None:
                entry["exact"] = exact_count(A, cfg.tau)
        except (EigenSolverError, QuadratureBreakdown, KrylovError, ContractViolation, OracleRefusal) as exc:
            logger.warning("Sweep point %s=%s failed: %s", args.over, value, exc)
            entry["error"] = describe_error(exc)
            continue

        if "exact" in entry and within(entry["estimate"], entry["exact"], args.stop_within):
            break

    return results


def cmd_slice(args):
    A, provenance = load_matrix(args.matrix, args.gen_laplace)
    cfg = make_config(args)
    manifest = RunManifest(cfg, provenance, __version__)

    with manifest.timed("total"):
        result = slice_spectrum(A, args.lower, args.upper, args.parts, cfg, args.probes, threads=args.threads)

    return {**result.to_dict(), "manifest": manifest.to_dict()}


def cmd_generate(args):
    A = gen_laplace_2d(args.gen_laplace)
    write_matrix_market(A, args.output, comment=f"2D Laplacian, h = 2**-{args.gen_laplace}")
    logger.info('Saved %dx%d matrix to "%s"', A.n, A.n, args.output)
    return {"output": args.output, "n": A.n, "nnz": A.nnz}


COMMANDS = {
    "count": cmd_count,
    "exact": cmd_exact,
    "sweep": cmd_sweep,
    "slice": cmd_slice,
    "generate": cmd_generate,
}


def exit_code_for(exc):
    for kind, code in EXIT_CODES:
        if isinstance(exc, kind):
            return code
    return None


def main(argv=None, stdout=None):
    """
    Run command line interface and print JSON document.

    :returns: exit code (0 on success, 2 on usage errors, 3 on numerical
        failures, 4 when no exact oracle applies)
    """

    stdout = stdout or sys.stdout

    try:
        args = make_parser().parse_args(argv)

        if args.debug:
            set_logger_level(logging.DEBUG)
        if args.threads is None:
            args.threads = get_setting("threads")

        document = COMMANDS[args.action](args)
        code = EXIT_OK
    except Exception as exc:
        code = exit_code_for(exc)
        if code is None:
            raise
        logger.error("%s: %s", type(exc).__name__, exc)
        document = {"error": describe_error(exc)}

    print(canonical_json(document), file=stdout)
    return code


def run():
    """
    Entry point of the ``spectra-count`` console script.
    """

    sys.exit(main())


if __name__ == "__main__":
    run()
