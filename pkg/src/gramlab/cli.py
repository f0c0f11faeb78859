"""Command-line front end: ``gramlab <command> [options]``.

Exit codes: 0 success, 1 a checked identity failed, 2 usage or range error,
3 numerical failure.
"""
from dataclasses import dataclass
import argparse
import json
import os
import sys

from .coeffs import load_coefficients, save_coefficients, tau_coefficients, verify_coefficients
from .errors import CoefficientError, ConfigurationError, DomainError, NumericError
from .gram import gram_points, gram_points_in
from .gramlaw import gram_interval_scan, unweighted_gram_sum, weighted_gram_sum
from .lfunc import DEFAULT_COUNT, l_direct, l_eval, make_context, z_values
from .verify import run_suite, write_report

EXIT_OK, EXIT_ASSERT, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

# acceptance thresholds per verification record name
RECORD_TOL = {
    "contour": 1e-6,
    "vertical_symmetry": 1e-8,
    "residue": 1e-6,
    "afe": 1e-7,
    "l_direct": 1e-8,
}


def fmt(x):
    return format(float(x), ".17g")


@dataclass
class RunConfig:
    weight: int = 12
    coeff_source: str = "builtin-tau"
    quad_tol: float = 1e-12
    c: float = 0.5001
    d: float = 0.75
    threads: int = 1
    output: str = None
    format: str = "csv"

    def validate(self):
        if self.threads < 1:
            raise ConfigurationError("threads must be >= 1")
        if self.format not in ("csv", "json"):
            raise ConfigurationError("format must be csv or json")
        if self.coeff_source == "builtin-tau" and self.weight != 12:
            raise ConfigurationError("the built-in coefficients have weight 12")
        return self


def load_config(args):
    cfg = {}
    if args.config:
        with open(args.config) as fh:
            cfg = json.load(fh)
        unknown = set(cfg) - set(RunConfig.__dataclass_fields__)
        if unknown:
            raise ConfigurationError(f"unknown config keys: {', '.join(sorted(unknown))}")
    run = RunConfig(**cfg)
    if args.threads is None and "threads" not in cfg and os.environ.get("GRAMLAB_THREADS"):
        run.threads = int(os.environ["GRAMLAB_THREADS"])
    for key in ("weight", "coeff_source", "quad_tol", "c", "d", "threads", "output", "format"):
        value = getattr(args, key, None)
        if value is not None:
            setattr(run, key, value)
    return run.validate()


def build_context(run):
    if run.coeff_source == "builtin-tau":
        coeffs = tau_coefficients(DEFAULT_COUNT)
    else:
        coeffs = load_coefficients(run.coeff_source)
        if coeffs.weight != run.weight:
            raise ConfigurationError(f"file weight {coeffs.weight} != configured weight {run.weight}")
    return make_context(coeffs, quad_tol=run.quad_tol, c=run.c, d=run.d)


def _emit(text, run):
    if run.output:
        tmp = f"{run.output}.tmp"
        with open(tmp, "w") as fh:
            fh.write(text)
        os.replace(tmp, run.output)
    else:
        sys.stdout.write(text)


def _rows_csv(header, rows):
    lines = [",".join(header)]
    lines += [",".join(str(x) for x in row) for row in rows]
    return "\n".join(lines) + "\n"


# -- commands ---------------------------------------------------------------------

def cmd_coeffs(args, run):
    if args.count < 1:
        raise DomainError("count must be >= 1")
    c = tau_coefficients(args.count) if run.coeff_source == "builtin-tau" else load_coefficients(run.coeff_source)
    status = EXIT_OK
    if args.verify:
        report = verify_coefficients(c)
        sys.stderr.write(report.summary() + "\n")
        status = EXIT_OK if report.ok else EXIT_ASSERT
    if run.output:
        save_coefficients(c, run.output)
    elif not args.verify:
        sys.stdout.write(json.dumps({"weight": c.weight, "count": c.count, "exact": [str(a) for a in c.exact]}) + "\n")
    return status


def cmd_eval(args, run):
    ctx = build_context(run)
    s = complex(args.sigma, args.t)
    r = l_direct(ctx, s) if args.command == "eval-direct" else l_eval(ctx, s)
    if run.format == "json":
        _emit(json.dumps({"sigma": args.sigma, "t": args.t, "re": r.value.real, "im": r.value.imag,
                          "est_error": r.est_error}) + "\n", run)
    else:
        _emit(f"re {fmt(r.value.real)}\nim {fmt(r.value.imag)}\nest_error {fmt(r.est_error)}\n", run)
    return EXIT_OK


def cmd_z(args, run):
    ctx = build_context(run)
    Z, imag, err = z_values(ctx, [args.t])
    if run.format == "json":
        _emit(json.dumps({"t": args.t, "z": Z[0], "imag_residual": imag[0], "est_error": err[0]}) + "\n", run)
    else:
        _emit(f"z {fmt(Z[0])}\nimag_residual {fmt(imag[0])}\nest_error {fmt(err[0])}\n", run)
    return EXIT_OK


def cmd_gram(args, run):
    ctx = build_context(run)
    if args.index is not None:
        first, last = args.index
        pts = gram_points(ctx, range(first, last + 1))
    elif args.range is not None:
        pts = gram_points_in(ctx, args.range[0], args.range[1], args.parity)
    else:
        raise DomainError("give --range T1 T2 or --index V1 V2")
    if run.format == "json":
        _emit(json.dumps([{"v": p.v, "t": p.t, "residual": p.residual} for p in pts]) + "\n", run)
    else:
        _emit(_rows_csv(["v", "t_v", "residual"], [(p.v, fmt(p.t), fmt(p.residual)) for p in pts]), run)
    return EXIT_OK


def cmd_zsum(args, run):
    if args.weighted and args.T is None:
        raise DomainError("--weighted sums run over a window (T, 2T]; give --T")
    ctx = build_context(run)
    if args.T is not None:
        rep = weighted_gram_sum(ctx, args.T, args.parity, workers=run.threads)
    elif args.M is not None and args.N is not None:
        rep = unweighted_gram_sum(ctx, args.M, args.N, args.parity, workers=run.threads)
    else:
        raise DomainError("give --T (weighted window) or --M and --N (index range)")
    d = rep.as_dict()
    if run.format == "json":
        _emit(json.dumps(d) + "\n", run)
    else:
        header = ["window_lo", "window_hi", "parity", "weighted", "count", "sum", "dominant", "deviation", "scaled_deviation"]
        row = [fmt(rep.window[0]), fmt(rep.window[1]), rep.parity, int(rep.weighted), rep.count,
               fmt(rep.sum), fmt(rep.dominant), fmt(rep.deviation), fmt(rep.scaled_deviation)]
        _emit(_rows_csv(header, [row]), run)
    return EXIT_OK


def cmd_scan(args, run):
    ctx = build_context(run)
    rep = gram_interval_scan(ctx, args.T1, args.T2, workers=run.threads)
    if run.format == "json":
        _emit(json.dumps({"summary": rep.summary(), "rows": [
            {"v": r.v, "t_v": r.t, "Z": r.z, "sign": r.sign, "interval_sign_change": r.interval_sign_change,
             "refined_zero_t": list(r.zeros)} for r in rep.rows]}) + "\n", run)
    else:
        _emit(rep.to_csv(), run)
    sys.stderr.write(json.dumps(rep.summary()) + "\n")
    return EXIT_OK


def cmd_verify(args, run):
    ctx = build_context(run)
    records = run_suite(ctx, args.suite, args.T)
    if run.output:
        write_report(records, run.output)
    else:
        sys.stdout.write(json.dumps([r.as_dict() for r in records], indent=2) + "\n")
    failed = False
    for r in records:
        if r.name in RECORD_TOL:
            failed |= r.rel_discrepancy > RECORD_TOL[r.name]
        elif r.name == "stationary_phase":
            failed |= r.abs_discrepancy > r.params["budget"]
    return EXIT_ASSERT if failed else EXIT_OK


# -- parser -------------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with RunConfig fields")
    common.add_argument("--weight", type=int)
    common.add_argument("--coeffs", dest="coeff_source", help="builtin-tau or a coefficient JSON file")
    common.add_argument("--quad-tol", dest="quad_tol", type=float)
    common.add_argument("--c", type=float)
    common.add_argument("--d", type=float)
    common.add_argument("--threads", type=int, help="worker threads (falls back to GRAMLAB_THREADS)")
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("csv", "json"))

    p = argparse.ArgumentParser(prog="gramlab", description="Hecke L-functions, Gram points and Gram-law sums.")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("coeffs", parents=[common], help="generate or check a coefficient table")
    q.add_argument("--count", type=int, required=True)
    q.add_argument("--verify", action="store_true")
    q.set_defaults(func=cmd_coeffs)

    for name, helptext in (("eval", "L(s) by the integral representation"),
                           ("eval-direct", "L(s) by the Dirichlet series")):
        q = sub.add_parser(name, parents=[common], help=helptext)
        q.add_argument("--sigma", type=float, required=True)
        q.add_argument("--t", type=float, required=True)
        q.set_defaults(func=cmd_eval)

    q = sub.add_parser("z", parents=[common], help="Z(t) on the critical line")
    q.add_argument("--t", type=float, required=True)
    q.set_defaults(func=cmd_z)

    q = sub.add_parser("gram", parents=[common], help="Gram points by ordinate range or index span")
    q.add_argument("--range", nargs=2, type=float, metavar=("T1", "T2"))
    q.add_argument("--index", nargs=2, type=int, metavar=("V1", "V2"))
    q.add_argument("--parity", choices=("even", "odd", "all"), default="all")
    q.set_defaults(func=cmd_gram)

    q = sub.add_parser("zsum", parents=[common], help="weighted or unweighted sums of Z at Gram points")
    q.add_argument("--T", type=float)
    q.add_argument("--M", type=int)
    q.add_argument("--N", type=int)
    q.add_argument("--parity", choices=("even", "odd"), default="even")
    q.add_argument("--weighted", action="store_true", help="weighted window sum over (T, 2T]")
    q.set_defaults(func=cmd_zsum)

    q = sub.add_parser("scan", parents=[common], help="sign scan of Z over Gram intervals")
    q.add_argument("--from", dest="T1", type=float, required=True)
    q.add_argument("--to", dest="T2", type=float, required=True)
    q.set_defaults(func=cmd_scan)

    q = sub.add_parser("verify", parents=[common], help="run a verification suite")
    q.add_argument("--suite", default="all", choices=("contour", "symmetry", "residue", "afe", "stationary", "all"))
    q.add_argument("--T", type=float, default=30.0)
    q.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        run = load_config(args)
        return args.func(args, run)
    except (DomainError, ConfigurationError, CoefficientError, ValueError, OSError) as exc:
        sys.stderr.write(f"gramlab {args.command}: error: {exc}\n")
        return EXIT_USAGE
    except NumericError as exc:
        sys.stderr.write(f"gramlab {args.command}: numerical failure: {exc}\n")
        for key, value in sorted(exc.diagnostics.items()):
            sys.stderr.write(f"  {key} = {value}\n")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
