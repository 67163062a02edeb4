"""Command-line driver: exact volumes, bound tables and Monte Carlo runs.

JSON goes to stdout, diagnostics to stderr. Exit status is 0 on success,
2 for usage or domain errors and 3 for numerical failures.
"""

import argparse
import json
import logging
import math
import os
import sys

from . import bounds, measures
from .errors import DomainError, NumericError, QGeomError, UnsupportedError, ValidationError
from .montecarlo import estimators, predicates
from .montecarlo.rng import default_threads
from .states import HilbertFactorization

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3

# Linear volumes are printed only below this |ln V|.
LINEAR_LOG_LIMIT = 700.0

log = logging.getLogger("qgeom")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _unit_interval(text):
    t = float(text)
    if not 0.0 < t < 1.0:
        raise argparse.ArgumentTypeError(f"t must lie in (0, 1), got {text}")
    return t


def _factorization(text):
    try:
        return HilbertFactorization.parse(text)
    except ValidationError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _add_format(p, choices=("json", "text")):
    p.add_argument("--format", choices=choices, default="json")


def _add_dimension(p):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--N", type=int, help="Hilbert space dimension")
    g.add_argument("--H", type=_factorization, help="tensor factorization such as 2x2 or 2x3")


def _add_mc(p):
    p.add_argument("--set", choices=("full", "ppt", "ktube", "kface"), default="full")
    p.add_argument("--t", type=_unit_interval, help="shrink parameter for ktube/kface")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None, help="worker threads (default: $QGEOM_THREADS or CPU count)")
    p.add_argument("--chunks", type=int, default=None, help="pin the chunk layout to this many chunks")


def build_parser():
    parser = _Parser(prog="qgeom", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("exact", help="exact volume and volume radius of the full state body")
    p.add_argument("--metric", choices=(measures.HS, measures.BURES), required=True)
    p.add_argument("--N", type=int, required=True)
    _add_format(p)

    p = sub.add_parser("bounds", help="HS-to-Bures volume sandwich, explicit VR_B bound or the separable-state envelopes")
    p.add_argument("--N", type=int, help="dimension for the sandwich and the explicit bound")
    p.add_argument("--set", choices=("full", "ktube"), default="full")
    p.add_argument("--t", type=_unit_interval)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--alpha", type=float, help="VR_HS(K, D) for the explicit VR_B bound (N >= 4)")
    p.add_argument("--D", type=int, help="local dimension for the corollary envelopes")
    p.add_argument("--n", type=int, help="number of subsystems for the corollary envelopes")
    p.add_argument("--c2", type=float, default=bounds.DEFAULT_C2)
    p.add_argument("--C2", type=float, default=bounds.DEFAULT_BIG_C2)
    p.add_argument("--c3", type=float, default=bounds.DEFAULT_C3)
    p.add_argument("--C3", type=float, default=bounds.DEFAULT_BIG_C2)
    p.add_argument("--c4", type=float)
    p.add_argument("--C4", type=float)
    _add_format(p)

    p = sub.add_parser("constants", help="table of c1(N) and the grid-maximised constant of the explicit VR_B bound")
    p.add_argument("--N", type=int, nargs="+", default=[2, 3, 4, 6, 8, 10])
    _add_format(p)

    p = sub.add_parser("estimate", help="Monte Carlo probability or volume radius of a set")
    p.add_argument("--metric", choices=(measures.HS, measures.BURES), required=True)
    p.add_argument("--quantity", choices=("probability", "vr"), default="probability")
    p.add_argument(
        "--proposal",
        choices=("hs", "dirichlet"),
        default="hs",
        help="Bures importance proposal: HS ensemble (default) or bounded-weight Dirichlet(1/2)",
    )
    _add_dimension(p)
    _add_mc(p)
    _add_format(p)

    p = sub.add_parser("sample", help="dump weighted HS-ensemble draws as CSV")
    _add_dimension(p)
    _add_mc(p)
    p.add_argument("--output", help="CSV file (default: stdout)")
    _add_format(p, choices=("csv",))
    return parser


def _emit(obj, fmt, out):
    if fmt == "json":
        json.dump(obj, out, sort_keys=False)
        out.write("\n")
        return
    rows = obj["rows"] if "rows" in obj else [obj]
    keys = [k for k in rows[0] if not isinstance(rows[0][k], (list, dict))]
    cells = [[_fmt(r[k]) for k in keys] for r in rows]
    widths = [max(len(k), *(len(c[i]) for c in cells)) for i, k in enumerate(keys)]
    out.write("  ".join(k.rjust(w) for k, w in zip(keys, widths)) + "\n")
    for c in cells:
        out.write("  ".join(v.rjust(w) for v, w in zip(c, widths)) + "\n")
    for k, v in obj.items():
        if k != "rows" and "rows" in obj:
            out.write(f"{k}: {_fmt(v)}\n")


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.10g}"
    return "-" if v is None else str(v)


def cmd_exact(args):
    vol = measures.exact_hs_volume(args.N) if args.metric == measures.HS else measures.exact_bures_volume(args.N)
    linear = abs(vol.log_value) < LINEAR_LOG_LIMIT
    return {
        "command": "exact",
        "N": args.N,
        "metric": args.metric,
        "d": vol.d,
        "log_volume": vol.log_value,
        "volume": math.exp(vol.log_value) if linear else None,
        "vrad": measures.vrad(vol),
        "notice": None if linear else "volume not representable in double precision; see log_volume",
    }


def _report(r):
    return {"N": r.N, "lower_log": r.lower_log, "upper_log": r.upper_log, "lower": r.lower, "upper": r.upper}


def cmd_bounds(args):
    if args.D is not None or args.n is not None:
        if args.D is None or args.n is None:
            raise DomainError("corollary envelopes need both --D and --n")
        out = {
            "command": "bounds",
            "kind": "corollaries",
            "D": args.D,
            "n": args.n,
            "alpha_D": bounds.alpha_D(args.D),
            "corollary1": _report(bounds.corollary1_bounds(args.D, args.n, args.c2, args.C2)),
            "corollary2": _report(bounds.corollary2_bounds(args.D, args.n, args.c3, args.C3)),
            "s_vs_ppt": None,
        }
        if args.c4 is not None and args.C4 is not None:
            out["s_vs_ppt"] = _report(bounds.s_vs_ppt_scaling(args.D, args.c4, args.C4))
        return out
    if args.N is None:
        raise DomainError("bounds needs --N (sandwich) or --D and --n (corollaries)")
    if args.set == "ktube" and args.t is None:
        raise DomainError("--set ktube requires --t")
    log_vhs = measures.exact_hs_volume(args.N).log_value
    if args.set == "ktube":
        log_vhs += (args.N**2 - 1) * math.log(args.t)
    sandwich = bounds.lemma1_sandwich(args.N, log_vhs, args.p)
    out = {
        "command": "bounds",
        "kind": "sandwich",
        "N": args.N,
        "set": args.set,
        "t": args.t,
        "p": args.p,
        "log_V_HS": log_vhs,
        "lower_log": sandwich.lower_log,
        "upper_log": sandwich.upper_log,
        "alpha": args.alpha,
        "theorem2_p": None,
        "theorem2_beta": None,
        "theorem2_bound": None,
    }
    if args.alpha is not None:
        p, beta = bounds.theorem2_p(args.N, args.alpha)
        out.update(theorem2_p=p, theorem2_beta=beta, theorem2_bound=bounds.theorem2_bound(args.N, args.alpha))
    return out


def cmd_constants(args):
    rows = []
    for N in args.N:
        row = {"N": N, "c1": bounds.c1(N)}
        row["C1"] = bounds.theorem2_constant(N) if N >= 4 else "n/a"
        rows.append(row)
    series = [bounds.c1(N) for N in range(2, 33)]
    return {
        "command": "constants",
        "rows": rows,
        "c1_limit": math.exp(-0.25),
        "c1_increasing_2_to_32": all(a < b for a, b in zip(series, series[1:])),
    }


def _dimension(args):
    if args.H is not None:
        return args.H.N
    return args.N


def _predicate(args):
    if args.set in ("ktube", "kface") and args.t is None:
        raise DomainError(f"--set {args.set} requires --t")
    if args.set == "ppt":
        if args.H is None or args.H.n != 2:
            raise DomainError("--set ppt requires a bipartite factorization, e.g. --H 2x2")
        return predicates.ppt(args.H)
    if args.set == "ktube":
        return predicates.k_tube(args.t)
    if args.set == "kface":
        return predicates.k_face(args.t)
    return predicates.full_set()


def _mc_kwargs(args):
    threads = args.threads if args.threads is not None else default_threads()
    return {"chunks": args.chunks, "threads": threads}


def cmd_estimate(args):
    N = _dimension(args)
    pred = _predicate(args)
    kw = _mc_kwargs(args)
    if args.metric == measures.BURES:
        kw["proposal"] = args.proposal
    if args.quantity == "vr":
        est = estimators.estimate_vr(N, pred, args.metric, args.samples, args.seed, **kw)
    elif args.metric == measures.HS:
        est = estimators.estimate_hs_probability(N, pred, args.samples, args.seed, **kw)
    else:
        est = estimators.estimate_bures_probability(N, pred, args.samples, args.seed, **kw)
    return {
        "command": "estimate",
        "N": N,
        "H": None if args.H is None else str(args.H),
        "metric": args.metric,
        "set": args.set,
        "t": args.t,
        "quantity": args.quantity,
        "proposal": args.proposal if args.metric == measures.BURES else None,
        "estimate": est.estimate,
        "std_error": est.std_error,
        "ci95": list(est.ci95),
        "n_samples": est.n_samples,
        "n_rejected_singular": est.n_rejected_singular,
        "seed": est.seed,
        "elapsed_ms": est.elapsed_ms,
        "warning": est.warning,
    }


def cmd_sample(args, stdout):
    N = _dimension(args)
    pred = _predicate(args)
    kw = _mc_kwargs(args)
    if args.output:
        with open(args.output, "w", newline="") as fh:
            est = estimators.dump_weighted_samples(fh, N, pred, args.samples, args.seed, **kw)
    else:
        est = estimators.dump_weighted_samples(stdout, N, pred, args.samples, args.seed, **kw)
    log.info("bures probability of %s: %.6g +/- %.2g", args.set, est.estimate, est.std_error)


def main(argv=None, stdout=None):
    stdout = sys.stdout if stdout is None else stdout
    logging.basicConfig(level=logging.WARNING, stream=sys.stderr, format="qgeom: %(levelname)s: %(message)s")
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        if args.command == "sample":
            cmd_sample(args, stdout)
            return EXIT_OK
        handler = {"exact": cmd_exact, "bounds": cmd_bounds, "constants": cmd_constants, "estimate": cmd_estimate}
        result = handler[args.command](args)
    except BrokenPipeError:
        # downstream reader closed early (e.g. ``| head``)
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK
    except NumericError as exc:
        print(f"qgeom: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DomainError, ValidationError, UnsupportedError, QGeomError) as exc:
        print(f"qgeom: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(result, args.format, stdout)
    return EXIT_OK


def run():
    sys.exit(main())
