"""Command-line frontend.

    metafib eval <spec> -n N [--export PATH --format csv|json]
    metafib gens <spec> -n N --spot P
    metafib verify <suite> [...]      suite: conolly conway newman grytczuk mu theorems
    metafib qreport -n N --gmax G [--window W --quiet Q --spike S]
    metafib export <spec> -n N --kind KIND --out PATH [--format csv|json]

Exit status: 0 on success, 1 if a check failed, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from metafib import qanalysis, seqio, verify
from metafib.errors import MetaFibError
from metafib.genseq import generation_sequence, partition, spot_trace
from metafib.spec import parse_spec, render, spot_count


class UsageError(Exception):
    pass


def _positive(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _positive_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache-dir", default=seqio.default_cache_dir(),
                        help=f"sequence cache directory (default: ${seqio.CACHE_ENV})")
    common.add_argument("--seed-cache", action="store_true",
                        help="reuse and populate the on-disk sequence cache")

    parser = argparse.ArgumentParser(prog="metafib", description="meta-Fibonacci generation structures")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate a recursion")
    p.add_argument("spec")
    p.add_argument("-n", type=_positive, required=True)
    p.add_argument("--export", metavar="PATH")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("gens", parents=[common], help="spot-based generation partition")
    p.add_argument("spec")
    p.add_argument("-n", type=_positive, required=True)
    p.add_argument("--spot", type=_positive, default=1)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("suite", choices=("conolly", "conway", "newman", "grytczuk", "mu", "theorems"))
    p.add_argument("-n", type=_positive, help="horizon (table length)")
    p.add_argument("--gmax", type=_positive, help="largest generation / octave to check")
    p.add_argument("-r", type=_positive, action="append", help="Newman-Conway r (repeatable)")
    p.add_argument("-k", type=_positive, action="append", help="Grytczuk k (repeatable)")
    p.add_argument("--json", action="store_true", help="emit JSON records")

    p = sub.add_parser("qreport", parents=[common], help="Q-sequence maternal vs Pinn table")
    p.add_argument("-n", type=_positive, default=10**6)
    p.add_argument("--gmax", type=_positive, default=18)
    p.add_argument("--gmin", type=_positive, default=1)
    p.add_argument("--window", type=_positive, default=qanalysis.DEFAULT_PARAMS.window)
    p.add_argument("--quiet", type=_positive_float, default=qanalysis.DEFAULT_PARAMS.quiet_threshold)
    p.add_argument("--spike", type=_positive_float, default=qanalysis.DEFAULT_PARAMS.spike_factor)
    p.add_argument("--export", metavar="PATH")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("export", parents=[common], help="export a data series")
    p.add_argument("spec")
    p.add_argument("-n", type=_positive, required=True)
    p.add_argument("--kind", choices=seqio.SERIES_KINDS, default="values")
    p.add_argument("--spot", type=_positive, default=1)
    p.add_argument("--lo", type=_positive, default=1)
    p.add_argument("--hi", type=_positive)
    p.add_argument("--out", required=True, metavar="PATH")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    return parser


def _table(args, spec, n):
    cache_dir = args.cache_dir if args.seed_cache else None
    if args.seed_cache and not cache_dir:
        raise UsageError(f"--seed-cache needs --cache-dir or ${seqio.CACHE_ENV}")
    return seqio.cached_evaluate(spec, n, cache_dir)


def _spec(text):
    try:
        return parse_spec(text)
    except MetaFibError as exc:
        raise UsageError(str(exc)) from None


def cmd_eval(args, out):
    spec = _spec(args.spec)
    table = _table(args, spec, args.n)
    print(f"# {render(spec)}", file=out)
    if table.terminated_at is not None:
        print(f"# terminated at n={table.terminated_at}", file=out)
    if args.export:
        seqio.export_series(table, "values", args.export, args.format)
    else:
        print(" ".join(str(v) for v in table.values.tolist()), file=out)
    return 0


def cmd_gens(args, out):
    spec = _spec(args.spec)
    if args.spot > spot_count(spec):
        raise UsageError(f"--spot {args.spot} exceeds the {spot_count(spec)} spots of {render(spec)}")
    table = _table(args, spec, args.n)
    part = partition(generation_sequence(spot_trace(table, args.spot)))
    if args.json:
        recs = [{"g": rec.g, "alpha": rec.alpha, "beta": rec.beta, "size": rec.size,
                 "fragmented": rec.fragmented, "complete": rec.complete} for rec in part.records]
        print(json.dumps({"spec": render(spec), "spot": args.spot, "horizon": table.computed_len,
                          "interval_structure": part.interval_structure, "generations": recs}), file=out)
        return 0
    print(f"# {render(spec)} spot {args.spot}, horizon {table.computed_len}", file=out)
    print(f"{'g':>4} {'alpha':>10} {'beta':>10} {'size':>10}  flags", file=out)
    for rec in part.records:
        flags = []
        if rec.fragmented:
            flags.append("FRAGMENTED")
        if not rec.complete:
            flags.append("incomplete")
        print(f"{rec.g:>4} {rec.alpha:>10} {rec.beta:>10} {rec.size:>10}  {' '.join(flags)}", file=out)
    print(f"# interval structure: {'yes' if part.interval_structure else 'no'}", file=out)
    return 0


def cmd_verify(args, out):
    suite = args.suite
    reports = []
    if suite == "conolly":
        n = args.n or verify.DEFAULT_POW2_HORIZON
        gmax = args.gmax or (n.bit_length() - 1)
        reports.append(verify.check_conolly(_table(args, parse_spec("conolly"), n), gmax))
    elif suite == "conway":
        n = args.n or verify.DEFAULT_POW2_HORIZON
        mmax = args.gmax or (n.bit_length() - 2)
        reports.append(verify.check_conway_octaves(_table(args, parse_spec("conway"), n), mmax))
    elif suite == "newman":
        for r in args.r or [2, 3, 4]:
            reports.append(verify.check_newman_conway(r, args.gmax, args.n))
    elif suite == "grytczuk":
        for k in args.k or [2, 3, 4]:
            reports.append(verify.check_grytczuk(k, args.gmax, args.n))
    elif suite == "mu":
        n = args.n or verify.DEFAULT_MU_HORIZON
        reports.append(verify.check_mu(n, _table(args, parse_spec("mu"), n)))
    else:
        reports.extend(verify.theorem_suite(args.n or 2**18))
    for rep in reports:
        print(rep.json() if args.json else rep.text(), file=out)
    return 0 if all(rep.passed for rep in reports) else 1


def cmd_qreport(args, out):
    params = qanalysis.TransitionParams(args.window, args.quiet, args.spike)
    table = _table(args, parse_spec("q"), args.n)
    comp = qanalysis.build_comparison(table, args.gmax, params, g_min=args.gmin)
    out.write(comp.render())
    if args.export:
        seqio.export_comparison(comp, args.export, args.format)
    return 0


def cmd_export(args, out):
    spec = _spec(args.spec)
    table = _table(args, spec, args.n)
    seqio.export_series(table, args.kind, args.out, args.format, spot=args.spot, lo=args.lo, hi=args.hi)
    return 0


COMMANDS = {"eval": cmd_eval, "gens": cmd_gens, "verify": cmd_verify,
            "qreport": cmd_qreport, "export": cmd_export}


def run(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"metafib {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (MetaFibError, ValueError) as exc:
        print(f"metafib {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"metafib {args.command}: I/O error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
