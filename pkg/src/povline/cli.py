"""``povline`` command-line interface.

Subcommands: ``estimate``, ``delta``, ``test-two``, ``wald``, ``simulate``
and ``replay``. Every command prints a ``povline-report/1`` JSON document
(or aligned tables with ``--pretty``) whose manifest is enough to re-run it.

Exit codes: 0 success, 1 validation/usage error, 2 numerical degeneracy.
"""
from __future__ import annotations

import argparse
import csv
import sys
import warnings
from pathlib import Path


from . import __version__
from .distributions import DIST_GRAMMAR, parse_distribution
from .empirical import Sample
from .errors import DegenerateError, PovlineError, ValidationError
from .estimation import A_MODES, FORMS, j_relative
from .inference import DEFAULT_LEVELS, proportionality_test, wald_test
from .lines import LINE_GRAMMAR, parse_line
from .measures import MEASURE_GRAMMAR, parse_measure
from .reports import dumps, file_digest, make_report, read_incomes, read_report
from .simulation import StudyConfig, replication_stream, run_normality_study, sample_dist
from .variance import variance_components

EXIT_OK, EXIT_INVALID, EXIT_DEGENERATE = 0, 1, 2

GRAMMAR_HELP = (
    f"measures: {MEASURE_GRAMMAR}\n"
    f"lines:    {LINE_GRAMMAR}\n"
    f"dists:    {DIST_GRAMMAR}"
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _typed(parse):
    def conv(text):
        try:
            return parse(text)
        except PovlineError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from exc

    conv.__name__ = parse.__name__.replace("parse_", "")
    return conv


def _csv_list(parse):
    def conv(text):
        return [parse(t) for t in text.split(",") if t.strip()]

    conv.__name__ = "list"
    return conv


def _column(text):
    return int(text) if text.lstrip("-").isdigit() else text


def _common(p, density=False):
    p.add_argument("--form", choices=FORMS, default="influence",
                   help="covariance estimator (default: influence)")
    p.add_argument("--a-mode", choices=A_MODES, default="consistent",
                   help="line-sensitivity variant (default: consistent)")
    p.add_argument("--pretty", action="store_true", help="aligned tables instead of JSON")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="povline",
        description="Poverty indices with relative poverty lines.",
        epilog=GRAMMAR_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"povline {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("estimate", help="index, line and variance for one sample")
    p.add_argument("--data", required=True, type=Path)
    p.add_argument("--column", type=_column, default=None)
    p.add_argument("--measure", required=True, type=_typed(parse_measure), action="append")
    p.add_argument("--line", required=True, type=_typed(parse_line))
    _common(p)

    p = sub.add_parser("delta", help="variance added by estimating the poverty line")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--data", type=Path)
    src.add_argument("--synthetic", type=_typed(parse_distribution),
                     help="draw --n incomes from this distribution instead of reading --data")
    p.add_argument("--column", type=_column, default=None)
    p.add_argument("--n", type=int, default=3163)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--measure", type=_typed(parse_measure), action="append")
    p.add_argument("--line", type=_typed(parse_line), action="append")
    _common(p)

    p = sub.add_parser("test-two", help="proportionality test J_F = coef * J_G")
    p.add_argument("--data-f", required=True, type=Path)
    p.add_argument("--data-g", required=True, type=Path)
    p.add_argument("--column", type=_column, default=None)
    p.add_argument("--measure", required=True, type=_typed(parse_measure))
    p.add_argument("--line", type=_typed(parse_line), help="line rule for both samples")
    p.add_argument("--line-f", type=_typed(parse_line))
    p.add_argument("--line-g", type=_typed(parse_line))
    p.add_argument("--coef", type=float, default=1.0, help="proportionality coefficient")
    p.add_argument("--level", type=float, action="append", help="significance level(s)")
    _common(p)

    p = sub.add_parser("wald", help="joint Wald test I_F = diag(coefs) I_G")
    p.add_argument("--data-f", required=True, type=Path)
    p.add_argument("--data-g", required=True, type=Path)
    p.add_argument("--column", type=_column, default=None)
    p.add_argument("--measures", required=True, type=_csv_list(_typed(parse_measure)),
                   help="comma-separated, e.g. fgt:1,fgt:2,sen")
    p.add_argument("--coefs", type=_csv_list(float), default=None)
    p.add_argument("--line", type=_typed(parse_line))
    p.add_argument("--line-f", type=_typed(parse_line))
    p.add_argument("--line-g", type=_typed(parse_line))
    p.add_argument("--level", type=float, action="append")
    _common(p)

    p = sub.add_parser("simulate", help="Monte Carlo normality study")
    p.add_argument("--dist", required=True, type=_typed(parse_distribution))
    p.add_argument("--n", required=True, type=int, nargs="+")
    p.add_argument("--reps", type=int, default=1000)
    p.add_argument("--measure", required=True, type=_typed(parse_measure), nargs="+")
    p.add_argument("--line", required=True, type=_typed(parse_line))
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--true-density", action="store_true",
                   help="use the analytic density instead of a KDE")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--csv", type=Path, default=None, help="write per-replication rows here")
    _common(p)

    p = sub.add_parser("replay", help="re-run the command recorded in a report")
    p.add_argument("report", type=Path)
    return parser


# -- helpers ---------------------------------------------------------------

def _load(path, column):
    return Sample.from_values(read_incomes(path, column))


def _lines(args):
    lf = args.line_f or args.line
    lg = args.line_g or args.line
    if lf is None or lg is None:
        raise UsageError("give --line, or both --line-f and --line-g")
    return lf, lg


def _manifest(args, argv, inputs, seed=None):
    config = {}
    for k, v in sorted(vars(args).items()):
        if k in ("pretty",):
            continue
        if isinstance(v, list):
            config[k] = [x if isinstance(x, (int, float)) else str(x) for x in v]
        elif v is None or isinstance(v, (int, float, bool)):
            config[k] = v
        else:
            config[k] = str(v)
    return {
        "subcommand": args.command,
        "argv": list(argv),
        "config": config,
        "inputs": {str(p): file_digest(p) for p in inputs},
        "seed": seed,
        "version": __version__,
    }


def _table(header, rows):
    cells = [header] + [[_fmt(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    out = []
    for j, r in enumerate(cells):
        out.append("  ".join(c.rjust(w) for c, w in zip(r, widths)))
        if j == 0:
            out.append("  ".join("-" * w for w in widths))
    return "\n".join(out)


def _fmt(c):
    if isinstance(c, float):
        return f"{c:.4g}"
    return str(c)


# -- commands --------------------------------------------------------------

def _cmd_estimate(args, argv):
    s = _load(args.data, args.column)
    results = []
    for m in args.measure:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            r = j_relative(s, m, args.line, form=args.form, a_mode=args.a_mode)
        if r.degenerate:
            raise DegenerateError(f"{m.label}: no income at or below the line {r.z_hat:g}")
        if r.flagged:
            raise DegenerateError(f"{m.label}: variance estimate unusable (gamma_hat={r.gamma_hat:.3g})")
        results.append(r.to_dict())
    result = results[0] if len(results) == 1 else results
    rep = make_report("estimate", result, _manifest(args, argv, [args.data]))
    if args.pretty:
        keys = ["measure", "line", "n", "q", "z_hat", "j_hat", "std_error", "delta_hat", "a_hat"]
        return rep, _table(keys, [[r[k] for k in keys] for r in results])
    return rep, None


def _cmd_delta(args, argv):
    inputs = []
    if args.synthetic is not None:
        if args.seed is None:
            raise UsageError("--synthetic needs --seed")
        s = Sample.from_values(sample_dist(args.synthetic, args.n, replication_stream(args.seed, 0)))
    else:
        s = _load(args.data, args.column)
        inputs = [args.data]
    measures = args.measure or [parse_measure(t) for t in ("fgt:1", "fgt:2", "sen")]
    lines = args.line or [parse_line("mean:1"), parse_line("median:1")]
    rows = []
    for line in lines:
        for m in measures:
            c = variance_components(s, m, line, form=args.form, a_mode=args.a_mode)
            if c.q == 0:
                raise DegenerateError(f"{m.label} at {line.label}: no income at or below the line")
            rows.append({
                "measure": m.label,
                "line": line.label,
                "n": s.n,
                "q": c.q,
                "z_hat": c.z_hat,
                "a_hat": c.a_hat,
                "sigma_hat": c.sigma,
                "delta_hat": c.delta,
                "gamma_hat": c.gamma,
                "variance_of_estimate": c.gamma / s.n,
                "form": args.form,
                "a_mode": args.a_mode,
            })
    rep = make_report("delta", rows, _manifest(args, argv, inputs, seed=args.seed))
    if args.pretty:
        keys = ["line", "measure", "q", "sigma_hat", "delta_hat", "gamma_hat", "variance_of_estimate"]
        return rep, _table(keys, [[r[k] for k in keys] for r in rows])
    return rep, None


def _decision_rows(res):
    return [[f"{lv:g}", "reject" if rej else "accept"] for lv, rej in res.reject_at.items()]


def _cmd_test_two(args, argv):
    lf, lg = _lines(args)
    sF, sG = _load(args.data_f, args.column), _load(args.data_g, args.column)
    res = proportionality_test(sF, sG, args.measure, args.coef, lf, lg,
                               levels=tuple(args.level or DEFAULT_LEVELS),
                               form=args.form, a_mode=args.a_mode)
    rep = make_report("test-two", res.to_dict(), _manifest(args, argv, [args.data_f, args.data_g]))
    if args.pretty:
        head = _table(["statistic", "p_value"], [[res.statistic, res.p_value]])
        return rep, head + "\n\n" + _table(["level", "decision"], _decision_rows(res))
    return rep, None


def _cmd_wald(args, argv):
    lf, lg = _lines(args)
    sF, sG = _load(args.data_f, args.column), _load(args.data_g, args.column)
    coefs = args.coefs or [1.0] * len(args.measures)
    res = wald_test(sF, sG, args.measures, coefs, lf, lg,
                    levels=tuple(args.level or DEFAULT_LEVELS),
                    form=args.form, a_mode=args.a_mode)
    rep = make_report("wald", res.to_dict(), _manifest(args, argv, [args.data_f, args.data_g]))
    if args.pretty:
        head = _table(["statistic", "df", "p_value"], [[res.statistic, res.df, res.p_value]])
        return rep, head + "\n\n" + _table(["level", "decision"], _decision_rows(res))
    return rep, None


def _cmd_simulate(args, argv):
    if args.seed is None:
        raise UsageError("simulate requires --seed (no hidden entropy)")
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    reports = []
    csv_rows = []
    for n in args.n:
        for m in args.measure:
            cfg = StudyConfig(args.dist, n, args.reps, m, args.line, args.seed,
                              use_true_density=args.true_density, form=args.form, a_mode=args.a_mode)
            r = run_normality_study(cfg, jobs=args.jobs)
            reports.append(r.to_dict())
            for rep_i, j, g, t, pv in zip(r.replications, r.j_hats, r.gamma_hats, r.statistics, r.p_values):
                csv_rows.append([n, m.label, int(rep_i), repr(float(j)), repr(float(g)),
                                 repr(float(t)), repr(float(pv))])
    if args.csv is not None:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["n", "measure", "replication", "j_hat", "gamma_hat", "statistic", "p_value"])
            w.writerows(csv_rows)
    rep = make_report("simulate", reports, _manifest(args, argv, [], seed=args.seed))
    if args.pretty:
        labels = [m.label for m in args.measure]
        blocks = []
        for key in ("ks_p", "coverage_95", "mean_p"):
            rows = []
            for i, n in enumerate(args.n):
                rows.append([f"n={n}"] + [reports[i * len(labels) + j][key] for j in range(len(labels))])
            blocks.append(f"{key} ({args.dist.label}, line {args.line.label}, B={args.reps})\n"
                          + _table(["size"] + labels, rows))
        return rep, "\n\n".join(blocks)
    return rep, None


COMMANDS = {
    "estimate": _cmd_estimate,
    "delta": _cmd_delta,
    "test-two": _cmd_test_two,
    "wald": _cmd_wald,
    "simulate": _cmd_simulate,
}


def run(argv):
    """Parse ``argv`` and return ``(report, pretty_text)`` without printing."""
    args = build_parser().parse_args(argv)
    if args.command == "replay":
        rep = read_report(args.report)
        for path, digest in rep["manifest"].get("inputs", {}).items():
            if file_digest(path) != digest:
                raise ValidationError(f"input {path} changed since the report was written")
        return run(rep["manifest"]["argv"])
    return COMMANDS[args.command](args, argv)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        rep, text = run(argv)
    except UsageError as exc:
        print(f"usage error: {exc}\n\n{GRAMMAR_HELP}", file=sys.stderr)
        return EXIT_INVALID
    except DegenerateError as exc:
        print(f"numerical degeneracy: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (PovlineError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    print(text if text is not None else dumps(rep))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
