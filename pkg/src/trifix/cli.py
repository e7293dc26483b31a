"""Command-line interface.

Subcommands: generate, analyze, sweep, conjecture, oeis-check, export.
Data goes to stdout (or --out); diagnostics go to stderr.  Exit codes:
0 success, 1 operational error (bad flags, I/O, overflow), 2 a checked
conjecture was falsified.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from pathlib import Path

from . import __version__, analysis, oeis, store
from .engine import NO_ZERO, SHIFTED, STANDARD, SequenceRun, SequenceSpec, fixed_points, generate
from .numtheory import CapacityError

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FALSIFIED = 2

CACHE_ENV_VAR = "TRIFIX_CACHE_DIR"

CONJECTURE_IDS = ("3.1", "3.2", "5.1", "6.1")
DEFAULT_FAMILY = (3, 5, 7, 11, 41, 97, 199)


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad flags; 2 is reserved for
    falsified conjectures, so flag errors are remapped to 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _parse_p_list(text: str) -> list[int]:
    try:
        values = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise ValueError(f"--p-list expects comma-separated integers, got {text!r}") from None
    if not values:
        raise ValueError("--p-list is empty")
    return values


def _spec_from_args(args, term_count: int) -> SequenceSpec:
    variant = getattr(args, "variant", None)
    p = getattr(args, "p", None)
    if variant in (None, STANDARD):
        if p is None:
            raise ValueError("standard variant requires --p")
        return SequenceSpec.standard(p, term_count)
    if p is not None:
        raise ValueError(f"--p is meaningless for variant {variant!r}")
    return SequenceSpec(variant, term_count)


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# generate


def _format_table(run: SequenceRun) -> str:
    lines = [f"{'n':>6}  {'mult':>10}  {'q(n)':>14}  {'a(n)':>10}  fixed point"]
    prev_q = 0
    for t in run.terms:
        marker = "*" if t.is_fixed_point else ""
        lines.append(f"{t.n:>6}  {t.q - prev_q:>10}  {t.q:>14}  {t.a:>10}  {marker}".rstrip())
        prev_q = t.q
    return "\n".join(lines) + "\n"


def _format_csv(run: SequenceRun) -> str:
    lines = ["n,mult,q,a,fixed_point"]
    prev_q = 0
    for t in run.terms:
        lines.append(f"{t.n},{t.q - prev_q},{t.q},{t.a},{str(t.is_fixed_point).lower()}")
        prev_q = t.q
    return "\n".join(lines) + "\n"


def _format_json(run: SequenceRun) -> str:
    doc = {
        "spec": {"variant": run.spec.variant, "p": run.spec.p, "term_count": run.spec.term_count},
        "terms": [
            {
                "n": t.n,
                "q": t.q,
                "a": t.a,
                "fixed_point": t.is_fixed_point,
                "near_match": t.is_near_match,
                "bootstrap_duplicate": t.is_bootstrap_duplicate,
            }
            for t in run.terms
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def _cmd_generate(args) -> int:
    spec = _spec_from_args(args, args.terms)
    run = generate(spec)
    formatter = {
        "table": _format_table,
        "csv": _format_csv,
        "json": _format_json,
        "bfile": lambda r: oeis.write_bfile(r),
    }[args.format]
    _emit(formatter(run), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# analyze


def _format_report(report: analysis.ClassificationReport, near_list: list[int] | None,
                   fn_filter: analysis.FalseNegativeFilter | None) -> str:
    matrix = analysis.classification_matrix(report)
    lines = [
        f"sequence {report.spec.label()}, classified n <= {report.n_limit}",
        f"excluded primes: {', '.join(map(str, report.excluded_primes))}",
        f"A) matches n=a(n):    {report.detected}",
        f"B) matches n=a(n+1):  {report.near_matches}",
        f"C) total primes:      {report.total_eligible_primes}",
        f"success rate (A/C):   {analysis.percent(report.success_rate)}",
        f"false negatives:      {report.false_negatives}",
        f"total nonprimes:      {report.total_nonprimes}",
        f"false negative rate:  {analysis.percent(report.false_negative_rate)}",
        f"missed primes ({len(report.missed_primes)}): "
        + (", ".join(map(str, report.missed_primes)) if report.missed_primes else "none"),
        "classification matrix (columns prime, nonprime):",
        f"  detect:        {analysis.percent(matrix[0][0]):>8}  {analysis.percent(matrix[0][1]):>8}",
        f"  don't detect:  {analysis.percent(matrix[1][0]):>8}  {analysis.percent(matrix[1][1]):>8}",
    ]
    if near_list is not None:
        lines.append(
            f"near-match primes ({len(near_list)}): "
            + (", ".join(map(str, near_list)) if near_list else "none")
        )
    if fn_filter is not None:
        lines.append(
            f"false negatives not divisible by {{{', '.join(map(str, fn_filter.small_primes))}}}: "
            f"{len(fn_filter.remaining)} (removed {fn_filter.removed})"
        )
    return "\n".join(lines) + "\n"


def _cmd_analyze(args) -> int:
    spec = _spec_from_args(args, args.terms + 1)
    run = generate(spec)
    report = analysis.classify(run, args.terms)

    near_list = None
    if args.near_matches:
        near_list = [n for n in report.missed_primes if run.terms[n].a == n]
    fn_filter = None
    if args.filter_small_primes:
        small = _parse_p_list(args.filter_small_primes)
        fn_filter = analysis.filter_false_negatives(report, small)

    if args.format == "json":
        _emit(store.report_to_json(report), args.out)
    else:
        _emit(_format_report(report, near_list, fn_filter), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# sweep


def _format_sweep(sweep: analysis.SweepReport) -> str:
    lines = [
        f"sweep over p = {', '.join(map(str, sweep.p_list))} at N = {sweep.n_limit}",
        f"{'p':>6}  {'detected':>8}  {'near':>5}  {'total':>6}  {'success':>8}  "
        f"{'false_neg':>9}  {'fn_rate':>8}  {'missed':>6}",
    ]
    for p, r in zip(sweep.p_list, sweep.reports):
        lines.append(
            f"{p:>6}  {r.detected:>8}  {r.near_matches:>5}  {r.total_eligible_primes:>6}  "
            f"{analysis.percent(r.success_rate):>8}  {r.false_negatives:>9}  "
            f"{analysis.percent(r.false_negative_rate):>8}  {len(r.missed_primes):>6}"
        )
    union = ", ".join(map(str, sweep.union_missed)) if sweep.union_missed else "none"
    lines.append(f"primes missed by every sequence: {union}")
    return "\n".join(lines) + "\n"


def _cmd_sweep(args) -> int:
    p_list = _parse_p_list(args.p_list)
    cache_dir = args.cache or os.environ.get(CACHE_ENV_VAR)
    sweep = analysis.sweep(p_list, args.terms, jobs=args.jobs, cache_dir=cache_dir)
    _emit(_format_sweep(sweep), args.out)
    if args.export_dir:
        out = Path(args.export_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "table2.csv").write_text(store.export_table2(sweep), encoding="utf-8")
        (out / "table3.csv").write_text(store.export_table3(sweep), encoding="utf-8")
        (out / "figure2.csv").write_text(store.export_figure2(sweep), encoding="utf-8")
        print(f"wrote table2.csv, table3.csv, figure2.csv to {out}", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# conjecture


def _format_conjecture(result: analysis.ConjectureResult) -> str:
    seqs = ", ".join(result.sequences)
    if result.holds:
        return f"conjecture {result.conjecture_id} [{seqs}]: HOLDS up to N={result.n_limit}\n"
    first = result.counterexamples[0]
    return (
        f"conjecture {result.conjecture_id} [{seqs}]: FALSIFIED, "
        f"{len(result.counterexamples)} counterexample(s); "
        f"first: {first.sequence} n={first.n} ({first.detail})\n"
    )


def _cmd_conjecture(args) -> int:
    n = args.terms
    results = []
    text = ""
    if args.id == "5.1":
        result = analysis.check_conjecture_5_1(n)
        results.append(result)
        total = _count_odd_primes(n)
        text += (
            f"{total - len(result.counterexamples)}/{total} odd primes detected "
            f"as fixed points of the shifted sequence\n"
        )
    elif args.id == "6.1":
        p_list = _parse_p_list(args.p_list) if args.p_list else [541]
        results.append(analysis.check_conjecture_6_1(tuple(p_list), n))
    else:
        p_list = _parse_p_list(args.p_list) if args.p_list else list(DEFAULT_FAMILY)
        for p in p_list:
            run = generate(SequenceSpec.standard(p, n + 1))
            if args.id == "3.1":
                results.append(analysis.check_conjecture_3_1(run))
            else:
                results.append(analysis.check_conjecture_3_2(run, n))
    text += "".join(_format_conjecture(r) for r in results)
    _emit(text, args.out)
    return EXIT_OK if all(r.holds for r in results) else EXIT_FALSIFIED


def _count_odd_primes(n: int) -> int:
    from .numtheory import build_spf

    if n < 3:
        return 0
    table = build_spf(n)
    return sum(1 for m in range(3, n + 1) if table.spf[m] == m)


# ---------------------------------------------------------------------------
# oeis-check


_BFILE_NAME = re.compile(r"b(\d{6})\.txt")


def _cmd_oeis_check(args) -> int:
    path = Path(args.bfile)
    text = path.read_text(encoding="utf-8")
    sequence_id = args.sequence_id
    if sequence_id is None:
        m = _BFILE_NAME.fullmatch(path.name)
        sequence_id = f"A{m.group(1)}" if m else oeis.PLACEHOLDER_ID
    bfile = oeis.parse_bfile(text, sequence_id)

    spec = _spec_from_args(args, args.terms)
    run = generate(spec)
    if args.field == "a":
        result = oeis.compare(run, bfile, args.shift)
    elif args.field == "q":
        result = oeis.compare_values([(t.n, t.q) for t in run.terms], bfile, args.shift)
    else:  # fixed-points, compared as their own sequence (k-th fixed point)
        pairs = list(enumerate(fixed_points(run), start=1))
        result = oeis.compare_values(pairs, bfile, args.shift)

    if result.matches:
        _emit(
            f"{spec.label()} [{args.field}] vs {bfile.sequence_id} shift {result.applied_shift}: "
            f"MATCH over {result.compared_length} position(s)\n",
            args.out,
        )
    else:
        idx, expected, actual = result.first_mismatch
        _emit(
            f"{spec.label()} [{args.field}] vs {bfile.sequence_id} shift {result.applied_shift}: "
            f"MISMATCH at index {idx}: expected {expected}, got {actual}\n",
            args.out,
        )
    return EXIT_OK


# ---------------------------------------------------------------------------
# export


def _cmd_export(args) -> int:
    p_list = _parse_p_list(args.p_list)
    cache_dir = args.cache or os.environ.get(CACHE_ENV_VAR)
    if cache_dir is None:
        raise ValueError(f"export needs --cache or ${CACHE_ENV_VAR}")
    sweep = analysis.sweep(p_list, args.terms, jobs=args.jobs, cache_dir=cache_dir)
    exporter = {
        "table2": store.export_table2,
        "table3": store.export_table3,
        "figure2": store.export_figure2,
    }[args.what]
    _emit(exporter(sweep), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="trifix", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_spec_flags(p, with_terms_default=10_000):
        p.add_argument("--p", type=int, default=None, help="multiplier for the standard variant")
        p.add_argument(
            "--variant",
            choices=(STANDARD, NO_ZERO, SHIFTED),
            default=None,
            help="sequence variant (default standard, which requires --p)",
        )
        p.add_argument("--terms", type=int, default=with_terms_default, metavar="N",
                       help="number of term indices (default %(default)s)")

    g = sub.add_parser("generate", help="generate a sequence and print its terms")
    add_spec_flags(g)
    g.add_argument("--format", choices=("table", "csv", "json", "bfile"), default="table")
    g.add_argument("--out", default=None, help="write to file instead of stdout")
    g.set_defaults(func=_cmd_generate)

    a = sub.add_parser("analyze", help="classification report for one sequence")
    add_spec_flags(a)
    a.add_argument("--near-matches", action="store_true",
                   help="also list primes appearing one position late")
    a.add_argument("--filter-small-primes", metavar="LIST", default=None,
                   help="comma-separated primes; report false negatives not divisible by any")
    a.add_argument("--format", choices=("text", "json"), default="text")
    a.add_argument("--out", default=None)
    a.set_defaults(func=_cmd_analyze)

    s = sub.add_parser("sweep", help="classify a family of standard sequences")
    s.add_argument("--p-list", required=True, metavar="LIST", help="comma-separated p values")
    s.add_argument("--terms", type=int, default=10_000, metavar="N")
    s.add_argument("--jobs", type=int, default=1, help="parallel workers across p values")
    s.add_argument("--cache", default=None, help=f"run cache directory (default ${CACHE_ENV_VAR})")
    s.add_argument("--export-dir", default=None,
                   help="also write table2/table3/figure2 CSV files here")
    s.add_argument("--out", default=None)
    s.set_defaults(func=_cmd_sweep)

    c = sub.add_parser("conjecture", help="check a stated conjecture; exit 2 if falsified")
    c.add_argument("--id", choices=CONJECTURE_IDS, required=True)
    c.add_argument("--terms", type=int, default=10_000, metavar="N")
    c.add_argument("--p-list", metavar="LIST", default=None,
                   help="p values for 3.1/3.2/6.1 (defaults: family / 541)")
    c.add_argument("--out", default=None)
    c.set_defaults(func=_cmd_conjecture)

    o = sub.add_parser("oeis-check", help="compare a generated sequence against a local b-file")
    o.add_argument("--bfile", required=True, help="path to a b-file (bNNNNNN.txt)")
    add_spec_flags(o)
    o.add_argument("--shift", type=int, default=0,
                   help="compare run index n against b-file index n-shift")
    o.add_argument("--field", choices=("a", "q", "fixed-points"), default="a")
    o.add_argument("--sequence-id", default=None, help="override the id derived from the filename")
    o.add_argument("--out", default=None)
    o.set_defaults(func=_cmd_oeis_check)

    e = sub.add_parser("export", help="rebuild a table/figure CSV from cached runs")
    e.add_argument("--cache", default=None, help=f"run cache directory (default ${CACHE_ENV_VAR})")
    e.add_argument("--what", choices=("table2", "table3", "figure2"), required=True)
    e.add_argument("--p-list", required=True, metavar="LIST")
    e.add_argument("--terms", type=int, default=10_000, metavar="N")
    e.add_argument("--jobs", type=int, default=1)
    e.add_argument("--out", default=None)
    e.set_defaults(func=_cmd_export)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse handles --help/--version/flag errors
        return exc.code if isinstance(exc.code, int) else EXIT_ERROR
    try:
        return args.func(args)
    except BrokenPipeError:
        return EXIT_ERROR
    except (ValueError, OverflowError, CapacityError, OSError,
            oeis.BFileParseError, oeis.BFileStructureError) as exc:
        print(f"trifix: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
