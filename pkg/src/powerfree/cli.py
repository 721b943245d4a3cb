"""Command-line driver for the workbench.

Each subcommand validates its parameters, runs one experiment, and writes a
delimited document (CSV, or JSON for certificates) with a leading metadata
comment line.  Identical parameters produce byte-identical output; the shard
count never changes the bytes, only the work partition.

Exit codes: 0 ok, 2 parameter error, 3 budget exceeded, 4 invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .analysis import Surd, exponent_table, fit_exponent, pell_bound
from .detmethod import (
    VarietyParams,
    brute_count,
    certify_interval,
    choose_M,
    congruence_count,
    count_split,
    enumerate_lines,
    json_dumps_wide,
    subdivide,
)
from .errors import BudgetExceededError, InvariantViolation, ParameterError
from .kfree import LinearFormSystem, PairParams, count_pairs, count_tuple, euler_constant
from .pell import count_S, density_below, fundamental_solution
from .squarefull import consecutive_pairs, count_squarefull, growth_rows

EXIT_OK = 0
EXIT_PARAMETER = 2
EXIT_BUDGET = 3
EXIT_INVARIANT = 4

CONVENTIONS = ("dyadic-open", "half-closed")


def _fraction(text: str) -> Fraction:
    """Exact rational from 'p/q' or a decimal literal."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}")


def _forms(text: str) -> tuple[tuple[int, int], ...]:
    """Linear forms a*n+b given as 'a,b;a,b;...'."""
    parsed = []
    for part in text.split(";"):
        pieces = part.split(",")
        if len(pieces) != 2:
            raise argparse.ArgumentTypeError(f"form {part!r} is not 'a,b'")
        try:
            parsed.append((int(pieces[0]), int(pieces[1])))
        except ValueError:
            raise argparse.ArgumentTypeError(f"form {part!r} is not 'a,b'")
    return tuple(parsed)


def _forms_str(forms: tuple[tuple[int, int], ...]) -> str:
    return ";".join(f"{a},{b}" for a, b in forms)


def _meta_line(subcommand: str, items: Sequence[tuple[str, object]]) -> str:
    parts = [f"powerfree={__version__}", f"subcommand={subcommand}"]
    parts.extend(f"{key}={value}" for key, value in items)
    return "# " + " ".join(parts) + "\n"


def _csv_doc(
    subcommand: str,
    meta: Sequence[tuple[str, object]],
    header: Sequence[str],
    rows: Sequence[Sequence[object]],
) -> str:
    buf = io.StringIO()
    buf.write(_meta_line(subcommand, meta))
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _emit(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="ascii", newline="") as fh:
            fh.write(text)


def _exact_str(value) -> str:
    """Render a Fraction or quadratic surd without commas."""
    if isinstance(value, Surd):
        if value.b >= 0:
            return f"{value.a}+{value.b}*sqrt({value.n})"
        return f"{value.a}-{-value.b}*sqrt({value.n})"
    return str(value)


# --- subcommand handlers ------------------------------------------------


def _run_kfree_pairs(args) -> str:
    params = PairParams(args.k, args.h)
    count = count_pairs(args.x, params, shards=args.shards)
    meta = [("x", args.x), ("k", args.k), ("h", args.h)]
    return _csv_doc("kfree-pairs", meta, ["x", "k", "h", "count"],
                    [[args.x, args.k, args.h, count]])


def _run_kfree_tuples(args) -> str:
    system = LinearFormSystem(args.forms, args.k)
    count = count_tuple(args.x, system, shards=args.shards)
    forms = _forms_str(args.forms)
    meta = [("x", args.x), ("k", args.k), ("forms", forms)]
    return _csv_doc("kfree-tuples", meta, ["x", "k", "forms", "count"],
                    [[args.x, args.k, forms, count]])


def _run_constants(args) -> str:
    est = euler_constant(PairParams(args.k, args.h), args.cutoff)
    meta = [("k", args.k), ("h", args.h), ("cutoff", args.cutoff)]
    return _csv_doc("constants", meta,
                    ["k", "h", "cutoff", "value", "tail_bound"],
                    [[args.k, args.h, args.cutoff, est.decimal(), est.tail_bound]])


def _run_squarefull(args) -> str:
    count = count_squarefull(args.x)
    starts = consecutive_pairs(args.x)
    meta = [("x", args.x)]
    return _csv_doc("squarefull", meta,
                    ["x", "count", "pairs", "pair_starts"],
                    [[args.x, count, len(starts), ";".join(str(n) for n in starts)]])


def _run_pell_fundamental(args) -> str:
    if args.xmax < 2:
        raise ParameterError("xmax must be at least 2")
    rows = []
    for D in range(2, args.xmax + 1):
        r = math.isqrt(D)
        if r * r == D:
            continue
        f = fundamental_solution(D)
        rows.append([D, f.T, f.U, f.log_eps])
    meta = [("xmax", args.xmax)]
    return _csv_doc("pell-fundamental", meta, ["D", "T", "U", "log_eps"], rows)


def _run_pell_s(args) -> str:
    count = count_S(args.X, args.alpha)
    meta = [("X", args.X), ("alpha", args.alpha)]
    return _csv_doc("pell-s", meta, ["X", "alpha", "count"],
                    [[args.X, args.alpha, count]])


def _run_pell_density(args) -> str:
    count, density = density_below(args.X, args.theta)
    meta = [("X", args.X), ("theta", args.theta)]
    return _csv_doc("pell-density", meta, ["X", "theta", "count", "density"],
                    [[args.X, args.theta, count, density]])


def _variety_params(args) -> VarietyParams:
    return VarietyParams(k=args.k, l=args.l, h=args.h, x=args.x,
                         D=args.D, E=args.E, convention=args.convention)


def _run_variety_count(args) -> str:
    params = _variety_params(args)
    total = len(brute_count(params, shards=args.shards))
    check = congruence_count(params)
    if check != total:
        raise InvariantViolation(f"count mismatch: brute {total}, congruence {check}")
    meta = [("k", args.k), ("l", args.l), ("h", args.h), ("x", args.x),
            ("D", args.D), ("E", args.E), ("convention", args.convention)]
    return _csv_doc("variety-count", meta,
                    ["k", "l", "h", "x", "D", "E", "convention", "total", "congruence"],
                    [[args.k, args.l, args.h, args.x, args.D, args.E,
                      args.convention, total, check]])


def _run_certify(args) -> str:
    params = _variety_params(args)
    M = choose_M(params)
    plan = subdivide(params, M)
    buckets = plan.assign(brute_count(params))
    records = []
    bits = 1
    for j in sorted(buckets):
        s0 = plan.endpoint(j)
        cert = certify_interval(buckets[j], args.A, args.B, s0=s0, M=M)
        records.append(cert.record())
        bits = max(bits, s0.numerator.bit_length(), s0.denominator.bit_length())
    doc = {
        "tool": "powerfree",
        "version": __version__,
        "params": {
            "k": args.k, "l": args.l, "h": args.h, "x": args.x,
            "D": [args.D.numerator, args.D.denominator],
            "E": [args.E.numerator, args.E.denominator],
            "convention": args.convention,
            "A": args.A, "B": args.B,
        },
        "M": M,
        "intervals": plan.count,
        "occupied": len(buckets),
        "certificates": records,
    }
    return json_dumps_wide(doc, bits, indent=2) + "\n"


def _run_lines(args) -> str:
    params = VarietyParams(k=2, l=1, h=1, x=args.x, D=args.D, E=args.E,
                           convention=args.convention)
    on_line, off_line = count_split(params)
    meta = [("k", 2), ("l", 1), ("h", 1), ("x", args.x),
            ("D", args.D), ("E", args.E), ("convention", args.convention)]
    if args.families_out:
        ranges = params.ranges()
        fams = enumerate_lines(ranges.d, ranges.e, args.x)
        rows = []
        for f in fams:
            rows.append([f.kappa, f.pattern,
                         *f.base, *f.step, *(f.witness or f.base)])
        text = _csv_doc("lines", meta,
                        ["kappa", "pattern",
                         "base_d", "base_e", "base_u", "base_v",
                         "step_d", "step_e", "step_u", "step_v",
                         "witness_d", "witness_e", "witness_u", "witness_v"],
                        rows)
        _emit(text, args.families_out)
    return _csv_doc("lines", meta,
                    ["k", "l", "h", "x", "D", "E", "convention",
                     "total", "on_line", "off_line"],
                    [[2, 1, 1, args.x, args.D, args.E, args.convention,
                      on_line + off_line, on_line, off_line]])


def _run_exponents(args) -> str:
    report = exponent_table(args.k)
    report.validate()
    meta = [("k", args.k)]
    rows = [[name, _exact_str(exact), rendered]
            for name, exact, rendered in report.entries]
    return _csv_doc("exponents", meta, ["quantity", "exact", "decimal"], rows)


def _run_fit(args) -> str:
    xs: list[float] = []
    ys: list[float] = []
    try:
        with open(args.input, "r", encoding="ascii") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                fields = line.split(",")
                if len(fields) < 2:
                    raise ParameterError(f"need two columns, got {line!r}")
                try:
                    x, y = float(fields[0]), float(fields[1])
                except ValueError:
                    continue  # header row
                xs.append(x)
                ys.append(y)
    except OSError as exc:
        raise ParameterError(f"cannot read {args.input}: {exc}")
    result = fit_exponent(xs, ys)
    meta = [("input", args.input)]
    return _csv_doc("fit", meta, ["n", "slope", "intercept", "residual"],
                    [[result.n, result.slope, result.intercept, result.residual]])


# --- report pipeline ----------------------------------------------------


def _write_file(path: Path, text: str) -> None:
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write(text)


def _report_kfree(outdir: Path) -> list[str]:
    from . import figures

    params = PairParams(2, 1)
    constant = float(euler_constant(params, 10**4).partial)
    xs = [1000 * 4**i for i in range(5)]
    rows = []
    for x in xs:
        count = count_pairs(x, params)
        rows.append((x, count, constant * x))
    errs = [max(abs(count - main), 0.5) for _, count, main in rows]
    fit = fit_exponent([float(x) for x in xs], errs)
    csv_path = outdir / "kfree_error.csv"
    fig_path = outdir / "kfree_error.png"
    _write_file(csv_path, _csv_doc(
        "report", [("section", "kfree-error"), ("k", 2), ("h", 1)],
        ["x", "count", "main", "abs_err"],
        [[x, count, main, abs(count - main)] for x, count, main in rows]))
    figures.error_decay_figure(rows, fit.slope, str(fig_path))
    return [str(csv_path), str(fig_path)]


def _report_squarefull(outdir: Path) -> list[str]:
    from . import figures

    xs = [10**i for i in range(2, 8)]
    rows = growth_rows(xs)
    csv_path = outdir / "squarefull_growth.csv"
    fig_path = outdir / "squarefull_growth.png"
    _write_file(csv_path, _csv_doc(
        "report", [("section", "squarefull-growth")],
        ["x", "pairs", "exponent"], [list(r) for r in rows]))
    figures.squarefull_growth_figure(rows, str(fig_path))
    return [str(csv_path), str(fig_path)]


def _report_pell(outdir: Path) -> list[str]:
    from . import figures

    X = 2000
    rows = []
    for j in range(4, 17):
        theta = Fraction(j, 8)
        count, density = density_below(X, theta)
        rows.append((theta, count, density))
    csv_path = outdir / "pell_density.csv"
    fig_path = outdir / "pell_density.png"
    _write_file(csv_path, _csv_doc(
        "report", [("section", "pell-density"), ("X", X)],
        ["theta", "count", "density"], [list(r) for r in rows]))
    figures.pell_density_figure(rows, pell_bound, X, str(fig_path))
    return [str(csv_path), str(fig_path)]


def _report_certify(outdir: Path) -> list[str]:
    from . import figures

    params = VarietyParams(k=2, l=1, h=1, x=10**6, D=Fraction(32), E=Fraction(32))
    base_M = choose_M(params)
    sols = brute_count(params)
    rows = []
    for num, den in ((1, 64), (1, 16), (1, 4), (1, 1), (4, 1)):
        M = base_M * num // den
        label = f"M/{den}" if den > 1 else (f"{num}M" if num > 1 else "M")
        plan = subdivide(params, M)
        buckets = plan.assign(sols)
        certified = 0
        for j, quads in buckets.items():
            cert = certify_interval(quads, 1, 1, s0=plan.endpoint(j), M=M)
            if cert.has_certificate:
                certified += 1
        occupied = len(buckets)
        frac = certified / occupied if occupied else 1.0
        rows.append((label, occupied, certified, frac))
    csv_path = outdir / "certify_rank.csv"
    fig_path = outdir / "certify_rank.png"
    _write_file(csv_path, _csv_doc(
        "report", [("section", "certify-rank"), ("x", params.x),
                   ("D", params.D), ("E", params.E), ("M", base_M)],
        ["subdivision", "occupied", "certified", "fraction"],
        [list(r) for r in rows]))
    figures.rank_deficiency_figure(rows, str(fig_path))
    return [str(csv_path), str(fig_path)]


def _run_report(args) -> str:
    outdir = Path(args.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    written += _report_kfree(outdir)
    written += _report_squarefull(outdir)
    written += _report_pell(outdir)
    written += _report_certify(outdir)
    return "".join(f"wrote {path}\n" for path in written)


# --- parser -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="powerfree",
        description="Counting experiments for k-free pairs, square-full "
                    "neighbours, Pell fundamental solutions, and integer "
                    "points on binomial varieties.")
    parser.add_argument("--version", action="version",
                        version=f"powerfree {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True,
                                metavar="subcommand")

    def add(name: str, handler, help_text: str):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(handler=handler)
        p.add_argument("--out", default="-", help="output path, - for stdout")
        return p

    p = add("kfree-pairs", _run_kfree_pairs,
            "count n <= x with n and n+h both k-free")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--shards", type=int, default=1)

    p = add("kfree-tuples", _run_kfree_tuples,
            "count n <= x with every a*n+b in the system k-free")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--forms", type=_forms, required=True,
                   help="linear forms 'a,b;a,b;...'")
    p.add_argument("--shards", type=int, default=1)

    p = add("constants", _run_constants,
            "partial Euler product for the pair density constant")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--cutoff", type=int, required=True)

    p = add("squarefull", _run_squarefull,
            "square-full count and consecutive square-full pairs")
    p.add_argument("--x", type=int, required=True)

    p = add("pell-fundamental", _run_pell_fundamental,
            "fundamental solutions T, U for nonsquare D up to xmax")
    p.add_argument("--xmax", type=int, required=True)

    p = add("pell-s", _run_pell_s,
            "count unit powers below D^(1/2+alpha) for X < D < 2X")
    p.add_argument("--X", type=int, required=True)
    p.add_argument("--alpha", type=_fraction, required=True)

    p = add("pell-density", _run_pell_density,
            "density of D <= X with fundamental unit below D^theta")
    p.add_argument("--X", type=int, required=True)
    p.add_argument("--theta", type=_fraction, required=True)

    def add_variety(name, handler, help_text):
        p = add(name, handler, help_text)
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--l", type=int, required=True)
        p.add_argument("--h", type=int, required=True)
        p.add_argument("--x", type=int, required=True)
        p.add_argument("--D", type=_fraction, required=True)
        p.add_argument("--E", type=_fraction, required=True)
        p.add_argument("--convention", choices=CONVENTIONS,
                       default="dyadic-open")
        return p

    p = add_variety("variety-count", _run_variety_count,
                    "count integer points in one dyadic box, two routes")
    p.add_argument("--shards", type=int, default=1)

    p = add_variety("certify", _run_certify,
                    "subdivide the s-range and certify each occupied interval")
    p.add_argument("--A", type=int, required=True)
    p.add_argument("--B", type=int, required=True)

    p = add("lines", _run_lines,
            "split the box count into on-line and off-line points")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--D", type=_fraction, required=True)
    p.add_argument("--E", type=_fraction, required=True)
    p.add_argument("--convention", choices=CONVENTIONS, default="dyadic-open")
    p.add_argument("--families-out", default=None,
                   help="also write the enumerated line families here")

    p = add("exponents", _run_exponents,
            "exponent table for the pair counting methods")
    p.add_argument("--k", type=int, required=True)

    p = add("fit", _run_fit,
            "log-log least squares exponent fit of a two-column CSV")
    p.add_argument("--input", required=True)

    p = sub.add_parser("report",
                       help="run the survey suite, write CSVs and figures")
    p.set_defaults(handler=_run_report, out="-")
    p.add_argument("--out-dir", required=True)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_PARAMETER
    try:
        text = args.handler(args)
    except ParameterError as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return EXIT_PARAMETER
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    _emit(text, args.out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
