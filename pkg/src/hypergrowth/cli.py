"""Command-line front end.

Exit status: 0 when everything passes, 1 on runtime or verification failure,
2 on usage errors. Output is deterministic; exact integers are written as
decimal strings in JSON.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field

import mpmath

from . import analysis, recurrence, render, tiling
from .errors import HypergrowthError, NumericalDegeneracy, OutputUnwritable, ResourceLimit

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

PUBLISHED_PERIMETERS = {1: 7, 2: 21, 3: 56, 4: 91, 5: 385, 6: 938}
PUBLISHED_QUOTIENTS = (1, 3, 8, 21, 55, 144)
PUBLISHED_AREA_ROW = {1: 7, 2: 28, 3: 77, 4: 315, 5: 847, 6: 2240}

SEQUENCES = ("perimeter", "area", "blue", "yellow", "ratio")


def _limits(args) -> tiling.Limits:
    if getattr(args, "max_triangles", None):
        return tiling.Limits(args.max_triangles)
    return tiling.Limits.from_env()


def _stringify(row: dict) -> dict:
    return {k: (v if isinstance(v, (bool, str)) or v is None else str(v)) for k, v in row.items()}


def _emit_rows(rows: list[dict], fmt: str, out) -> None:
    if not rows:
        return
    if fmt == "json":
        out.write(json.dumps([_stringify(r) for r in rows], indent=2) + "\n")
    elif fmt == "csv":
        writer = csv.DictWriter(out, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    else:
        cols = list(rows[0])
        widths = {c: max(len(c), *(len(str(r[c])) for r in rows)) for c in cols}
        out.write("  ".join(c.rjust(widths[c]) for c in cols).rstrip() + "\n")
        for r in rows:
            out.write("  ".join(str(r[c]).rjust(widths[c]) for c in cols).rstrip() + "\n")


# -- grow ------------------------------------------------------------------------


def cmd_grow(args, out) -> int:
    limits = _limits(args)
    rows = []
    last = None
    for disk in tiling.build_layers(args.n, args.r, limits):
        rows.append(tiling.measure(disk).as_dict())
        last = disk
    _emit_rows(rows, args.format, out)
    if last.closed and args.format == "text":
        out.write(f"closed at layer {last.closure_layer}\n")
    if args.dump:
        tiling.write_export(last, args.dump)
    return EXIT_OK


# -- verify ----------------------------------------------------------------------


@dataclass
class VerifyReport:
    checks: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def add(self, name: str, expected, actual, passed: bool | None = None) -> None:
        ok = expected == actual if passed is None else passed
        self.checks.append(
            {"check": name, "expected": str(expected), "actual": str(actual), "passed": bool(ok)}
        )

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks)


def typo_notes() -> list[str]:
    """Adjudication of the published n=7 tables against the closed forms and brute force."""
    notes = []
    for r, printed in PUBLISHED_PERIMETERS.items():
        correct = recurrence.perimeter_closed(r)
        if printed != correct:
            notes.append(
                f"published perimeter table lists P(7,{r}) = {printed}; 7*F({2 * r}) and the "
                f"brute-force count give {correct} = 7*{PUBLISHED_QUOTIENTS[r - 1]}, matching the "
                f"published quotient list {', '.join(map(str, PUBLISHED_QUOTIENTS))}"
            )
    for r, printed in PUBLISHED_AREA_ROW.items():
        delta = recurrence.area_closed(r) - (recurrence.area_closed(r - 1) if r > 1 else 0)
        if printed != delta and printed == recurrence.area_closed(r):
            notes.append(
                f"published area-increment row lists {printed} at r={r}; that is the cumulative "
                f"area A({r}), the increment A({r})-A({r - 1}) is {delta}"
            )
    return notes


def _verify_n(n: int, r_max: int, limits, report: VerifyReport) -> None:
    layers = list(tiling.build_layers(n, r_max, limits))
    metrics = [tiling.measure(d) for d in layers]
    for disk, m in zip(layers, metrics):
        r = disk.radius
        if r == 0:
            continue
        report.add(f"n={n} r={r} structure valid", True, tiling.validate_complex(disk).ok)
        if disk.closed:
            continue
        report.add(f"n={n} r={r} boundary cycle length = P", m.perimeter, len(tiling.boundary_cycle(disk)))
        if n >= 6:
            b, y = tiling.color_counts(tiling.classify_boundary(disk))
            report.add(f"n={n} r={r} (B,Y) transfer matrix", tuple(recurrence.counts_by_recurrence(n, r)), (b, y))
        if n == 6:
            report.add(f"n=6 r={r} P = 6r", 6 * r, m.perimeter)
            report.add(f"n=6 r={r} A = 6r^2", 6 * r * r, m.area)
        if n == 7:
            report.add(f"n=7 r={r} P = 7F(2r)", recurrence.perimeter_closed(r), m.perimeter)
            report.add(f"n=7 r={r} A = 7(4F(2r-2)+3F(2r-3)-2)", recurrence.area_closed(r), m.area)
            report.add(
                f"n=7 r={r} (B,Y) = 7(F(2r-1),F(2r-2))",
                (7 * recurrence.fibonacci(2 * r - 1), 7 * recurrence.fibonacci(2 * r - 2)),
                (m.blue_count, m.yellow_count),
            )
            report.add(f"n=7 r={r} 7P >= A", True, 7 * m.perimeter >= m.area)
    if n == 7:
        for prev, nxt in zip(metrics[1:], metrics[2:]):
            r, b, y, p = prev.r, prev.blue_count, prev.yellow_count, prev.perimeter
            delta = nxt.area - prev.area
            report.add(f"n=7 r={r} A(r+1)-A(r) = 5B+4Y-P", 5 * b + 4 * y - p, delta)
            report.add(f"n=7 r={r} A(r+1)-A(r) = 4B+3Y", 4 * b + 3 * y, delta)
            report.add(f"n=7 r={r} A(r+1)-A(r) closed form", recurrence.area_delta_closed(r), delta)
    if n <= 5:
        last = layers[-1]
        if last.closed:
            report.add(f"n={n} closes into a Platonic solid", {3: 4, 4: 8, 5: 20}[n], last.triangle_count)
            report.add(f"n={n} closed Euler characteristic", 2, metrics[-1].euler)


def cmd_verify(args, out, parser) -> int:
    if args.r_max < 1:
        parser.error("--r-max must be >= 1")
    if args.n_range:
        try:
            lo, hi = (int(x) for x in args.n_range.split(":"))
        except ValueError:
            parser.error("--n-range must look like LO:HI")
        if lo < 3 or hi < lo:
            parser.error("--n-range needs 3 <= LO <= HI")
        ns = list(range(lo, hi + 1))
    else:
        if args.n < 3:
            parser.error("--n must be >= 3")
        ns = [args.n]
    limits = _limits(args)
    report = VerifyReport()
    for n in ns:
        _verify_n(n, args.r_max, limits, report)
    if 7 in ns:
        bound = analysis.iso_bound_check(max(64, args.r_max))
        report.add("n=7 7P(r) >= A(r) closed forms, r<=64", True, bound.all_pass)
        for r in (1, 25, 50):
            lhs, rhs = recurrence.identity_even_sum(r)
            report.add(f"sum F(2i), i<={r} = F({2 * r + 1})-1", rhs, lhs)
            lhs, rhs = recurrence.identity_odd_sum(r)
            report.add(f"sum F(2i-1), i<={r} = F({2 * r})", rhs, lhs)
        report.notes.extend(typo_notes())

    if args.format == "json":
        out.write(json.dumps({"passed": report.passed, "checks": report.checks, "notes": report.notes}, indent=2) + "\n")
    else:
        for c in report.checks:
            mark = "PASS" if c["passed"] else "FAIL"
            out.write(f"{mark}  {c['check']}: expected {c['expected']}, got {c['actual']}\n")
        for note in report.notes:
            out.write(f"note: {note}\n")
        total = len(report.checks)
        failed = sum(1 for c in report.checks if not c["passed"])
        out.write(f"{total - failed}/{total} checks passed\n")
    return EXIT_OK if report.passed else EXIT_FAIL


# -- sequence --------------------------------------------------------------------


def sequence_values(which: str, r_max: int) -> list[str]:
    out = []
    for r in range(1, r_max + 1):
        if which == "perimeter":
            out.append(str(recurrence.perimeter_closed(r)))
        elif which == "area":
            out.append(str(recurrence.area_closed(r)))
        elif which == "blue":
            out.append(str(recurrence.counts_by_recurrence(7, r).blue))
        elif which == "yellow":
            out.append(str(recurrence.counts_by_recurrence(7, r).yellow))
        elif which == "ratio":
            q = analysis.iso_ratio(r)
            out.append(f"{q.numerator}/{q.denominator}")
        else:
            raise ValueError(which)
    return out


def cmd_sequence(args, out, parser) -> int:
    if args.r_max < 1:
        parser.error("--r-max must be >= 1")
    values = sequence_values(args.which, args.r_max)
    if args.format == "json":
        if args.which == "ratio":
            payload = [dict(zip(("num", "den"), v.split("/"))) for v in values]
        else:
            payload = values
        out.write(json.dumps(payload) + "\n")
    elif args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["r", args.which])
        writer.writerows([r, v] for r, v in enumerate(values, start=1))
        out.write(buf.getvalue())
    else:
        out.write("\n".join(values) + "\n")
    return EXIT_OK


# -- analyze ---------------------------------------------------------------------


def analyze_report(n: int, r_max: int, precision: int, binet_r_max: int = 70) -> tuple[dict, bool]:
    ok = True
    digits = min(precision, 30)
    rate = analysis.growth_rate(n, precision)
    report: dict = {
        "n": n,
        "growth_rate": {
            **analysis.real_json(rate, digits),
            "regime": analysis.growth_regime(n),
            "characteristic_polynomial": f"x^2 - {n - 4}x + 1",
        },
    }
    binet = analysis.binet_check(binet_r_max, precision)
    ok &= binet.all_match
    report["binet"] = {
        "r_max": binet_r_max,
        "precision": precision,
        "denominator": binet.denominator,
        "all_match": binet.all_match,
        "F(r_max)": str(recurrence.fibonacci(binet_r_max)),
    }
    if n >= 7:
        report["continuum"] = analysis.continuum_metrics(n, precision).as_dict(digits)
    if n == 7:
        bound = analysis.iso_bound_check(r_max)
        ok &= bound.all_pass
        est = analysis.iso_limit_estimate(r_max, precision)
        lhs, s5 = analysis.limit_identity(precision)
        with mpmath.workdps(precision):
            err = abs(est - s5)
            ident_err = abs(lhs - s5)
        report["isoperimetry"] = {
            "bound_check": {
                "bound": bound.bound,
                "r_max": r_max,
                "all_pass": bound.all_pass,
                "max_ratio": analysis.ratio_json(bound.max_ratio, digits),
                "monotone_observed": bound.monotone,
            },
            "ratio": analysis.ratio_json(analysis.iso_ratio(r_max), digits),
            "limit_estimate": {
                **analysis.real_json(est, digits),
                "r": r_max,
                "sqrt5": mpmath.nstr(s5, digits),
                "abs_error": mpmath.nstr(err, 6),
            },
            "limit_identity": {
                "lhs": mpmath.nstr(lhs, digits),
                "rhs": mpmath.nstr(s5, digits),
                "abs_error": mpmath.nstr(ident_err, 6),
            },
        }
    return report, bool(ok)


def cmd_analyze(args, out, parser) -> int:
    if args.n < 6:
        parser.error("analyze needs --n >= 6")
    if args.r_max < 1:
        parser.error("--r-max must be >= 1")
    if args.precision < 15:
        parser.error("--precision must be at least 15 digits")
    report, ok = analyze_report(args.n, args.r_max, args.precision, args.binet_r_max)
    out.write(json.dumps(report, indent=2) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


# -- render / platonic -----------------------------------------------------------


def cmd_render(args, out, parser) -> int:
    if args.n < 7:
        parser.error("hyperbolic rendering requires n ≥ 7")
    if args.r < 1:
        parser.error("--r must be >= 1")
    disk = tiling.build_disk(args.n, args.r, _limits(args))
    try:
        scene = render.layout(disk)
    except NumericalDegeneracy as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    path = args.out or f"disk_n{args.n}_r{args.r}.svg"
    size = render.emit_svg(scene, path)
    out.write(
        f"wrote {path}: {len(scene.triangles)} triangles, {disk.vertex_count} vertices, {size} bytes\n"
    )
    return EXIT_OK


def cmd_platonic(args, out, parser) -> int:
    if args.n not in (3, 4, 5):
        parser.error("platonic needs --n in {3, 4, 5}")
    disk = tiling.build_disk(args.n, 10, _limits(args))
    m = tiling.measure(disk)
    row = {"n": args.n, "V": m.vertex_count, "E": m.edge_count, "F": m.triangle_count,
           "euler": m.euler, "closure_layer": disk.closure_layer}
    if args.format == "json":
        out.write(json.dumps(_stringify(row), indent=2) + "\n")
    else:
        _emit_rows([row], args.format, out)
    return EXIT_OK if disk.closed and m.euler == 2 else EXIT_FAIL


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypergrowth",
        description="Grow combinatorial disks in {3,n} triangle tilings and check their growth laws.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt=("text", "json", "csv")):
        p.add_argument("--format", choices=fmt, default=fmt[0])
        p.add_argument("--max-triangles", type=int, default=None,
                       help=f"triangle budget (default ${tiling.MAX_TRIANGLES_ENV} or "
                            f"{tiling.DEFAULT_MAX_TRIANGLES})")

    p = sub.add_parser("grow", help="build D_n(r) and print per-layer counts")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--dump", metavar="PATH", help="write the complex in the text export format")
    common(p)

    p = sub.add_parser("verify", help="check closed forms against brute-force disks")
    p.add_argument("--n", type=int, default=7)
    p.add_argument("--n-range", metavar="LO:HI")
    p.add_argument("--r-max", type=int, required=True)
    common(p, ("text", "json"))

    p = sub.add_parser("sequence", help="print an exact n=7 sequence for r = 1..r_max")
    p.add_argument("which", choices=SEQUENCES)
    p.add_argument("--r-max", type=int, required=True)
    common(p)

    p = sub.add_parser("analyze", help="isoperimetric bound, limits, growth rate, continuum facts")
    p.add_argument("--n", type=int, default=7)
    p.add_argument("--r-max", type=int, default=32)
    p.add_argument("--binet-r-max", type=int, default=70)
    p.add_argument("--precision", type=int, default=analysis.DEFAULT_PRECISION,
                   help="working precision in decimal digits")
    common(p, ("json",))

    p = sub.add_parser("render", help="write a Poincare-disk SVG of D_n(r)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--max-triangles", type=int, default=None)

    p = sub.add_parser("platonic", help="grow n = 3, 4, 5 to closure")
    p.add_argument("--n", type=int, required=True)
    common(p)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "max_triangles", None) is not None and args.max_triangles < 1:
        return _usage(parser, "--max-triangles must be positive")
    if hasattr(args, "n") and args.command in ("grow",) and args.n < 3:
        return _usage(parser, "--n must be >= 3")
    if args.command == "grow" and args.r < 0:
        return _usage(parser, "--r must be >= 0")
    try:
        if args.command == "grow":
            return cmd_grow(args, out)
        handler = {
            "verify": cmd_verify,
            "sequence": cmd_sequence,
            "analyze": cmd_analyze,
            "render": cmd_render,
            "platonic": cmd_platonic,
        }[args.command]
        return handler(args, out, parser)
    except SystemExit as exc:
        return int(exc.code or 0)
    except ResourceLimit as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (OutputUnwritable, HypergrowthError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


def _usage(parser, message: str) -> int:
    parser.print_usage(sys.stderr)
    print(f"{parser.prog}: error: {message}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
