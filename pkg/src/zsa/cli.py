"""Command line front end.

Subcommands: zeros, levels, profile, bounds, verify, report.  Exit codes:
0 success, 1 failing verdict, 2 incomplete enumeration, 64 usage error.
A key=value config file supplies defaults that individual flags override;
ZSA_CACHE_DIR relocates the zero cache.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from zsa.cache import ZeroCache, atomic_write
from zsa.gdpoly import DomainError, family_poly
from zsa.levelset import analysis_to_svg, modulus_profile, trace_level_curve
from zsa.strips import (
    Budgets,
    FAIL,
    THEOREM_IDS,
    analytic_upper_bound,
    shared_store,
    strip_report,
    verify_theorem,
    zero_envelope,
)
from zsa.zerofinder import (
    IncompleteEnumerationError,
    Rectangle,
    find_zeros,
    ritt_partial_sums,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INCOMPLETE = 2
EXIT_USAGE = 64


def fmt(x: float) -> str:
    return "%.17g" % x


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _parse_rect(text: str) -> Rectangle:
    parts = [float(p) for p in text.split(",")]
    if len(parts) != 4:
        raise ValueError("rect needs 4 comma-separated numbers")
    return Rectangle(parts[0], parts[1], parts[2], parts[3])


def _parse_n_range(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(p) for p in text.split(",")]


def read_config(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"bad config line: {line!r}")
            k, v = line.split("=", 1)
            out[k.strip()] = v.strip()
    return out


def _zeros_csv(zeros) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
    w.writerow(["re", "im", "residual", "certified", "multiplicity"])
    for z in zeros:
        w.writerow([fmt(z.position.real), fmt(z.position.imag),
                    fmt(z.residual), z.certified, z.multiplicity])
    return buf.getvalue()


def _zeros_json(zeros) -> str:
    return json.dumps(
        [{"re": z.position.real, "im": z.position.imag,
          "residual": z.residual, "certified": z.certified,
          "multiplicity": z.multiplicity} for z in zeros],
        sort_keys=True)


def _emit(text: str, out: str | None) -> None:
    if out:
        atomic_write(out, text)
    else:
        sys.stdout.write(text)


def cmd_zeros(args) -> int:
    rect = _parse_rect(args.rect)
    poly = family_poly(args.family, args.n)
    cache = ZeroCache(args.cache_dir)
    zeros = cache.get(args.family, args.n, rect, args.tol)
    incomplete = None
    if zeros is None:
        try:
            zeros = find_zeros(poly, rect, tol=args.tol)
        except IncompleteEnumerationError as exc:
            zeros = []
            incomplete = exc
        else:
            cache.put(args.family, args.n, rect, args.tol, zeros)
            cache.save()
    text = _zeros_json(zeros) if args.format == "json" else _zeros_csv(zeros)
    _emit(text, args.out)
    if incomplete is not None:
        print(f"incomplete enumeration; unresolved boxes: "
              f"{incomplete.boxes}", file=sys.stderr)
        return EXIT_INCOMPLETE
    return EXIT_OK


def cmd_levels(args) -> int:
    window = _parse_rect(args.window) if args.window else None
    analysis = trace_level_curve(args.n, args.x0, window=window,
                                 grid=args.grid)
    counts: dict[str, int] = {}
    for c in analysis.components:
        counts[c.cls] = counts.get(c.cls, 0) + 1
    summary = ", ".join(f"{k}: {v}" for k, v in sorted(counts.items()))
    print(f"n={args.n} x0={args.x0} level={fmt(analysis.level)} "
          f"components: {summary or 'none'}")
    if args.json_out:
        atomic_write(args.json_out,
                     json.dumps(analysis.to_json_dict(), sort_keys=True))
    if args.svg_out:
        atomic_write(args.svg_out, analysis_to_svg(analysis))
    if analysis.flagged_cells:
        print(f"warning: {len(analysis.flagged_cells)} unresolved saddle "
              f"cells", file=sys.stderr)
    return EXIT_OK


def cmd_profile(args) -> int:
    window = (0.0, args.window_y) if args.window_y else None
    p = modulus_profile(args.n, args.x, window=window, step=args.step)
    print(f"x={fmt(p.x)} m_hat={fmt(p.m_hat)} M={fmt(p.m_max)} "
          f"y_witness={fmt(p.y_witness)}")
    return EXIT_OK


def cmd_bounds(args) -> int:
    rep = strip_report(args.n, family=args.family, height_T=args.height,
                       store=shared_store())
    obj = rep.to_json_dict()
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    ids = args.theorems.split(",")
    for tid in ids:
        if tid not in THEOREM_IDS:
            print(f"unknown theorem id {tid!r}", file=sys.stderr)
            return EXIT_USAGE
    n_range = _parse_n_range(args.n) if args.n else list(range(3, 9))
    budgets = Budgets(height=args.height, k_max=args.k_max, m_max=args.m_max)
    store = shared_store()
    rows = []
    any_fail = False
    for tid in ids:
        verdicts = verify_theorem(tid, n_range, budgets, store=store)
        for key, v in verdicts.items():
            if not isinstance(v, str):
                continue
            rows.append((tid, str(key), v))
            any_fail = any_fail or v == FAIL
    width = max(len(r[0]) for r in rows) if rows else 4
    for tid, key, v in rows:
        print(f"{tid:<{width}}  {key:>6}  {v}")
    if args.csv_out:
        buf = io.StringIO()
        w = csv.writer(buf, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
        w.writerow(["theorem", "n", "verdict"])
        w.writerows(rows)
        atomic_write(args.csv_out, buf.getvalue())
    return EXIT_FAIL if any_fail else EXIT_OK


def cmd_report(args) -> int:
    n_range = _parse_n_range(args.n_range)
    store = shared_store()
    buf = io.StringIO()
    w = csv.writer(buf, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
    w.writerow(["n", "a_hat_zeta", "b_hat_zeta", "delta_n",
                "b_model_report_only", "a_over_n_report_only",
                "a_model_report_only",
                "ritt_sum_T100_report_only", "ritt_sum_T1000_report_only"])
    for n in n_range:
        rep = strip_report(n, height_T=args.height, store=store)
        if args.out_dir:
            atomic_write(f"{args.out_dir}/strip_report_{n}.json",
                         json.dumps(rep.to_json_dict(), sort_keys=True))
        env = zero_envelope("G", n)
        zs = store.zeros("G", n, 1000.0)
        ritt = [sum(z.position.real for z in zs
                    if 0.0 < z.position.imag <= t) for t in (100.0, 1000.0)]
        b_model = 1.0 + (4.0 / math.pi - 1.0) * math.log(math.log(n)) \
            / math.log(n)
        a_hat = -rep.empirical.b_hat if rep.empirical.b_hat is not None \
            else float("nan")
        b_hat = -rep.empirical.a_hat if rep.empirical.a_hat is not None \
            else float("nan")
        w.writerow([n, fmt(a_hat), fmt(b_hat), fmt(rep.delta),
                    fmt(b_model), fmt(a_hat / n), fmt(-math.log(2.0)),
                    fmt(ritt[0]), fmt(ritt[1])])
    text = buf.getvalue()
    if args.out_dir:
        atomic_write(f"{args.out_dir}/aggregate.csv", text)
    sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="zsa", description=__doc__)
    parser.add_argument("--config", help="key=value defaults file")
    sub = parser.add_subparsers(dest="command", required=True)

    pz = sub.add_parser("zeros", help="enumerate certified zeros")
    pz.add_argument("--n", type=int, required=True)
    pz.add_argument("--family", choices=["zeta", "G", "Gstar"], required=True)
    pz.add_argument("--rect", required=True,
                    help="xmin,xmax,ymin,ymax")
    pz.add_argument("--tol", type=float, default=1e-10)
    pz.add_argument("--format", choices=["csv", "json"], default="csv")
    pz.add_argument("--out")
    pz.add_argument("--cache-dir")
    pz.set_defaults(func=cmd_zeros)

    pl = sub.add_parser("levels", help="trace a level curve")
    pl.add_argument("--n", type=int, required=True)
    pl.add_argument("--x0", type=float, required=True)
    pl.add_argument("--window", help="xmin,xmax,ymin,ymax")
    pl.add_argument("--grid", type=float)
    pl.add_argument("--svg-out")
    pl.add_argument("--json-out")
    pl.set_defaults(func=cmd_levels)

    pp = sub.add_parser("profile", help="modulus profile on a line")
    pp.add_argument("--n", type=int, required=True)
    pp.add_argument("--x", type=float, required=True)
    pp.add_argument("--window-y", type=float)
    pp.add_argument("--step", type=float)
    pp.set_defaults(func=cmd_profile)

    pb = sub.add_parser("bounds", help="strip report for one n")
    pb.add_argument("--n", type=int, required=True)
    pb.add_argument("--family", choices=["zeta", "G"], default="G")
    pb.add_argument("--height", type=float, default=200.0)
    pb.add_argument("--out")
    pb.set_defaults(func=cmd_bounds)

    pv = sub.add_parser("verify", help="run theorem verdicts")
    pv.add_argument("--theorems", required=True,
                    help="comma-separated ids")
    pv.add_argument("--n", help="range like 3..8 or list 3,4,5")
    pv.add_argument("--height", type=float, default=600.0)
    pv.add_argument("--k-max", type=int, default=300)
    pv.add_argument("--m-max", type=int, default=10_000)
    pv.add_argument("--csv-out")
    pv.set_defaults(func=cmd_verify)

    pr = sub.add_parser("report", help="aggregate strip reports")
    pr.add_argument("--n-range", default="3..12")
    pr.add_argument("--height", type=float, default=200.0)
    pr.add_argument("--out-dir")
    pr.set_defaults(func=cmd_report)
    return parser


def _apply_config(args) -> None:
    if not getattr(args, "config", None):
        return
    conf = read_config(args.config)
    for key, value in conf.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            continue
        current = getattr(args, attr)
        # Flags given on the command line win; config only fills gaps.
        if current is None:
            setattr(args, attr, value)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _apply_config(args)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
