"""Reproduction harness and command-line entry point.

Subcommands emit the standard result grids: ``table1`` (single-stroke
closed-form model at width 10000), ``table2``/``table3`` (fixed-n behavioural
model at width 10 for 1 and 50 rounds), ``table4`` (independent-breakage model
at width 10), ``figure7`` (relative distance versus breakage probability at
width 50), ``estimate`` (kilometres walked per working day), ``bisim``
(equivalence check of the two independent-breakage models) and ``eval`` (one
cell of any model).  Grids print as fixed-width tables rounded half-up to four
decimals; CSV output carries 12 significant digits.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .closed_form import ClosedFormInstance, expected_distance
from .numerics import Number, NumberMode
from .piecer import (
    MuleModel,
    compute_value_table,
    fixed_n_model,
    natural_model,
    optimized_model,
    value_iteration,
)
from .plts import Plts, bisimilar, build_plts, format_plts, quotient

TABLE1_WIDTH = 10000
COLUMN_FRACTIONS = (Fraction(0), Fraction(1, 10), Fraction(2, 10),
                    Fraction(3, 10), Fraction(4, 10), Fraction(5, 10))

#: The 21 abscissae of the width-50 curve.
FIGURE7_PROBS = tuple(
    Fraction(n, 100)
    for n in (0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 16, 20, 30, 40, 50, 60, 80, 90, 100)
)


def fmt4(value: Number) -> str:
    """Format a nonnegative number to 4 decimals, rounding halves up."""
    if isinstance(value, Fraction):
        scaled = value * 10000
        q = (2 * scaled.numerator + scaled.denominator) // (2 * scaled.denominator)
        return f"{q // 10000}.{q % 10000:04d}"
    d = Decimal(repr(float(value))).quantize(Decimal("0.0001"), rounding=ROUND_HALF_UP)
    return f"{d:.4f}"


def fmt_full(value) -> str:
    """CSV cell with 12 significant digits."""
    return f"{float(value):.12g}"


@dataclass(frozen=True)
class Grid:
    """A labelled result grid; one value per (row, column)."""

    row_title: str
    row_labels: Tuple[str, ...]
    col_labels: Tuple[str, ...]
    values: Tuple[Tuple[Number, ...], ...]
    csv_header: str
    csv_keys: Tuple[Tuple[Tuple[str, ...], ...], ...]  # per-cell key columns

    def format_table(self) -> str:
        head = " ".join([f"{self.row_title:>6}"] + [f"{c:>8}" for c in self.col_labels])
        lines = [head]
        for label, row in zip(self.row_labels, self.values):
            lines.append(" ".join([f"{label:>6}"] + [f"{fmt4(v):>8}" for v in row]))
        return "\n".join(lines) + "\n"

    def format_csv(self) -> str:
        lines = [self.csv_header]
        for keys, row in zip(self.csv_keys, self.values):
            for key, v in zip(keys, row):
                lines.append(",".join(list(key) + [fmt_full(v)]))
        return "\n".join(lines) + "\n"


def emit_table1(mode: NumberMode = NumberMode.FLOAT) -> Grid:
    """Single-stroke model at width 10000: rows n=1..10, columns pos/width 0.0..0.5."""
    positions = [int(f * TABLE1_WIDTH) for f in COLUMN_FRACTIONS]
    values = []
    keys = []
    for n in range(1, 11):
        row = tuple(
            expected_distance(ClosedFormInstance(TABLE1_WIDTH, n, pos), mode).relative
            for pos in positions)
        values.append(row)
        keys.append(tuple((str(n), str(pos)) for pos in positions))
    return Grid("n", tuple(str(n) for n in range(1, 11)),
                tuple(f"{float(f):.1f}" for f in COLUMN_FRACTIONS),
                tuple(values), "n,pos,relative_distance", tuple(keys))


def _row_models(model_kind: str, width: int, mode: NumberMode) -> List[Tuple[str, MuleModel]]:
    rows = []
    for k in range(1, min(width, 10) + 1):
        if model_kind == "fixed-n":
            rows.append((str(k), fixed_n_model(width, k, mode)))
        elif model_kind == "natural":
            rows.append((fmt_full(k / width), natural_model(width, Fraction(k, width), mode)))
        elif model_kind == "natural-opt":
            rows.append((fmt_full(k / width), optimized_model(width, Fraction(k, width), mode)))
        else:
            raise ValueError(f"unknown model kind {model_kind!r}")
    return rows


def emit_table(model_kind: str, width: int = 10, max_rounds: int = 50,
               mode: NumberMode = NumberMode.FLOAT) -> Grid:
    """Behavioural-model grid: one row per n (or breakage probability k/width),
    one column per starting position fraction."""
    positions = [int(f * width) for f in COLUMN_FRACTIONS]
    label_key = "n" if model_kind == "fixed-n" else "prob"
    values = []
    keys = []
    row_labels = []
    for label, model in _row_models(model_kind, width, mode):
        table = compute_value_table(model, max_rounds)
        denom = Fraction(max_rounds * width) if mode.is_exact else max_rounds * width
        values.append(tuple(table.values[pos] / denom for pos in positions))
        keys.append(tuple((label, str(pos)) for pos in positions))
        row_labels.append(label)
    return Grid(label_key, tuple(row_labels),
                tuple(f"{float(f):.1f}" for f in COLUMN_FRACTIONS),
                tuple(values), f"{label_key},init_pos,relative_distance", tuple(keys))


def emit_figure7(width: int = 50, max_rounds: int = 50, init_pos: int = 0,
                 probs: Sequence = FIGURE7_PROBS,
                 mode: NumberMode = NumberMode.FLOAT) -> List[Tuple[Fraction, Number]]:
    """Relative walking distance of the optimised model per breakage probability."""
    out = []
    for p in probs:
        model = optimized_model(width, p, mode)
        out.append((p, value_iteration(model, init_pos, max_rounds)))
    return out


@dataclass(frozen=True)
class DayEstimate:
    """Kilometres walked per working day implied by a relative distance."""

    prob: Fraction
    rel_distance: float
    mule_width_m: float
    strokes_per_minute: float
    hours: float

    @property
    def km_per_day(self) -> float:
        return (self.rel_distance * self.mule_width_m
                * self.strokes_per_minute * 60 * self.hours / 1000)


def emit_day_estimate(prob=Fraction(1, 220), width: int = 50, max_rounds: int = 50,
                      mule_width_m: float = 46.0, strokes_per_minute: float = 4.0,
                      hours: float = 10.0, init_pos: int = 0,
                      mode: NumberMode = NumberMode.FLOAT) -> DayEstimate:
    if min(mule_width_m, strokes_per_minute, hours) <= 0:
        raise ValueError("physical parameters must be positive")
    model = optimized_model(width, prob, mode)
    rel = float(value_iteration(model, init_pos, max_rounds))
    return DayEstimate(Fraction(prob), rel, mule_width_m, strokes_per_minute, hours)


@dataclass(frozen=True)
class BisimReport:
    width: int
    prob: Fraction
    equivalent: bool
    natural_states: int
    optimized_states: int
    natural_blocks: int
    optimized_blocks: int
    natural_quotient: Plts
    optimized_quotient: Plts


def run_bisim_check(width: int, prob, mode: NumberMode = NumberMode.EXACT,
                    init_pos: int = 0) -> BisimReport:
    """Build both independent-breakage systems and test strong probabilistic bisimilarity."""
    nat = build_plts(natural_model(width, prob, mode), init_pos)
    opt = build_plts(optimized_model(width, prob, mode), init_pos)
    nat_q = quotient(nat)
    opt_q = quotient(opt)
    return BisimReport(width, Fraction(prob), bisimilar(nat, opt),
                       nat.n_states, opt.n_states,
                       nat_q.n_states, opt_q.n_states, nat_q, opt_q)


@dataclass
class RunConfig:
    """One evaluation request, as accepted by the ``eval`` subcommand."""

    model: str  # closed-form | fixed-n | natural | natural-opt
    width: int = 10
    n_broken: Optional[int] = None
    prob: Optional[Fraction] = None
    init_pos: int = 0
    max_rounds: int = 50
    mode: NumberMode = NumberMode.FLOAT

    def validate(self):
        if self.model in ("closed-form", "fixed-n"):
            if self.n_broken is None:
                raise ValueError(f"model {self.model} requires --broken")
        elif self.model in ("natural", "natural-opt"):
            if self.prob is None:
                raise ValueError(f"model {self.model} requires --prob")
        else:
            raise ValueError(f"unknown model {self.model!r}")

    def evaluate(self) -> Number:
        self.validate()
        if self.model == "closed-form":
            inst = ClosedFormInstance(self.width, self.n_broken, self.init_pos)
            return expected_distance(inst, self.mode).relative
        if self.model == "fixed-n":
            model = fixed_n_model(self.width, self.n_broken, self.mode)
        elif self.model == "natural":
            model = natural_model(self.width, self.prob, self.mode)
        else:
            model = optimized_model(self.width, self.prob, self.mode)
        return value_iteration(model, self.init_pos, self.max_rounds)


def _figure7_csv(points) -> str:
    lines = ["prob,relative_distance"]
    for p, v in points:
        lines.append(f"{fmt_full(float(p))},{fmt_full(v)}")
    return "\n".join(lines) + "\n"


def _estimate_csv(est: DayEstimate) -> str:
    header = "prob,relative_distance,mule_width_m,strokes_per_minute,hours,km_per_day"
    row = ",".join([
        str(est.prob), fmt_full(est.rel_distance), fmt_full(est.mule_width_m),
        fmt_full(est.strokes_per_minute), fmt_full(est.hours), fmt_full(est.km_per_day),
    ])
    return header + "\n" + row + "\n"


def _eval_csv(cfg: RunConfig, value: Number) -> str:
    header = "model,width,n_broken,prob,init_pos,max_rounds,mode,relative_distance"
    row = ",".join([
        cfg.model, str(cfg.width),
        "" if cfg.n_broken is None else str(cfg.n_broken),
        "" if cfg.prob is None else str(cfg.prob),
        str(cfg.init_pos), str(cfg.max_rounds), cfg.mode.value, fmt_full(value),
    ])
    return header + "\n" + row + "\n"


def _write_out(path: Optional[str], csv_text: str):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(csv_text)


def _mode_arg(parser: argparse.ArgumentParser, default: str = "float"):
    parser.add_argument("--mode", choices=["exact", "float"], default=default,
                        help="number mode (default: %(default)s)")


def _output_args(parser: argparse.ArgumentParser):
    parser.add_argument("--output", choices=["table", "csv"], default="table",
                        help="stdout format (default: %(default)s)")
    parser.add_argument("--out", metavar="PATH", default=None,
                        help="also write CSV to this file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mulewalk",
        description="Expected walking distances of a piecer at a spinning mule.")
    sub = parser.add_subparsers(dest="command", required=True)

    p1 = sub.add_parser("table1", help="single-stroke model, width 10000")
    _mode_arg(p1)
    _output_args(p1)

    for name, rounds in (("table2", 1), ("table3", 50)):
        p = sub.add_parser(name, help=f"fixed-n model, width 10, {rounds} round(s)")
        p.set_defaults(rounds=rounds)
        _mode_arg(p)
        _output_args(p)

    p4 = sub.add_parser("table4", help="independent-breakage model, width 10, 50 rounds")
    _mode_arg(p4)
    _output_args(p4)

    pf = sub.add_parser("figure7", help="relative distance versus breakage probability")
    pf.add_argument("--width", type=int, default=50)
    pf.add_argument("--rounds", type=int, default=50)
    pf.add_argument("--init", type=int, default=0)
    _mode_arg(pf)
    _output_args(pf)

    pe = sub.add_parser("estimate", help="kilometres walked per working day")
    pe.add_argument("--prob", type=Fraction, default=Fraction(1, 220))
    pe.add_argument("--width", type=int, default=50)
    pe.add_argument("--rounds", type=int, default=50)
    pe.add_argument("--mule-width-m", type=float, default=46.0)
    pe.add_argument("--strokes-per-minute", type=float, default=4.0)
    pe.add_argument("--hours", type=float, default=10.0)
    _output_args(pe)

    pb = sub.add_parser("bisim", help="check the two independent-breakage models coincide")
    pb.add_argument("--width", type=int, default=10)
    pb.add_argument("--prob", type=Fraction, default=Fraction(1, 10))
    pb.add_argument("--init", type=int, default=0)
    pb.add_argument("--export", metavar="DIR", default=None,
                    help="write both quotients to DIR")
    _mode_arg(pb, default="exact")

    pv = sub.add_parser("eval", help="evaluate one configuration")
    pv.add_argument("--model", required=True,
                    choices=["closed-form", "fixed-n", "natural", "natural-opt"])
    pv.add_argument("--width", type=int, default=10)
    pv.add_argument("--broken", type=int, default=None)
    pv.add_argument("--prob", type=Fraction, default=None)
    pv.add_argument("--init", type=int, default=0)
    pv.add_argument("--rounds", type=int, default=50)
    _mode_arg(pv)
    _output_args(pv)
    return parser


def _emit_grid(grid: Grid, args) -> str:
    text = grid.format_table() if args.output == "table" else grid.format_csv()
    _write_out(args.out, grid.format_csv())
    return text


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    mode = NumberMode(getattr(args, "mode", "float"))
    try:
        if args.command == "table1":
            sys.stdout.write(_emit_grid(emit_table1(mode), args))
        elif args.command in ("table2", "table3"):
            sys.stdout.write(_emit_grid(emit_table("fixed-n", 10, args.rounds, mode), args))
        elif args.command == "table4":
            sys.stdout.write(_emit_grid(emit_table("natural", 10, 50, mode), args))
        elif args.command == "figure7":
            points = emit_figure7(args.width, args.rounds, args.init, FIGURE7_PROBS, mode)
            csv_text = _figure7_csv(points)
            if args.output == "csv":
                sys.stdout.write(csv_text)
            else:
                sys.stdout.write(f"{'prob':>8} {'relative':>10}\n")
                for p, v in points:
                    sys.stdout.write(f"{float(p):>8.2f} {fmt4(v):>10}\n")
            _write_out(args.out, csv_text)
        elif args.command == "estimate":
            est = emit_day_estimate(args.prob, args.width, args.rounds,
                                    args.mule_width_m, args.strokes_per_minute,
                                    args.hours)
            csv_text = _estimate_csv(est)
            if args.output == "csv":
                sys.stdout.write(csv_text)
            else:
                sys.stdout.write(
                    f"breakage probability per thread: {est.prob}\n"
                    f"relative walking distance:       {fmt4(est.rel_distance)}\n"
                    f"mule width (m):                  {est.mule_width_m:g}\n"
                    f"strokes per minute:              {est.strokes_per_minute:g}\n"
                    f"working hours:                   {est.hours:g}\n"
                    f"km per day:                      {fmt4(est.km_per_day)}\n")
            _write_out(args.out, csv_text)
        elif args.command == "bisim":
            report = run_bisim_check(args.width, args.prob, mode, args.init)
            sys.stdout.write(
                f"width: {args.width}  prob: {args.prob}  mode: {mode.value}\n"
                f"natural:   {report.natural_states} states -> "
                f"{report.natural_blocks} blocks\n"
                f"optimized: {report.optimized_states} states -> "
                f"{report.optimized_blocks} blocks\n"
                "strongly probabilistic bisimilar: "
                f"{'yes' if report.equivalent else 'no'}\n")
            if args.export:
                os.makedirs(args.export, exist_ok=True)
                for name, q in (("quotient-natural.txt", report.natural_quotient),
                                ("quotient-natural-opt.txt", report.optimized_quotient)):
                    with open(os.path.join(args.export, name), "w", encoding="utf-8") as fh:
                        fh.write(format_plts(q))
        elif args.command == "eval":
            cfg = RunConfig(args.model, args.width, args.broken, args.prob,
                            args.init, args.rounds, mode)
            value = cfg.evaluate()
            csv_text = _eval_csv(cfg, value)
            if args.output == "csv":
                sys.stdout.write(csv_text)
            else:
                sys.stdout.write(f"relative_distance: {fmt4(value)}\n")
                if mode.is_exact:
                    sys.stdout.write(f"exact_value: {value}\n")
            _write_out(args.out, csv_text)
    except (ValueError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
