"""Command line front end: single-point evaluation and CSV sweeps.

    thzrf evaluate <scenario.cfg> [--mod bpsk|qpsk|mqam:M] [--quadrature] [--mc N] [--seed S]
    thzrf sweep <scenario.cfg> <sweep.cfg> [same flags] [--out file.csv] [--jobs J]
"""

import argparse
import csv
import io
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import config, mc, perf
from .perf import modulation_for_order

SER_CONSISTENCY_RTOL = 1e-4


class PointError(RuntimeError):
    pass


@dataclass
class ResultRow:
    series: str = ""
    axis_value: float = float("nan")
    op: float = None
    ser: float = None
    ser_quadrature: float = None
    op_mc: float = None
    op_mc_stderr: float = None
    ser_mc: float = None
    ser_mc_stderr: float = None
    mc_n: int = None


def run_point(scenario, mod=None, quadrature=False, mc_n=None, seed=0, stream=()):
    """Evaluate OP (and SER when ``mod`` is given) at one scenario.

    Raises:
        PointError: closed-form and quadrature SER differ by more than 1e-4
            relative.
    """
    row = ResultRow(op=perf.outage_probability(scenario))
    if mod is not None:
        row.ser = perf.average_ser_closed_form(scenario, mod)
        if quadrature:
            row.ser_quadrature = perf.average_ser_quadrature(scenario, mod)
            rel = abs(row.ser - row.ser_quadrature) / abs(row.ser_quadrature)
            if rel > SER_CONSISTENCY_RTOL:
                raise PointError(
                    f"closed-form SER {row.ser:.6g} and quadrature {row.ser_quadrature:.6g} "
                    f"differ by {rel:.2e} relative"
                )
    if mc_n:
        est = mc.simulate_op(scenario, mc_n, mc.make_rng(seed, stream=(*stream, 0)))
        row.op_mc, row.op_mc_stderr, row.mc_n = est.value, est.stderr, est.n
        if mod is not None:
            est = mc.simulate_ser(scenario, mod, mc_n, mc.make_rng(seed, stream=(*stream, 1)))
            row.ser_mc, row.ser_mc_stderr = est.value, est.stderr
    return row


def _columns(axis, has_ser, quadrature, with_mc):
    cols = ["series", axis, "op"]
    if has_ser:
        cols.append("ser")
        if quadrature:
            cols.append("ser_quadrature")
    if with_mc:
        cols += ["op_mc", "op_mc_stderr"]
        if has_ser:
            cols += ["ser_mc", "ser_mc_stderr"]
        cols.append("mc_n")
    return cols


def _fmt(value):
    if isinstance(value, str):
        return value
    if isinstance(value, int):
        return str(value)
    return f"{value:.12g}"


def to_csv(rows, axis, quadrature=False, with_mc=False):
    has_ser = any(r.ser is not None for r in rows)
    if has_ser and any(r.ser is None for r in rows):
        raise PointError("mixed OP-only and SER series; give every overlay a modulation")
    cols = _columns(axis, has_ser, quadrature, with_mc)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(cols)
    for r in rows:
        record = {"series": r.series, axis: r.axis_value}
        record.update({k: getattr(r, k) for k in cols[2:]})
        writer.writerow([_fmt(record[c]) for c in cols])
    return buf.getvalue()


def _point_scenario(base_values, overlay, axis, value):
    values = dict(base_values)
    values.update(overlay.overrides)
    if axis != "M":
        values[axis] = value
    return config.build_scenario(values)


def _evaluate_task(task):
    base_values, axis, quadrature, mc_n, seed, oi, pi, overlay, value, point_mod = task
    try:
        scenario = _point_scenario(base_values, overlay, axis, value)
        row = run_point(scenario, point_mod, quadrature, mc_n, seed, stream=(oi, pi))
    except Exception as exc:
        raise PointError(f"series {overlay.label!r}, {axis}={value}: {exc}") from exc
    row.series, row.axis_value = overlay.label, value
    return row


def run_sweep(base_values, sweep, mod=None, quadrature=False, mc_n=None, seed=0, jobs=1):
    """Evaluate every (overlay, axis value) pair, overlay-major.

    ``base_values`` is a display-unit scenario mapping as returned by
    :func:`config.read_scenario_values`. With ``jobs > 1`` points run in
    worker processes; row order and values do not depend on ``jobs``.
    """
    tasks = []
    for oi, overlay in enumerate(sweep.overlays):
        for pi, value in enumerate(sweep.values):
            point_mod = overlay.mod or sweep.mod or mod
            if sweep.axis == "M":
                point_mod = modulation_for_order(int(value))
            tasks.append((base_values, sweep.axis, quadrature, mc_n, seed, oi, pi, overlay, value, point_mod))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_evaluate_task, tasks))
    return [_evaluate_task(t) for t in tasks]


def _parser():
    parser = argparse.ArgumentParser(prog="thzrf", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--mod", type=config.parse_modulation, default=None,
                       help="bpsk, qpsk or mqam:M; enables SER columns")
        p.add_argument("--quadrature", action="store_true",
                       help="add the direct-quadrature SER column")
        p.add_argument("--mc", type=int, default=None, metavar="N",
                       help="add Monte Carlo columns with N trials per point")
        p.add_argument("--seed", type=int, default=0, metavar="S")
        p.add_argument("--out", default=None, help="write CSV here instead of stdout")

    ev = sub.add_parser("evaluate", help="evaluate one scenario")
    ev.add_argument("scenario")
    common(ev)
    sw = sub.add_parser("sweep", help="sweep one axis over overlays")
    sw.add_argument("scenario")
    sw.add_argument("sweep")
    common(sw)
    sw.add_argument("--jobs", type=int, default=1)
    return parser


def main(argv=None):
    args = _parser().parse_args(argv)
    try:
        if args.command == "evaluate":
            scenario = config.parse_scenario(args.scenario)
            row = run_point(scenario, args.mod, args.quadrature, args.mc, args.seed)
            row.series = "base"
            row.axis_value = config.read_scenario_values(args.scenario)["es_over_no1_db"]
            text = to_csv([row], "es_over_no1_db", args.quadrature, bool(args.mc))
        else:
            base = config.read_scenario_values(args.scenario)
            sweep = config.parse_sweep(args.sweep)
            rows = run_sweep(base, sweep, args.mod, args.quadrature, args.mc, args.seed, args.jobs)
            text = to_csv(rows, sweep.axis, args.quadrature, bool(args.mc))
    except (ValueError, ArithmeticError, PointError, OSError) as exc:
        print(f"thzrf: error: {exc}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
