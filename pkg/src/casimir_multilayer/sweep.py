"""Grid evaluation of the 3D and 1D forces and CSV/JSON emission.

Points are independent, so they may be farmed out to worker processes; rows
always come back in grid order and every kernel is deterministic, which makes
the output byte-identical for any worker count.
"""

from __future__ import annotations

import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .config import apply_parameter, grid_points
from .errors import CasimirError
from .force import casimir_ideal, force_finite_temperature, force_zero_temperature
from .oned import casimir_ideal_1d, force_1d_zero_temperature

__all__ = [
    "SweepRow",
    "sweep_stacks",
    "evaluate_points",
    "run_sweep",
    "value_columns",
    "rows_to_csv",
    "rows_to_json",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SweepRow:
    """One grid point; ``value`` is pressure (N/m**2) or, for 1D runs, force (N)."""

    axes: tuple
    value: float
    reference: float
    ratio: float
    rel_err: float
    status: str


def value_columns(kind):
    if kind == "oned":
        return ["force_N", "f0_N", "f_over_f0", "rel_err", "status"]
    return ["pressure_N_per_m2", "f0_N_per_m2", "f_over_f0", "rel_err", "status"]


def _status(exc):
    name = type(exc).__name__
    return "".join("_" + ch.lower() if ch.isupper() else ch for ch in name).lstrip("_")


def _evaluate(task):
    kind, axes, stack, temperature, qsettings, msettings, channels = task
    d = stack.gap_thickness
    try:
        if kind == "oned":
            res = force_1d_zero_temperature(stack)
            value = channels * res.force_per_area_unit
            return SweepRow(axes, value, casimir_ideal_1d(d, channels), res.f_over_f0_1d,
                            res.rel_err_estimate, "ok")
        if temperature:
            res = force_finite_temperature(stack, temperature, msettings, qsettings)
        else:
            res = force_zero_temperature(stack, qsettings)
        return SweepRow(axes, res.pressure, casimir_ideal(d), res.f_over_f0,
                        res.rel_err_estimate, "ok")
    except CasimirError as exc:
        log.warning("point %s failed: %s", axes, exc)
        nan = math.nan
        return SweepRow(axes, nan, nan, nan, nan, _status(exc))


def sweep_stacks(run):
    """``[(axis_values, stack), ...]`` for every grid point of ``run.sweep``."""
    out = []
    for values in grid_points(run.sweep):
        stack = run.stack
        for axis, v in zip(run.sweep.axes, values):
            stack = apply_parameter(stack, axis.parameter, v)
        out.append((values, stack))
    return out


def _workers(threads):
    if threads is None or threads == 0:
        return os.cpu_count() or 1
    return max(1, int(threads))


def evaluate_points(points, run, kind="force", threads=1):
    """Evaluate ``[(axis_values, stack), ...]``; returns rows in the same order."""
    tasks = [
        (kind, axes, stack, run.temperature, run.quadrature, run.matsubara, run.oned_channels)
        for axes, stack in points
    ]
    workers = min(_workers(threads), len(tasks))
    if workers <= 1:
        return [_evaluate(t) for t in tasks]
    chunk = max(1, len(tasks) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_evaluate, tasks, chunksize=chunk))


def run_sweep(run, kind="force", threads=1):
    """All rows of the sweep described by ``run`` (grid order, last axis fastest)."""
    return evaluate_points(sweep_stacks(run), run, kind, threads)


def _fmt(v):
    return "%.17g" % v


def rows_to_csv(rows, axis_names, kind="force"):
    lines = [",".join(list(axis_names) + value_columns(kind))]
    for r in rows:
        cells = [_fmt(a) for a in r.axes]
        cells += [_fmt(r.value), _fmt(r.reference), _fmt(r.ratio), _fmt(r.rel_err), r.status]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def rows_to_json(rows, axis_names, kind="force"):
    cols = value_columns(kind)
    records = []
    for r in rows:
        rec = dict(zip(axis_names, r.axes))
        nums = (r.value, r.reference, r.ratio, r.rel_err)
        rec.update({c: (None if math.isnan(v) else v) for c, v in zip(cols, nums)})
        rec["status"] = r.status
        records.append(rec)
    return json.dumps({"axes": list(axis_names), "rows": records}, indent=2) + "\n"
