"""Command-line front end.

Exit codes: 0 success, 2 invalid configuration, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys

from . import __version__
from .asymptotics import (
    classify_distance_law,
    local_exponent,
    long_distance_slab,
    long_distance_standard,
    validity_scales,
)
from .config import parse_config, serialize
from .errors import CasimirError, ConfigError, NumericFailure
from .force import force_zero_temperature
from .sweep import evaluate_points, rows_to_csv, rows_to_json, run_sweep

log = logging.getLogger("casimir_multilayer")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    # SUPPRESS keeps a flag given before the subcommand from being reset
    common.add_argument("--config", default=argparse.SUPPRESS, help="JSON run description")
    common.add_argument("--out", default=argparse.SUPPRESS, help="output file (default stdout)")
    common.add_argument("--format", choices=("csv", "json"), default=argparse.SUPPRESS)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                        help="worker processes for sweeps, 0 = one per CPU")
    common.add_argument("-v", "--verbose", action="count", default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(
        prog="casimir-multilayer",
        description="Casimir pressure between planar multilayer walls.",
        parents=[common],
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in [
        ("force", "pressure at the configured separation"),
        ("sweep", "pressure over the configured parameter grid"),
        ("asymptote", "distance-law classification and large-distance check"),
        ("oned", "one-dimensional force (single point, or the sweep grid if configured)"),
        ("validate", "check a configuration and exit"),
    ]:
        p = sub.add_parser(name, help=text, parents=[common])
        if name in ("force", "oned", "asymptote"):
            p.add_argument("--distance", type=float, default=None,
                           help="override the gap thickness (m)")
    return parser


def _emit(text, path):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _table(rows, names, kind, fmt):
    return rows_to_json(rows, names, kind) if fmt == "json" else rows_to_csv(rows, names, kind)


def cmd_force(run, args, kind="force"):
    stack = run.stack if args.distance is None else run.stack.with_gap(args.distance)
    rows = evaluate_points([((stack.gap_thickness,), stack)], run, kind, threads=1)
    _emit(_table(rows, ["d"], kind, args.format), args.out)
    return EXIT_OK if rows[0].status == "ok" else EXIT_NUMERIC


def cmd_sweep(run, args, kind="force"):
    if run.sweep is None:
        raise ConfigError([("sweep", "required for this command")])
    rows = run_sweep(run, kind, args.threads)
    names = [ax.parameter for ax in run.sweep.axes]
    _emit(_table(rows, names, kind, args.format), args.out)
    failed = sum(r.status != "ok" for r in rows)
    if failed:
        log.warning("%d of %d points failed", failed, len(rows))
    return EXIT_NUMERIC if failed == len(rows) else EXIT_OK


def cmd_oned(run, args):
    if run.sweep is not None and args.distance is None:
        return cmd_sweep(run, args, kind="oned")
    return cmd_force(run, args, kind="oned")


def asymptote_report(run, distance=None):
    """Classification, validity scales and large-distance comparison as a dict.

    The laws are zero-temperature results, so they are compared with the
    zero-temperature integral whatever the configured temperature.
    """
    stack = run.stack
    law_exp = classify_distance_law(stack)
    scales = validity_scales(stack)
    opts = run.asymptote
    d = distance or opts.distance or opts.margin * max(scales) or stack.gap_thickness
    report = {
        "classification": law_exp,
        "d_min_freq_m": scales[0],
        "d_min_geom_m": scales[1],
        "margin": opts.margin,
        "d_m": d,
        "temperature_K": 0.0,
    }
    if law_exp == -4:
        law = long_distance_standard(stack)
    elif law_exp == -6:
        law = long_distance_slab(stack)
    else:
        law = None
    curve = [(x, force_zero_temperature(stack.with_gap(x), run.quadrature).pressure) for x in (d / 1.1, d, d * 1.1)]
    full = curve[1][1]
    report["full_pressure_N_per_m2"] = full
    if law is not None:
        pred = law(d)
        report["law_coefficient"] = law.coefficient
        report["prediction_N_per_m2"] = pred
        report["prediction_over_full"] = pred / full if full else math.nan
    report["measured_exponent"] = local_exponent(curve, 1)
    return report


def cmd_asymptote(run, args):
    report = asymptote_report(run, args.distance)
    if args.format == "json":
        text = json.dumps(report, indent=2) + "\n"
    else:
        text = "key,value\n" + "".join(
            f"{k},{'%.17g' % v if isinstance(v, float) else v}\n" for k, v in report.items()
        )
    _emit(text, args.out)
    return EXIT_OK


def cmd_validate(run, args):
    _emit(json.dumps(serialize(run), indent=2) + "\n", args.out)
    return EXIT_OK


COMMANDS = {
    "force": cmd_force,
    "sweep": cmd_sweep,
    "asymptote": cmd_asymptote,
    "oned": cmd_oned,
    "validate": cmd_validate,
}


def main(argv=None):
    args = _build_parser().parse_args(argv)
    verbose = getattr(args, "verbose", 0) or 0
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if verbose > 1 else logging.INFO if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    logging.captureWarnings(True)
    if not hasattr(args, "config"):
        print("error: --config is required", file=sys.stderr)
        return EXIT_CONFIG
    for name, default in (("out", None), ("format", None), ("threads", 1), ("distance", None)):
        if not hasattr(args, name):
            setattr(args, name, default)
    try:
        run = parse_config(args.config)
        args.format = args.format or run.output_format
        args.out = args.out or run.output_path
        return COMMANDS[args.command](run, args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericFailure as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except CasimirError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
