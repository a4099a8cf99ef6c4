"""Command-line reports for kernels, operators, modulars, and singularity checks.

Subcommands
-----------
kernel-plot     window response s -> integral of L_n(t/s) dt/t over [a, b]
approximate     operator curves T_n f alongside the signal itself
tail-table      numeric kernel tails against their analytic estimates
modular-table   modular operator errors over a window, with tail bounds
singularity     JSON report of the approximate-identity checks

Tables are written as CSV (default) or JSON with fixed 17-significant-digit
float formatting, so identical inputs produce byte-identical files.  Every
table subcommand accepts ``--plot PATH`` to also render the figure.  A JSON
config file can supply any long-flag value; explicit flags win.

Exit codes: 0 success, 2 usage error, 3 a singularity verification failed,
4 numeric failure inside quadrature.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .kernels import (
    ScaledKernel,
    make_kernel,
    tail_mass,
    tail_mass_numeric,
    window_integral_many,
)
from .modular import modular_table
from .operators import SGrid, hat_signal, operator_curve, parse_signal
from .pointwise import make_map
from .quadrature import LogInterval, NumericError, QuadratureConfig
from .singularity import SingularityParams, full_report

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VERIFICATION = 3
EXIT_NUMERIC = 4

_COMMON_DEFAULTS = {
    "out": None,
    "format": "csv",
    "plot": None,
    "config": None,
    "panels_per_unit_log": 64,
    "nodes_per_panel": 8,
    "abs_tol": 1e-10,
    "max_log_halfwidth": 40.0,
}

_DEFAULTS = {
    "kernel-plot": {
        "kernel": "moment",
        "p": 3,
        "n": "2,3,4",
        "window_a": 1.0,
        "window_b": 5.0,
        "s_lo": 0.2,
        "s_hi": 20.0,
        "s_count": 201,
    },
    "approximate": {
        "kernel": "mgw",
        "p": 3,
        "map": "saturating",
        "n": "5,10,15,20,40",
        "signal": "1:0,2:1,3:0",
        "s_lo": 0.5,
        "s_hi": 4.0,
        "s_count": 201,
    },
    "tail-table": {
        "kernel": "moment",
        "p": 3,
        "n": "1:20",
        "delta": "1.5,2,4",
    },
    "modular-table": {
        "kernel": "mgw",
        "p": 3,
        "map": "saturating",
        "n": "5,10,20,40",
        "signal": "1:0,2:1,3:0",
        "q": 2.0,
        "a": 1.0,
        "window_lo": math.exp(-3.0),
        "window_hi": math.exp(3.0),
    },
    "singularity": {
        "kernel": "moment",
        "p": 3,
        "map": "identity",
        "kernel_scale": None,
        "n": None,
        "delta": None,
    },
}


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def _as_int_list(value) -> list[int]:
    if isinstance(value, (list, tuple)):
        return [int(v) for v in value]
    text = str(value)
    if ":" in text:
        lo, hi = text.split(":")
        return list(range(int(lo), int(hi) + 1))
    return [int(part) for part in text.split(",")]


def _as_float_list(value) -> list[float]:
    if isinstance(value, (list, tuple)):
        return [float(v) for v in value]
    return [float(part) for part in str(value).split(",")]


def _write_text(path: Optional[str], text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    target = Path(path)
    tmp = target.with_name(target.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, target)


def _table_text(fmt: str, header: list[str], rows: list[list]) -> str:
    if fmt == "json":
        records = [
            {key: (val if isinstance(val, (str, int, bool)) else float(val)) for key, val in zip(header, row)}
            for row in rows
        ]
        return json.dumps(records, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _effective(args: argparse.Namespace, command: str) -> argparse.Namespace:
    """Layer defaults, then the config file, then explicit flags."""
    merged = dict(_COMMON_DEFAULTS)
    merged.update(_DEFAULTS[command])
    if args.config is not None:
        try:
            loaded = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ValueError(f"cannot read config file: {exc}") from exc
        for key, val in loaded.items():
            if key not in merged:
                raise ValueError(f"unknown config key {key!r} for {command}")
            merged[key] = val
    for key in merged:
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    return argparse.Namespace(**merged)


def _quad_config(ns: argparse.Namespace) -> QuadratureConfig:
    return QuadratureConfig(
        panels_per_unit_log=int(ns.panels_per_unit_log),
        nodes_per_panel=int(ns.nodes_per_panel),
        abs_tol=float(ns.abs_tol),
        max_log_halfwidth=float(ns.max_log_halfwidth),
    )


def _kernel_from(ns: argparse.Namespace):
    kernel = make_kernel(ns.kernel, int(ns.p))
    scale = getattr(ns, "kernel_scale", None)
    if scale is not None and float(scale) != 1.0:
        kernel = ScaledKernel(base=kernel, factor=float(scale))
    return kernel


# -- subcommand handlers -----------------------------------------------------


def _cmd_kernel_plot(args: argparse.Namespace) -> int:
    ns = _effective(args, "kernel-plot")
    cfg = _quad_config(ns)
    kernel = _kernel_from(ns)
    n_list = _as_int_list(ns.n)
    a, b = float(ns.window_a), float(ns.window_b)
    s = np.geomspace(float(ns.s_lo), float(ns.s_hi), int(ns.s_count))
    curves = {n: window_integral_many(kernel, n, a, b, s, cfg) for n in n_list}
    header = ["s"] + [f"value_n{n}" for n in n_list]
    rows = [[s[i]] + [curves[n][i] for n in n_list] for i in range(s.size)]
    _write_text(ns.out, _table_text(ns.format, header, rows))
    if ns.plot:
        from .plotting import save_series_plot

        save_series_plot(
            s,
            {f"n = {n}": curves[n] for n in n_list},
            ns.plot,
            xlabel="s",
            ylabel="window response",
            title=f"{kernel.kind} kernel on [{a:g}, {b:g}]",
            logx=True,
        )
    return EXIT_OK


def _cmd_approximate(args: argparse.Namespace) -> int:
    ns = _effective(args, "approximate")
    cfg = _quad_config(ns)
    kernel = _kernel_from(ns)
    pmap = make_map(ns.map)
    signal = parse_signal(ns.signal)
    n_list = _as_int_list(ns.n)
    grid = SGrid.log_spaced(float(ns.s_lo), float(ns.s_hi), int(ns.s_count))
    f_vals = signal.profile(grid.points)
    curves = {
        n: np.asarray([v.data for v in operator_curve(kernel, pmap, n, signal, grid, cfg)])
        for n in n_list
    }
    header = ["s", "f"] + [f"T_n{n}" for n in n_list]
    rows = [
        [grid.points[i], f_vals[i]] + [curves[n][i] for n in n_list]
        for i in range(grid.points.size)
    ]
    _write_text(ns.out, _table_text(ns.format, header, rows))
    if ns.plot:
        from .plotting import save_series_plot

        series = {"f": f_vals}
        series.update({f"T_{n} f": curves[n] for n in n_list})
        save_series_plot(
            grid.points,
            series,
            ns.plot,
            xlabel="s",
            ylabel="value",
            title=f"{kernel.kind} / {pmap.kind} approximation",
            logx=True,
        )
    return EXIT_OK


def _cmd_tail_table(args: argparse.Namespace) -> int:
    ns = _effective(args, "tail-table")
    cfg = _quad_config(ns)
    kernel = _kernel_from(ns)
    n_list = _as_int_list(ns.n)
    deltas = _as_float_list(ns.delta)
    header = ["n", "delta", "numeric_tail", "analytic_tail", "tag"]
    rows = []
    for n in n_list:
        for delta in deltas:
            est = tail_mass(kernel, n, delta)
            rows.append([n, delta, tail_mass_numeric(kernel, n, delta, cfg), est.value, est.tag])
    _write_text(ns.out, _table_text(ns.format, header, rows))
    if ns.plot:
        from .plotting import save_series_plot

        series = {}
        arr = np.asarray([[r[2], r[3]] for r in rows], dtype=float).reshape(len(n_list), len(deltas), 2)
        for j, delta in enumerate(deltas):
            series[f"numeric, delta = {delta:g}"] = arr[:, j, 0]
            series[f"analytic, delta = {delta:g}"] = arr[:, j, 1]
        save_series_plot(
            n_list,
            series,
            ns.plot,
            xlabel="n",
            ylabel="tail mass",
            title=f"{kernel.kind} kernel tails",
            logy=True,
        )
    return EXIT_OK


def _cmd_modular_table(args: argparse.Namespace) -> int:
    ns = _effective(args, "modular-table")
    cfg = _quad_config(ns)
    kernel = _kernel_from(ns)
    pmap = make_map(ns.map)
    signal = parse_signal(ns.signal)
    window = LogInterval(float(ns.window_lo), float(ns.window_hi))
    report = modular_table(
        kernel,
        pmap,
        signal,
        float(ns.q),
        float(ns.a),
        _as_int_list(ns.n),
        window,
        cfg,
    )
    header = ["n", "modular_error", "window_lo", "window_hi", "tail_bound"]
    rows = [
        [r["n"], r["modular_error"], r["window_lo"], r["window_hi"], r["tail_bound"]]
        for r in report.rows()
    ]
    _write_text(ns.out, _table_text(ns.format, header, rows))
    if ns.plot:
        from .plotting import save_series_plot

        save_series_plot(
            report.n_list,
            {"modular error": np.asarray(report.errors)},
            ns.plot,
            xlabel="n",
            ylabel="modular error",
            title=f"{kernel.kind} / {pmap.kind}, q = {report.q:g}, a = {report.a:g}",
            logy=True,
        )
    return EXIT_OK


def _cmd_singularity(args: argparse.Namespace) -> int:
    ns = _effective(args, "singularity")
    cfg = _quad_config(ns)
    kernel = _kernel_from(ns)
    pmap = make_map(ns.map)
    overrides = {}
    if ns.n is not None:
        overrides["n_list"] = tuple(_as_int_list(ns.n))
    if ns.delta is not None:
        overrides["delta_list"] = tuple(_as_float_list(ns.delta))
    params = SingularityParams(**overrides)
    report = full_report(kernel, pmap, params, cfg)
    _write_text(ns.out, report.to_json() + "\n")
    return EXIT_OK if report.overall else EXIT_VERIFICATION


# -- parser ------------------------------------------------------------------


def _add_common(sp: argparse.ArgumentParser, with_format: bool = True) -> None:
    sp.add_argument("--out", help="output file (default: stdout)")
    if with_format:
        sp.add_argument("--format", choices=("csv", "json"), help="table format (default csv)")
    sp.add_argument("--plot", metavar="PATH", help="also render the figure to PATH")
    sp.add_argument("--config", metavar="JSON", help="JSON file of flag defaults")
    sp.add_argument("--panels-per-unit-log", type=int, help="quadrature panel density")
    sp.add_argument("--nodes-per-panel", type=int, help="Gauss-Legendre nodes per panel")
    sp.add_argument("--abs-tol", type=float, help="quadrature absolute tolerance")
    sp.add_argument("--max-log-halfwidth", type=float, help="log-truncation radius")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mellinlat",
        description="Reports for Mellin-type approximation operators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("kernel-plot", help="kernel window response over a grid of s")
    sp.add_argument("--kernel", choices=("moment", "mgw", "mpc"))
    sp.add_argument("--p", type=int, help="exponent for the mpc kernel")
    sp.add_argument("--n", help="kernel indices, e.g. 2,3,4 or 1:20")
    sp.add_argument("--window-a", type=float, help="window lower edge")
    sp.add_argument("--window-b", type=float, help="window upper edge")
    sp.add_argument("--s-lo", type=float)
    sp.add_argument("--s-hi", type=float)
    sp.add_argument("--s-count", type=int)
    _add_common(sp)
    sp.set_defaults(handler=_cmd_kernel_plot)

    sp = sub.add_parser("approximate", help="operator curves T_n f against f")
    sp.add_argument("--kernel", choices=("moment", "mgw", "mpc"))
    sp.add_argument("--p", type=int)
    sp.add_argument("--map", choices=("identity", "saturating"))
    sp.add_argument("--n")
    sp.add_argument("--signal", help='breakpoints "t1:y1,t2:y2,..."')
    sp.add_argument("--s-lo", type=float)
    sp.add_argument("--s-hi", type=float)
    sp.add_argument("--s-count", type=int)
    _add_common(sp)
    sp.set_defaults(handler=_cmd_approximate)

    sp = sub.add_parser("tail-table", help="kernel tail masses against analytic estimates")
    sp.add_argument("--kernel", choices=("moment", "mgw", "mpc"))
    sp.add_argument("--p", type=int)
    sp.add_argument("--n")
    sp.add_argument("--delta", help="tail radii, e.g. 1.5,2,4")
    _add_common(sp)
    sp.set_defaults(handler=_cmd_tail_table)

    sp = sub.add_parser("modular-table", help="modular operator errors over a window")
    sp.add_argument("--kernel", choices=("moment", "mgw", "mpc"))
    sp.add_argument("--p", type=int)
    sp.add_argument("--map", choices=("identity", "saturating"))
    sp.add_argument("--n")
    sp.add_argument("--signal")
    sp.add_argument("--q", type=float, help="gauge exponent (>= 1)")
    sp.add_argument("--a", type=float, help="modular scale")
    sp.add_argument("--window-lo", type=float)
    sp.add_argument("--window-hi", type=float)
    _add_common(sp)
    sp.set_defaults(handler=_cmd_modular_table)

    sp = sub.add_parser("singularity", help="approximate-identity verification report")
    sp.add_argument("--kernel", choices=("moment", "mgw", "mpc"))
    sp.add_argument("--p", type=int)
    sp.add_argument("--map", choices=("identity", "saturating"))
    sp.add_argument("--kernel-scale", type=float, help="scale the kernel (verification hook)")
    sp.add_argument("--n")
    sp.add_argument("--delta")
    _add_common(sp, with_format=False)
    sp.set_defaults(handler=_cmd_singularity)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except NumericError as exc:
        print(f"error: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
