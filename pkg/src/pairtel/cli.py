"""Command-line interface: single fidelities as JSON, grids and Wigner
sections as CSV.

Exit codes: 0 success, 2 usage error, 3 numerical non-convergence,
4 I/O failure. Identical flags produce byte-identical output; floats are
serialized with 17 significant digits so files round-trip losslessly.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .errors import (
    ConvergenceError,
    NonUnimodalScanError,
    QuadratureResolutionError,
    SeriesRangeError,
    TruncationError,
)
from .hidden_variable import smeared_avg_fidelity
from .optimize import Axis, fig2_columns, optimize_gain_and_zeta, scan
from .states import PairCoherentState, PhasePoint, wigner_batch
from .teleport import (
    QuadSpec,
    TeleportScenario,
    TwoModeSqueezedState,
    avg_fidelity_g1_series,
    avg_fidelity_quadrature,
    avg_fidelity_series,
    tmsv_avg_fidelity_g1,
)

_EXIT_OK = 0
_EXIT_USAGE = 2
_EXIT_NUMERICAL = 3
_EXIT_IO = 4

_NUMERICAL_ERRORS = (
    ConvergenceError,
    QuadratureResolutionError,
    SeriesRangeError,
    TruncationError,
    NonUnimodalScanError,
)


def _fmt(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def _to_json(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        x = float(value)
        if math.isnan(x) or math.isinf(x):
            return json.dumps(_fmt(x))
        return _fmt(x)
    if isinstance(value, complex):
        return json.dumps(f"{_fmt(value.real)}{value.imag:+.17g}j")
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, dict):
        items = ", ".join(f"{json.dumps(str(k))}: {_to_json(v)}" for k, v in value.items())
        return "{" + items + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_to_json(v) for v in value) + "]"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _emit(record: dict) -> None:
    sys.stdout.write(_to_json(record) + "\n")


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}")


def _parse_axis_spec(text: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"axis spec must be min:max:count, got {text!r}")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad axis spec {text!r}")
    return lo, hi, count


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pairtel",
        description="Teleportation fidelities with a pair-coherent channel.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    fid = sub.add_parser("fidelity", help="single fidelity as a JSON record")
    fid.add_argument("--alpha", type=_parse_complex, default=0j,
                     help="input coherent amplitude (complex, e.g. 1+0.5j)")
    fid.add_argument("--zeta", type=float, default=0.0,
                     help="pair-coherent channel parameter")
    fid.add_argument("--gain", type=float, default=1.0,
                     help="Bob's gain g in the displacement 2gA")
    fid.add_argument("--method", default="series",
                     choices=["series", "quadrature", "g1-series", "smeared", "tmsv"])
    fid.add_argument("--tol", type=float, default=1e-8)
    fid.add_argument("--nmax", type=int, default=None,
                     help="override the channel Fock truncation")
    fid.add_argument("--r", type=float, default=None,
                     help="squeezing parameter (tmsv method)")
    fid.set_defaults(func=cmd_fidelity)

    scn = sub.add_parser("scan", help="grid scan to CSV or JSON")
    scn.add_argument("--alpha-axis", type=_parse_axis_spec, default=None,
                     metavar="MIN:MAX:COUNT")
    scn.add_argument("--zeta-axis", type=_parse_axis_spec, default=None,
                     metavar="MIN:MAX:COUNT")
    scn.add_argument("--gain-axis", type=_parse_axis_spec, default=None,
                     metavar="MIN:MAX:COUNT")
    scn.add_argument("--alpha-abs", type=float, default=0.0)
    scn.add_argument("--zeta", type=float, default=0.0)
    scn.add_argument("--gain", type=float, default=1.0)
    scn.add_argument("--method", default="series", choices=["series", "quadrature"])
    scn.add_argument("--tol", type=float, default=1e-8)
    scn.add_argument("--preset", choices=["fig1", "fig2"], default=None,
                     help="emit a prebuilt figure-data table instead of a raw grid")
    scn.add_argument("--points", type=int, default=None,
                     help="point count of the preset's sweep axis")
    scn.add_argument("--output", required=True, help="output file path")
    scn.add_argument("--format", default="csv", choices=["csv", "json"])
    scn.set_defaults(func=cmd_scan)

    wig = sub.add_parser("wigner", help="Wigner function on a 2D section")
    wig.add_argument("--zeta", type=float, required=True)
    wig.add_argument("--nmax", type=int, default=None)
    wig.add_argument("--x", default="re_alpha",
                     choices=["re_alpha", "im_alpha", "re_beta", "im_beta"])
    wig.add_argument("--y", default="re_beta",
                     choices=["re_alpha", "im_alpha", "re_beta", "im_beta"])
    wig.add_argument("--xspec", type=_parse_axis_spec, default=(-2.0, 2.0, 41),
                     metavar="MIN:MAX:COUNT")
    wig.add_argument("--yspec", type=_parse_axis_spec, default=(-2.0, 2.0, 41),
                     metavar="MIN:MAX:COUNT")
    wig.add_argument("--tol", type=float, default=1e-8)
    wig.add_argument("--output", required=True)
    wig.set_defaults(func=cmd_wigner)
    return parser


def cmd_fidelity(args, parser) -> int:
    params = {
        "alpha": args.alpha,
        "zeta": args.zeta,
        "gain": args.gain,
        "method": args.method,
        "tol": args.tol,
    }
    if args.r is not None:
        params["r"] = args.r
    if args.method == "g1-series":
        if args.gain != 1.0:
            parser.error("method g1-series requires --gain 1")
        result = avg_fidelity_g1_series(args.zeta, args.tol)
    elif args.method == "smeared":
        if args.gain != 1.0:
            parser.error("method smeared requires --gain 1")
        result = smeared_avg_fidelity(args.zeta)
    elif args.method == "series":
        result = avg_fidelity_series(abs(args.alpha), args.zeta, args.gain, args.tol)
    elif args.method == "tmsv":
        if args.r is None:
            parser.error("method tmsv requires --r")
        if args.gain == 1.0:
            result = tmsv_avg_fidelity_g1(args.r)
        else:
            scenario = TeleportScenario(
                input_alpha=args.alpha,
                channel=TwoModeSqueezedState(args.r, n_max=args.nmax),
                gain=args.gain,
                series_tol=min(args.tol, 1e-4),
            )
            result = avg_fidelity_quadrature(scenario)
    else:  # quadrature
        scenario = TeleportScenario(
            input_alpha=args.alpha,
            channel=PairCoherentState(args.zeta, n_max=args.nmax),
            gain=args.gain,
            series_tol=min(args.tol, 1e-4),
        )
        result = avg_fidelity_quadrature(scenario)
    _emit({
        "value": result.value,
        "method": result.method,
        "truncation_used": result.truncation_used,
        "tail_estimate": result.tail_estimate,
        "quad_residual": result.quad_residual,
        "params": params,
    })
    return _EXIT_OK


def _write_lines(path: str, lines) -> None:
    with open(path, "w", newline="") as fh:
        for line in lines:
            fh.write(line + "\n")


def cmd_scan(args, parser) -> int:
    if args.preset is not None:
        return _run_preset(args, parser)
    axes = []
    for name, spec in (("alpha_abs", args.alpha_axis), ("zeta", args.zeta_axis),
                       ("gain", args.gain_axis)):
        if spec is not None:
            lo, hi, count = spec
            if count < 2:
                parser.error(f"axis {name} needs at least 2 points")
            axes.append(Axis.linspace(name, lo, hi, count))
    if not axes:
        parser.error("no axis given (use --alpha-axis/--zeta-axis/--gain-axis or --preset)")
    grid = scan(axes, alpha_abs=args.alpha_abs, zeta=args.zeta, gain=args.gain,
                method=args.method, tol=args.tol)
    if args.format == "csv":
        _write_lines(args.output, _grid_csv_lines(grid))
    else:
        _write_lines(args.output, [_to_json(_grid_json(grid))])
    _emit({"points": int(np.prod([len(ax.values) for ax in grid.axes])),
           "argmax": grid.argmax.params | {"value": grid.argmax.value},
           "output": args.output})
    return _EXIT_OK


def _grid_csv_lines(grid):
    names = [ax.name for ax in grid.axes]
    header = names + ["value", "method", "truncation_used", "tail_estimate",
                      "quad_residual", "error"]
    yield ",".join(header)
    shape = tuple(len(ax.values) for ax in grid.axes)
    for idx in np.ndindex(shape):
        coords = [_fmt(ax.values[i]) for ax, i in zip(grid.axes, idx)]
        res = grid.values[idx]
        err = grid.errors[idx]
        if res is None:
            row = coords + ["nan", "", "", "", "", err.replace(",", ";")]
        else:
            row = coords + [_fmt(res.value), res.method, str(res.truncation_used),
                            _fmt(res.tail_estimate), _fmt(res.quad_residual), err]
        yield ",".join(row)


def _grid_json(grid):
    return {
        "axes": [{"name": ax.name, "values": list(ax.values)} for ax in grid.axes],
        "points": [
            {
                "indices": list(idx),
                "value": (grid.values[idx].value if grid.values[idx] else float("nan")),
                "error": grid.errors[idx],
            }
            for idx in np.ndindex(tuple(len(ax.values) for ax in grid.axes))
        ],
        "argmax": grid.argmax.params | {"value": grid.argmax.value},
    }


def _run_preset(args, parser) -> int:
    if args.preset == "fig2":
        count = args.points or 61
        zetas = np.linspace(0.0, 3.0, count)
        rows = fig2_columns(zetas)
        lines = ["zeta,f_pair_g1,f_tmsv,f_smeared"]
        lines += [",".join(_fmt(v) for v in row) for row in rows]
        _write_lines(args.output, lines)
        _emit({"preset": "fig2", "points": count, "output": args.output})
        return _EXIT_OK
    count = args.points or 10
    alphas = np.linspace(0.5, 5.0, count)
    lines = ["alpha_abs,f_opt,zeta_opt,g_opt"]
    for a in alphas:
        opt = optimize_gain_and_zeta(float(a), tol=1e-4, series_tol=1e-8)
        lines.append(",".join(_fmt(v) for v in (a, opt.f_opt, opt.zeta_opt, opt.g_opt)))
    _write_lines(args.output, lines)
    _emit({"preset": "fig1", "points": count, "output": args.output})
    return _EXIT_OK


_COORDS = ("re_alpha", "im_alpha", "re_beta", "im_beta")


def cmd_wigner(args, parser) -> int:
    if args.x == args.y:
        parser.error("--x and --y must name different coordinates")
    for label, spec in (("x", args.xspec), ("y", args.yspec)):
        if spec[2] < 1:
            parser.error(f"--{label}spec count must be >= 1")
    state = PairCoherentState(args.zeta, n_max=args.nmax)
    xs = np.linspace(args.xspec[0], args.xspec[1], args.xspec[2])
    ys = np.linspace(args.yspec[0], args.yspec[1], args.yspec[2])
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    coords = {name: np.zeros_like(gx) for name in _COORDS}
    coords[args.x] = gx
    coords[args.y] = gy
    alphas = coords["re_alpha"] + 1j * coords["im_alpha"]
    betas = coords["re_beta"] + 1j * coords["im_beta"]
    w = wigner_batch(state, alphas, betas, tol=args.tol)
    lines = [f"{args.x},{args.y},w"]
    for i in range(xs.size):
        for j in range(ys.size):
            lines.append(f"{_fmt(xs[i])},{_fmt(ys[j])},{_fmt(w[i, j])}")
    _write_lines(args.output, lines)
    _emit({"min_w": float(w.min()), "points": int(w.size), "output": args.output})
    return _EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except _NUMERICAL_ERRORS as exc:
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}})
        return _EXIT_NUMERICAL
    except (ValueError, TypeError) as exc:
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}})
        return _EXIT_USAGE
    except OSError as exc:
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}})
        return _EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
