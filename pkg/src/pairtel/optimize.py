"""Parameter scans and deterministic maximization over channel and gain.

Golden-section with a fixed bracketing sequence everywhere: the objectives
are smooth and cheap, and reproducibility matters more than iteration counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, NonUnimodalScanError
from .hidden_variable import smeared_avg_fidelity
from .states import PairCoherentState, TwoModeSqueezedState
from .teleport import (
    FidelityResult,
    QuadSpec,
    TeleportScenario,
    avg_fidelity_g1_series,
    avg_fidelity_quadrature,
    avg_fidelity_series,
)

__all__ = [
    "golden_section_max",
    "Axis",
    "ScanGrid",
    "ArgmaxRecord",
    "scan",
    "ZetaOptimum",
    "optimize_zeta_at_unit_gain",
    "GainZetaOptimum",
    "optimize_gain_and_zeta",
]

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_max(f, lo: float, hi: float, tol: float = 1e-6,
                       max_iter: int = 200):
    """Deterministic golden-section maximization on [lo, hi].

    Returns (x, f(x)); assumes f is unimodal on the bracket.
    """
    if not lo < hi:
        raise ValueError("need lo < hi")
    a, b = lo, hi
    x1 = b - _INVPHI * (b - a)
    x2 = a + _INVPHI * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if f1 >= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INVPHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INVPHI * (b - a)
            f2 = f(x2)
    x = 0.5 * (a + b)
    return x, f(x)


# -- grid scans ---------------------------------------------------------------

_AXIS_NAMES = ("alpha_abs", "zeta", "gain", "r")


@dataclass(frozen=True)
class Axis:
    name: str
    values: tuple

    def __post_init__(self):
        if self.name not in _AXIS_NAMES:
            raise ValueError(f"axis name must be one of {_AXIS_NAMES}, got {self.name!r}")
        vals = tuple(float(v) for v in self.values)
        if len(vals) < 2:
            raise ValueError(f"axis {self.name!r} needs at least 2 points")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ValueError(f"axis {self.name!r} must be strictly increasing")
        object.__setattr__(self, "values", vals)

    @classmethod
    def linspace(cls, name, lo, hi, count):
        return cls(name, tuple(np.linspace(lo, hi, count)))


@dataclass(frozen=True)
class ArgmaxRecord:
    indices: tuple
    params: dict
    value: float


@dataclass(frozen=True)
class ScanGrid:
    axes: tuple
    values: np.ndarray  # object array of FidelityResult (or None on failure)
    errors: np.ndarray  # object array of str ('' when the point succeeded)
    argmax: ArgmaxRecord


def scan(axes, *, alpha_abs: float = 0.0, zeta: float = 0.0, gain: float = 1.0,
         method: str = "series", tol: float = 1e-8,
         quad_spec: QuadSpec | None = None) -> ScanGrid:
    """Dense fidelity evaluation over up to three axes (alpha_abs/zeta/gain,
    plus r for a squeezed-channel baseline under method='quadrature').

    Points are visited in deterministic lexicographic order; per-point
    failures are recorded in the grid instead of aborting the scan.
    """
    axes = tuple(axes)
    if not axes:
        raise ValueError("at least one axis is required")
    names = [ax.name for ax in axes]
    if len(set(names)) != len(names):
        raise ValueError("duplicate axis names")
    if method not in ("series", "quadrature"):
        raise ValueError(f"method must be series|quadrature, got {method!r}")
    shape = tuple(len(ax.values) for ax in axes)
    total = int(np.prod(shape))
    if total > 10**6:
        raise ValueError(f"scan would evaluate {total} points (cap 10^6)")

    values = np.empty(shape, dtype=object)
    errors = np.empty(shape, dtype=object)
    best = None
    for idx in np.ndindex(shape):
        params = {"alpha_abs": alpha_abs, "zeta": zeta, "gain": gain, "r": None}
        for ax, i in zip(axes, idx):
            params[ax.name] = ax.values[i]
        try:
            res = _evaluate_point(params, method, tol, quad_spec)
            values[idx] = res
            errors[idx] = ""
            if best is None or res.value > best.value:
                point = {k: v for k, v in params.items() if v is not None}
                best = ArgmaxRecord(idx, point, res.value)
        except Exception as exc:  # recorded per point, not fatal
            values[idx] = None
            errors[idx] = f"{type(exc).__name__}: {exc}"
    if best is None:
        raise ConvergenceError("every scan point failed")
    return ScanGrid(axes, values, errors, best)


def _evaluate_point(params, method, tol, quad_spec) -> FidelityResult:
    if params["r"] is not None:
        channel = TwoModeSqueezedState(params["r"])
    else:
        channel = PairCoherentState(params["zeta"])
    if method == "series":
        if params["r"] is not None:
            raise ValueError("series method supports the pair-coherent channel only")
        return avg_fidelity_series(params["alpha_abs"], params["zeta"],
                                   params["gain"], tol)
    scenario = TeleportScenario(
        input_alpha=complex(params["alpha_abs"]),
        channel=channel,
        gain=params["gain"],
        quad_spec=quad_spec or QuadSpec(),
        series_tol=min(tol, 1e-4),
    )
    return avg_fidelity_quadrature(scenario)


# -- maximizers ---------------------------------------------------------------

@dataclass(frozen=True)
class ZetaOptimum:
    zeta_opt: float
    f_opt: float
    monotone_increasing: bool
    scan_zetas: tuple
    scan_values: tuple


def optimize_zeta_at_unit_gain(bracket=(0.0, 4.0), tol: float = 1e-6,
                               scan_points: int = 50) -> ZetaOptimum:
    """Maximize the unit-gain fidelity over the channel parameter.

    Golden-section refinement around the argmax of a scan_points verification
    scan; the scan doubles as a post-hoc unimodality check. When the scan is
    monotone increasing up to the right edge, the boundary is returned with
    ``monotone_increasing`` set (the true maximum lies right of the bracket).
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not 0.0 <= lo < hi:
        raise ValueError("bracket must satisfy 0 <= lo < hi")
    zs = np.linspace(lo, hi, scan_points)
    fs = np.array([avg_fidelity_g1_series(z, 1e-12).value for z in zs])
    _check_unimodal(zs, fs)
    k = int(np.argmax(fs))
    if k == scan_points - 1:
        return ZetaOptimum(hi, float(fs[-1]), True, tuple(zs), tuple(fs))
    a = zs[max(0, k - 1)]
    b = zs[min(scan_points - 1, k + 1)]
    z_opt, f_opt = golden_section_max(
        lambda z: avg_fidelity_g1_series(z, 1e-12).value, a, b, tol)
    return ZetaOptimum(z_opt, f_opt, False, tuple(zs), tuple(fs))


def _check_unimodal(xs, fs, noise: float = 1e-11):
    d = np.diff(fs)
    d = np.where(np.abs(d) <= noise * max(1.0, float(np.max(np.abs(fs)))), 0.0, d)
    drops = False
    for v in d:
        if v < 0.0:
            drops = True
        elif v > 0.0 and drops:
            raise NonUnimodalScanError(
                "verification scan found more than one interior maximum",
                scan_x=tuple(xs), scan_f=tuple(fs))


@dataclass(frozen=True)
class GainZetaOptimum:
    g_opt: float
    zeta_opt: float
    f_opt: float
    outer_iterations: int


def optimize_gain_and_zeta(alpha_abs: float, tol: float = 1e-5,
                           g_range=(0.0, 1.25), zeta_range=(0.0, 4.0),
                           seed_points: int = 21, max_outer: int = 100,
                           series_tol: float = 1e-10) -> GainZetaOptimum:
    """Joint maximization over (gain, zeta) by coordinate ascent.

    A deterministic seed_points x seed_points grid picks the starting corner
    of the basin, then alternating golden-section line solves run until both
    coordinates move less than tol.
    """
    if not (math.isfinite(alpha_abs) and alpha_abs >= 0.0):
        raise ValueError("alpha_abs must be finite and >= 0")

    def f(g, z):
        return avg_fidelity_series(alpha_abs, z, g, series_tol).value

    gs = np.linspace(g_range[0], g_range[1], seed_points)
    zs = np.linspace(zeta_range[0], zeta_range[1], seed_points)
    vals = np.array([[f(g, z) for z in zs] for g in gs])
    ig, iz = np.unravel_index(int(np.argmax(vals)), vals.shape)
    g_cur, z_cur = float(gs[ig]), float(zs[iz])

    for outer in range(1, max_outer + 1):
        g_new, _ = golden_section_max(lambda g: f(g, z_cur),
                                      g_range[0], g_range[1], tol)
        z_new, f_new = golden_section_max(lambda z: f(g_new, z),
                                          zeta_range[0], zeta_range[1], tol)
        moved = max(abs(g_new - g_cur), abs(z_new - z_cur))
        g_cur, z_cur = g_new, z_new
        if moved < tol:
            return GainZetaOptimum(g_cur, z_cur, f_new, outer)
    raise ConvergenceError(
        f"coordinate ascent did not settle within {max_outer} outer iterations")


def fig2_columns(zetas, smeared_nodes: int = 48):
    """Fidelity-vs-zeta comparison columns: pair-coherent channel at unit
    gain, an equal-mean-photon-number squeezed-vacuum baseline, and the
    smeared (hidden-variable) channel."""
    from .states import pair_coherent_amplitudes
    from .teleport import tmsv_avg_fidelity_g1

    rows = []
    for z in zetas:
        f_pair = avg_fidelity_g1_series(float(z), 1e-12).value
        amps, _ = pair_coherent_amplitudes(PairCoherentState(float(z)))
        mean_n = float(np.sum(np.arange(amps.size) * amps**2))
        r = math.asinh(math.sqrt(mean_n))
        f_tmsv = tmsv_avg_fidelity_g1(r).value
        f_sm = smeared_avg_fidelity(float(z), smeared_nodes).value
        rows.append((float(z), f_pair, f_tmsv, f_sm))
    return rows
