"""Optimizers and grid scans."""

import numpy as np
import pytest

from pairtel.errors import NonUnimodalScanError
from pairtel.optimize import (
    Axis,
    _check_unimodal,
    fig2_columns,
    golden_section_max,
    optimize_gain_and_zeta,
    optimize_zeta_at_unit_gain,
    scan,
)
from pairtel.teleport import avg_fidelity_g1_series, avg_fidelity_series


def test_golden_section_on_parabola():
    x, fx = golden_section_max(lambda t: -(t - 1.3) ** 2, 0.0, 3.0, tol=1e-9)
    assert x == pytest.approx(1.3, abs=1e-8)
    assert fx == pytest.approx(0.0, abs=1e-15)


def test_zeta_optimum_matches_reported_maximum():
    opt = optimize_zeta_at_unit_gain()
    assert opt.zeta_opt == pytest.approx(1.2357, abs=2e-3)
    assert opt.f_opt == pytest.approx(0.75884, abs=1e-3)
    assert not opt.monotone_increasing


def test_too_small_bracket_returns_boundary_with_flag():
    opt = optimize_zeta_at_unit_gain(bracket=(0.0, 0.1))
    assert opt.zeta_opt == 0.1
    assert opt.monotone_increasing
    assert opt.f_opt == pytest.approx(avg_fidelity_g1_series(0.1, 1e-12).value, abs=1e-10)


def test_unimodality_checker_flags_double_peak():
    xs = np.linspace(0, 1, 9)
    fs = np.array([0.0, 1.0, 0.5, 0.2, 0.8, 1.2, 0.9, 0.3, 0.1])
    with pytest.raises(NonUnimodalScanError) as info:
        _check_unimodal(xs, fs)
    assert info.value.scan_f is not None


def test_vacuum_input_prefers_zero_gain():
    opt = optimize_gain_and_zeta(0.0, tol=1e-4)
    # brute-force grid argmax oracle over the same box
    gs = np.linspace(0.0, 1.25, 30)
    zs = np.linspace(0.0, 4.0, 30)
    vals = np.array([[avg_fidelity_series(0.0, z, g, 1e-10).value for z in zs] for g in gs])
    ig, iz = np.unravel_index(int(np.argmax(vals)), vals.shape)
    assert abs(opt.g_opt - gs[ig]) <= (gs[1] - gs[0]) + 1e-9
    assert abs(opt.zeta_opt - zs[iz]) <= (zs[1] - zs[0]) + 1e-9
    assert opt.g_opt == pytest.approx(0.0, abs=1e-3)
    assert opt.f_opt == pytest.approx(1.0, abs=1e-8)


def test_gain_trend_toward_unity():
    g1 = optimize_gain_and_zeta(1.0, tol=1e-4)
    g3 = optimize_gain_and_zeta(3.0, tol=1e-4)
    assert g1.g_opt < 1.0 and g3.g_opt < 1.0
    assert g1.g_opt <= g3.g_opt
    # gain freedom never hurts relative to the best unit-gain channel
    best_g1 = optimize_zeta_at_unit_gain().f_opt
    assert g1.f_opt >= best_g1 - 1e-12
    assert g3.f_opt >= best_g1 - 1e-12


# -- scans ---------------------------------------------------------------------

def test_axis_validation():
    with pytest.raises(ValueError):
        Axis("zeta", (1.0,))
    with pytest.raises(ValueError):
        Axis("zeta", (1.0, 0.5))
    with pytest.raises(ValueError):
        Axis("mystery", (0.0, 1.0))
    with pytest.raises(ValueError):
        scan([])


def test_scan_composes_the_unit_gain_series():
    grid = scan([Axis("zeta", (0.0, 1.0, 2.0))], gain=1.0, tol=1e-10)
    for i, z in enumerate((0.0, 1.0, 2.0)):
        assert grid.values[(i,)].value == pytest.approx(
            avg_fidelity_g1_series(z, 1e-10).value, abs=1e-12)
        assert grid.errors[(i,)] == ""


def test_scan_argmax_invariant_and_determinism():
    axes = [Axis.linspace("zeta", 0.2, 2.5, 7), Axis.linspace("gain", 0.6, 1.1, 5)]
    g1 = scan(axes, alpha_abs=1.0)
    g2 = scan(axes, alpha_abs=1.0)
    vals = np.array([[g1.values[(i, j)].value for j in range(5)] for i in range(7)])
    assert g1.argmax.value == vals.max()
    assert g1.argmax.indices == tuple(np.unravel_index(int(vals.argmax()), vals.shape))
    assert g2.argmax == g1.argmax
    assert all(g1.values[idx].value == g2.values[idx].value for idx in np.ndindex(7, 5))


def test_scan_records_per_point_failures():
    # the series route cannot evaluate a squeezed channel: every r-point is
    # recorded as failed rather than aborting, then the all-failed guard trips
    from pairtel.errors import ConvergenceError

    with pytest.raises(ConvergenceError):
        scan([Axis("r", (0.1, 0.3))], method="series")


def test_scan_supports_squeezed_baseline_axis():
    # the r axis routes each point through the quadrature oracle with a
    # squeezed-vacuum channel; fidelity grows with squeezing at unit gain
    grid = scan([Axis("r", (0.1, 0.4))], method="quadrature", alpha_abs=1.0)
    v0, v1 = grid.values[(0,)].value, grid.values[(1,)].value
    assert v0 < v1
    assert v0 == pytest.approx(1.0 / (1.0 + np.exp(-0.2)), abs=1e-4)


def test_scan_rejects_oversized_requests():
    with pytest.raises(ValueError):
        scan([Axis.linspace("zeta", 0.0, 1.0, 1001),
              Axis.linspace("gain", 0.0, 1.0, 1001)])


def test_fig2_columns_shapes_and_ordering():
    zetas = np.linspace(0.0, 3.0, 13)
    rows = fig2_columns(zetas, smeared_nodes=32)
    pair = [r[1] for r in rows]
    tmsv = [r[2] for r in rows]
    smeared = [r[3] for r in rows]
    # pair-coherent curve has an interior maximum
    k = int(np.argmax(pair))
    assert 0 < k < len(pair) - 1
    # squeezed-vacuum baseline increases monotonically with its r(zeta)
    assert all(b >= a - 1e-12 for a, b in zip(tmsv, tmsv[1:]))
    # hidden-variable curve never reaches the classical threshold
    assert all(v < 0.5 for v in smeared)
