"""Smeared-channel (hidden-variable surrogate) fidelity properties."""

import math

import pytest

from pairtel.hidden_variable import smeared_avg_fidelity, unit_gain_fidelity_characteristic
from pairtel.teleport import avg_fidelity_g1_series

ZETA_GRID = (0.0, 0.5, 1.0, 1.2357, 2.0)


def test_vacuum_channel_is_one_third():
    # closed-form Gaussian integral: (1/pi) Int e^{-|l|^2} e^{-2|l|^2} = 1/3
    res = smeared_avg_fidelity(0.0)
    assert res.value == pytest.approx(1.0 / 3.0, abs=1e-6)
    assert res.method == "quadrature"


@pytest.mark.parametrize("zeta", ZETA_GRID)
def test_smeared_stays_below_classical_threshold(zeta):
    assert 0.0 < smeared_avg_fidelity(zeta).value < 0.5


@pytest.mark.parametrize("zeta", ZETA_GRID)
def test_quantum_channel_dominates_its_smeared_surrogate(zeta):
    smeared = smeared_avg_fidelity(zeta).value
    quantum = avg_fidelity_g1_series(zeta).value
    assert smeared < quantum


def test_alpha_independence_at_unit_gain():
    # evaluated with the explicit input phase factors kept in the integrand
    base = smeared_avg_fidelity(1.0, input_alpha=0j).value
    moved = smeared_avg_fidelity(1.0, input_alpha=1.0 + 1.0j).value
    assert abs(base - moved) < 1e-8


def test_node_count_converged():
    res = smeared_avg_fidelity(1.2357)
    assert res.quad_residual < 1e-9


def test_rejects_bad_zeta():
    with pytest.raises(ValueError):
        smeared_avg_fidelity(-1.0)
    with pytest.raises(ValueError):
        smeared_avg_fidelity(math.inf)


@pytest.mark.parametrize("zeta", [0.0, 0.7, 1.2357])
def test_characteristic_route_reproduces_unit_gain_series(zeta):
    # same protocol, entirely different representation: strong cross-check of
    # both the series and the characteristic-function machinery
    assert unit_gain_fidelity_characteristic(zeta) == pytest.approx(
        avg_fidelity_g1_series(zeta, tol=1e-12).value, abs=1e-8)
