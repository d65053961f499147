"""Compiled extension vs pure-python fallback: identical numerics."""

import subprocess
import sys

import numpy as np
import pytest

from pairtel import _kernels_py, backend_name
from pairtel.special import LOG_FACTORIALS, coherent_amplitudes

_compiled = pytest.importorskip(
    "pairtel._kernels", reason="compiled extension not built")


def test_backend_is_reported():
    assert backend_name() in ("compiled", "python")


@pytest.mark.parametrize("x", [0.25, 1.0, 9.0])
@pytest.mark.parametrize("zeta", [0.3, 1.2357, 2.5])
@pytest.mark.parametrize("g", [0.4, 0.8, 0.97, 1.15])
def test_fidelity_series_kernels_agree(x, zeta, g):
    lf = LOG_FACTORIALS.values
    a = _compiled.fidelity_series_sum(lf, x, zeta, g, 1e-11, 200)
    b = _kernels_py.fidelity_series_sum(lf, x, zeta, g, 1e-11, 200)
    assert a[0] == pytest.approx(b[0], rel=1e-12)
    assert a[1] == b[1]  # same diagonal count: same adaptive decisions


def test_fidelity_series_kernels_raise_identically():
    lf = LOG_FACTORIALS.values
    with pytest.raises(ValueError):
        _compiled.fidelity_series_sum(lf, 1.0, 0.0, 0.8, 1e-10, 200)
    with pytest.raises(ValueError):
        _kernels_py.fidelity_series_sum(lf, 1.0, 0.0, 0.8, 1e-10, 200)
    with pytest.raises(RuntimeError):
        _compiled.fidelity_series_sum(lf, 1.0, 1.0, 0.8, 1e-10, 4)
    with pytest.raises(RuntimeError):
        _kernels_py.fidelity_series_sum(lf, 1.0, 1.0, 0.8, 1e-10, 4)


def test_overlap_batches_agree_where_it_matters():
    # raw high-bra-index entries accumulate benign recurrence noise under the
    # two backends' different rounding: compare the rows that dominate any
    # physical contraction, and the channel-weighted sums everywhere
    rng = np.random.default_rng(11)
    betas = (rng.normal(size=512) + 1j * rng.normal(size=512)) * 2.0
    coh = coherent_amplitudes(1.5 + 0.5j, 60)
    a = _compiled.displaced_coherent_overlaps(betas, coh, 40)
    b = _kernels_py.displaced_coherent_overlaps(betas, coh, 40)
    assert np.max(np.abs(a[:, :12] - b[:, :12])) < 2e-12
    n = np.arange(41)
    chi = np.exp(n * np.log(1.2357) - np.cumsum(np.concatenate(([0.0], np.log(n[1:])))))
    chi /= np.linalg.norm(chi)
    assert np.max(np.abs(a @ chi - b @ chi)) < 1e-12


def test_python_backend_env_override():
    code = (
        "import pairtel, sys; "
        "sys.exit(0 if pairtel.backend_name() == 'python' else 1)"
    )
    proc = subprocess.run([sys.executable, "-c", code],
                          env={"PAIRTEL_BACKEND": "python", "PATH": "/usr/bin:/bin"},
                          capture_output=True)
    assert proc.returncode == 0, proc.stderr.decode()
