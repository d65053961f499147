"""Teleportation fidelities for pair-coherent ("circle") channel states.

Closed-form series for the gain-tuned average fidelity of coherent-state
teleportation through a pair-coherent channel, cross-validated against a
Fock-truncated quadrature oracle, with Wigner-function evaluators, a
hidden-variable ("smeared-channel") comparison, and parameter optimizers.
"""

from .errors import (
    ConvergenceError,
    NonUnimodalScanError,
    QuadratureResolutionError,
    SeriesRangeError,
    TruncationError,
)
from .hidden_variable import smeared_avg_fidelity, unit_gain_fidelity_characteristic
from .kernels import backend_name
from .optimize import (
    Axis,
    GainZetaOptimum,
    ScanGrid,
    ZetaOptimum,
    golden_section_max,
    optimize_gain_and_zeta,
    optimize_zeta_at_unit_gain,
    scan,
)
from .special import (
    LOG_FACTORIALS,
    LogFactorialTable,
    bessel_i0,
    coherent_amplitudes,
    displaced_coherent_overlaps,
    displaced_fock_overlap,
    displacement_matrix,
    hyper2f0_finite,
    log_bessel_i0,
)
from .states import (
    PairCoherentState,
    PhasePoint,
    TwoModeSqueezedState,
    characteristic_slice,
    pair_coherent_amplitudes,
    smeared_characteristic,
    two_mode_squeezed_amplitudes,
    wigner,
    wigner_batch,
    wigner_fock_oracle,
)
from .teleport import (
    FidelityResult,
    QuadSpec,
    TeleportScenario,
    avg_fidelity_g1_series,
    avg_fidelity_quadrature,
    avg_fidelity_series,
    measurement_density,
    measurement_norm_quadrature,
    schmidt_coefficients,
    tmsv_avg_fidelity_g1,
    transfer_apply,
    transfer_apply_circle,
)

__version__ = "0.1.0"

__all__ = [
    "backend_name",
    "bessel_i0",
    "log_bessel_i0",
    "hyper2f0_finite",
    "displaced_fock_overlap",
    "displacement_matrix",
    "displaced_coherent_overlaps",
    "coherent_amplitudes",
    "LogFactorialTable",
    "LOG_FACTORIALS",
    "PairCoherentState",
    "TwoModeSqueezedState",
    "PhasePoint",
    "pair_coherent_amplitudes",
    "two_mode_squeezed_amplitudes",
    "wigner",
    "wigner_batch",
    "wigner_fock_oracle",
    "characteristic_slice",
    "smeared_characteristic",
    "TeleportScenario",
    "QuadSpec",
    "FidelityResult",
    "schmidt_coefficients",
    "transfer_apply",
    "transfer_apply_circle",
    "measurement_density",
    "measurement_norm_quadrature",
    "avg_fidelity_series",
    "avg_fidelity_g1_series",
    "avg_fidelity_quadrature",
    "tmsv_avg_fidelity_g1",
    "smeared_avg_fidelity",
    "unit_gain_fidelity_characteristic",
    "golden_section_max",
    "Axis",
    "ScanGrid",
    "scan",
    "ZetaOptimum",
    "GainZetaOptimum",
    "optimize_zeta_at_unit_gain",
    "optimize_gain_and_zeta",
    "TruncationError",
    "ConvergenceError",
    "QuadratureResolutionError",
    "SeriesRangeError",
    "NonUnimodalScanError",
    "__version__",
]
