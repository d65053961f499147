"""Channel states: pair-coherent ("circle") states, two-mode squeezed vacuum,
and their phase-space / characteristic-function evaluators.

Conventions. Wigner functions are normalized to unit integral per the usual
quantum-optics convention, so the two-mode vacuum is (2/pi)^2
exp(-2|a|^2 - 2|b|^2) with peak 4/pi^2. Characteristic functions are
symmetric-ordered, chi(0) = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ConvergenceError, TruncationError
from .special import (
    _lf_arr,
    displacement_matrix,
    log_bessel_i0,
    log_factorial,
)

__all__ = [
    "PairCoherentState",
    "TwoModeSqueezedState",
    "PhasePoint",
    "AmplitudeData",
    "pair_coherent_amplitudes",
    "two_mode_squeezed_amplitudes",
    "default_pair_coherent_n_max",
    "wigner",
    "wigner_batch",
    "wigner_fock_oracle",
    "characteristic_slice",
    "smeared_characteristic",
]


def default_pair_coherent_n_max(zeta: float) -> int:
    """Truncation keeping the amplitude tail below ~1e-14 for zeta <= 5."""
    return int(math.ceil(zeta) + math.ceil(8.0 * math.sqrt(zeta + 1.0)) + 20)


def _default_tmsv_n_max(r: float) -> int:
    if r == 0.0:
        return 16
    # tail is tanh(r)^(2(N+1)); keep it under 1e-14
    need = -32.24 / (2.0 * math.log(math.tanh(r)))
    return max(16, int(math.ceil(need)))


@dataclass(frozen=True)
class PairCoherentState:
    """Two-mode eigenstate of the pair annihilator ab (eigenvalue zeta >= 0)
    and of the photon-number difference (eigenvalue charge >= 0)."""

    zeta: float
    charge: int = 0
    n_max: int | None = None

    def __post_init__(self):
        if not (math.isfinite(self.zeta) and self.zeta >= 0.0):
            raise ValueError(f"zeta must be finite and >= 0, got {self.zeta!r}")
        if not isinstance(self.charge, (int, np.integer)) or self.charge < 0:
            raise ValueError(f"charge must be a nonnegative integer, got {self.charge!r}")
        if self.n_max is None:
            object.__setattr__(self, "n_max", default_pair_coherent_n_max(self.zeta))
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")


@dataclass(frozen=True)
class TwoModeSqueezedState:
    """Two-mode squeezed vacuum with squeezing parameter r >= 0."""

    r: float
    n_max: int | None = None

    def __post_init__(self):
        if not (math.isfinite(self.r) and self.r >= 0.0):
            raise ValueError(f"r must be finite and >= 0, got {self.r!r}")
        if self.n_max is None:
            object.__setattr__(self, "n_max", _default_tmsv_n_max(self.r))
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")


@dataclass(frozen=True)
class PhasePoint:
    """Two-mode phase-space point (alpha for mode a, beta for mode b)."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        for name in ("alpha", "beta"):
            v = complex(getattr(self, name))
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise ValueError(f"{name} must be finite, got {v!r}")
            object.__setattr__(self, name, v)


class AmplitudeData(NamedTuple):
    amplitudes: np.ndarray
    tail_bound: float


def _log_norm_sq(zeta: float, q: int) -> float:
    """ln sum_n zeta^(2n) / (n! (n+q)!) -- the squared normalization of the
    unnormalized amplitude ladder. Equals ln I0(2 zeta) when q = 0."""
    if zeta == 0.0:
        return -log_factorial(q)
    lz2 = 2.0 * math.log(zeta)
    top = -math.inf
    acc = 0.0
    n = 0
    while True:
        lt = n * lz2 - log_factorial(n) - log_factorial(n + q)
        if lt > top:
            acc = 1.0 if top == -math.inf else acc * math.exp(top - lt) + 1.0
            top = lt
        else:
            acc += math.exp(lt - top)
            if n > zeta and lt < top - 46.0:  # below 1e-20 of the peak
                break
        n += 1
    return top + math.log(acc)


def pair_coherent_amplitudes(state: PairCoherentState, max_tail: float | None = None) -> AmplitudeData:
    """Fock amplitudes c_n of |zeta, q> = sum_n c_n |n+q, n>, n <= n_max.

    c_n is proportional to zeta^n / sqrt(n! (n+q)!), normalized so the full
    (untruncated) sum of squares is exactly 1. Also returns the analytic
    tail bound on sum_{n > n_max} c_n^2 from the amplitude ratio
    c_{n+1}/c_n = zeta / sqrt((n+1)(n+1+q)).
    """
    zeta, q, nmax = state.zeta, state.charge, state.n_max
    if zeta == 0.0:
        amps = np.zeros(nmax + 1)
        amps[0] = 1.0
        return AmplitudeData(amps, 0.0)
    n = np.arange(nmax + 1)
    lnorm2 = _log_norm_sq(zeta, q)
    logs = n * math.log(zeta) - 0.5 * (_lf_arr(n) + _lf_arr(n + q)) - 0.5 * lnorm2
    amps = np.exp(logs)
    tail = _pair_coherent_tail(amps[-1], zeta, q, nmax)
    if max_tail is not None and tail > max_tail:
        raise TruncationError(
            f"n_max={nmax} leaves amplitude tail {tail:.3e} > {max_tail:.3e}",
            suggested_n_max=_suggest_n_max(zeta, q, max_tail),
        )
    return AmplitudeData(amps, tail)


def _pair_coherent_tail(c_last: float, zeta: float, q: int, nmax: int) -> float:
    c = c_last
    n = nmax
    tail = 0.0
    # walk until the squared ratio is an honest geometric bound, then close it
    while True:
        c = c * zeta / math.sqrt((n + 1.0) * (n + 1.0 + q))
        rho2 = zeta * zeta / ((n + 2.0) * (n + 2.0 + q))
        if rho2 < 0.5:
            return tail + c * c / (1.0 - rho2)
        tail += c * c
        n += 1


def _suggest_n_max(zeta: float, q: int, max_tail: float) -> int:
    n = default_pair_coherent_n_max(zeta)
    while True:
        amps = pair_coherent_amplitudes(PairCoherentState(zeta, q, n))
        if amps.tail_bound <= max_tail:
            return n
        n = int(n * 1.5) + 8


def two_mode_squeezed_amplitudes(state: TwoModeSqueezedState) -> AmplitudeData:
    """Schmidt amplitudes tanh(r)^n / cosh(r); exact tail tanh(r)^(2(N+1))."""
    r, nmax = state.r, state.n_max
    if r == 0.0:
        amps = np.zeros(nmax + 1)
        amps[0] = 1.0
        return AmplitudeData(amps, 0.0)
    t = math.tanh(r)
    amps = t ** np.arange(nmax + 1) / math.cosh(r)
    return AmplitudeData(amps, t ** (2 * (nmax + 1)))


# -- Wigner evaluation -------------------------------------------------------

def _scaled_poly(m: int, n: int, xs: np.ndarray) -> np.ndarray:
    """sum_k (-1)^k x^(m+n-2k) / ((m-k)! (n-k)! k!) on an array of x >= 0.

    This is |x|^(m+n) 2F0(-m,-n;;-1/x^2) / (m! n!), written with only
    nonnegative powers of x so the phase-space origin is a removable point.
    """
    out = np.zeros_like(xs)
    s = m + n
    for k in range(min(m, n) + 1):
        lt = -(log_factorial(m - k) + log_factorial(n - k) + log_factorial(k))
        p = s - 2 * k
        term = math.exp(lt) * np.where((xs > 0.0) | (p == 0), xs**p, 0.0)
        out += term if k % 2 == 0 else -term
    return out


def wigner_batch(state: PairCoherentState, alphas, betas, tol: float = 1e-10,
                 max_diag: int = 200) -> np.ndarray:
    """Wigner function of a charge-0 pair-coherent state on arrays of points.

    Double series over (m, n) with cos((m-n)(phi_a + phi_b)) angular factors
    and terminating-2F0 radial polynomials, truncated adaptively by diagonals.
    """
    if state.charge != 0:
        raise ValueError("wigner series requires charge = 0; use wigner_fock_oracle")
    alphas = np.asarray(alphas, dtype=complex)
    betas = np.asarray(betas, dtype=complex)
    if alphas.shape != betas.shape:
        raise ValueError("alphas and betas must have matching shapes")
    shape = alphas.shape
    alphas, betas = alphas.ravel(), betas.ravel()
    zeta = state.zeta

    xa = 2.0 * np.abs(alphas)
    xb = 2.0 * np.abs(betas)
    phi = np.angle(alphas) + np.angle(betas)
    xa_u, inv_a = np.unique(xa, return_inverse=True)
    xb_u, inv_b = np.unique(xb, return_inverse=True)
    inv_a, inv_b = inv_a.ravel(), inv_b.ravel()

    total = np.zeros(alphas.size)
    below = 0
    converged = False
    lz = math.log(zeta) if zeta > 0.0 else None
    for s in range(max_diag + 1):
        if s > 0 and lz is None:
            converged = True
            break
        diag = np.zeros_like(total)
        czeta = math.exp(s * lz) if s > 0 else 1.0
        for m in range(s + 1):
            n = s - m
            ga = _scaled_poly(m, n, xa_u)[inv_a]
            gb = _scaled_poly(m, n, xb_u)[inv_b]
            diag += czeta * np.cos((m - n) * phi) * ga * gb
        total += diag
        scale = max(1.0, float(np.max(np.abs(total))))
        below = below + 1 if float(np.max(np.abs(diag))) < tol * scale else 0
        if s >= 2 and below >= 2:
            converged = True
            break
    if not converged:
        raise ConvergenceError(
            f"wigner series hit the {max_diag}-diagonal cap before tolerance {tol}")
    env = np.exp(-0.5 * (xa**2 + xb**2))
    pref = 4.0 / math.pi**2 * math.exp(-log_bessel_i0(2.0 * zeta))
    return (pref * env * total).reshape(shape)


def wigner(state: PairCoherentState, point: PhasePoint, tol: float = 1e-10,
           max_diag: int = 200) -> float:
    """Wigner function W(alpha, beta) of a charge-0 pair-coherent state."""
    return float(wigner_batch(state, [point.alpha], [point.beta], tol, max_diag)[0])


def wigner_fock_oracle(state: PairCoherentState, point: PhasePoint) -> float:
    """Wigner function from the truncated Fock expansion.

    Independent of the series route: builds single-mode Wigner matrix
    elements of |m><n| (Laguerre closed form via the displacement matrix,
    W_{|m><n|}(g) = (2/pi) (-1)^m <n|D(2g)|m>) and contracts with the
    Schmidt amplitudes. Supports any charge.
    """
    amps, _ = pair_coherent_amplitudes(state)
    q = state.charge
    nmax = state.n_max
    da = displacement_matrix(nmax + q, nmax + q, 2.0 * point.alpha)[q:, q:]
    db = displacement_matrix(nmax, nmax, 2.0 * point.beta)
    mat = da * db  # [n, m] = <n+q|D(2a)|m+q><n|D(2b)|m>
    val = amps @ mat @ amps
    sign = -1.0 if q % 2 else 1.0
    return float(sign * 4.0 / math.pi**2 * val.real)


# -- Characteristic functions ------------------------------------------------

def _slice_batch(amps: np.ndarray, lams: np.ndarray) -> np.ndarray:
    """chi(lam*, lam) = sum_{m,n} c_m c_n <n|D(lam*)|m><n|D(lam)|m> over a
    batch of lam, via simultaneous row recurrences for the two matrices."""
    n_max = amps.size - 1
    lams = np.asarray(lams, dtype=complex).ravel()
    b1 = np.conj(lams)
    b2 = lams
    r1 = _row0_batch(b1, n_max)
    r2 = _row0_batch(b2, n_max)
    acc = amps[0] * ((r1 * r2) @ amps)
    sq = np.sqrt(np.arange(n_max + 1))
    for n in range(1, n_max + 1):
        r1 = _row_step(r1, b1, sq, n)
        r2 = _row_step(r2, b2, sq, n)
        acc += amps[n] * ((r1 * r2) @ amps)
    return acc


def _row0_batch(betas: np.ndarray, n_ket: int) -> np.ndarray:
    ms = np.arange(n_ket + 1)
    ab = np.abs(betas)
    safe = np.where(ab > 0.0, ab, 1.0)
    logs = -0.5 * ab[:, None] ** 2 + ms[None, :] * np.log(safe)[:, None] - 0.5 * _lf_arr(ms)[None, :]
    rows = np.exp(logs) * np.exp(1j * ms[None, :] * (np.pi - np.angle(betas))[:, None])
    zero = ab == 0.0
    if zero.any():
        rows[zero] = 0.0
        rows[zero, 0] = 1.0
    return rows


def _row_step(rows, betas, sq, n):
    new = betas[:, None] * rows
    new[:, 1:] += sq[1:] * rows[:, :-1]
    return new / math.sqrt(n)


def characteristic_slice(state: PairCoherentState, lam: complex) -> complex:
    """Symmetric-order characteristic function on the teleportation slice,
    chi(lam*, lam) = <D(lam*) (x) D(lam)>. Real for a charge-0 state."""
    if state.charge != 0:
        raise ValueError("characteristic_slice requires charge = 0")
    amps, _ = pair_coherent_amplitudes(state)
    return complex(_slice_batch(amps, np.array([lam]))[0])


def smeared_characteristic(state: PairCoherentState, lam: complex) -> complex:
    """Characteristic function of the smeared channel on the slice (lam*, lam).

    The smear replaces the channel Wigner function by its Q function, i.e.
    one unit of added vacuum noise per mode: chi_pc(lam*, lam) e^{-|lam|^2}.
    """
    lam = complex(lam)
    return characteristic_slice(state, lam) * math.exp(-abs(lam) ** 2)
