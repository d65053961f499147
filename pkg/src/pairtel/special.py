"""Numerically stable scalar special functions.

Everything factorial-weighted is assembled in log space with explicit sign
tracking: the fidelity series mixes alternating signs with binomial/factorial
ratios that overflow doubles long before the series itself converges.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

__all__ = [
    "LogFactorialTable",
    "LOG_FACTORIALS",
    "log_factorial",
    "bessel_i0",
    "log_bessel_i0",
    "hyper2f0_finite",
    "displaced_fock_overlap",
    "displacement_matrix",
    "displaced_coherent_overlaps",
    "coherent_amplitudes",
]

# Stop the I0 power series when term/partial-sum drops below this; guarantees
# the 1e-12 relative contract with margin.
_I0_STOP = 1e-17
# Above this argument the I0 series overflows partway through; switch to a
# log-domain summation.
_I0_LOG_SWITCH = 600.0


class LogFactorialTable:
    """Immutable table of ln(n!) for n = 0..n_cap (n_cap >= 512)."""

    def __init__(self, n_cap: int = 512):
        if n_cap < 512:
            raise ValueError("n_cap must be at least 512")
        self.n_cap = n_cap
        values = np.array([math.lgamma(n + 1.0) for n in range(n_cap + 1)])
        values.setflags(write=False)
        self.values = values

    def __len__(self) -> int:
        return self.n_cap + 1

    def __getitem__(self, n):
        return self.values[n]


LOG_FACTORIALS = LogFactorialTable()
_LF = LOG_FACTORIALS.values


def log_factorial(n: int) -> float:
    """ln(n!), table lookup for n <= 512, lgamma beyond."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n <= LOG_FACTORIALS.n_cap:
        return float(_LF[n])
    return math.lgamma(n + 1.0)


def _check_real(x, name="x"):
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"{name} must be finite, got {x!r}")
    return x


def bessel_i0(x: float) -> float:
    """Modified Bessel function I0(x) for x >= 0, 1e-12 relative accuracy.

    Power series sum((x/2)^(2k)/(k!)^2) with tail-bound stopping; large
    arguments go through :func:`log_bessel_i0` so the summation itself never
    overflows (the *result* still overflows past x ~ 713, and comes back inf).
    """
    x = _check_real(x)
    if x < 0.0:
        raise ValueError(f"bessel_i0 requires x >= 0, got {x}")
    if x > _I0_LOG_SWITCH:
        lv = log_bessel_i0(x)
        return math.exp(lv) if lv < 709.0 else math.inf
    t = 0.25 * x * x
    term = 1.0
    total = 1.0
    k = 1
    while True:
        term *= t / (k * k)
        total += term
        # terms grow until k^2 > t, so only stop on the decaying side
        if term < total * _I0_STOP and t < k * k:
            return total
        k += 1


def log_bessel_i0(x: float) -> float:
    """ln I0(x), overflow-free for any finite x >= 0."""
    x = _check_real(x)
    if x < 0.0:
        raise ValueError(f"log_bessel_i0 requires x >= 0, got {x}")
    if x <= _I0_LOG_SWITCH:
        return math.log(bessel_i0(x))
    # log-domain series: all terms positive, peak near k = x/2
    lhalf = math.log(0.5 * x)
    kpeak = int(0.5 * x)
    width = int(14.0 * math.sqrt(kpeak)) + 40
    ks = range(max(0, kpeak - width), kpeak + width + 1)
    logs = [2.0 * k * lhalf - 2.0 * math.lgamma(k + 1.0) for k in ks]
    m = max(logs)
    return m + math.log(math.fsum(math.exp(v - m) for v in logs))


def _check_index(n, name):
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise ValueError(f"{name} must be a nonnegative integer, got {n!r}")
    return int(n)


def hyper2f0_finite(m: int, n: int, z: float) -> float:
    """Terminating 2F0(-m, -n;; z) = sum_k C(m,k) C(n,k) k! z^k, k <= min(m,n).

    Exact finite sum; Pochhammer products are taken in sign-tracked log space.
    """
    m = _check_index(m, "m")
    n = _check_index(n, "n")
    z = _check_real(z, "z")
    kmax = min(m, n)
    if kmax == 0 or z == 0.0:
        return 1.0
    k = np.arange(kmax + 1)
    lfm, lfn = log_factorial(m), log_factorial(n)
    logs = (
        (lfm - _lf_arr(m - k))
        + (lfn - _lf_arr(n - k))
        - _lf_arr(k)
        + k * math.log(abs(z))
    )
    signs = np.where(k % 2 == 0, 1.0, math.copysign(1.0, z))
    top = logs.max()
    return float(np.sum(signs * np.exp(logs - top)) * math.exp(top))


def _lf_arr(idx):
    idx = np.asarray(idx)
    if idx.size and idx.max() > LOG_FACTORIALS.n_cap:
        return np.array([math.lgamma(i + 1.0) for i in idx.ravel()]).reshape(idx.shape)
    return _LF[idx]


def _check_complex(beta, name="beta"):
    beta = complex(beta)
    if not (math.isfinite(beta.real) and math.isfinite(beta.imag)):
        raise ValueError(f"{name} must be finite, got {beta!r}")
    return beta


def _log_genlaguerre(n: int, k: int, x: float):
    """(sign, ln|L|) of the associated Laguerre polynomial L_n^{(k)}(x).

    Three-term recurrence in the degree -- well-conditioned both in the
    oscillatory region (where the explicit alternating sum cancels badly)
    and in the growth regions -- with periodic rescaling so intermediates
    never overflow.
    """
    if n == 0:
        return 1.0, 0.0
    prev = 1.0
    cur = 1.0 + k - x
    shift = 0.0
    for i in range(1, n):
        prev, cur = cur, ((2 * i + 1 + k - x) * cur - (i + k) * prev) / (i + 1.0)
        a = abs(cur)
        if a > 1e250:
            cur /= a
            prev /= a
            shift += math.log(a)
    if cur == 0.0:
        return 0.0, -math.inf
    return math.copysign(1.0, cur), math.log(abs(cur)) + shift


def displaced_fock_overlap(m: int, n: int, beta: complex) -> complex:
    """Matrix element <m|D(beta)|n> of the displacement operator.

    Associated-Laguerre closed form sqrt(n!/m!) beta^(m-n) e^{-|b|^2/2}
    L_n^{(m-n)}(|b|^2) for m >= n, assembled in log space so it stays stable
    up to the truncation caps used elsewhere in the package. Satisfies
    <m|D(0)|n> = delta_mn and <m|D(b)|n> = conj(<n|D(-b)|m>).
    """
    m = _check_index(m, "m")
    n = _check_index(n, "n")
    beta = _check_complex(beta)
    if m < n:
        return displaced_fock_overlap(n, m, -beta).conjugate()
    if beta == 0:
        return 1.0 + 0.0j if m == n else 0.0j
    x = abs(beta) ** 2
    k = m - n
    sign, llag = _log_genlaguerre(n, k, x)
    if sign == 0.0:
        return 0.0j
    lmag = (
        0.5 * (log_factorial(n) - log_factorial(m))
        + k * math.log(abs(beta))
        - 0.5 * x
        + llag
    )
    phase = cmath.exp(1j * k * cmath.phase(beta))
    return sign * math.exp(lmag) * phase


def _displacement_row0(n_ket: int, beta: complex) -> np.ndarray:
    """<0|D(beta)|m> for m = 0..n_ket, i.e. e^{-|b|^2/2} (-conj(b))^m / sqrt(m!)."""
    ms = np.arange(n_ket + 1)
    if beta == 0:
        row = np.zeros(n_ket + 1, dtype=complex)
        row[0] = 1.0
        return row
    x = abs(beta) ** 2
    logs = -0.5 * x + ms * math.log(abs(beta)) - 0.5 * _lf_arr(ms)
    ang = math.pi - cmath.phase(beta)
    return np.exp(logs) * np.exp(1j * ms * ang)


def displacement_matrix(n_bra: int, n_ket: int, beta: complex) -> np.ndarray:
    """Dense block <n|D(beta)|m> for n <= n_bra, m <= n_ket.

    Uses the raising recurrence
    <n+1|D|m> = (sqrt(m) <n|D|m-1> + beta <n|D|m>) / sqrt(n+1),
    which recurses on the bounded matrix elements themselves, keeping
    absolute errors at machine level for the truncations used here.
    """
    n_bra = _check_index(n_bra, "n_bra")
    n_ket = _check_index(n_ket, "n_ket")
    beta = _check_complex(beta)
    out = np.empty((n_bra + 1, n_ket + 1), dtype=complex)
    out[0] = _displacement_row0(n_ket, beta)
    sq = np.sqrt(np.arange(n_ket + 1))
    for nb in range(n_bra):
        prev = out[nb]
        new = beta * prev
        new[1:] += sq[1:] * prev[:-1]
        out[nb + 1] = new / math.sqrt(nb + 1.0)
    return out


def coherent_amplitudes(alpha: complex, n_max: int) -> np.ndarray:
    """Fock amplitudes e^{-|a|^2/2} a^m / sqrt(m!) of |alpha> up to n_max."""
    alpha = _check_complex(alpha, "alpha")
    n_max = _check_index(n_max, "n_max")
    ms = np.arange(n_max + 1)
    if alpha == 0:
        out = np.zeros(n_max + 1, dtype=complex)
        out[0] = 1.0
        return out
    logs = -0.5 * abs(alpha) ** 2 + ms * math.log(abs(alpha)) - 0.5 * _lf_arr(ms)
    return np.exp(logs) * np.exp(1j * ms * cmath.phase(alpha))


def displaced_coherent_overlaps(betas, coh, n_rows: int) -> np.ndarray:
    """Batch of <n|D(beta_k)|psi> for n = 0..n_rows, psi given by Fock vector.

    Hot path of the quadrature oracle; dispatches to the compiled kernel when
    it is available.
    """
    from . import kernels

    betas = np.ascontiguousarray(betas, dtype=complex)
    coh = np.ascontiguousarray(coh, dtype=complex)
    return kernels.displaced_coherent_overlaps(betas, coh, int(n_rows))
