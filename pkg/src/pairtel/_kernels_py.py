"""Pure-numpy fallback implementations of the hot kernels.

Mirrors the compiled ``_kernels`` extension function-for-function; the
backend selector in :mod:`pairtel.kernels` picks whichever is available.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND_NAME = "python"


def fidelity_series_sum(log_fact, x, zeta, g, tol, max_diag):
    """Quadruple series of the gain-tuned average fidelity, without prefactor.

    Computes sum over m, n of

        zeta^(m+n) / (m! n!)^2 * sum_{p<=m, q<=n} C(m,p) C(n,q) (-1)^(m+n+p+q)
        * sum_j C(n+p,j) C(m+q,j) j! U^(m+n-j) x^(m+n-j)
          g^(m+n+2(p+q-j)) (1+g^2)^(-(p+q))

    with U = (1-g)^2/(1+g^2), grouped by diagonals s = m+n and truncated
    adaptively. Requires zeta > 0, x > 0, 0 < g, g != 1 (the degenerate
    cases collapse to cheaper series and are handled by the caller).

    Returns (total, diagonals_used, tail_estimate). Raises RuntimeError when
    the diagonal cap is hit before two consecutive diagonals fall below tol.
    """
    lf = np.asarray(log_fact)
    u = (1.0 - g) ** 2 / (1.0 + g * g)
    ux = u * x
    if not (zeta > 0.0 and ux > 0.0 and g > 0.0):
        raise ValueError("fidelity_series_sum requires zeta > 0, u*x > 0, g > 0")
    lw = -math.log(ux * g * g)  # log weight of the inner j-sum
    lpq = 2.0 * math.log(g) - math.log1p(g * g)  # per unit of p+q
    lsum = math.log(zeta) + math.log(ux) + math.log(g)  # per unit of s = m+n

    size = max_diag + 1
    lj = np.full((size, size), -np.inf)
    built = -1

    def build_row(a):
        js = np.arange(a + 1)
        base = (lf[a] - lf[a - js] - lf[js]) + js * lw  # C(a,j) j! w^j without C(b,j) j!^0
        for_b = lf[: a + 1, None]  # lf[b]
        lt = base[None, :] + for_b - lf[np.maximum(np.arange(a + 1)[:, None] - js[None, :], 0)]
        lt = np.where(np.arange(a + 1)[:, None] >= js[None, :], lt, -np.inf)
        top = lt.max(axis=1)
        row = top + np.log(np.sum(np.exp(lt - top[:, None]), axis=1))
        lj[a, : a + 1] = row
        lj[: a + 1, a] = row

    total = 0.0
    prev_abs = math.inf
    tail = 0.0
    for s in range(size):
        while built < s:
            built += 1
            build_row(built)
        diag = 0.0
        for m in range(s + 1):
            n = s - m
            p = np.arange(m + 1)
            q = np.arange(n + 1)
            lcm = lf[m] - lf[p] - lf[m - p]
            lcn = lf[n] - lf[q] - lf[n - q]
            lt = lcm[:, None] + lcn[None, :] + (p[:, None] + q[None, :]) * lpq
            lt += lj[n : n + m + 1, m : m + n + 1]
            sg = np.where((p[:, None] + q[None, :]) % 2 == 0, 1.0, -1.0)
            if s % 2:
                sg = -sg
            top = lt.max()
            acc = float(np.sum(sg * np.exp(lt - top)))
            if acc != 0.0:
                diag += math.copysign(1.0, acc) * math.exp(
                    math.log(abs(acc)) + top + s * lsum - 2.0 * lf[m] - 2.0 * lf[n]
                )
        total += diag
        cur_abs = abs(diag)
        thresh = tol * max(1.0, abs(total))
        if s >= 2 and cur_abs < thresh and prev_abs < thresh:
            ratio = min(0.9, cur_abs / prev_abs if prev_abs > 0.0 else 0.0)
            tail = cur_abs * ratio / (1.0 - ratio)
            return total, s + 1, tail
        prev_abs = cur_abs
    raise RuntimeError(
        f"fidelity series did not converge within {max_diag} diagonals "
        f"(x={x}, zeta={zeta}, g={g})"
    )


def displaced_coherent_overlaps(betas, coh, n_rows):
    """<n|D(beta_k)|psi> for n = 0..n_rows over a batch of displacements.

    Row recurrence <n+1|D|m> = (sqrt(m) <n|D|m-1> + beta <n|D|m>)/sqrt(n+1),
    started from <0|D|m> = e^{-|b|^2/2} (-conj(b))^m / sqrt(m!), contracted
    against the Fock vector ``coh`` row by row.
    """
    betas = np.asarray(betas, dtype=complex)
    coh = np.asarray(coh, dtype=complex)
    n_ket = coh.size - 1
    ms = np.arange(n_ket + 1)
    lf = np.cumsum(np.concatenate(([0.0], np.log(np.arange(1, n_ket + 1)))))
    ab = np.abs(betas)
    safe = np.where(ab > 0.0, ab, 1.0)
    logs = -0.5 * ab[:, None] ** 2 + ms[None, :] * np.log(safe)[:, None] - 0.5 * lf[None, :]
    ang = np.pi - np.angle(betas)
    rows = np.exp(logs) * np.exp(1j * ms[None, :] * ang[:, None])
    zero = ab == 0.0
    if zero.any():
        rows[zero] = 0.0
        rows[zero, 0] = 1.0

    out = np.empty((betas.size, n_rows + 1), dtype=complex)
    out[:, 0] = rows @ coh
    sq = np.sqrt(ms)
    for n in range(n_rows):
        new = betas[:, None] * rows
        new[:, 1:] += sq[1:] * rows[:, :-1]
        rows = new / math.sqrt(n + 1.0)
        out[:, n + 1] = rows @ coh
    return out
