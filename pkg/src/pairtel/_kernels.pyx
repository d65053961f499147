# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: the gain-tuned fidelity series and the displaced-overlap
batch. Semantics mirror :mod:`pairtel._kernels_py` exactly."""

from libc.math cimport (atan2, cos, exp, fabs, lgamma, log, log1p, sin, sqrt,
                        INFINITY, M_PI)

import numpy as np

BACKEND_NAME = "compiled"


def fidelity_series_sum(const double[::1] log_fact, double x, double zeta,
                        double g, double tol, int max_diag):
    """See _kernels_py.fidelity_series_sum; identical contract."""
    cdef double u = (1.0 - g) * (1.0 - g) / (1.0 + g * g)
    cdef double ux = u * x
    if not (zeta > 0.0 and ux > 0.0 and g > 0.0):
        raise ValueError("fidelity_series_sum requires zeta > 0, u*x > 0, g > 0")
    cdef double lw = -log(ux * g * g)
    cdef double lpq = 2.0 * log(g) - log1p(g * g)
    cdef double lsum = log(zeta) + log(ux) + log(g)

    cdef int size = max_diag + 1
    lj_arr = np.empty((size, size), dtype=np.float64)
    cdef double[:, ::1] lj = lj_arr
    cdef const double[::1] lf = log_fact

    cdef int built = -1, s, m, n, p, q, a, b, j
    cdef double total = 0.0, prev_abs = INFINITY, tail, thresh, ratio
    cdef double diag, top, acc, lt, lcm, ssum, lmax, sg

    for s in range(size):
        while built < s:
            built += 1
            a = built
            for b in range(a + 1):
                lmax = -INFINITY
                ssum = 0.0
                for j in range(b + 1):
                    lt = lf[a] - lf[a - j] + lf[b] - lf[b - j] - lf[j] + j * lw
                    if lt > lmax:
                        ssum = 1.0 if lmax == -INFINITY else ssum * exp(lmax - lt) + 1.0
                        lmax = lt
                    else:
                        ssum += exp(lt - lmax)
                lj[a, b] = lmax + log(ssum)
                lj[b, a] = lj[a, b]
        diag = 0.0
        for m in range(s + 1):
            n = s - m
            top = -INFINITY
            acc = 0.0
            for p in range(m + 1):
                lcm = lf[m] - lf[p] - lf[m - p]
                for q in range(n + 1):
                    lt = (lcm + lf[n] - lf[q] - lf[n - q]
                          + (p + q) * lpq + lj[n + p, m + q])
                    sg = -1.0 if (s + p + q) & 1 else 1.0
                    if lt > top:
                        acc = sg if top == -INFINITY else acc * exp(top - lt) + sg
                        top = lt
                    else:
                        acc += sg * exp(lt - top)
            if acc != 0.0:
                lt = log(fabs(acc)) + top + s * lsum - 2.0 * lf[m] - 2.0 * lf[n]
                diag += exp(lt) if acc > 0.0 else -exp(lt)
        total += diag
        thresh = tol * max(1.0, fabs(total))
        if s >= 2 and fabs(diag) < thresh and prev_abs < thresh:
            ratio = fabs(diag) / prev_abs if prev_abs > 0.0 else 0.0
            if ratio > 0.9:
                ratio = 0.9
            tail = fabs(diag) * ratio / (1.0 - ratio)
            return total, s + 1, tail
        prev_abs = fabs(diag)
    raise RuntimeError(
        f"fidelity series did not converge within {max_diag} diagonals "
        f"(x={x}, zeta={zeta}, g={g})")


def displaced_coherent_overlaps(double complex[::1] betas,
                                double complex[::1] coh, int n_rows):
    """See _kernels_py.displaced_coherent_overlaps; identical contract."""
    cdef Py_ssize_t nk = betas.shape[0]
    cdef int n_ket = coh.shape[0] - 1
    out_arr = np.empty((nk, n_rows + 1), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    row_arr = np.empty(n_ket + 1, dtype=np.complex128)
    cdef double complex[::1] row = row_arr
    lf_arr = np.empty(n_ket + 1, dtype=np.float64)
    sq_arr = np.empty(n_ket + 1, dtype=np.float64)
    cdef double[::1] lf = lf_arr
    cdef double[::1] sq = sq_arr

    cdef Py_ssize_t k
    cdef int m, n
    cdef double ab, x, lb, ang, lm, ph
    cdef double complex b, dot

    for m in range(n_ket + 1):
        lf[m] = lgamma(m + 1.0)
        sq[m] = sqrt(<double>m)

    for k in range(nk):
        b = betas[k]
        ab = sqrt(b.real * b.real + b.imag * b.imag)
        if ab == 0.0:
            row[0] = 1.0
            for m in range(1, n_ket + 1):
                row[m] = 0.0
        else:
            x = ab * ab
            lb = log(ab)
            ang = M_PI - atan2(b.imag, b.real)
            for m in range(n_ket + 1):
                lm = -0.5 * x + m * lb - 0.5 * lf[m]
                ph = m * ang
                row[m] = exp(lm) * (cos(ph) + 1j * sin(ph))
        dot = 0.0
        for m in range(n_ket + 1):
            dot += row[m] * coh[m]
        out[k, 0] = dot
        for n in range(1, n_rows + 1):
            for m in range(n_ket, 0, -1):
                row[m] = (sq[m] * row[m - 1] + b * row[m]) / sqrt(<double>n)
            row[0] = b * row[0] / sqrt(<double>n)
            dot = 0.0
            for m in range(n_ket + 1):
                dot += row[m] * coh[m]
            out[k, n] = dot
    return out_arr
