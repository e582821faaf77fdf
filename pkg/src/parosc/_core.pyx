# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: Crank-Nicolson stepping and the 2F1 power series."""

import numpy as np

cdef extern from "complex.h" nogil:
    double cabs(double complex)


cdef inline double _abs2(double complex v) noexcept nogil:
    return v.real * v.real + v.imag * v.imag


def cn_propagate(
    const double complex[::1] psi0,
    const double[::1] x,
    const double[::1] omega_sq,
    const double[::1] force,
    const double[::1] v0,
    double dt,
    double m,
    double hbar,
):
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t steps = omega_sq.shape[0]
    cdef Py_ssize_t i, s
    cdef double h = x[1] - x[0]
    cdef double ko = -hbar * hbar / (2.0 * m * h * h)
    cdef double kd = -2.0 * ko
    cdef double md = 10.0 / 12.0
    cdef double mo = 1.0 / 12.0
    cdef double complex f = 0.5j * dt / hbar
    cdef double complex hd, hu, hl, denom
    cdef double om2, fs, vs

    out = np.array(psi0, dtype=np.complex128, copy=True)
    cdef double complex[::1] psi = out
    cdef double[::1] pot = np.empty(n, dtype=np.float64)
    cdef double complex[::1] rhs = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] cp = np.empty(n, dtype=np.complex128)

    with nogil:
        for s in range(steps):
            om2 = omega_sq[s]
            fs = force[s]
            vs = v0[s]
            for i in range(n):
                pot[i] = 0.5 * m * om2 * x[i] * x[i] + fs * x[i] + vs
            for i in range(n):
                hd = kd + md * pot[i]
                rhs[i] = (md - f * hd) * psi[i]
                if i + 1 < n:
                    hu = ko + mo * pot[i + 1]
                    rhs[i] = rhs[i] + (mo - f * hu) * psi[i + 1]
                if i > 0:
                    hl = ko + mo * pot[i - 1]
                    rhs[i] = rhs[i] + (mo - f * hl) * psi[i - 1]
            # Thomas sweep on (M + f*M*H) psi_new = rhs
            denom = md + f * (kd + md * pot[0])
            cp[0] = (mo + f * (ko + mo * pot[1])) / denom
            rhs[0] = rhs[0] / denom
            for i in range(1, n):
                hl = ko + mo * pot[i - 1]
                denom = md + f * (kd + md * pot[i]) - (mo + f * hl) * cp[i - 1]
                if i + 1 < n:
                    cp[i] = (mo + f * (ko + mo * pot[i + 1])) / denom
                rhs[i] = (rhs[i] - (mo + f * hl) * rhs[i - 1]) / denom
            psi[n - 1] = rhs[n - 1]
            for i in range(n - 2, -1, -1):
                psi[i] = rhs[i] - cp[i] * psi[i + 1]
    return out


def hyp2f1_series(
    double complex a,
    double complex b,
    double complex c,
    const double complex[::1] z,
    double tol,
    Py_ssize_t max_terms,
):
    cdef Py_ssize_t size = z.shape[0]
    cdef Py_ssize_t j, k, ready = 0
    cdef double complex term, total, zj
    cdef double tol2 = tol * tol

    values = np.empty(size, dtype=np.complex128)
    residual = np.empty(size, dtype=np.float64)
    ratios = np.empty(max(max_terms, 1), dtype=np.complex128)
    cdef double complex[::1] vals = values
    cdef double[::1] res = residual
    cdef double complex[::1] rk = ratios

    with nogil:
        for j in range(size):
            zj = z[j]
            term = 1.0
            total = 1.0
            for k in range(max_terms):
                # term ratios do not depend on z; fill them once, on demand
                if k == ready:
                    rk[k] = (a + k) * (b + k) / ((c + k) * (k + 1.0))
                    ready += 1
                term = term * rk[k] * zj
                total = total + term
                if _abs2(term) <= tol2 * _abs2(total):
                    break
            vals[j] = total
            res[j] = cabs(term) / cabs(total) if cabs(total) > 0.0 else cabs(term)
    return values, residual
