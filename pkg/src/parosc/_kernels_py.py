"""Pure-Python/NumPy versions of the compiled kernels in ``_core.pyx``."""

import numpy as np
from scipy.linalg import solve_banded


def cn_propagate(psi0, x, omega_sq, force, v0, dt, m, hbar):
    psi = np.array(psi0, dtype=np.complex128, copy=True)
    n = x.size
    h = x[1] - x[0]
    ko = -hbar * hbar / (2.0 * m * h * h)
    kd = -2.0 * ko
    md, mo = 10.0 / 12.0, 1.0 / 12.0
    f = 0.5j * dt / hbar
    ab = np.empty((3, n), dtype=np.complex128)
    x2 = x * x
    for om2, fs, vs in zip(omega_sq, force, v0):
        pot = 0.5 * m * om2 * x2 + fs * x + vs
        hd = kd + md * pot
        hu = ko + mo * pot[1:]
        hl = ko + mo * pot[:-1]
        rhs = (md - f * hd) * psi
        rhs[:-1] += (mo - f * hu) * psi[1:]
        rhs[1:] += (mo - f * hl) * psi[:-1]
        ab[0, 0] = 0.0
        ab[0, 1:] = mo + f * hu
        ab[1] = md + f * hd
        ab[2, :-1] = mo + f * hl
        ab[2, -1] = 0.0
        psi = solve_banded((1, 1), ab, rhs, check_finite=False)
    return psi


def hyp2f1_series(a, b, c, z, tol, max_terms):
    z = np.asarray(z, dtype=np.complex128)
    term = np.ones_like(z)
    total = np.ones_like(z)
    active = np.ones(z.shape, dtype=bool)
    for k in range(max_terms):
        if not active.any():
            break
        step = (a + k) * (b + k) / ((c + k) * (k + 1.0))
        term = np.where(active, term * step * z, term)
        total = np.where(active, total + term, total)
        active &= np.abs(term) > tol * np.abs(total)
    mag = np.abs(total)
    residual = np.where(mag > 0.0, np.abs(term) / np.where(mag > 0.0, mag, 1.0), np.abs(term))
    return total, residual
