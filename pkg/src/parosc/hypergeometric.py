"""Gauss hypergeometric function with complex parameters.

Only the region needed by the tanh-step frequency profile is supported
with full accuracy: the unit disk, reached either directly, through the
Pfaff transformation, or through the connection formula around ``z = 1``.
"""

import numpy as np
from scipy import special

from . import kernels
from .errors import AccuracyError, DomainError

DIRECT_RADIUS = 0.6
SERIES_TOL = 1e-16
MAX_TERMS = 10_000


def _is_nonpositive_integer(v):
    return v.imag == 0.0 and v.real <= 0.0 and float(v.real).is_integer()


def _series(a, b, c, z):
    if z.size == 0:
        return z.copy()
    values, residual = kernels.hyp2f1_series(
        a, b, c, np.ascontiguousarray(z), SERIES_TOL, MAX_TERMS
    )
    worst = float(residual.max())
    if not np.isfinite(values).all() or worst > 1e-12:
        raise AccuracyError(
            f"2F1 series did not converge within {MAX_TERMS} terms "
            f"(relative tail {worst:.2e})",
            estimate=worst,
        )
    return values


def _connection(a, b, c, w):
    """Continuation around z = 1, in powers of ``w = 1 - z``."""
    s = c - a - b
    if s.imag == 0.0 and float(s.real).is_integer():
        raise DomainError("connection formula needs c - a - b non-integer")
    gc = special.gamma(c)
    coef1 = gc * special.gamma(s) * special.rgamma(c - a) * special.rgamma(c - b)
    coef2 = gc * special.gamma(-s) * special.rgamma(a) * special.rgamma(b)
    f1 = _series(a, b, 1.0 - s, w)
    f2 = _series(c - a, c - b, 1.0 + s, w)
    return coef1 * f1 + coef2 * np.exp(s * np.log(w)) * f2


def hyp2f1(a, b, c, z, one_minus_z=None):
    """Evaluate ``2F1(a, b; c; z)`` for complex parameters.

    Parameters
    ----------
    a, b, c : complex
        Parameters; ``c`` must not be a nonpositive integer.
    z : complex or array_like
        Argument(s).
    one_minus_z : array_like, optional
        ``1 - z`` computed by the caller without cancellation. Used for
        points routed through the connection formula near ``z = 1``.

    Returns
    -------
    complex or ndarray
        Same shape as ``z``.
    """
    a, b, c = complex(a), complex(b), complex(c)
    if _is_nonpositive_integer(c):
        raise DomainError(f"c = {c} is a nonpositive integer")
    shape = np.shape(z)
    zz = np.atleast_1d(np.asarray(z, dtype=np.complex128)).ravel()
    if one_minus_z is None:
        wz = 1.0 - zz
    else:
        wz = np.atleast_1d(np.asarray(one_minus_z, dtype=np.complex128)).ravel()
    if not np.isfinite(zz).all():
        raise DomainError("non-finite argument")

    out = np.empty_like(zz)
    direct = np.abs(zz) <= DIRECT_RADIUS
    with np.errstate(divide="ignore", invalid="ignore"):
        pz = zz / (zz - 1.0)
    pfaff = ~direct & (np.abs(pz) <= DIRECT_RADIUS)
    near_one = ~direct & ~pfaff & (np.abs(wz) <= DIRECT_RADIUS)
    rest = ~(direct | pfaff | near_one)
    polynomial = _is_nonpositive_integer(a) or _is_nonpositive_integer(b)

    out[direct] = _series(a, b, c, zz[direct])
    if pfaff.any():
        # 2F1(a,b;c;z) = (1-z)^(-a) 2F1(a, c-b; c; z/(z-1))
        out[pfaff] = np.exp(-a * np.log(wz[pfaff])) * _series(a, c - b, c, pz[pfaff])
    if near_one.any():
        if polynomial:
            out[near_one] = _series(a, b, c, zz[near_one])
        else:
            out[near_one] = _connection(a, b, c, wz[near_one])
    if rest.any():
        if not polynomial and (np.abs(zz[rest]) >= 1.0).any():
            raise DomainError("argument outside the supported region of 2F1")
        out[rest] = _series(a, b, c, zz[rest])
    return complex(out[0]) if shape == () else out.reshape(shape)


def hyp2f1_derivative(a, b, c, z, one_minus_z=None):
    """d/dz of ``2F1(a, b; c; z)``."""
    a, b, c = complex(a), complex(b), complex(c)
    return a * b / c * hyp2f1(a + 1, b + 1, c + 1, z, one_minus_z)
