"""Stationary and deformed oscillator states on a spatial grid.

The deformed eigenfunctions ``phi_n(x, t) = A^{-1}(x, t) Phi_n(X)`` span the
state space of the parametric oscillator at each time, and
``psi_n = exp(-i w (n + 1/2) tau) phi_n`` solve its Schrodinger equation.
Coherent states are available both as the Gaussian closed form and as a
truncated number-state series.
"""

import warnings
from dataclasses import dataclass
from typing import Any

import numpy as np
from scipy import integrate, special, stats

from .constants import PhysConstants
from .ermakov import a_factor
from .errors import (
    GridMismatchError,
    NormalizationError,
    OverflowGuardError,
    TruncationError,
    ValidationError,
)
from .grid import Grid, derivative

HERMITE_MAX_N = 200
POISSON_TAIL = 1e-14


@dataclass(frozen=True, eq=False)
class QuantumState:
    """Complex samples of a wavefunction on ``grid`` at time ``t``."""

    samples: np.ndarray
    grid: Grid
    t: float
    label: Any = None

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=np.complex128)
        if s.shape != (self.grid.n,):
            raise GridMismatchError(f"{s.shape[0] if s.ndim else 0} samples for a {self.grid.n}-point grid")
        if not np.isfinite(s).all():
            raise ValidationError("state samples must be finite")
        object.__setattr__(self, "samples", s)
        object.__setattr__(self, "t", float(self.t))

    @property
    def x(self):
        return self.grid.x

    @property
    def density(self):
        return np.abs(self.samples) ** 2

    def norm(self):
        return float(np.sqrt(self.grid.integrate(self.density)))

    def normalized(self):
        return QuantumState(self.samples / self.norm(), self.grid, self.t, self.label)

    def with_samples(self, samples, label=None):
        return QuantumState(samples, self.grid, self.t, self.label if label is None else label)


@dataclass(frozen=True)
class CoherentParams:
    """Coherent-state label ``alpha = |alpha| exp(i theta)``."""

    alpha: complex

    def __post_init__(self):
        a = complex(self.alpha)
        if not np.isfinite([a.real, a.imag]).all():
            raise ValidationError("alpha must be finite")
        object.__setattr__(self, "alpha", a)

    @property
    def modulus(self):
        return abs(self.alpha)

    @property
    def theta(self):
        return float(np.angle(self.alpha))

    def mean_number(self, consts):
        """Poisson mean ``|alpha|^2 / (hbar w)``."""
        return self.modulus**2 / (consts.hbar * consts.w)


def _coherent(alpha):
    return alpha if isinstance(alpha, CoherentParams) else CoherentParams(alpha)


class CrossTimeOverlap(complex):
    """Overlap of states taken at different times.

    Behaves as a complex number; ``regime`` flags that orthonormality of
    the deformed basis does not apply across times.
    """

    regime = "non-orthogonal"

    def __new__(cls, value, t_bra, t_ket):
        obj = super().__new__(cls, value)
        obj.t_bra, obj.t_ket = t_bra, t_ket
        return obj


# -- stationary oscillator -------------------------------------------------

def hermite(n, z):
    """Physicists' Hermite polynomial ``H_n(z)`` by upward recurrence."""
    n = int(n)
    if n < 0:
        raise ValidationError("Hermite index must be nonnegative")
    if n > HERMITE_MAX_N:
        raise OverflowGuardError(
            f"H_{n} overflows in double precision; use phi_stationary for "
            f"normalized values"
        )
    z = np.asarray(z, dtype=float)
    h_prev, h = np.zeros_like(z), np.ones_like(z)
    for k in range(n):
        h_prev, h = h, 2 * z * h - 2 * k * h_prev
    return h


def hermite_functions(n_max, z):
    """Normalized ``e^{-z^2/2} H_k(z) / sqrt(2^k k! sqrt(pi))`` for
    ``k = 0..n_max``, stacked along the first axis.

    The normalized three-term recurrence never forms ``H_k`` itself, so it
    stays finite where the raw polynomial overflows.
    """
    if n_max < 0:
        raise ValidationError("n_max must be nonnegative")
    if n_max > HERMITE_MAX_N:
        raise OverflowGuardError(f"n_max = {n_max} exceeds {HERMITE_MAX_N}")
    z = np.asarray(z, dtype=float)
    out = np.empty((n_max + 1,) + z.shape)
    out[0] = np.pi**-0.25 * np.exp(-0.5 * z * z)
    if n_max >= 1:
        out[1] = np.sqrt(2.0) * z * out[0]
    for k in range(1, n_max):
        out[k + 1] = np.sqrt(2.0 / (k + 1)) * z * out[k] - np.sqrt(k / (k + 1)) * out[k - 1]
    return out


def phi_stationary(n, X, consts=PhysConstants()):
    """Stationary oscillator eigenfunction ``Phi_n(X)`` of frequency ``w``."""
    n = int(n)
    if n < 0:
        raise ValidationError("quantum number must be nonnegative")
    scale = np.sqrt(consts.m * consts.w / consts.hbar)
    return np.sqrt(scale) * hermite_functions(n, scale * np.asarray(X, dtype=float))[n]


# -- deformed states ---------------------------------------------------------

def _time(t):
    t = np.asarray(t, dtype=float)
    if t.ndim:
        raise ValidationError("states are evaluated at a single time")
    return t


def varphi(n, x, t, data):
    """Deformed eigenfunction ``phi_n(x, t)`` in explicit Gaussian-Hermite form."""
    n = int(n)
    x = np.asarray(x, dtype=float)
    c = data.consts
    f = data.frame(_time(t))
    s, g = f.sigma, f.gamma
    re = -c.w * (x + g) ** 2 / (2 * s * s)
    im = f.dsigma * x * x / (2 * s) - f.bilinear * x / s - f.xi
    log_norm = 0.5 * (0.5 * np.log(c.m * c.w / (np.pi * c.hbar)) - n * np.log(2.0) - special.gammaln(n + 1))
    herm = hermite(n, np.sqrt(c.m * c.w / c.hbar) * (x + g) / s)
    return np.exp((c.m / c.hbar) * (re + 1j * im) + log_norm) * herm / np.sqrt(s)


def varphi_mapped(n, x, t, data):
    """``phi_n`` through the point transformation, ``A^{-1} Phi_n(X)``."""
    x = np.asarray(x, dtype=float)
    f = data.frame(_time(t))
    X = (x + f.gamma) / f.sigma
    return phi_stationary(n, X, data.consts) / a_factor(x, t, data)


def psi(n, x, t, data):
    """Solution ``psi_n = exp(-i w (n + 1/2) tau) phi_n`` of the Schrodinger equation."""
    tau = data.tau(_time(t))
    return np.exp(-1j * data.consts.w * (n + 0.5) * tau) * varphi(n, x, t, data)


def basis(n_max, grid, t, data, evolve=False):
    """Deformed eigenfunctions ``phi_0..phi_n_max`` (or ``psi_n`` with
    ``evolve``) on ``grid`` as an ``(n_max + 1, N)`` array."""
    x = grid.x
    c = data.consts
    f = data.frame(_time(t))
    scale = np.sqrt(c.m * c.w / c.hbar)
    phis = np.sqrt(scale) * hermite_functions(n_max, scale * (x + f.gamma) / f.sigma)
    out = phis / a_factor(x, t, data)
    if evolve:
        n = np.arange(n_max + 1)[:, None]
        out = out * np.exp(-1j * c.w * (n + 0.5) * f.tau)
    return out


def eigenstate(n, grid, t, data, evolve=True):
    """:class:`QuantumState` of ``psi_n`` (or ``phi_n``) at time ``t``."""
    samples = (psi if evolve else varphi)(n, grid.x, t, data)
    return QuantumState(samples, grid, t, label={"n": int(n), "evolved": bool(evolve)})


def inner_product(f, g):
    """``<f|g>`` by Simpson quadrature on the shared grid.

    States at different times give a :class:`CrossTimeOverlap` and a
    warning, since the deformed basis is orthonormal only at equal times.
    """
    f.grid.check_same(g.grid)
    value = complex(f.grid.integrate(np.conj(f.samples) * g.samples))
    if f.t != g.t:
        warnings.warn(
            f"overlap of states at t={f.t} and t={g.t}: non-orthogonal regime",
            stacklevel=2,
        )
        return CrossTimeOverlap(value, f.t, g.t)
    return value


def gram_matrix(states, grid):
    """``G_nm = <s_n|s_m>`` for an ``(n, N)`` array of samples."""
    s = np.asarray(states)
    return grid.integrate(np.conj(s)[:, None, :] * s[None, :, :])


def superpose(coeffs, states, normalize=False, tol=1e-10):
    """``sum_n c_n |state_n>`` at a common time.

    Raises :class:`NormalizationError` if ``sum |c_n|^2`` differs from one
    by more than ``tol``, unless ``normalize`` rescales the coefficients.
    """
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    states = list(states)
    if coeffs.shape != (len(states),) or not states:
        raise ValidationError("need one coefficient per state")
    weight = float(np.sum(np.abs(coeffs) ** 2))
    if normalize:
        coeffs = coeffs / np.sqrt(weight)
    elif abs(weight - 1.0) > tol:
        raise NormalizationError(f"sum |c_n|^2 = {weight:.12g} is not 1")
    first = states[0]
    for s in states[1:]:
        first.grid.check_same(s.grid)
        if s.t != first.t:
            raise ValidationError("superposed states must share the same time")
    samples = np.tensordot(coeffs, np.stack([s.samples for s in states]), axes=1)
    return QuantumState(samples, first.grid, first.t, label={"coeffs": coeffs.tolist()})


# -- coherent states ---------------------------------------------------------

def poisson_weights(alpha, n_max, consts=PhysConstants()):
    """Number distribution ``P_n = e^{-lam} lam^n / n!``, ``lam = |alpha|^2/(hbar w)``."""
    lam = _coherent(alpha).mean_number(consts)
    return stats.poisson.pmf(np.arange(n_max + 1), lam)


def _displacement(alpha, t, data):
    c = data.consts
    f = data.frame(_time(t))
    z = _coherent(alpha).alpha * np.exp(-1j * c.w * f.tau)
    return z, f


def coherent_wavepacket(alpha, t, data, grid):
    """Gaussian closed form of the coherent state ``|alpha; t>``."""
    c = data.consts
    z, f = _displacement(alpha, t, data)
    mom = analytic_moments(alpha, t, data)
    x = grid.x
    dx = x - mom.mean_x
    width = 1.0 / (4 * mom.var_x) - 1j * (c.m / (2 * c.hbar)) * f.dsigma / f.sigma
    # centre and momentum of the stationary-frame Glauber state
    X0 = np.sqrt(2 / c.m) * z.real / c.w
    P0 = np.sqrt(2 * c.m) * z.imag
    offset = f.gamma * P0 / f.sigma - c.m * f.bilinear * X0
    phase = (
        -0.5 * c.w * f.tau
        + data.xi.work(f.t) / (2 * c.hbar)
        + mom.mean_p * x / c.hbar
        + (offset - mom.mean_x * mom.mean_p) / (2 * c.hbar)
    )
    amp = (2 * np.pi * mom.var_x) ** -0.25
    samples = amp * np.exp(-width * dx * dx + 1j * phase)
    return QuantumState(samples, grid, t, label={"alpha": _coherent(alpha).alpha})


def coherent_coefficients(alpha, t, n_trunc, data):
    """Number-state amplitudes of ``|alpha; t>`` on ``phi_0..phi_n_trunc``.

    Raises :class:`TruncationError` when the Poisson tail beyond
    ``n_trunc`` exceeds ``1e-14``.
    """
    c = data.consts
    lam = _coherent(alpha).mean_number(c)
    tail = stats.poisson.sf(n_trunc, lam)
    if tail > POISSON_TAIL:
        raise TruncationError(f"Poisson tail {tail:.2e} beyond n = {n_trunc} exceeds {POISSON_TAIL:g}")
    z, f = _displacement(alpha, t, data)
    u = z / np.sqrt(c.hbar * c.w)
    coef = np.empty(n_trunc + 1, dtype=np.complex128)
    coef[0] = np.exp(-0.5 * c.w * 1j * f.tau - 0.5 * lam)
    for n in range(1, n_trunc + 1):
        coef[n] = coef[n - 1] * u / np.sqrt(n)
    return coef


def coherent_series(alpha, t, n_trunc, data, grid):
    """Coherent state as the truncated series over ``phi_n``."""
    coef = coherent_coefficients(alpha, t, n_trunc, data)
    samples = coef @ basis(n_trunc, grid, t, data)
    return QuantumState(samples, grid, t, label={"alpha": _coherent(alpha).alpha, "n_trunc": n_trunc})


# -- moments -----------------------------------------------------------------

@dataclass(frozen=True)
class Moments:
    t: float
    mean_x: float
    mean_p: float
    var_x: float
    var_p: float
    cov_xp: float

    @property
    def robertson(self):
        """``var_x var_p - cov_xp^2`` (at least ``hbar^2/4``)."""
        return self.var_x * self.var_p - self.cov_xp**2

    @property
    def heisenberg(self):
        return self.var_x * self.var_p

    def to_record(self):
        return {k: float(getattr(self, k)) for k in ("t", "mean_x", "mean_p", "var_x", "var_p", "cov_xp")}


def moments(state, hbar=1.0, method="auto", tol=1e-6):
    """First and second moments of ``x`` and ``p`` from grid samples."""
    grid, psi_ = state.grid, state.samples
    norm2 = grid.integrate(np.abs(psi_) ** 2)
    if abs(norm2 - 1.0) > tol:
        raise NormalizationError(f"state norm^2 = {norm2:.10g}; normalize first")
    x = grid.x
    dpsi = derivative(psi_, grid.h, 1, method)
    rho = np.abs(psi_) ** 2
    mean_x = grid.integrate(x * rho)
    var_x = grid.integrate((x - mean_x) ** 2 * rho)
    # <p> = hbar Im <psi|psi'>, <p^2> = hbar^2 <psi'|psi'>
    mean_p = hbar * grid.integrate(np.imag(np.conj(psi_) * dpsi))
    var_p = hbar**2 * grid.integrate(np.abs(dpsi) ** 2) - mean_p**2
    # (1/2)<xp + px> = Re <psi| x p |psi>
    sym = hbar * grid.integrate(np.imag(x * np.conj(psi_) * dpsi))
    return Moments(state.t, float(mean_x), float(mean_p), float(var_x), float(var_p), float(sym - mean_x * mean_p))


def analytic_moments(alpha, t, data):
    """Closed-form coherent-state moments at time ``t``."""
    c = data.consts
    z, f = _displacement(alpha, t, data)
    s, ds = f.sigma, f.dsigma
    mean_x = np.sqrt(2 / c.m) * s / c.w * z.real - f.gamma
    mean_p = np.sqrt(2 * c.m) * (ds / c.w * z.real + z.imag / s) - c.m * f.dgamma
    var_x = c.hbar * s * s / (2 * c.m * c.w)
    var_p = c.hbar * c.m * c.w / 2 * (ds * ds / c.w**2 + 1 / (s * s))
    cov = c.hbar * s * ds / (2 * c.w)
    return Moments(float(f.t), float(mean_x), float(mean_p), float(var_x), float(var_p), float(cov))


def zero_point_phase(v0, t, t_ref=0.0, hbar=1.0):
    """Global phase ``exp(-(i/hbar) int_{t_ref}^t V0)`` removing a zero-point term.

    ``v0`` is a callable of time or a constant.
    """
    if callable(v0):
        integral = integrate.quad(v0, t_ref, t, epsabs=1e-14, epsrel=1e-13, limit=200)[0]
    else:
        integral = float(v0) * (t - t_ref)
    return complex(np.exp(-1j * integral / hbar))


__all__ = [
    "CoherentParams",
    "CrossTimeOverlap",
    "Moments",
    "QuantumState",
    "analytic_moments",
    "basis",
    "coherent_coefficients",
    "coherent_series",
    "coherent_wavepacket",
    "eigenstate",
    "gram_matrix",
    "hermite",
    "hermite_functions",
    "inner_product",
    "moments",
    "phi_stationary",
    "poisson_weights",
    "psi",
    "superpose",
    "varphi",
    "varphi_mapped",
    "zero_point_phase",
]
