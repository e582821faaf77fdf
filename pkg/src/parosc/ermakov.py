"""Ermakov scale, time map, trajectory and phase of the point transformation.

The stationary oscillator coordinates ``(X, tau)`` are related to the
physical ``(x, t)`` by ``X = (x + gamma) / sigma`` and ``dtau/dt =
1/sigma^2``, with ``sigma`` built from a classical pair and ``gamma`` a
driven classical trajectory.
"""

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from ._ode import PanelIntegral, central_difference, cumulative_integral
from .classical import DrivingForce, ParticularSolution, analytic_pair
from .constants import PhysConstants
from .errors import AccuracyError, ConstraintError, DomainError, ValidationError

DEFAULT_SPAN = (-10.0, 10.0)
TAU_TOL = 1e-14


@dataclass(frozen=True)
class ErmakovParams:
    """Coefficients of ``sigma^2 = a q1^2 + b q1 q2 + c q2^2``.

    ``b`` is derived as the nonnegative root of ``b^2 - 4ac = -4 w^2/W0^2``.
    """

    a: float
    c: float
    w: float
    w0: float

    def __post_init__(self):
        if self.a < 0 or self.c < 0:
            raise ValidationError("Ermakov parameters a and c must be nonnegative")
        if not self.w > 0:
            raise ValidationError("reference frequency w must be positive")
        if self.w0 == 0:
            raise ValidationError("Wronskian W0 must be nonzero")
        if self._gap < -1e-14 * max(1.0, self.a * self.c):
            raise ConstraintError(
                f"ac = {self.a * self.c:g} < w^2/W0^2 = {(self.w / self.w0) ** 2:g}"
            )

    @property
    def _gap(self):
        return self.a * self.c - (self.w / self.w0) ** 2

    @property
    def b(self):
        return 2.0 * np.sqrt(max(self._gap, 0.0))

    def discriminant_error(self):
        """``|b^2 - 4ac + 4 w^2/W0^2|`` (zero up to rounding)."""
        return abs(self.b**2 - 4 * self.a * self.c + 4 * (self.w / self.w0) ** 2)


class Sigma:
    """Ermakov solution ``sigma`` with analytic first and second derivatives.

    Calling returns ``(sigma, dsigma)``.
    """

    def __init__(self, pair, params):
        self.pair = pair
        self.params = params

    def _parts(self, t):
        a, b, c = self.params.a, self.params.b, self.params.c
        q1, d1, q2, d2 = self.pair(t)
        s2 = a * q1 * q1 + b * q1 * q2 + c * q2 * q2
        if np.any(s2 <= 0):
            raise AccuracyError("sigma^2 <= 0 encountered; Ermakov constraint broken")
        half_ds2 = a * q1 * d1 + 0.5 * b * (d1 * q2 + q1 * d2) + c * q2 * d2
        return q1, d1, q2, d2, s2, half_ds2

    def __call__(self, t):
        *_, s2, half_ds2 = self._parts(t)
        s = np.sqrt(s2)
        return s, half_ds2 / s

    def second_derivative(self, t):
        a, b, c = self.params.a, self.params.b, self.params.c
        q1, d1, q2, d2, s2, half_ds2 = self._parts(t)
        om2 = self.pair.profile.omega_sq(t)
        # q'' = -Omega^2 q for both members of the pair
        half_dds2 = (
            a * (d1 * d1 - om2 * q1 * q1)
            + b * (d1 * d2 - om2 * q1 * q2)
            + c * (d2 * d2 - om2 * q2 * q2)
        )
        s = np.sqrt(s2)
        ds = half_ds2 / s
        return (half_dds2 - ds * ds) / s

    def ermakov_residual(self, t):
        """Relative residual ``|sigma'' + Omega^2 sigma - w^2/sigma^3|``
        scaled by ``max(1, w^2/sigma^3)``."""
        s, _ = self(t)
        rhs = self.params.w**2 / s**3
        res = self.second_derivative(t) + self.pair.profile.omega_sq(t) * s - rhs
        return np.abs(res) / np.maximum(1.0, rhs)


def build_sigma(pair, params, check_times=None):
    """Ermakov solution from a classical pair; verifies ``sigma > 0``."""
    if not np.isclose(pair.w0, params.w0, rtol=1e-12, atol=0):
        raise ValidationError("ErmakovParams.w0 does not match the pair Wronskian")
    sigma = Sigma(pair, params)
    times = pair.sample_times() if check_times is None else check_times
    s, _ = sigma(times)
    if not (s > 0).all():
        raise AccuracyError("sigma is not positive on the sampled span")
    return sigma


class Tau:
    """Time map ``tau(t) = integral of 1/sigma^2 from t_ref``."""

    def __init__(self, sigma, t_ref, span):
        self.sigma = sigma
        self.t_ref = float(t_ref)
        self._int = PanelIntegral(lambda t: sigma(t)[0] ** -2.0, t_ref, span, tol=TAU_TOL)
        self.span = self._int.span

    def __call__(self, t):
        return self._int(t)

    def rate(self, t):
        """Interpolated ``dtau/dt``."""
        return self._int.rate(t)

    def closed_form(self, t):
        """Arctan representation of ``tau`` on sorted ``t``, unwrapped.

        Agrees with the quadrature up to an additive constant when the
        samples are dense enough to track the phase (steps below a quarter
        oscillation).
        """
        p = self.sigma.params
        if p.c <= 0:
            raise DomainError("closed-form tau needs c > 0")
        q1, _, q2, _ = self.sigma.pair(t)
        num = p.w0 / (2 * p.w) * (p.b * q1 + 2 * p.c * q2)
        angle = np.unwrap(np.arctan2(num, q1))
        return angle / p.w


def build_tau(sigma, t_ref=0.0, span=DEFAULT_SPAN):
    return Tau(sigma, t_ref, span)


class Trajectory:
    """``gamma = gamma1 q1 + gamma2 q2 + gamma_p``; calling returns
    ``(gamma, dgamma)``."""

    def __init__(self, pair, gamma1=0.0, gamma2=0.0, particular=None):
        self.pair = pair
        self.gamma1 = float(gamma1)
        self.gamma2 = float(gamma2)
        self.particular = particular

    @property
    def is_zero(self):
        p = self.particular
        return self.gamma1 == 0 and self.gamma2 == 0 and (p is None or p.is_zero)

    def __call__(self, t):
        q1, d1, q2, d2 = self.pair(t)
        g = self.gamma1 * q1 + self.gamma2 * q2
        dg = self.gamma1 * d1 + self.gamma2 * d2
        if self.particular is not None:
            gp, dgp = self.particular(t)
            g, dg = g + gp, dg + dgp
        return g, dg


def build_gamma(pair, gamma1=0.0, gamma2=0.0, particular=None):
    return Trajectory(pair, gamma1, gamma2, particular)


class Xi:
    """Real phase function ``xi = gamma W / (2 sigma) - (1/2m) int F gamma``."""

    def __init__(self, sigma, gamma, force, m, t_ref, span):
        self.sigma = sigma
        self.gamma = gamma
        self.force = force
        self.m = float(m)
        self.t_ref = float(t_ref)
        if force.is_zero or gamma.is_zero:
            self._work = None
        else:
            self._work = cumulative_integral(
                lambda t: force(t) * gamma(t)[0], t_ref, span
            )

    def work(self, t):
        """``int_{t_ref}^t F gamma dt'``."""
        if self._work is None:
            return np.zeros_like(np.asarray(t, dtype=float))
        return self._work(t)

    def __call__(self, t):
        s, ds = self.sigma(t)
        g, dg = self.gamma(t)
        bilinear = s * dg - ds * g
        return g * bilinear / (2 * s) - self.work(t) / (2 * self.m)


def build_xi(sigma, gamma, force, m=1.0, t_ref=0.0, span=DEFAULT_SPAN):
    return Xi(sigma, gamma, force, m, t_ref, span)


class Frame(NamedTuple):
    """Transformation data at given time(s)."""

    t: np.ndarray
    sigma: np.ndarray
    dsigma: np.ndarray
    gamma: np.ndarray
    dgamma: np.ndarray
    bilinear: np.ndarray
    xi: np.ndarray
    tau: np.ndarray


@dataclass(frozen=True)
class TransformData:
    """Everything needed to deform stationary states at time ``t``."""

    pair: object
    params: ErmakovParams
    sigma: Sigma
    tau: Tau
    gamma: Trajectory
    xi: Xi
    force: DrivingForce
    consts: PhysConstants
    t_ref: float
    span: tuple

    @property
    def profile(self):
        return self.pair.profile

    def frame(self, t):
        t = np.asarray(t, dtype=float)
        s, ds = self.sigma(t)
        g, dg = self.gamma(t)
        return Frame(t, s, ds, g, dg, s * dg - ds * g, self.xi(t), self.tau(t))

    def gamma_ddot(self, t):
        """``gamma''`` from the driven equation of motion."""
        g, _ = self.gamma(t)
        return self.force(t) / self.consts.m - self.profile.omega_sq(t) * g


def build_transform(profile, consts=PhysConstants(), a=1.0, c=1.0, force=None,
                    gamma1=0.0, gamma2=0.0, pair=None, span=DEFAULT_SPAN,
                    t_ref=0.0, particular_ic=(0.0, 0.0)):
    """Assemble :class:`TransformData` for a scenario.

    ``pair`` defaults to the closed-form pair of ``profile``; pass a numeric
    pair for custom profiles.
    """
    force = DrivingForce.zero() if force is None else force
    if pair is None:
        pair = analytic_pair(profile)
    elif pair.profile != profile:
        raise ValidationError("pair was built for a different profile")
    span = (min(span[0], t_ref), max(span[1], t_ref))
    if not (pair.span[0] <= span[0] and span[1] <= pair.span[1]):
        raise DomainError(f"span {span} exceeds the pair's span {pair.span}")
    params = ErmakovParams(a, c, consts.w, pair.w0)
    sigma = build_sigma(pair, params, np.linspace(span[0], span[1], 2001))
    tau = build_tau(sigma, t_ref, span)
    particular = None
    if not force.is_zero or any(particular_ic):
        particular = ParticularSolution(force, pair, consts.m, t_ref, particular_ic, span)
    gamma = build_gamma(pair, gamma1, gamma2, particular)
    xi = build_xi(sigma, gamma, force, consts.m, t_ref, span)
    return TransformData(pair, params, sigma, tau, gamma, xi, force, consts, float(t_ref), span)


def map_coordinates(x, t, data):
    """Stationary coordinate ``X = (x + gamma) / sigma``."""
    f = data.frame(t)
    return (np.asarray(x) + f.gamma) / f.sigma


def a_factor(x, t, data):
    """Deformation factor ``A(x, t)`` with ``Psi = A psi``."""
    x = np.asarray(x, dtype=float)
    f = data.frame(t)
    m, hbar = data.consts.m, data.consts.hbar
    phase = -f.dsigma * x * x / (2 * f.sigma) + f.bilinear * x / f.sigma + f.xi
    return np.sqrt(f.sigma) * np.exp(1j * (m / hbar) * phase)


def reconstruct_potential(x, t, data, dt=1e-3):
    """Potential implied by the transformation data.

    Uses the analytic ``sigma''`` and central differences in time for
    ``gamma'`` and ``xi``, so the result tests both equations of motion.
    Returns a complex array; the imaginary part cancels for consistent data.
    """
    x = np.asarray(x, dtype=float)
    t = float(t)
    m, hbar, w = data.consts.m, data.consts.hbar, data.consts.w
    f = data.frame(t)
    s, ds, g = f.sigma, f.dsigma, f.gamma
    dds = data.sigma.second_derivative(t)
    ddg = central_difference(lambda u: data.gamma(u)[1], t, dt)
    dxi = central_difference(data.xi, t, dt)
    dW = s * ddg - dds * g
    deta = dxi - 1j * hbar / (2 * m) * ds / s
    quad = 0.5 * m * (-dds / s + w**2 / s**4)
    lin = m * (dW / s + w**2 * g / s**4)
    const = 0.5 * m * (1j * hbar / m * ds / s + 2 * deta - f.bilinear**2 / s**2 + w**2 * g**2 / s**4)
    return quad * x * x + lin * x + const


__all__ = [
    "ErmakovParams",
    "Frame",
    "Sigma",
    "Tau",
    "TransformData",
    "Trajectory",
    "Xi",
    "a_factor",
    "build_gamma",
    "build_sigma",
    "build_tau",
    "build_transform",
    "build_xi",
    "map_coordinates",
    "reconstruct_potential",
]
