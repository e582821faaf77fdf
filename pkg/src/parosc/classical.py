"""Classical solutions of the parametric oscillator.

Pairs ``q1, q2`` of independent real solutions of ``q'' + Omega^2(t) q = 0``,
either in closed form (zero, constant and tanh-step profiles) or by dense
numerical integration, plus particular solutions of the driven equation.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.special import expit

from ._ode import PanelIntegral, TwoSidedSolution, cumulative_integral
from .errors import (
    AccuracyError,
    DegeneratePairError,
    DomainError,
    UnsupportedProfileError,
    ValidationError,
)
from .hypergeometric import hyp2f1, hyp2f1_derivative

ODE_RTOL = 1e-10
ODE_ATOL = 1e-12
NUMERIC_WRONSKIAN_TOL = 1e-6

PROFILE_KINDS = ("zero", "constant", "tanh_step", "custom")


@dataclass(frozen=True)
class FrequencyProfile:
    """Squared frequency ``Omega^2(t)``.

    Use the constructors :meth:`zero`, :meth:`constant`, :meth:`tanh_step`
    and :meth:`custom`. For the tanh step, ``Omega^2 = omega1 + omega2 *
    tanh(k t)``, so ``omega1`` and ``omega2`` carry units of frequency squared.
    """

    kind: str
    omega0: float = 0.0
    omega1: float = 0.0
    omega2: float = 0.0
    k: float = 0.0
    func: Optional[Callable] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in PROFILE_KINDS:
            raise ValidationError(f"unknown profile kind {self.kind!r}")
        if self.kind == "constant" and not self.omega0 > 0:
            raise ValidationError("constant profile needs omega0 > 0")
        if self.kind == "tanh_step":
            if not self.omega1 > self.omega2 > 0:
                raise ValidationError("tanh_step profile needs omega1 > omega2 > 0")
            if not self.k > 0:
                raise ValidationError("tanh_step profile needs k > 0")
        if self.kind == "custom" and not callable(self.func):
            raise ValidationError("custom profile needs a callable Omega^2(t)")

    @classmethod
    def zero(cls):
        return cls("zero")

    @classmethod
    def constant(cls, omega0):
        return cls("constant", omega0=float(omega0))

    @classmethod
    def tanh_step(cls, omega1, omega2, k):
        return cls("tanh_step", omega1=float(omega1), omega2=float(omega2), k=float(k))

    @classmethod
    def custom(cls, func):
        return cls("custom", func=func)

    def omega_sq(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "zero":
            return np.zeros_like(t)
        if self.kind == "constant":
            return np.full_like(t, self.omega0**2)
        if self.kind == "tanh_step":
            return self.omega1 + self.omega2 * np.tanh(self.k * t)
        return np.asarray(self.func(t), dtype=float) * np.ones_like(t)

    def tanh_constants(self):
        """``(mu, g_plus, g_minus)`` of the hypergeometric solution."""
        if self.kind != "tanh_step":
            raise UnsupportedProfileError("tanh constants need a tanh_step profile")
        o1, o2, k = self.omega1, self.omega2, self.k
        mu = np.sqrt((o1 + np.sqrt(o1 * o1 - o2 * o2)) / 2.0) / k
        shift = o2 / (2.0 * k * k * mu)
        return mu, mu + shift, mu - shift


@dataclass(frozen=True)
class DrivingForce:
    """Time-dependent force ``F(t)``; ``F = f0 cos(nu t + phase)`` for the
    built-in kinds, or an arbitrary vectorized callable."""

    kind: str = "zero"
    f0: float = 0.0
    nu: float = 0.0
    phase: float = 0.0
    func: Optional[Callable] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in ("zero", "constant", "cosine", "custom"):
            raise ValidationError(f"unknown force kind {self.kind!r}")
        if self.kind == "custom" and not callable(self.func):
            raise ValidationError("custom force needs a callable F(t)")
        if not np.isfinite([self.f0, self.nu, self.phase]).all():
            raise ValidationError("force parameters must be finite")

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def constant(cls, f0):
        return cls("constant", f0=float(f0))

    @classmethod
    def cosine(cls, f0, nu, phase=0.0):
        return cls("cosine", f0=float(f0), nu=float(nu), phase=float(phase))

    @classmethod
    def custom(cls, func):
        return cls("custom", func=func)

    @property
    def is_zero(self):
        return self.kind == "zero" or (self.kind in ("constant", "cosine") and self.f0 == 0.0)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "zero":
            return np.zeros_like(t)
        if self.kind == "constant":
            return np.full_like(t, self.f0)
        if self.kind == "cosine":
            return self.f0 * np.cos(self.nu * t + self.phase)
        return np.asarray(self.func(t), dtype=float) * np.ones_like(t)


@dataclass(frozen=True)
class ClassicalPair:
    """Two independent real solutions with their Wronskian ``w0``.

    Calling the pair returns ``(q1, dq1, q2, dq2)`` at the requested times.
    """

    evaluate: Callable = field(repr=False)
    w0: float
    span: tuple
    profile: FrequencyProfile
    analytic: bool

    def __call__(self, t):
        return self.evaluate(t)

    def wronskian(self, t):
        q1, d1, q2, d2 = self(t)
        return q1 * d2 - d1 * q2

    def wronskian_drift(self, t):
        """Largest relative deviation of the Wronskian from ``w0`` at ``t``."""
        return float(np.max(np.abs(self.wronskian(t) - self.w0)) / abs(self.w0))

    def sample_times(self, n=2001, default=(-10.0, 10.0)):
        lo, hi = self.span
        lo = lo if np.isfinite(lo) else default[0]
        hi = hi if np.isfinite(hi) else default[1]
        return np.linspace(lo, hi, n)


def _check_profile(profile, t):
    om2 = profile.omega_sq(t)
    if not np.isfinite(om2).all():
        raise DomainError("Omega^2(t) is not finite on the requested span")


def solve_homogeneous(profile, t0=0.0, span=(-10.0, 10.0), w0=1.0, ic=None,
                      rtol=ODE_RTOL, atol=ODE_ATOL):
    """Integrate a classical pair numerically on ``span``.

    ``ic`` is ``((q1, dq1), (q2, dq2))`` at ``t0``; the default
    ``((1, 0), (0, w0))`` makes the Wronskian exactly ``w0`` at ``t0``.
    With explicit initial conditions ``w0`` is recomputed from them.
    """
    if not np.isfinite(span).all() or span[0] >= span[1]:
        raise ValidationError(f"span must be finite and increasing, got {span}")
    _check_profile(profile, np.linspace(span[0], span[1], 257))
    if ic is None:
        ic = ((1.0, 0.0), (0.0, w0))
    (a1, b1), (a2, b2) = ic
    w0 = a1 * b2 - b1 * a2
    if w0 == 0:
        raise DegeneratePairError("initial conditions give a zero Wronskian")

    def rhs(t, y):
        om2 = float(profile.omega_sq(t))
        if not np.isfinite(om2):
            raise DomainError(f"Omega^2 not finite at t={t}")
        return [y[1], -om2 * y[0], y[3], -om2 * y[2]]

    sol = TwoSidedSolution(rhs, t0, [a1, b1, a2, b2], span, rtol, atol)

    def evaluate(t):
        q1, d1, q2, d2 = sol(t)
        return q1, d1, q2, d2

    pair = ClassicalPair(evaluate, float(w0), (float(span[0]), float(span[1])), profile, False)
    drift = pair.wronskian_drift(pair.sample_times())
    if drift > NUMERIC_WRONSKIAN_TOL:
        raise AccuracyError(f"Wronskian drift {drift:.2e} exceeds {NUMERIC_WRONSKIAN_TOL}", drift)
    return pair


def tanh_step_solution(profile, t):
    """Complex solution ``q~1`` of the tanh-step profile and its derivative."""
    mu, gp, gm = profile.tanh_constants()
    k = profile.k
    t = np.asarray(t, dtype=float)
    x = 2.0 * k * t
    # 1 - z = 2 u and 1 + z = 2 v with z = tanh(k t), computed without cancellation
    u = expit(-x)
    v = expit(x)
    log_1mz = np.log(2.0) - np.logaddexp(0.0, x)
    log_1pz = np.log(2.0) - np.logaddexp(0.0, -x)
    pref = np.exp(-0.5j * (gp * log_1mz + gm * log_1pz))
    a, b, c = -1j * mu, 1.0 - 1j * mu, 1.0 - 1j * gp
    f = hyp2f1(a, b, c, u, one_minus_z=v)
    df = hyp2f1_derivative(a, b, c, u, one_minus_z=v)
    q = pref * f
    dq = pref * (1j * k * (gp * v - gm * u) * f - 2.0 * k * u * v * df)
    return q, dq


def analytic_pair(profile):
    """Closed-form pair for the zero, constant and tanh-step profiles.

    For the tanh step the pair is the real and imaginary part of the
    hypergeometric solution, whose Wronskian is ``k * g_plus``.
    """
    inf = (-np.inf, np.inf)
    if profile.kind == "zero":
        def evaluate(t):
            t = np.asarray(t, dtype=float)
            return np.ones_like(t), np.zeros_like(t), t.copy(), np.ones_like(t)
        return ClassicalPair(evaluate, 1.0, inf, profile, True)
    if profile.kind == "constant":
        om = profile.omega0

        def evaluate(t):
            t = np.asarray(t, dtype=float)
            c, s = np.cos(om * t), np.sin(om * t)
            return c, -om * s, s, om * c
        return ClassicalPair(evaluate, om, inf, profile, True)
    if profile.kind == "tanh_step":
        _, gp, _ = profile.tanh_constants()

        def evaluate(t):
            q, dq = tanh_step_solution(profile, t)
            return q.real, dq.real, q.imag, dq.imag
        return ClassicalPair(evaluate, profile.k * gp, inf, profile, True)
    raise UnsupportedProfileError(
        f"no closed form for {profile.kind!r} profiles; use solve_homogeneous"
    )


def matched_numeric_pair(pair, t0=0.0, span=(-10.0, 10.0), **kwargs):
    """Numerically integrated pair with the same data as ``pair`` at ``t0``."""
    q1, d1, q2, d2 = (float(v) for v in pair(t0))
    return solve_homogeneous(pair.profile, t0, span, ic=((q1, d1), (q2, d2)), **kwargs)


class ParticularSolution:
    """Particular solution of ``g'' + Omega^2 g = F/m`` by variation of
    parameters, shifted by a homogeneous term so that ``(g, g')`` equals
    ``ic`` at ``t_ref``. Calling returns ``(g, g')``."""

    def __init__(self, force, pair, m=1.0, t_ref=0.0, ic=(0.0, 0.0), span=None):
        if pair.w0 == 0:
            raise DegeneratePairError("classical pair has zero Wronskian")
        self.force = force
        self.pair = pair
        self.m = float(m)
        self.t_ref = float(t_ref)
        if span is None:
            span = pair.span if np.isfinite(pair.span).all() else (-10.0, 10.0)
        self.span = (min(span[0], t_ref), max(span[1], t_ref))
        q1, d1, q2, d2 = (float(v) for v in pair(t_ref))
        # homogeneous coefficients fixing the initial data
        g0, v0 = ic
        self._c1 = (g0 * d2 - v0 * q2) / pair.w0
        self._c2 = (v0 * q1 - g0 * d1) / pair.w0
        if force.is_zero:
            self._integrals = None
        else:
            def integrand(t):
                p1, _, p2, _ = pair(t)
                f = force(t)
                return np.array([p1 * f, p2 * f])
            self._integrals = PanelIntegral(integrand, self.t_ref, self.span)

    @property
    def is_zero(self):
        return self._integrals is None and self._c1 == 0 and self._c2 == 0

    def __call__(self, t):
        q1, d1, q2, d2 = self.pair(t)
        g = self._c1 * q1 + self._c2 * q2
        dg = self._c1 * d1 + self._c2 * d2
        if self._integrals is not None:
            i1, i2 = self._integrals(t)
            scale = 1.0 / (self.m * self.pair.w0)
            g = g + scale * (q2 * i1 - q1 * i2)
            dg = dg + scale * (d2 * i1 - d1 * i2)
        return g, dg


def particular_solution(profile, force, pair, m=1.0, t_ref=0.0, ic=(0.0, 0.0), span=None):
    """Build a :class:`ParticularSolution`; ``profile`` must match the pair."""
    if profile != pair.profile:
        raise ValidationError("profile does not match the classical pair")
    return ParticularSolution(force, pair, m, t_ref, ic, span)


__all__ = [
    "ClassicalPair",
    "DrivingForce",
    "FrequencyProfile",
    "ParticularSolution",
    "analytic_pair",
    "cumulative_integral",
    "matched_numeric_pair",
    "particular_solution",
    "solve_homogeneous",
    "tanh_step_solution",
]
