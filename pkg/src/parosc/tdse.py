"""Crank-Nicolson reference integrator for the driven parametric oscillator.

The Schrodinger equation with ``V = (m/2) Omega^2(t) x^2 + F(t) x + V0(t)``
is advanced on a Dirichlet-zero grid with a Numerov-compact tridiagonal
Crank-Nicolson step (fourth order in space, second order in time) and the
potential sampled at step midpoints. It shares no code with the closed
forms it is used to validate.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import kernels
from ._ode import central_difference
from .classical import DrivingForce, FrequencyProfile
from .errors import DomainError, ValidationError
from .grid import Grid, derivative, edge_amplitude
from .states import QuantumState, coherent_wavepacket, psi

START_EDGE = 1e-10
EDGE_GROWTH = 1e-6


@dataclass(frozen=True)
class PropagatorConfig:
    """Time step, grid and potential of a reference propagation.

    ``v0`` is an optional zero-point term ``V0(t)``, added uniformly in
    space. ``chunk`` steps are taken between boundary checks.
    """

    dt: float
    grid: Grid
    profile: FrequencyProfile
    force: DrivingForce = field(default_factory=DrivingForce.zero)
    v0: Optional[Callable] = field(default=None, compare=False)
    m: float = 1.0
    hbar: float = 1.0
    chunk: int = 250

    def __post_init__(self):
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ValidationError("dt must be positive and finite")
        if not (self.m > 0 and self.hbar > 0):
            raise ValidationError("m and hbar must be positive")
        if self.chunk < 1:
            raise ValidationError("chunk must be at least one step")

    @staticmethod
    def default_dt(w):
        """``10^-3`` of a reference period ``2 pi / w``."""
        return 1e-3 * 2 * np.pi / w

    def potential(self, x, t):
        t = np.asarray(t, dtype=float)
        v = 0.5 * self.m * self.profile.omega_sq(t) * x * x + self.force(t) * x
        if self.v0 is not None:
            v = v + np.asarray(self.v0(t), dtype=float)
        return v

    def _samples(self, times):
        om2 = np.ascontiguousarray(self.profile.omega_sq(times), dtype=float)
        f = np.ascontiguousarray(self.force(times), dtype=float)
        if self.v0 is None:
            v0 = np.zeros_like(times)
        else:
            v0 = np.ascontiguousarray(np.asarray(self.v0(times), dtype=float) * np.ones_like(times))
        if not (np.isfinite(om2).all() and np.isfinite(f).all() and np.isfinite(v0).all()):
            raise DomainError("potential is not finite on the propagation interval")
        return om2, f, v0


def _relative_edge(samples):
    return edge_amplitude(samples) / max(float(np.abs(samples).max()), 1e-300)


def propagate(psi0, config, t1, t0=None, backend=None):
    """Advance ``psi0`` from ``t0`` (default ``psi0.t``) to ``t1``.

    The step is ``dt`` shrunk so that a whole number of steps fits. Raises
    :class:`DomainError` when the initial state is not negligible at the
    boundary or the boundary amplitude grows past ``1e-6`` of the peak.
    """
    psi0.grid.check_same(config.grid)
    t0 = psi0.t if t0 is None else float(t0)
    t1 = float(t1)
    kern = kernels if backend is None else backend
    start = _relative_edge(psi0.samples)
    if start > START_EDGE:
        raise DomainError(f"initial state reaches the boundary (relative amplitude {start:.2e})")
    span = t1 - t0
    n_steps = max(1, math.ceil(abs(span) / config.dt - 1e-9)) if span else 0
    if n_steps == 0:
        return QuantumState(psi0.samples.copy(), psi0.grid, t1, psi0.label)
    dt = span / n_steps
    x = np.ascontiguousarray(config.grid.x)
    state = np.ascontiguousarray(psi0.samples)
    done = 0
    while done < n_steps:
        k = min(config.chunk, n_steps - done)
        mids = t0 + (done + np.arange(k) + 0.5) * dt
        om2, f, v0 = config._samples(mids)
        state = kern.cn_propagate(state, x, om2, f, v0, dt, config.m, config.hbar)
        done += k
        edge = _relative_edge(state)
        if edge > EDGE_GROWTH:
            raise DomainError(
                f"boundary amplitude grew to {edge:.2e} of the peak by "
                f"t={t0 + done * dt:.6g}; enlarge the grid"
            )
    return QuantumState(np.asarray(state), psi0.grid, t1, psi0.label)


def propagate_many(psi0, config, times, backend=None):
    """Propagate through sorted ``times`` (first entry is the start time)."""
    out = [psi0]
    for t in times[1:]:
        out.append(propagate(out[-1], config, t, backend=backend))
    return out


def l2_distance(f, g):
    f.grid.check_same(g.grid)
    return float(np.sqrt(f.grid.integrate(np.abs(f.samples - g.samples) ** 2)))


def _closed_form(form, data, grid):
    if callable(form):
        return form
    if isinstance(form, (int, np.integer)):
        return lambda t: psi(int(form), grid.x, t, data)
    if isinstance(form, (complex, float)):
        return lambda t: coherent_wavepacket(form, t, data, grid).samples
    raise ValidationError("closed form must be n (int), alpha (complex) or a callable of t")


def pde_residual(closed_form, t, config, data, dt_fd=1e-3, method="auto"):
    """Relative residual of ``i hbar psi_t = H psi`` for a closed form.

    ``closed_form`` is a quantum number ``n``, a coherent label ``alpha`` or a
    callable ``t -> samples``. The time derivative uses a sixth-order
    central difference with step ``dt_fd``; space uses ``method`` (see
    :func:`parosc.grid.derivative`).
    """
    grid = config.grid
    fun = _closed_form(closed_form, data, grid)
    u = np.asarray(fun(t))
    dt_u = central_difference(fun, t, dt_fd)
    lap = derivative(u, grid.h, 2, method)
    hu = -(config.hbar**2 / (2 * config.m)) * lap + config.potential(grid.x, t) * u
    resid = 1j * config.hbar * dt_u - hu
    return float(np.sqrt(grid.integrate(np.abs(resid) ** 2) / grid.integrate(np.abs(u) ** 2)))


__all__ = [
    "PropagatorConfig",
    "l2_distance",
    "pde_residual",
    "propagate",
    "propagate_many",
]
