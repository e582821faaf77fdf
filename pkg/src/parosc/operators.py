"""Invariant, ladder and quadrature operators acting on sampled states.

Operators are built for a fixed time from the transformation data and act
on the last axis of sample arrays. Matrix identities such as the ladder
algebra are checked on a truncated deformed basis, excluding the top rows
and columns where truncation corrupts products.
"""

import json
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ResolutionError, ValidationError
from .grid import Grid, derivative, edge_amplitude
from .states import QuantumState, basis

EDGE_GUARD = 1e-10
TRUNCATION_EDGE = 4
OPERATOR_NAMES = ("invariant", "lower", "raise", "position", "momentum", "identity")


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one numerical identity check."""

    check: str
    t: float
    norm_residual: float
    tolerance: float

    @property
    def passed(self):
        return bool(np.isfinite(self.norm_residual) and self.norm_residual <= self.tolerance)

    def to_dict(self):
        return {
            "check": self.check,
            "t": float(self.t),
            "norm_residual": float(self.norm_residual),
            "tolerance": float(self.tolerance),
            "pass": self.passed,
        }

    def to_json(self):
        return json.dumps(self.to_dict())


def _guard(samples):
    peak = float(np.abs(samples).max())
    edge = edge_amplitude(samples)
    if edge > EDGE_GUARD * max(peak, 1e-300):
        raise ResolutionError(
            f"boundary amplitude {edge:.2e} (relative {edge / peak:.2e}) exceeds "
            f"{EDGE_GUARD:g}; widen the grid"
        )


@dataclass(frozen=True)
class GridOperator:
    """Differential operator at time ``t`` acting on samples over ``grid``.

    Calling with a :class:`QuantumState` returns a state; calling with an
    array acts on its last axis.
    """

    name: str
    t: float
    grid: Grid
    action: Callable = field(repr=False, compare=False)
    method: str = "auto"

    def apply(self, samples, check=True):
        samples = np.asarray(samples, dtype=np.complex128)
        if samples.shape[-1] != self.grid.n:
            raise ValidationError(f"expected {self.grid.n} samples on the last axis")
        if check:
            _guard(samples)
        return self.action(samples)

    def __call__(self, state, check=True):
        if isinstance(state, QuantumState):
            state.grid.check_same(self.grid)
            if state.t != self.t:
                raise ValidationError(f"operator built for t={self.t}, state at t={state.t}")
            return state.with_samples(self.apply(state.samples, check), label={"op": self.name})
        return self.apply(state, check)


def _coefficients(t, data):
    f = data.frame(np.asarray(t, dtype=float))
    return f, data.consts


def build_operator(name, t, data, grid, method="auto"):
    """Operator ``name`` in {invariant, lower, raise, position, momentum, identity}."""
    if name not in OPERATOR_NAMES:
        raise ValidationError(f"unknown operator {name!r}; choose from {OPERATOR_NAMES}")
    f, c = _coefficients(t, data)
    s, ds, g, W = float(f.sigma), float(f.dsigma), float(f.gamma), float(f.bilinear)
    m, hbar, w = c.m, c.hbar, c.w
    x, h = grid.x, grid.h

    def d1(u):
        return derivative(u, h, 1, method)

    if name == "invariant":
        quad = 0.5 * m * (ds * ds + w * w / (s * s))
        lin = m * (w * w * g / (s * s) - W * ds)
        const = 0.5 * m * (W * W + w * w * g * g / (s * s))

        def action(u):
            du = d1(u)
            kinetic = -(s * s * hbar * hbar / (2 * m)) * derivative(u, h, 2, method)
            # -(s ds / 2)(xp + px) u = i hbar s ds (x u' + u/2)
            mixed = 1j * hbar * s * ds * (x * du + 0.5 * u)
            drift = -1j * hbar * s * W * du
            return kinetic + (quad * x * x + lin * x + const) * u + mixed + drift

    elif name in ("lower", "raise"):
        sign = 1.0 if name == "lower" else -1.0
        kd = sign * hbar * s / np.sqrt(2 * m)
        kx = np.sqrt(m / 2) * (-1j * sign * ds + w / s)
        k0 = np.sqrt(m / 2) * (1j * sign * W + w * g / s)

        def action(u):
            return kd * d1(u) + (kx * x + k0) * u

    elif name == "position":
        def action(u):
            return x * u

    elif name == "momentum":
        def action(u):
            return -1j * hbar * d1(u)

    else:
        def action(u):
            return u.copy()

    return GridOperator(name, float(t), grid, action, method)


def apply_invariant(state, data, method="auto"):
    """``I(t) psi`` at the state's time."""
    return build_operator("invariant", state.t, data, state.grid, method)(state)


def apply_ladder(state, which, data, method="auto"):
    """``a2(t) psi`` (``which="lower"``) or ``a2^dagger(t) psi`` (``"raise"``)."""
    if which not in ("lower", "raise"):
        raise ValidationError("which must be 'lower' or 'raise'")
    return build_operator(which, state.t, data, state.grid, method)(state)


@dataclass(frozen=True, eq=False)
class TruncatedMatrix:
    """Matrix elements ``<phi_n|O|phi_m>`` on the first ``size`` basis states."""

    matrix: np.ndarray
    t: float
    name: str

    @property
    def size(self):
        return self.matrix.shape[0]

    def interior(self, edge=TRUNCATION_EDGE):
        k = self.size - edge
        if k < 1:
            raise ValidationError(f"basis of {self.size} leaves no interior block")
        return self.matrix[:k, :k]

    def dagger(self):
        return TruncatedMatrix(self.matrix.conj().T, self.t, f"{self.name}^dagger")

    def hermiticity_error(self, edge=TRUNCATION_EDGE):
        b = self.interior(edge)
        return float(np.abs(b - b.conj().T).max())


def matrix_elements(op, t, n_basis, data, grid=None, method="auto", states=None):
    """Truncated matrix of ``op`` (an operator name or :class:`GridOperator`)."""
    if not 1 <= n_basis <= 40:
        raise ValidationError("n_basis must lie in 1..40")
    if isinstance(op, str):
        if grid is None:
            raise ValidationError("a grid is needed to build an operator by name")
        op = build_operator(op, t, data, grid, method)
    grid = op.grid
    if states is None:
        states = basis(n_basis - 1, grid, t, data)
    applied = op.apply(states)
    M = (np.conj(states) * grid.weights) @ applied.T
    return TruncatedMatrix(M, float(t), op.name)


def operator_matrices(t, n_basis, data, grid, method="auto"):
    """All operator matrices at ``t`` on a shared basis."""
    states = basis(n_basis - 1, grid, t, data)
    return {
        name: matrix_elements(build_operator(name, t, data, grid, method), t, n_basis, data, states=states)
        for name in OPERATOR_NAMES
    }


def _interior_dev(M, edge=TRUNCATION_EDGE):
    k = M.shape[0] - edge
    return float(np.abs(M[:k, :k]).max())


def commutator_check(t, data, grid, n_basis=16, tol=1e-6, method="auto"):
    """Ladder algebra and canonical commutator on the interior block."""
    if n_basis < 8:
        raise ValidationError("commutator checks need n_basis >= 8")
    mats = operator_matrices(t, n_basis, data, grid, method)
    A, Ad = mats["lower"].matrix, mats["raise"].matrix
    I, X, P = mats["invariant"].matrix, mats["position"].matrix, mats["momentum"].matrix
    hw, hbar = data.consts.hbar * data.consts.w, data.consts.hbar
    eye = np.eye(n_basis)
    return [
        CheckReport("[a2,a2+]=hbar w", t, _interior_dev(A @ Ad - Ad @ A - hw * eye), tol),
        CheckReport("[I,a2]=-hbar w a2", t, _interior_dev(I @ A - A @ I + hw * A), tol),
        CheckReport("[I,a2+]=hbar w a2+", t, _interior_dev(I @ Ad - Ad @ I - hw * Ad), tol),
        CheckReport("[x,p]=i hbar", t, _interior_dev(X @ P - P @ X - 1j * hbar * eye), tol),
    ]


def factorization_check(t, data, grid, n_basis=16, tol=1e-6, method="auto"):
    """``max_n ||(a2+ a2 + hbar w/2 - I) phi_n||`` for ``n <= n_basis - 4``."""
    n_top = n_basis - 1 - TRUNCATION_EDGE
    states = basis(n_top, grid, t, data)
    lower = build_operator("lower", t, data, grid, method)
    upper = build_operator("raise", t, data, grid, method)
    inv = build_operator("invariant", t, data, grid, method)
    hw = data.consts.hbar * data.consts.w
    resid = upper.apply(lower.apply(states)) + 0.5 * hw * states - inv.apply(states)
    norms = np.sqrt(grid.integrate(np.abs(resid) ** 2))
    return CheckReport("I=a2+ a2+hbar w/2", t, float(norms.max()), tol)


def quadrature_reconstruction(t, data, grid, n_basis=16, tol=1e-6, method="auto"):
    """Position and momentum rebuilt from the ladder operators."""
    mats = operator_matrices(t, n_basis, data, grid, method)
    A, Ad = mats["lower"].matrix, mats["raise"].matrix
    f, c = _coefficients(t, data)
    s, ds = float(f.sigma), float(f.dsigma)
    xi = -1j / s + ds / c.w
    eye = np.eye(n_basis)
    x_rec = s / (np.sqrt(2 * c.m) * c.w) * (A + Ad) - float(f.gamma) * eye
    p_rec = np.sqrt(c.m / 2) * (xi * A + np.conj(xi) * Ad) - c.m * float(f.dgamma) * eye
    return [
        CheckReport("x=sigma/(sqrt(2m)w)(a2+a2+)-gamma", t, _interior_dev(mats["position"].matrix - x_rec), tol),
        CheckReport("p=sqrt(m/2)(Xi a2+Xi* a2+)-m dgamma", t, _interior_dev(mats["momentum"].matrix - p_rec), tol),
    ]


def hermiticity_check(t, data, grid, n_basis=16, tol=1e-8, method="auto"):
    """Hermiticity of I, x, p and adjointness of the ladder pair."""
    mats = operator_matrices(t, n_basis, data, grid, method)
    out = [
        CheckReport(f"{name} hermitian", t, mats[name].hermiticity_error(), tol)
        for name in ("invariant", "position", "momentum")
    ]
    diff = mats["raise"].matrix - mats["lower"].matrix.conj().T
    out.append(CheckReport("a2+ = (a2)^dagger", t, _interior_dev(diff), tol))
    return out


def eigen_residuals(t, data, grid, n_max=6, method="auto"):
    """``||I phi_n - hbar w (n + 1/2) phi_n|| / ||phi_n||`` for ``n <= n_max``."""
    states = basis(n_max, grid, t, data)
    applied = build_operator("invariant", t, data, grid, method).apply(states)
    energies = data.consts.energy(np.arange(n_max + 1))[:, None]
    num = grid.integrate(np.abs(applied - energies * states) ** 2)
    den = grid.integrate(np.abs(states) ** 2)
    return np.sqrt(num / den)


def ladder_coefficients(t, data, grid, n_max=8, method="auto"):
    """Measured ``<phi_n|a2|phi_{n+1}>`` and ``<phi_{n+1}|a2+|phi_n>``, ``n < n_max``.

    The standard boson normalization predicts ``sqrt(hbar w (n + 1))`` for both.
    """
    states = basis(n_max, grid, t, data)
    lower = build_operator("lower", t, data, grid, method).apply(states[1:])
    upper = build_operator("raise", t, data, grid, method).apply(states[:-1])
    wts = grid.weights
    down = np.sum(np.conj(states[:-1]) * lower * wts, axis=-1)
    up = np.sum(np.conj(states[1:]) * upper * wts, axis=-1)
    return down, up


__all__ = [
    "CheckReport",
    "GridOperator",
    "TruncatedMatrix",
    "apply_invariant",
    "apply_ladder",
    "build_operator",
    "commutator_check",
    "eigen_residuals",
    "factorization_check",
    "hermiticity_check",
    "ladder_coefficients",
    "matrix_elements",
    "operator_matrices",
    "quadrature_reconstruction",
]
