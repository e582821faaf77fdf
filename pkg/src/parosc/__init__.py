"""Quantum parametric oscillator via point transformations.

Exact states of ``H = p^2/2m + (m/2) Omega^2(t) x^2 + F(t) x`` are obtained
by deforming stationary oscillator states with the Ermakov scale ``sigma``,
the time map ``tau`` and a classical trajectory ``gamma``. A Crank-Nicolson
integrator is provided as an independent reference.
"""

from .classical import (
    ClassicalPair,
    DrivingForce,
    FrequencyProfile,
    analytic_pair,
    solve_homogeneous,
    tanh_step_solution,
)
from .constants import PhysConstants
from .ermakov import ErmakovParams, TransformData, a_factor, build_transform, map_coordinates
from .errors import (
    AccuracyError,
    ConstraintError,
    DomainError,
    NumericalError,
    ParoscError,
    ValidationError,
)
from .grid import Grid
from .hypergeometric import hyp2f1
from .operators import CheckReport, apply_invariant, apply_ladder, build_operator, matrix_elements
from .scenario import PRESETS, Scenario, preset
from .states import (
    QuantumState,
    analytic_moments,
    basis,
    coherent_series,
    coherent_wavepacket,
    eigenstate,
    inner_product,
    moments,
    psi,
    varphi,
)
from .tdse import PropagatorConfig, pde_residual, propagate
from .verify import run_suite

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "CheckReport",
    "ClassicalPair",
    "ConstraintError",
    "DomainError",
    "DrivingForce",
    "ErmakovParams",
    "FrequencyProfile",
    "Grid",
    "NumericalError",
    "PRESETS",
    "ParoscError",
    "PhysConstants",
    "PropagatorConfig",
    "QuantumState",
    "Scenario",
    "TransformData",
    "ValidationError",
    "a_factor",
    "analytic_moments",
    "analytic_pair",
    "apply_invariant",
    "apply_ladder",
    "basis",
    "build_operator",
    "build_transform",
    "coherent_series",
    "coherent_wavepacket",
    "eigenstate",
    "hyp2f1",
    "inner_product",
    "map_coordinates",
    "matrix_elements",
    "moments",
    "pde_residual",
    "preset",
    "propagate",
    "psi",
    "run_suite",
    "solve_homogeneous",
    "tanh_step_solution",
    "varphi",
]
