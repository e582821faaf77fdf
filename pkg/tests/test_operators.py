import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from parosc import Grid, apply_invariant, apply_ladder, build_operator, eigenstate, matrix_elements
from parosc.errors import ResolutionError, ValidationError
from parosc.operators import (
    CheckReport,
    commutator_check,
    eigen_residuals,
    factorization_check,
    hermiticity_check,
    ladder_coefficients,
    quadrature_reconstruction,
)

TIMES = (0.0, 1.7, 3.4)
PRESETS = ("tanh_step", "free_particle", "constant")


@pytest.mark.parametrize("name", PRESETS)
def test_algebra(scenarios, built, name):
    data = built[name]
    grid = scenarios[name].state_grid(data, n_max=16)
    for t in TIMES:
        reports = commutator_check(t, data, grid)
        reports.append(factorization_check(t, data, grid))
        reports += quadrature_reconstruction(t, data, grid)
        reports += hermiticity_check(t, data, grid)
        for r in reports:
            assert r.passed, r.to_dict()


def test_eigen_residuals(tanh, tanh_grid):
    for t in np.linspace(0, 4, 5):
        assert eigen_residuals(t, tanh, tanh_grid, 6).max() <= 1e-6


def test_ladder_coefficient_is_sqrt_n_plus_one(tanh, tanh_grid):
    n = np.arange(8)
    for t in TIMES:
        down, up = ladder_coefficients(t, tanh, tanh_grid, 8)
        np.testing.assert_allclose(down, np.sqrt(n + 1.0), atol=1e-6)
        np.testing.assert_allclose(up, np.sqrt(n + 1.0), atol=1e-6)
        # the half-integer variant is off by sqrt((n+1)/(n+1/2))
        assert np.abs(np.abs(down) - np.sqrt(n + 0.5)).min() > 1e-2


def test_ladder_moves_between_levels(tanh, tanh_grid):
    t = 1.1
    s2 = eigenstate(2, tanh_grid, t, tanh, evolve=False)
    s1 = eigenstate(1, tanh_grid, t, tanh, evolve=False)
    s3 = eigenstate(3, tanh_grid, t, tanh, evolve=False)
    np.testing.assert_allclose(apply_ladder(s2, "lower", tanh).samples, np.sqrt(2) * s1.samples, atol=1e-8)
    np.testing.assert_allclose(apply_ladder(s2, "raise", tanh).samples, np.sqrt(3) * s3.samples, atol=1e-8)
    np.testing.assert_allclose(apply_invariant(s2, tanh).samples, 2.5 * s2.samples, atol=1e-8)
    with pytest.raises(ValidationError):
        apply_ladder(s2, "sideways", tanh)


def test_operator_time_must_match(tanh, tanh_grid):
    op = build_operator("invariant", 0.0, tanh, tanh_grid)
    with pytest.raises(ValidationError):
        op(eigenstate(0, tanh_grid, 1.0, tanh))
    with pytest.raises(ValidationError):
        build_operator("spin", 0.0, tanh, tanh_grid)


def test_boundary_guard(tanh):
    small = Grid.symmetric(3.0, 512)
    state = eigenstate(4, small, 0.0, tanh)
    with pytest.raises(ResolutionError):
        apply_invariant(state, tanh)


def test_truncated_matrix_limits(tanh, tanh_grid):
    with pytest.raises(ValidationError):
        matrix_elements("position", 0.0, 41, tanh, tanh_grid)
    M = matrix_elements("position", 0.0, 12, tanh, tanh_grid)
    assert M.hermiticity_error() <= 1e-10
    assert M.interior().shape == (8, 8)
    with pytest.raises(ValidationError):
        commutator_check(0.0, tanh, tanh_grid, n_basis=6)


def test_check_report_json():
    r = CheckReport("[x,p]=i hbar", 0.5, 2e-12, 1e-6)
    d = json.loads(r.to_json())
    assert d == {"check": "[x,p]=i hbar", "t": 0.5, "norm_residual": 2e-12, "tolerance": 1e-6, "pass": True}
    assert not CheckReport("c", 0.0, float("nan"), 1.0).passed


@settings(max_examples=20, deadline=None)
@given(
    a=st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False),
    b=st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False),
    name=st.sampled_from(["invariant", "lower", "raise", "momentum"]),
)
def test_operators_linear(tanh, tanh_grid, a, b, name):
    op = build_operator(name, 0.7, tanh, tanh_grid)
    f = eigenstate(1, tanh_grid, 0.7, tanh).samples
    g = eigenstate(4, tanh_grid, 0.7, tanh).samples
    lhs = op.apply(a * f + b * g)
    rhs = a * op.apply(f) + b * op.apply(g)
    assert np.abs(lhs - rhs).max() <= 1e-12 * (1 + np.abs(rhs).max())
