import warnings

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from parosc import Grid, PhysConstants, QuantumState, eigenstate, inner_product
from parosc.errors import GridMismatchError, NormalizationError, OverflowGuardError, TruncationError, ValidationError
from parosc.grid import derivative
from parosc.states import (
    CrossTimeOverlap,
    analytic_moments,
    basis,
    coherent_coefficients,
    coherent_series,
    coherent_wavepacket,
    gram_matrix,
    hermite,
    hermite_functions,
    moments,
    phi_stationary,
    poisson_weights,
    psi,
    superpose,
    varphi,
    varphi_mapped,
)

CHECK_TIMES = np.linspace(0, 4, 5)


# -- grid ----------------------------------------------------------------------

def test_grid_validation():
    with pytest.raises(ValidationError):
        Grid(0, 1, 10)
    with pytest.raises(ValidationError):
        Grid(1, 0)
    a, b = Grid(-1, 1, 128), Grid(-1, 1, 256)
    with pytest.raises(GridMismatchError):
        a.check_same(b)


def test_simpson_exact_for_cubics():
    g = Grid(-2, 3, 129)
    assert g.integrate(g.x**3 - g.x) == pytest.approx((3**4 - 2**4) / 4 - (9 - 4) / 2, rel=1e-13)


@pytest.mark.parametrize("method", ["spectral", "fd4", "auto"])
def test_derivative_of_gaussian(method):
    g = Grid.symmetric(20, 1024)
    f = np.exp(-g.x**2)
    tol = 1e-10 if method != "fd4" else 1e-4
    np.testing.assert_allclose(derivative(f, g.h, 1, method), -2 * g.x * f, atol=tol)
    np.testing.assert_allclose(derivative(f, g.h, 2, method), (4 * g.x**2 - 2) * f, atol=10 * tol)


# -- Hermite -------------------------------------------------------------------

@pytest.mark.parametrize("n", [0, 1, 5, 17, 40])
def test_hermite_matches_mpmath(n):
    z = np.linspace(-6, 6, 13)
    ref = np.array([float(mpmath.hermite(n, zi)) for zi in z])
    np.testing.assert_allclose(hermite(n, z), ref, rtol=1e-12, atol=1e-12 * np.abs(ref).max())


def test_hermite_functions_normalized_and_guarded():
    g = Grid.symmetric(30, 4096)
    h = hermite_functions(120, g.x)
    G = g.integrate(h[:, None, :] * h[None, :, :])
    assert np.abs(G - np.eye(121)).max() <= 1e-10
    with pytest.raises(OverflowGuardError):
        hermite(201, 0.5)
    with pytest.raises(OverflowGuardError):
        hermite_functions(201, 0.5)


def test_high_order_matches_log_space_mpmath():
    n, z = 150, 3.2
    ref = mpmath.exp(-z * z / 2) * mpmath.hermite(n, z) / mpmath.sqrt(2**n * mpmath.factorial(n) * mpmath.sqrt(mpmath.pi))
    assert hermite_functions(n, np.array([z]))[n, 0] == pytest.approx(float(ref), rel=1e-10)


# -- deformed basis ------------------------------------------------------------

def test_free_particle_ground_state(free):
    # Gaussian spreading with chirp t x^2 / (2 (1 + t^2)) and phase -arctan(t)/2
    x = np.linspace(-15, 15, 301)
    for t in np.linspace(-5, 5, 11):
        s2 = 1 + t * t
        expect = (np.pi ** -0.25 * s2 ** -0.25
                  * np.exp(-x * x / (2 * s2) + 1j * t * x * x / (2 * s2) - 0.5j * np.arctan(t)))
        np.testing.assert_allclose(psi(0, x, t, free), expect, atol=1e-10)


def test_gram_identity(tanh, tanh_grid):
    for t in CHECK_TIMES:
        G = gram_matrix(basis(8, tanh_grid, t, tanh), tanh_grid)
        assert np.abs(G - np.eye(9)).max() <= 1e-8


def test_explicit_and_mapped_agree(tanh, tanh_grid):
    x = tanh_grid.x
    for t in CHECK_TIMES:
        for n in range(9):
            a, b = varphi(n, x, t, tanh), varphi_mapped(n, x, t, tanh)
            assert np.abs(a - b).max() <= 1e-10 * np.abs(a).max()


def test_psi_phase(tanh, tanh_grid):
    t = 1.7
    ratio = psi(3, tanh_grid.x, t, tanh)[1024] / varphi(3, tanh_grid.x, t, tanh)[1024]
    assert ratio == pytest.approx(np.exp(-3.5j * tanh.tau(t)), rel=1e-14)


def test_states_are_single_time(tanh):
    with pytest.raises(ValidationError):
        varphi(0, np.zeros(3), np.array([0.0, 1.0]), tanh)


def test_cross_time_overlap_tagged(tanh, tanh_grid):
    a, b = eigenstate(0, tanh_grid, 0.0, tanh), eigenstate(0, tanh_grid, 1.0, tanh)
    with pytest.warns(UserWarning, match="non-orthogonal"):
        ov = inner_product(a, b)
    assert isinstance(ov, CrossTimeOverlap) and ov.regime == "non-orthogonal"
    assert abs(ov) < 1 - 1e-3
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        same = inner_product(a, a)
    assert type(same) is complex and same == pytest.approx(1, abs=1e-12)


def test_superpose_checks_norm(tanh, tanh_grid):
    states = [eigenstate(n, tanh_grid, 0.5, tanh) for n in range(3)]
    with pytest.raises(NormalizationError):
        superpose([1, 1, 0], states)
    mix = superpose([1, 1j, 0], states, normalize=True)
    assert mix.norm() == pytest.approx(1, abs=1e-12)
    other = eigenstate(0, tanh_grid, 0.6, tanh)
    with pytest.raises(ValidationError):
        superpose([1, 0], [states[0], other])


def test_state_shape_checked(tanh_grid):
    with pytest.raises(GridMismatchError):
        QuantumState(np.zeros(10), tanh_grid, 0.0)


def test_stationary_units():
    c = PhysConstants(m=2.0, hbar=0.5, w=3.0)
    g = Grid.symmetric(5, 2048)
    phi = phi_stationary(2, g.x, c)
    assert g.integrate(phi**2) == pytest.approx(1, abs=1e-12)


@settings(max_examples=25, deadline=None)
@given(
    t=st.floats(0, 4),
    c=st.lists(st.complex_numbers(max_magnitude=1, allow_nan=False, allow_infinity=False), min_size=4, max_size=4),
)
def test_superposition_norm_is_coefficient_norm(tanh, tanh_grid, t, c):
    c = np.array(c)
    weight = np.sum(np.abs(c) ** 2)
    if weight < 1e-6:
        return
    states = [eigenstate(n, tanh_grid, t, tanh) for n in range(4)]
    mix = superpose(c / np.sqrt(weight), states)
    assert mix.norm() == pytest.approx(1, abs=1e-10)


# -- coherent states -----------------------------------------------------------

ALPHA = 1.0 + 0.5j


def test_poisson_weights(tanh, scenarios):
    sc = scenarios["tanh_step"]
    grid = sc.state_grid(tanh, shift=3.0)
    for t in (0.0, 2.5):
        gauss = coherent_wavepacket(ALPHA, t, tanh, grid)
        B = basis(30, grid, t, tanh)
        w = np.abs((np.conj(B) * grid.weights) @ gauss.samples) ** 2
        assert np.abs(w - poisson_weights(ALPHA, 30)).max() <= 1e-8


@pytest.mark.parametrize("name", ["tanh_step", "free_particle", "constant"])
def test_gaussian_equals_series(scenarios, built, name):
    sc, data = scenarios[name], built[name]
    grid = sc.state_grid(data, shift=3.0)
    for t in sc.check_times():
        a = coherent_wavepacket(ALPHA, t, data, grid)
        b = coherent_series(ALPHA, t, 60, data, grid)
        assert np.sqrt(grid.integrate(np.abs(a.samples - b.samples) ** 2)) <= 1e-6


def test_gaussian_equals_series_driven():
    from parosc import DrivingForce, FrequencyProfile, build_transform

    data = build_transform(FrequencyProfile.tanh_step(5, 3, 0.5), force=DrivingForce.cosine(0.5, 1.3), gamma1=0.3)
    grid = Grid.symmetric(45, 2048)
    for t in (0.0, 1.5, 3.0):
        a = coherent_wavepacket(ALPHA, t, data, grid)
        b = coherent_series(ALPHA, t, 60, data, grid)
        assert np.sqrt(grid.integrate(np.abs(a.samples - b.samples) ** 2)) <= 1e-6


def test_truncation_guard(tanh):
    with pytest.raises(TruncationError):
        coherent_coefficients(4.0, 0.0, 10, tanh)


def test_moments_saturate_robertson(scenarios, tanh):
    grid = scenarios["tanh_step"].state_grid(tanh, shift=3.0)
    for t in CHECK_TIMES:
        am = analytic_moments(ALPHA, t, tanh)
        gm = moments(coherent_wavepacket(ALPHA, t, tanh, grid))
        assert am.robertson == pytest.approx(0.25, abs=1e-10)
        assert gm.robertson == pytest.approx(0.25, abs=1e-6)
        for key in ("mean_x", "mean_p", "var_x", "var_p", "cov_xp"):
            assert getattr(gm, key) == pytest.approx(getattr(am, key), abs=1e-7)


def test_moments_need_normalized(tanh, tanh_grid):
    s = eigenstate(0, tanh_grid, 0.0, tanh)
    with pytest.raises(NormalizationError):
        moments(s.with_samples(2 * s.samples))


def test_eigenstate_variances(tanh, tanh_grid):
    # var_x of psi_n is hbar (n + 1/2) sigma^2 / (m w)
    for n in range(4):
        for t in (0.0, 2.0):
            m = moments(eigenstate(n, tanh_grid, t, tanh))
            assert m.var_x == pytest.approx((n + 0.5) * tanh.sigma(t)[0] ** 2, rel=1e-9)
            assert m.robertson == pytest.approx((n + 0.5) ** 2, rel=1e-8)
