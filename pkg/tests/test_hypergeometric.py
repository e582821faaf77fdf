import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from parosc import hyp2f1
from parosc.errors import DomainError
from parosc.hypergeometric import hyp2f1_derivative
from parosc.kernels import available_backends

mpmath.mp.dps = 30

PARAMS = [
    (-1.3j, 1 - 1.3j, 1 - 2.1j),
    (0.5 + 0.2j, 1.5, 2.25 - 0.4j),
    (-0.8j, 1 - 0.8j, 1 - 1.7j),
]


def _reference(a, b, c, z):
    return complex(mpmath.hyp2f1(a, b, c, z))


@pytest.mark.parametrize("a,b,c", PARAMS)
@pytest.mark.parametrize("z", [0.05, 0.3 + 0.2j, 0.59, 0.7, 0.85, 0.95, 0.999, -0.9, -1.4])
def test_matches_mpmath(a, b, c, z):
    # covers the direct, Pfaff and z -> 1 connection branches
    got = hyp2f1(a, b, c, z)
    ref = _reference(a, b, c, z)
    assert abs(got - ref) <= 1e-12 * max(1.0, abs(ref))


def test_one_minus_z_near_unity():
    a, b, c = PARAMS[0]
    w = np.array([1e-9, 1e-6, 1e-3])
    got = hyp2f1(a, b, c, 1 - w, one_minus_z=w)
    for gi, wi in zip(got, w):
        ref = _reference(a, b, c, 1 - mpmath.mpf(wi))
        assert abs(gi - ref) <= 1e-11 * abs(ref)


def test_derivative_by_mpmath():
    a, b, c = PARAMS[1]
    z = np.array([0.1, 0.5, 0.8])
    got = hyp2f1_derivative(a, b, c, z)
    for gi, zi in zip(got, z):
        ref = complex(mpmath.diff(lambda u: mpmath.hyp2f1(a, b, c, u), zi))
        assert abs(gi - ref) <= 1e-11 * abs(ref)


def test_polynomial_case():
    # 2F1(-2, b; c; z) = 1 - 2bz/c + b(b+1)z^2/(c(c+1))
    b, c, z = 1.5, 2.5, 0.97
    expect = 1 - 2 * b * z / c + b * (b + 1) * z * z / (c * (c + 1))
    assert hyp2f1(-2, b, c, z) == pytest.approx(expect, rel=1e-14)


def test_bad_parameters():
    with pytest.raises(DomainError):
        hyp2f1(1, 1, -2, 0.1)
    with pytest.raises(DomainError):
        hyp2f1(1, 1, 2, np.inf)
    with pytest.raises(DomainError):
        hyp2f1(0.3, 0.4, 1.2, -3.0)


def test_shape_preserved():
    z = np.linspace(0, 0.9, 12).reshape(3, 4)
    assert hyp2f1(0.3, 0.4, 1.2, z).shape == (3, 4)
    assert isinstance(hyp2f1(0.3, 0.4, 1.2, 0.2), complex)


@pytest.mark.parametrize("name", sorted(available_backends()))
def test_series_backends(name):
    mod = available_backends()[name]
    a, b, c = PARAMS[0]
    z = np.linspace(0.0, 0.6, 50).astype(complex)
    vals, resid = mod.hyp2f1_series(a, b, c, z, 1e-16, 5000)
    ref = np.array([_reference(a, b, c, zi) for zi in z])
    assert np.abs(vals - ref).max() <= 1e-13 * np.abs(ref).max()
    assert resid.max() <= 1e-15


@settings(max_examples=40, deadline=None)
@given(
    a=st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False),
    b=st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False),
    z=st.floats(-0.9, 0.9),
)
def test_contiguous_relation(a, b, z):
    # (c - a) F(a-1) + (2a - c + (b - a) z) F(a) + a (z - 1) F(a+1) = 0
    c = 2.5 + 0.5j
    f = lambda aa: hyp2f1(aa, b, c, z)
    lhs = (c - a) * f(a - 1) + (2 * a - c + (b - a) * z) * f(a) + a * (z - 1) * f(a + 1)
    scale = max(abs(c - a) * abs(f(a - 1)), abs(f(a)) * 5, abs(a * f(a + 1)), 1.0)
    assert abs(lhs) <= 1e-11 * scale
