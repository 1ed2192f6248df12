import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gstoch import UncertaintySet, g_function

U = UncertaintySet.interval(0.5, 1.0)


def test_positive_branch():
    assert g_function(1.0, U) == pytest.approx(0.5, abs=1e-15)


def test_zero():
    assert g_function(0.0, U) == 0.0


def test_negative_branch():
    assert g_function(-1.0, U) == pytest.approx(-0.125, abs=1e-15)


def test_band_validation():
    with pytest.raises(ValueError):
        UncertaintySet.interval(1.0, 0.5)
    with pytest.raises(ValueError):
        UncertaintySet.interval(-0.1, 0.5)


def test_matrix_family_validation():
    with pytest.raises(ValueError):
        UncertaintySet.matrix_family([])
    with pytest.raises(ValueError):
        UncertaintySet.matrix_family([np.array([[1.0, 2.0], [0.0, 1.0]])])
    with pytest.raises(ValueError):
        UncertaintySet.matrix_family([np.array([[1.0, 0.0], [0.0, -1.0]])])


def test_matrix_generator_requires_symmetry():
    u2 = UncertaintySet.matrix_family([np.eye(2)])
    with pytest.raises(ValueError):
        g_function(np.array([[1.0, 2.0], [0.0, 1.0]]), u2)


def test_matrix_generator_value():
    u2 = UncertaintySet.matrix_family([np.eye(2), np.diag([4.0, 0.25])])
    # trace picks the better of the two family members
    assert g_function(np.eye(2), u2) == pytest.approx(0.5 * 4.25)
    assert g_function(np.diag([1.0, 0.0]), u2) == pytest.approx(2.0)


@settings(max_examples=200, deadline=None)
@given(st.floats(-50, 50), st.floats(0, 10))
def test_positive_homogeneity(alpha, lam):
    assert g_function(lam * alpha, U) == pytest.approx(lam * g_function(alpha, U),
                                                       rel=1e-12, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.floats(-50, 50), st.floats(-50, 50))
def test_subadditivity(a, b):
    assert g_function(a + b, U) <= g_function(a, U) + g_function(b, U) + 1e-10


def test_directional_variances_match_band():
    lo2, hi2 = U.directional_variances(1.0)
    assert (lo2, hi2) == (0.25, 1.0)
    u2 = UncertaintySet.matrix_family([np.diag([0.25, 1.0]), np.diag([1.0, 0.25])])
    lo2, hi2 = u2.directional_variances([1.0, 0.0])
    assert lo2 == pytest.approx(0.25)
    assert hi2 == pytest.approx(1.0)


def test_increment_points_match_moments():
    for dt in (0.25, 1.0):
        pts = U.increment_points(0.7, dt)
        assert pts.shape == (2, 1)
        assert np.mean(pts) == 0.0
        assert np.mean(pts**2) == pytest.approx(0.49 * dt, rel=1e-14)
    q = np.array([[1.0, 0.3], [0.3, 0.5]])
    u2 = UncertaintySet.matrix_family([q])
    pts = u2.increment_points(q, 0.5)
    assert pts.shape == (4, 2)
    assert np.allclose(pts.mean(axis=0), 0.0, atol=1e-14)
    cov = pts.T @ pts / 4.0
    assert np.allclose(cov, q * 0.5, atol=1e-12)
