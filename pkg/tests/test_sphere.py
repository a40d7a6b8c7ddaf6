import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from patcirc.grids import SphereGrid, SphereTimeGrid, VolumeGrid
from patcirc.specfun import real_sph_harm
from patcirc.sphere import gauss_sphere_rule, great_circle_frame, great_circle_points, interp_matrix, interp_sphere

unit_vectors = st.tuples(st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1)).filter(
    lambda v: np.linalg.norm(v) > 1e-3
).map(lambda v: np.asarray(v) / np.linalg.norm(v))


@given(unit_vectors)
def test_frame_orthonormal(theta):
    u, v = great_circle_frame(theta)
    m = np.stack([u, v, theta])
    assert_allclose(m @ m.T, np.eye(3), atol=1e-12)


def test_frame_at_poles():
    u, v = great_circle_frame(np.array([[0, 0, 1.0], [0, 0, -1.0]]))
    assert_allclose(u, [[1, 0, 0], [1, 0, 0]])
    assert_allclose(v, [[0, 1, 0], [0, 1, 0]])


def test_circle_points_even_count_is_symmetric():
    theta = np.array([0.3, -0.5, 0.81])
    theta /= np.linalg.norm(theta)
    a = great_circle_points(theta, 100)
    b = great_circle_points(-theta, 100)
    # same node set, traversed differently
    d = np.linalg.norm(a[:, None, :] - b[None, :, :], axis=-1).min(axis=1)
    assert d.max() < 1e-14


def test_gauss_rule_weights():
    nodes, w = gauss_sphere_rule(8, 16)
    assert_allclose(w.sum(), 4 * np.pi)
    assert_allclose(np.linalg.norm(nodes, axis=1), 1.0)


def test_hemisphere_area_weights():
    g = SphereGrid()
    w = g.area_weights()
    assert w.shape == g.shape
    assert_allclose(w.sum(), 2 * np.pi)
    # quadrature of an even quadratic
    d = g.directions()
    assert_allclose(2 * np.sum(w * d[..., 2] ** 2), 4 * np.pi / 3, rtol=2e-3)


def test_grid_descriptors():
    g = SphereTimeGrid()
    assert g.shape == (50, 200, 50)
    assert_allclose(g.sphere.polar[[0, -1]], [np.pi / 25, np.pi / 2])
    assert_allclose(g.times[[0, -1]], [0, 2])
    assert_allclose(VolumeGrid(80).axis[0], -1 + 1 / 80)
    with pytest.raises(ValueError):
        SphereGrid(polar_min=0.0)


def test_interp_reproduces_nodes():
    g = SphereGrid(10, 24)
    vals = np.random.default_rng(0).normal(size=g.shape)
    assert_allclose(interp_sphere(g, vals, g.directions()), vals, atol=1e-12)
    # antipodes of the nodes read the same (even) values
    assert_allclose(interp_sphere(g, vals, -g.directions()), vals, atol=1e-12)


def test_interp_rows_sum_to_one():
    g = SphereGrid()
    dirs = np.random.default_rng(1).normal(size=(500, 3))
    dirs[:3] = [[0, 0, 1], [0.01, 0.0, 1.0], [0.0, 0.02, -1.0]]
    m = interp_matrix(g, dirs)
    assert_allclose(np.asarray(m.sum(axis=1)).ravel(), 1.0, atol=1e-12)


@settings(max_examples=20, deadline=None)
@given(unit_vectors)
def test_interp_smooth_even_function(alpha):
    g = SphereGrid()
    f = lambda d: real_sph_harm(2, 0, d) + 0.5 * real_sph_harm(2, 1, d)
    got = interp_sphere(g, f(g.directions()), alpha)
    assert abs(got - f(alpha)) < 3e-3
