import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import integrate

from patcirc.funkmink import (
    FunkInverter,
    GnomonicChart,
    funk_forward,
    funk_invert_axis,
    funk_invert_stabilized,
    funk_to_sinogram,
    sinogram_directions,
    to_axis_frame,
)
from patcirc.grids import PlaneGrid, Sinogram2D, SphereFunction, SphereGrid
from patcirc.specfun import legendre_p, real_sph_harm
from patcirc.sphere import interp_sphere


def harmonic(l, m):
    return lambda d: real_sph_harm(l, m, d / np.linalg.norm(d, axis=-1, keepdims=True))


def random_dirs(n, seed=0):
    d = np.random.default_rng(seed).normal(size=(n, 3))
    return d / np.linalg.norm(d, axis=1, keepdims=True)


def exact_funk(grid, fn, eig):
    return SphereFunction(grid, eig * fn(grid.directions()))


def test_funk_forward_examples():
    theta = random_dirs(5)
    assert_allclose(funk_forward(lambda d: np.ones(d.shape[:-1]), theta), 2 * np.pi)
    y20 = harmonic(2, 0)
    assert_allclose(funk_forward(y20, theta), -np.pi * y20(theta), atol=1e-12)
    assert np.abs(funk_forward(harmonic(1, 0), theta)).max() < 1e-10


def test_funk_forward_gridded_constant():
    g = SphereGrid()
    const = SphereFunction(g, np.ones(g.shape))
    assert_allclose(funk_forward(const, random_dirs(7)), 2 * np.pi, rtol=1e-12)


def test_funk_eigenvalues_even_degrees():
    theta = random_dirs(30, seed=1)
    for l in range(0, 9, 2):
        eig = 2 * np.pi * legendre_p(l, 0.0)
        for m in (-l, 0, l):
            y = harmonic(l, m)
            assert_allclose(funk_forward(y, theta, 256), eig * y(theta), atol=1e-12)


def test_sinogram_constant_and_equator_row():
    g = SphereGrid()
    sino = Sinogram2D(100, 41, 10.0)
    G = funk_to_sinogram(SphereFunction(g, np.full(g.shape, 2 * np.pi)), 3, sino)
    assert_allclose(G.values, np.broadcast_to(2 * np.pi / np.sqrt(1 + sino.s**2), (100, 41)), rtol=1e-12)
    vals = np.random.default_rng(2).normal(size=g.shape)
    G = funk_to_sinogram(SphereFunction(g, vals), 3, sino)
    # angles pi i / 100 coincide with azimuths 2 pi i / 200 on the equator
    assert_allclose(G.values[:, 20], vals[-1, :100], atol=1e-12)


def test_sinogram_directions_are_unit_and_orthogonal_to_lines():
    sino = Sinogram2D(12, 9, 3.0)
    for axis in (1, 2, 3):
        th = sinogram_directions(sino, axis)
        assert_allclose(np.linalg.norm(th, axis=-1), 1.0)
        # a point (x, 1) of the chart line s = x.omega lies on the great circle
        th_local = to_axis_frame(th, axis)
        x = sino.s[None, :, None] * sino.directions()[:, None, :]
        lifted = np.concatenate([x, np.ones(x.shape[:-1] + (1,))], -1)
        assert_allclose(np.sum(lifted * th_local, -1), 0.0, atol=1e-12)


def test_sinogram_matches_line_integrals_of_chart_function():
    g = SphereGrid()
    y = harmonic(2, 0)
    fphi = exact_funk(g, y, -np.pi)
    sino = Sinogram2D(360, 401, 1 / np.tan(g.polar_min))
    G = funk_to_sinogram(fphi, 3, sino)

    def Phi(x):
        a = np.array([x[0], x[1], 1.0]) / np.sqrt(1 + x @ x)
        return 2 * y(a) * a[2] ** 2

    for i, j in [(0, 200), (45, 230), (120, 260), (300, 180)]:
        w = sino.directions()[i]
        perp = np.array([-w[1], w[0]])
        s = sino.s[j]
        val, _ = integrate.quad(lambda nu: Phi(s * w + nu * perp), -np.inf, np.inf, epsabs=1e-11)
        assert abs(G.values[i, j] - val) < 1e-2 * abs(val) + 1e-4


def test_axis_inversion_of_constant():
    g = SphereGrid()
    fphi = SphereFunction(g, np.full(g.shape, 2 * np.pi))
    plane = funk_invert_axis(fphi, 3)
    pts = plane.points()
    r2 = np.sum(pts**2, -1)
    inside = r2 <= 4
    want = 2 / (1 + r2)
    assert np.abs(plane.values - want)[inside].max() < 0.02 * want[inside].min()
    zero = funk_invert_axis(SphereFunction(g, np.zeros(g.shape)), 3)
    assert not np.any(zero.values)


def test_axis_inversion_of_y40():
    g = SphereGrid()
    y = harmonic(4, 0)
    fphi = exact_funk(g, y, 2 * np.pi * legendre_p(4, 0.0))
    chart = GnomonicChart(3, PlaneGrid(61, 61, 1.5))
    plane = funk_invert_axis(fphi, 3, chart)
    a = chart.to_sphere(plane.points())
    want = 2 * y(a) * a[..., 2] ** 2
    inside = np.sum(plane.points() ** 2, -1) <= 1.5**2
    err = np.abs(plane.values - want)[inside]
    assert err.max() < 0.03 * np.abs(want[inside]).max()


def test_stabilized_constant_and_zero():
    g = SphereGrid()
    out = funk_invert_stabilized(SphereFunction(g, np.full(g.shape, 2 * np.pi)))
    assert np.abs(out.values - 1).max() < 0.02
    zero = funk_invert_stabilized(SphereFunction(g, np.zeros(g.shape)))
    assert not np.any(zero.values)


def test_stabilized_y22(default_inverter):
    g = SphereGrid()
    y = harmonic(2, 2)
    fphi = exact_funk(g, y, -np.pi)
    got = default_inverter.apply(fphi.values)
    want = y(g.directions())
    assert np.linalg.norm(got - want) / np.linalg.norm(want) < 0.03


def test_inverter_rejects_odd_exponent():
    with pytest.raises(ValueError):
        FunkInverter(SphereGrid(10, 20), k=1)


def test_inverter_batches_time_columns(default_inverter):
    g = SphereGrid()
    rng = np.random.default_rng(4)
    vals = rng.normal(size=g.shape + (3,))
    batch = default_inverter.apply(vals)
    for j in range(3):
        assert_allclose(batch[..., j], default_inverter.apply(vals[..., j]), atol=1e-12)


def test_axis_estimates_agree_away_from_coordinate_planes(default_inverter):
    g = SphereGrid()
    c = np.ones(3) / np.sqrt(3)

    def bump(d):
        d = d / np.linalg.norm(d, axis=-1, keepdims=True)
        return np.exp(-8 * (1 - (d @ c) ** 2))

    # Funk data of the bump by direct quadrature
    fphi = funk_forward(bump, g.directions(), 512)
    dirs = g.directions().reshape(-1, 3)
    estimates = []
    for axis, (idx, phi_i) in enumerate(default_inverter.axis_estimates(fphi), start=1):
        full = np.full(g.size, np.nan)
        full[idx] = phi_i[:, 0] / (2 * dirs[idx, axis - 1] ** 2)
        estimates.append(full)
    est = np.stack(estimates)
    near = (np.abs(dirs @ c) > 0.97) & np.all(np.isfinite(est), axis=0)
    assert near.sum() > 20
    peak = bump(c)
    assert np.abs(est[:, near] - est[:, near].mean(axis=0)).max() < 0.05 * peak


def test_output_is_even():
    g = SphereGrid(20, 40)
    fphi = exact_funk(g, harmonic(2, 1), -np.pi)
    out = funk_invert_stabilized(fphi)
    d = random_dirs(20, 6)
    assert_allclose(interp_sphere(g, out.values, d), interp_sphere(g, out.values, -d), atol=1e-15)
